"""CLI exit codes, JSON output, and the report artifacts."""

import json
import os

import pytest

from unitlab import cli
from unitlab.encode import parse_dimacs


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_ball_table_and_artifacts(tmp_path, capsys):
    out = tmp_path / "ball.csv"
    code, text, _ = run(capsys, "ball", "--group", "P", "--radius", "4",
                        "--out", str(out))
    assert code == 0
    assert "41" in text and "83" in text
    assert out.exists()
    assert (tmp_path / "ball.png").exists()


def test_ball_json(capsys):
    code, text, _ = run(capsys, "ball", "--group", "P", "--radius", "3",
                        "--json")
    assert code == 0
    payload = json.loads(text)
    assert payload["ball_sizes"] == [1, 5, 17, 41]
    assert payload["sphere_sizes"] == [1, 4, 12, 24]


def test_verify_unit_bundle(capsys):
    code, text, _ = run(capsys, "verify-unit", "--bundle")
    assert code == 0
    assert "27" in text or text.count("ok") >= 27


def test_verify_unit_file_roundtrip(tmp_path, capsys):
    good = tmp_path / "pair.txt"
    good.write_text("# name: U\na\n\n# name: V\na^-1\n")
    code, _, _ = run(capsys, "verify-unit", "--file", str(good), "--two-sided")
    assert code == 0
    bad = tmp_path / "bad.txt"
    bad.write_text("# name: U\na\n\n# name: V\nb\n")
    code, _, _ = run(capsys, "verify-unit", "--file", str(bad))
    assert code == 1


def test_search_unit_radius2_refuted(capsys):
    code, text, _ = run(capsys, "search-unit", "--group", "P", "--radius", "2",
                        "--limit-seconds", "120")
    assert code == 1
    assert "unsat" in text


def test_search_swap_radius2_refuted_json(capsys):
    code, text, _ = run(capsys, "search-swap", "--group", "P", "--radius", "2",
                        "--json", "--limit-seconds", "120")
    assert code == 1
    assert json.loads(text)["status"] == "unsat"


def test_orbits_artifacts(tmp_path, capsys):
    out = tmp_path / "orbits.csv"
    code, text, _ = run(capsys, "orbits", "--set", "radius4", "--auto", "S",
                        "--out", str(out))
    assert code == 0
    assert out.exists()
    assert (tmp_path / "orbits.png").exists()
    rows = out.read_text().strip().splitlines()
    assert len(rows) == 37  # header plus one row per unit


def test_wp_exit_codes(capsys):
    code, _, _ = run(capsys, "wp", "--group", "Fib:3,4", "--word",
                     "x1*x2*x3*x4^-1")
    assert code == 0
    code, _, _ = run(capsys, "wp", "--group", "Fib:3,4", "--word", "x1")
    assert code == 1


def test_normal_form(capsys):
    code, text, _ = run(capsys, "normal-form", "--n", "4", "--word",
                        "x1*x1", "--form", "kn")
    assert code == 0
    assert "x4^2" in text or "zpow" in text or "2" in text


def test_encode_writes_dimacs(tmp_path, capsys):
    out = tmp_path / "inst.cnf"
    code, _, _ = run(capsys, "encode", "--group", "P", "--radius", "2",
                     "--kind", "unit", "--out", str(out))
    assert code == 0
    inst = parse_dimacs(out.read_text())
    assert inst.num_vars > 0 and len(inst.clauses) > 0


def test_usage_errors_exit_2(capsys):
    code, _, err = run(capsys, "search-unit", "--group", "Q7")
    assert code == 2
    code, _, err = run(capsys, "verify-unit", "--file", "/nonexistent.txt")
    assert code == 2
    code, _, err = run(capsys, "wp", "--group", "P", "--word", "x1")
    assert code == 2


def test_search_unit_timeout_exit_3(capsys):
    # radius 3 cannot finish in a fraction of a second
    code, text, _ = run(capsys, "search-unit", "--group", "P", "--radius", "3",
                        "--limit-seconds", "0.2")
    assert code == 3
