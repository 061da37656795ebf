"""Bundled datasets and the load-time verification harness.

Every published unit pair, swap unit, and unique-product witness ships
as a flat text file; loaders re-parse the words and verify_bundle()
pushes every payload through its checker.  A transcription mistake
therefore shows up as a red verification line, never as silent data.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

from .fibwp import x_alphabet
from .groupring import (RingElt, is_swap_unit, ring_from_words,
                        upp_witness_check, verify_unit_pair)
from .h4 import h4_mul, psi_eval
from .pgroup import P_GROUP
from .words import parse_word


@dataclass(frozen=True)
class Dataset:
    """One bundled payload: a unit pair, swap unit, or UPP witness."""

    id: str
    group: str          # "P" or "H4"
    kind: str           # "unit-pair", "swap-unit", or "upp-witness"
    file: str           # path relative to the data directory
    note: str


DATASETS: tuple[Dataset, ...] = tuple(
    [Dataset(f"pair{i:02d}", "P", "unit-pair", f"radius4/pair{i:02d}.txt",
             f"radius-4 unit pair (U{i}, V{i}), support 21 each")
     for i in range(1, 19)]
    + [Dataset(f"W{i}", "P", "swap-unit", f"radius5/W{i}.txt",
               f"radius-5 swap unit W{i}")
       for i in range(1, 5)]
    + [Dataset(f"S{i}", "P", "swap-unit", f"radius6/S{i}.txt",
               f"radius-6 swap unit S{i}, support 81")
       for i in range(1, 3)]
    + [
        Dataset("example31", "P", "unit-pair", "example31.txt",
                "worked unit pair from the dihedral-cube construction"),
        Dataset("example32", "P", "unit-pair", "example32.txt",
                "unit pair transcribed from xyz shorthand; the shorthand's "
                "comma is read as ring addition"),
        Dataset("upp_h4", "H4", "upp-witness", "upp_h4.txt",
                "sets A (29) and B (27) witnessing failure of the unique "
                "product property in H4"),
    ]
)

DATASET_INDEX = {d.id: d for d in DATASETS}


def _data_text(relpath: str) -> str:
    root = resources.files("unitlab").joinpath("data")
    return root.joinpath(relpath).read_text()


def parse_sections(text: str) -> list[tuple[str, list[str]]]:
    """Split a data file into named sections of word lines.

    Sections are separated by blank lines; a "# name: X" comment names
    the section that follows.  Other comment lines are ignored.
    """
    sections: list[tuple[str, list[str]]] = []
    name = None
    lines: list[str] = []
    for raw in text.splitlines() + [""]:
        line = raw.strip()
        if not line:
            if lines:
                sections.append((name or f"section{len(sections) + 1}", lines))
            name, lines = None, []
            continue
        if line.startswith("#"):
            body = line.lstrip("#").strip()
            if body.lower().startswith("name:"):
                name = body[5:].strip()
            continue
        lines.append(line)
    return sections


def load_sections(dataset: Dataset) -> list[tuple[str, list[str]]]:
    return parse_sections(_data_text(dataset.file))


def load_unit_pair(dataset: Dataset) -> tuple[RingElt, RingElt]:
    if dataset.kind != "unit-pair":
        raise ValueError(f"{dataset.id} is not a unit pair")
    sections = load_sections(dataset)
    if len(sections) != 2:
        raise ValueError(f"{dataset.file}: expected two sections")
    (_, u_words), (_, v_words) = sections
    return (ring_from_words(P_GROUP, u_words), ring_from_words(P_GROUP, v_words))


def load_swap_unit(dataset: Dataset) -> RingElt:
    if dataset.kind != "swap-unit":
        raise ValueError(f"{dataset.id} is not a swap unit")
    sections = load_sections(dataset)
    if len(sections) != 1:
        raise ValueError(f"{dataset.file}: expected one section")
    return ring_from_words(P_GROUP, sections[0][1])


def load_upp_witness(dataset: Dataset) -> tuple[list, list]:
    """Load a UPP witness as two lists of H4 elements."""
    if dataset.kind != "upp-witness":
        raise ValueError(f"{dataset.id} is not a UPP witness")
    sections = load_sections(dataset)
    if len(sections) != 2:
        raise ValueError(f"{dataset.file}: expected two sections")
    alphabet = x_alphabet(4)
    out = []
    for _, lines in sections:
        elems = [psi_eval(parse_word(line, alphabet)) for line in lines]
        if len(set(elems)) != len(elems):
            raise ValueError(f"{dataset.file}: duplicate elements in a set")
        out.append(elems)
    return out[0], out[1]


def radius4_units() -> list[tuple[str, RingElt]]:
    """All 36 radius-4 units as (name, element), U_i before V_i."""
    units = []
    for i in range(1, 19):
        u, v = load_unit_pair(DATASET_INDEX[f"pair{i:02d}"])
        units.append((f"U{i}", u))
        units.append((f"V{i}", v))
    return units


def radius5_swap_units() -> list[tuple[str, RingElt]]:
    return [(f"W{i}", load_swap_unit(DATASET_INDEX[f"W{i}"]))
            for i in range(1, 5)]


def radius6_support81_swap_units() -> list[tuple[str, RingElt]]:
    return [(f"S{i}", load_swap_unit(DATASET_INDEX[f"S{i}"]))
            for i in range(1, 3)]


def verify_dataset(dataset: Dataset) -> dict:
    """Run one dataset through its checker; never raises on bad data."""
    report = {"id": dataset.id, "kind": dataset.kind, "note": dataset.note}
    try:
        if dataset.kind == "unit-pair":
            u, v = load_unit_pair(dataset)
            status = verify_unit_pair(u, v, two_sided=True)
            report["supports"] = [len(u.support), len(v.support)]
            report["ok"] = status == "nontrivial-unit"
            report["detail"] = status
        elif dataset.kind == "swap-unit":
            u = load_swap_unit(dataset)
            report["supports"] = [len(u.support)]
            report["ok"] = is_swap_unit(u)
            report["detail"] = "swap unit" if report["ok"] else "not a swap unit"
        elif dataset.kind == "upp-witness":
            a, b = load_upp_witness(dataset)
            report["supports"] = [len(a), len(b)]
            ok = upp_witness_check(a, b, mul=h4_mul)
            report["ok"] = ok
            report["detail"] = ("every product repeats" if ok
                                else "a unique product exists")
        else:
            report["ok"] = False
            report["detail"] = f"unknown kind {dataset.kind}"
    except Exception as exc:  # data errors become report lines
        report["ok"] = False
        report["detail"] = f"load error: {exc}"
    return report


def verify_bundle() -> list[dict]:
    """Verify every bundled dataset; one report entry per datum."""
    return [verify_dataset(d) for d in DATASETS]
