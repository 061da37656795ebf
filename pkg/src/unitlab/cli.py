"""Command-line surface of the workbench.

Subcommands cover ball enumeration, unit verification and search, swap
and unique-product searches, orbit analysis, the Fibonacci-group word
problem, normal forms, and raw CNF export.  Exit codes: 0 for success
or a verified claim, 1 when a claim is refuted or a search comes back
unsat, 2 on usage errors, 3 on timeouts.
"""

from __future__ import annotations

import argparse
import json
import sys

from .cayley import cayley_ball
from .datasets import parse_sections, verify_bundle
from .encode import (decode_support, decode_unit_model, encode_h4_split_unit_search,
                     encode_swap_search, encode_unit_search, encode_upp_search,
                     write_dimacs)
from .fibwp import hn_is_identity, kn_normalize, ln_normalize, x_alphabet
from .groupring import (RingElt, SplitElt, h4_recompose, is_swap_unit,
                        ring_from_words, ring_mul, upp_witness_check,
                        verify_unit_pair)
from .h4 import H4_GROUP, H4_X_GROUP, h4_mul, psi_eval
from .pgroup import P_GROUP, geodesic_word_of
from .solver import (SOLVER_ENV_VAR, SolverError, enumerate_all,
                     projection_vars, solve)
from .symmetry import ClosureViolation, auto_group_s, auto_group_t, orbits_partition
from .words import WordError, parse_word

EXIT_OK = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_TIMEOUT = 3


class UsageError(Exception):
    pass


def _parse_group(tag: str):
    """Resolve --group into ("P"|"H4"|"Fib", extra)."""
    if tag == "P":
        return ("P", None)
    if tag == "H4":
        return ("H4", None)
    if tag.startswith("Fib:"):
        try:
            r, n = (int(p) for p in tag[4:].split(","))
        except ValueError:
            raise UsageError(f"bad group tag {tag!r}; expected Fib:r,n")
        return ("Fib", (r, n))
    raise UsageError(f"unknown group {tag!r}; expected P, H4, or Fib:r,n")


def _p_words(x: RingElt) -> list[str]:
    return sorted((str(geodesic_word_of(g)) for g in x.support), key=lambda s: (len(s), s))


def _s_word(e) -> str:
    return f"a^{e.u}*b^{e.v}*z^{e.w}"


def _solver_kwargs(args) -> dict:
    return {
        "backend": args.solver,
        "solver_path": args.solver_path,
        "time_limit": args.limit_seconds if args.limit_seconds else 3600.0,
    }


def _emit(args, result: dict, lines: list[str]):
    if args.json:
        print(json.dumps(result, sort_keys=True))
    else:
        for line in lines:
            print(line)


def _write_csv(path: str, header: list[str], rows: list[list]):
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _figure_path(out: str) -> str:
    stem = out.rsplit(".", 1)[0] if "." in out.rsplit("/", 1)[-1] else out
    return stem + ".png"


# --- subcommands --------------------------------------------------------------


def cmd_ball(args) -> int:
    kind, _ = _parse_group(args.group)
    if kind == "P":
        group = P_GROUP
    elif kind == "H4":
        group = H4_GROUP
    else:
        raise UsageError("ball supports --group P or H4")
    ball = cayley_ball(group, args.radius)
    spheres = ball.sphere_sizes()
    balls = ball.ball_sizes()
    rows = [[r, spheres[r], balls[r]] for r in range(args.radius + 1)]
    result = {
        "group": args.group,
        "radius": args.radius,
        "sphere_sizes": spheres,
        "ball_sizes": balls,
    }
    lines = ["radius  sphere  ball"]
    lines += [f"{r:>6}  {s:>6}  {b:>4}" for r, s, b in rows]
    if args.out:
        _write_csv(args.out, ["radius", "sphere_size", "ball_size"], rows)
        _render_growth_figure(args.group, rows, _figure_path(args.out))
        lines.append(f"wrote {args.out} and {_figure_path(args.out)}")
    _emit(args, result, lines)
    return EXIT_OK


def _render_growth_figure(tag: str, rows: list[list], path: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    radii = [r for r, _, _ in rows]
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.plot(radii, [b for _, _, b in rows], "o-", label="ball")
    ax.plot(radii, [s for _, s, _ in rows], "s--", label="sphere")
    ax.set_xlabel("radius")
    ax.set_ylabel("elements")
    ax.set_title(f"growth of {tag}")
    ax.legend()
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _load_pair_file(path: str) -> tuple[RingElt, RingElt]:
    with open(path) as fh:
        sections = parse_sections(fh.read())
    if len(sections) != 2:
        raise UsageError(f"{path}: expected two blank-line separated sections")
    return (ring_from_words(P_GROUP, sections[0][1]),
            ring_from_words(P_GROUP, sections[1][1]))


def cmd_verify_unit(args) -> int:
    if args.bundle:
        report = verify_bundle()
        ok = all(r["ok"] for r in report)
        lines = [f"{'PASS' if r['ok'] else 'FAIL'}  {r['id']:<10} {r['detail']}"
                 for r in report]
        lines.append(f"{sum(r['ok'] for r in report)}/{len(report)} datasets verified")
        _emit(args, {"bundle": report, "ok": ok}, lines)
        return EXIT_OK if ok else EXIT_REFUTED
    if not args.file:
        raise UsageError("verify-unit needs --file or --bundle")
    u, v = _load_pair_file(args.file)
    if args.swap:
        status = "swap-unit" if is_swap_unit(u) else "not-swap-unit"
        verified = status == "swap-unit"
    else:
        status = verify_unit_pair(u, v, two_sided=args.two_sided)
        verified = status.endswith("unit")
    result = {"status": status, "supports": [len(u), len(v)], "verified": verified}
    _emit(args, result, [f"{status} (supports {len(u)}, {len(v)})"])
    return EXIT_OK if verified else EXIT_REFUTED


def _finish_solve(args, res, describe_sat):
    if res.status == "timeout":
        _emit(args, {"status": "timeout"}, ["timeout"])
        return EXIT_TIMEOUT
    if res.status == "unsat":
        _emit(args, {"status": "unsat"}, ["unsat"])
        return EXIT_REFUTED
    return describe_sat(res)


def cmd_search_unit(args) -> int:
    kind, _ = _parse_group(args.group)
    if kind == "P":
        ball = cayley_ball(P_GROUP, args.radius)
        if args.swap:
            inst = encode_swap_search(ball)
        else:
            inst = encode_unit_search(ball, two_sided=args.two_sided)
    elif kind == "H4":
        inst = encode_h4_split_unit_search(args.radius)
    else:
        raise UsageError("search-unit supports --group P or H4")
    res = solve(inst, **_solver_kwargs(args))

    def describe(res):
        if kind == "P":
            u, v = decode_unit_model(inst, res.model)
            status = verify_unit_pair(u, v, two_sided=args.two_sided)
            if status != "nontrivial-unit":
                raise SolverError(f"decoded model failed ring check: {status}")
            result = {"status": "sat", "verified": status,
                      "u": _p_words(u), "v": _p_words(v)}
            lines = ["sat: verified nontrivial unit",
                     "U = " + " + ".join(result["u"]),
                     "V = " + " + ".join(result["v"])]
        else:
            u = h4_recompose(SplitElt(decode_support(inst, res.model, "alpha"),
                                      decode_support(inst, res.model, "beta")))
            v = h4_recompose(SplitElt(decode_support(inst, res.model, "alpha2"),
                                      decode_support(inst, res.model, "beta2")))
            prod = ring_mul(u, v)
            if not (prod.is_one and not u.is_trivial_unit):
                raise SolverError("decoded model failed ring check")
            result = {"status": "sat", "supports": [len(u), len(v)]}
            lines = [f"sat: verified nontrivial unit (supports {len(u)}, {len(v)})"]
        _emit(args, result, lines)
        return EXIT_OK

    return _finish_solve(args, res, describe)


def cmd_enum_units(args) -> int:
    kind, _ = _parse_group(args.group)
    if kind != "P":
        raise UsageError("enum-units supports --group P")
    ball = cayley_ball(P_GROUP, args.radius)
    if args.swap:
        inst = encode_swap_search(ball)
        roles = ("u",)
    else:
        inst = encode_unit_search(ball, two_sided=args.two_sided)
        roles = ("u", "v")
    models, complete = enumerate_all(inst, roles=roles, **_solver_kwargs(args))
    proj = projection_vars(inst, roles)
    units = []
    for assignment in models:
        model = dict(zip(proj, assignment))
        u, v = decode_unit_model(inst, model)
        status = verify_unit_pair(u, v)
        if status != "nontrivial-unit":
            raise SolverError(f"enumerated model failed ring check: {status}")
        units.append({"u": _p_words(u), "v": _p_words(v), "support": len(u)})
    result = {"count": len(units), "complete": complete, "units": units}
    lines = [f"{len(units)} units ({'complete' if complete else 'incomplete'})"]
    lines += ["U = " + " + ".join(entry["u"]) for entry in units]
    _emit(args, result, lines)
    return EXIT_OK if complete else EXIT_TIMEOUT


def cmd_search_swap(args) -> int:
    kind, _ = _parse_group(args.group)
    if kind != "P":
        raise UsageError("search-swap supports --group P")
    ball = cayley_ball(P_GROUP, args.radius)
    inst = encode_swap_search(ball)
    res = solve(inst, **_solver_kwargs(args))

    def describe(res):
        u, v = decode_unit_model(inst, res.model)
        if not is_swap_unit(u):
            raise SolverError("decoded model is not a swap unit")
        result = {"status": "sat", "u": _p_words(u), "support": len(u)}
        _emit(args, result, ["sat: verified swap unit",
                             "U = " + " + ".join(result["u"])])
        return EXIT_OK

    return _finish_solve(args, res, describe)


def cmd_search_upp(args) -> int:
    kind, _ = _parse_group(args.group)
    if kind != "H4":
        raise UsageError("search-upp supports --group H4")
    ball = cayley_ball(H4_X_GROUP, args.radius)
    inst = encode_upp_search(ball.elements, h4_mul)
    res = solve(inst, **_solver_kwargs(args))

    def describe(res):
        a = decode_support(inst, res.model, "u")
        b = decode_support(inst, res.model, "v")
        if not upp_witness_check(a, b, mul=h4_mul):
            raise SolverError("decoded witness failed the unique-product check")
        a_words = [str(ball.word_of(e)) for e in a]
        b_words = [str(ball.word_of(e)) for e in b]
        result = {"status": "sat", "sizes": [len(a), len(b)],
                  "A": a_words, "B": b_words}
        lines = [f"sat: verified witness |A|={len(a)}, |B|={len(b)}",
                 "A: " + ", ".join(a_words),
                 "B: " + ", ".join(b_words)]
        _emit(args, result, lines)
        return EXIT_OK

    return _finish_solve(args, res, describe)


def cmd_verify_upp(args) -> int:
    kind, _ = _parse_group(args.group)
    if kind != "H4":
        raise UsageError("verify-upp supports --group H4")
    if not args.file:
        raise UsageError("verify-upp needs --file")
    with open(args.file) as fh:
        sections = parse_sections(fh.read())
    if len(sections) != 2:
        raise UsageError(f"{args.file}: expected two sections A and B")
    alphabet = x_alphabet(4)
    a = [psi_eval(parse_word(w, alphabet)) for w in sections[0][1]]
    b = [psi_eval(parse_word(w, alphabet)) for w in sections[1][1]]
    if len(set(a)) != len(a) or len(set(b)) != len(b):
        raise UsageError("witness sets contain duplicate group elements")
    ok = upp_witness_check(a, b, mul=h4_mul)
    result = {"verified": ok, "sizes": [len(a), len(b)]}
    _emit(args, result, [("verified" if ok else "refuted")
                         + f" (|A|={len(a)}, |B|={len(b)})"])
    return EXIT_OK if ok else EXIT_REFUTED


def cmd_orbits(args) -> int:
    from . import datasets

    if args.file:
        with open(args.file) as fh:
            sections = parse_sections(fh.read())
        named = [(name, ring_from_words(P_GROUP, lines))
                 for name, lines in sections]
    elif args.set == "radius4":
        named = datasets.radius4_units()
    elif args.set == "radius5":
        named = datasets.radius5_swap_units()
    elif args.set == "radius6-81":
        named = datasets.radius6_support81_swap_units()
    else:
        raise UsageError("orbits needs --file or --set")
    group = auto_group_s() if args.auto == "S" else auto_group_t()
    try:
        orbits = orbits_partition([u for _, u in named], group)
    except ClosureViolation as exc:
        _emit(args, {"error": str(exc)}, [f"closure violation: {exc}"])
        return EXIT_REFUTED
    orbit_rows = [[i, named[j][0]] for i, orbit in enumerate(orbits) for j in orbit]
    sizes = [len(o) for o in orbits]
    result = {"auto_group": group.name, "orbit_sizes": sizes,
              "orbits": [[named[j][0] for j in o] for o in orbits]}
    lines = [f"{len(orbits)} {group.name}-orbits, sizes {sizes}"]
    lines += ["  {" + ", ".join(named[j][0] for j in o) + "}" for o in orbits]
    if args.out:
        _write_csv(args.out, ["orbit", "member"], orbit_rows)
        _render_orbit_figure(group.name, sizes, _figure_path(args.out))
        lines.append(f"wrote {args.out} and {_figure_path(args.out)}")
    _emit(args, result, lines)
    return EXIT_OK


def _render_orbit_figure(name: str, sizes: list[int], path: str):
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.bar(range(1, len(sizes) + 1), sizes)
    ax.set_xlabel("orbit")
    ax.set_ylabel("size")
    ax.set_title(f"{name}-orbit sizes")
    ax.set_xticks(range(1, len(sizes) + 1))
    fig.tight_layout()
    fig.savefig(path, dpi=150)
    plt.close(fig)


def _fib_n(args) -> int:
    if args.n:
        return args.n
    kind, extra = _parse_group(args.group)
    if kind == "Fib":
        r, n = extra
        if r != n - 1:
            raise UsageError("only the r = n-1 family is supported")
        return n
    if kind == "H4":
        return 4
    raise UsageError("give --n N or --group Fib:r,n")


def cmd_wp(args) -> int:
    n = _fib_n(args)
    if not args.word:
        raise UsageError("wp needs --word")
    verdict = hn_is_identity(args.word, n)
    _emit(args, {"n": n, "word": args.word, "verdict": verdict}, [verdict])
    if verdict == "identity":
        return EXIT_OK
    if verdict == "not-identity":
        return EXIT_REFUTED
    return EXIT_TIMEOUT


def cmd_normal_form(args) -> int:
    n = _fib_n(args)
    if not args.word:
        raise UsageError("normal-form needs --word")
    if args.form == "kn":
        nf = kn_normalize(args.word, n)
        body = "*".join(f"x{i}" for i in nf.indices) or "1"
        text = f"{body} * x{n}^{nf.zpow}" if nf.zpow else body
        result = {"form": "kn", "indices": list(nf.indices), "zpow": nf.zpow,
                  "text": text}
    else:
        nf = ln_normalize(args.word, n)
        parts = [f"u^{nf.upow}"] if nf.upow else []
        for factor, indices in nf.syllables:
            parts.append(factor + "(" + ",".join(map(str, indices)) + ")")
        text = " ".join(parts) or "1"
        result = {"form": "ln", "upow": nf.upow,
                  "syllables": [[f, list(ix)] for f, ix in nf.syllables],
                  "text": text}
    _emit(args, result, [text])
    return EXIT_OK


def cmd_encode(args) -> int:
    kind, _ = _parse_group(args.group)
    if args.kind == "upp":
        if kind != "H4":
            raise UsageError("--kind upp supports --group H4")
        ball = cayley_ball(H4_X_GROUP, args.radius)
        inst = encode_upp_search(ball.elements, h4_mul)
    elif kind == "P":
        ball = cayley_ball(P_GROUP, args.radius)
        if args.swap or args.kind == "swap":
            inst = encode_swap_search(ball)
        else:
            inst = encode_unit_search(ball, two_sided=args.two_sided)
    elif kind == "H4":
        inst = encode_h4_split_unit_search(args.radius)
    else:
        raise UsageError("encode supports --group P or H4")
    if args.out:
        with open(args.out, "w") as fh:
            write_dimacs(inst, fh)
        _emit(args, {"out": args.out, "vars": inst.num_vars,
                     "clauses": len(inst.clauses)},
              [f"wrote {args.out} ({inst.num_vars} vars, "
               f"{len(inst.clauses)} clauses)"])
    else:
        write_dimacs(inst, sys.stdout)
    return EXIT_OK


# --- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="unitlab",
        description="workbench for units, swap units, and unique products")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(func=func)
        p.add_argument("--group", default="P",
                       help="P, H4, or Fib:r,n (default P)")
        p.add_argument("--radius", type=int, default=2)
        p.add_argument("--solver", choices=["embedded", "external"],
                       default="embedded")
        p.add_argument("--solver-path", default=None,
                       help=f"external solver binary (or ${SOLVER_ENV_VAR})")
        p.add_argument("--two-sided", action="store_true")
        p.add_argument("--swap", action="store_true")
        p.add_argument("--json", action="store_true")
        p.add_argument("--limit-seconds", type=float, default=None)
        p.add_argument("--out", default=None)
        return p

    add("ball", cmd_ball, help="ball and sphere sizes up to a radius")

    p = add("verify-unit", cmd_verify_unit, help="verify a unit pair file")
    p.add_argument("--file", default=None)
    p.add_argument("--bundle", action="store_true",
                   help="verify every bundled dataset")

    add("search-unit", cmd_search_unit, help="SAT search for a nontrivial unit")
    add("enum-units", cmd_enum_units, help="enumerate all units on a ball")
    add("search-swap", cmd_search_swap, help="SAT search for a swap unit")
    add("search-upp", cmd_search_upp,
        help="SAT search for a unique-product failure")

    p = add("verify-upp", cmd_verify_upp, help="verify a witness pair file")
    p.add_argument("--file", default=None)

    p = add("orbits", cmd_orbits, help="orbit partition of a unit list")
    p.add_argument("--file", default=None)
    p.add_argument("--set", choices=["radius4", "radius5", "radius6-81"],
                   default=None)
    p.add_argument("--auto", choices=["S", "T"], default="S")

    p = add("wp", cmd_wp, help="Fibonacci group word problem")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--word", default=None)

    p = add("normal-form", cmd_normal_form, help="K_n or L_n normal form")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--word", default=None)
    p.add_argument("--form", choices=["kn", "ln"], default="kn")

    p = add("encode", cmd_encode, help="write a DIMACS CNF instance")
    p.add_argument("--kind", choices=["unit", "swap", "upp"], default="unit")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (WordError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_REFUTED


if __name__ == "__main__":
    sys.exit(main())
