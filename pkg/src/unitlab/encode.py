"""CNF encodings of unit-existence and UPP-failure questions.

All encoders are deterministic: the same input produces byte-identical
DIMACS.  Coefficient variables occupy the lowest ids in ball order,
followed by product (AND) auxiliaries and parity-chain auxiliaries.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable, Sequence, TextIO

from .cayley import CayleyBall
from .groupring import RingElt
from .h4 import SElement
from .pgroup import P_ALPHABET, p_eval
from .words import parse_word


@dataclass
class CnfInstance:
    num_vars: int
    clauses: list[tuple[int, ...]]
    varmap: dict
    metadata: dict
    # decoding context, not serialized into DIMACS
    ball: CayleyBall | None = field(default=None, repr=False)
    elements: list = field(default=None, repr=False)

    def add_clause(self, clause: Sequence[int]):
        self.clauses.append(tuple(clause))


class _Builder:
    def __init__(self, metadata: dict):
        self.num_vars = 0
        self.clauses: list[tuple[int, ...]] = []
        self.metadata = metadata
        self.and_cache: dict[tuple[int, int], int] = {}

    def new_var(self) -> int:
        self.num_vars += 1
        return self.num_vars

    def new_vars(self, n: int) -> list[int]:
        return [self.new_var() for _ in range(n)]

    def add(self, *lits: int):
        self.clauses.append(tuple(lits))

    def and_var(self, x: int, y: int) -> int:
        """Tseitin AND gate; x == y collapses to the variable itself."""
        if x == y:
            return x
        key = (x, y) if x < y else (y, x)
        p = self.and_cache.get(key)
        if p is None:
            p = self.new_var()
            self.and_cache[key] = p
            self.add(-p, x)
            self.add(-p, y)
            self.add(p, -x, -y)
        return p

    def parity(self, lits: list[int], rhs: int, chain_vars: list[int]):
        """Sequential XOR chain constraining xor(lits) == rhs."""
        if not lits:
            if rhs:
                self.add()  # empty clause: unsatisfiable
            return
        acc = lits[0]
        for lit in lits[1:]:
            nxt = self.new_var()
            chain_vars.append(nxt)
            # nxt <-> acc xor lit
            self.add(-nxt, acc, lit)
            self.add(-nxt, -acc, -lit)
            self.add(nxt, -acc, lit)
            self.add(nxt, acc, -lit)
            acc = nxt
        self.add(acc if rhs else -acc)

    def at_least_two(self, vars_: list[int]):
        self.add(*vars_)
        for i, v in enumerate(vars_):
            self.add(-v, *(w for j, w in enumerate(vars_) if j != i))


def _product_pairs(ball: CayleyBall, swap_perm: list[int] | None = None):
    """target element -> ordered list of ball-index pairs (i, j) with gi*gj = t."""
    targets: dict = {}
    mul = ball.group.mul
    elems = ball.elements
    for i, g in enumerate(elems):
        for j, h in enumerate(elems):
            targets.setdefault(mul(g, h), []).append((i, j))
    return targets


def encode_unit_search(
    ball: CayleyBall, two_sided: bool = False, forbid_trivial: bool = True
) -> CnfInstance:
    """CNF for a unit pair (U, V) supported on the ball with U*V = 1.

    One variable per ball element for each of U and V; for every element
    of the product closure ball*ball a Tseitin parity constraint fixes
    the GF(2) coefficient of U*V (1 at the identity, 0 elsewhere).
    forbid_trivial requires at least two U-coefficients set.
    """
    n = len(ball)
    meta = {
        "kind": "unit",
        "group": type(ball.group).__name__,
        "radius": ball.radius,
        "two_sided": two_sided,
    }
    b = _Builder(meta)
    u_vars = b.new_vars(n)
    v_vars = b.new_vars(n)
    chain: list[int] = []
    identity = ball.group.identity()
    targets = _product_pairs(ball)
    for target, pairs in targets.items():
        lits = [b.and_var(u_vars[i], v_vars[j]) for i, j in pairs]
        b.parity(lits, 1 if target == identity else 0, chain)
    if two_sided:
        for target, pairs in targets.items():
            lits = [b.and_var(u_vars[j], v_vars[i]) for i, j in pairs]
            b.parity(lits, 1 if target == identity else 0, chain)
    if forbid_trivial:
        b.at_least_two(u_vars)
    varmap = {
        "u": u_vars,
        "v": v_vars,
        "product_aux": {f"{x},{y}": p for (x, y), p in b.and_cache.items()},
        "parity_aux": chain,
    }
    return CnfInstance(b.num_vars, b.clauses, varmap, meta, ball=ball)


def swap_permutation(ball: CayleyBall) -> list[int]:
    """Ball-index permutation induced by the generator swap a <-> b of P."""
    images = [parse_word("b", P_ALPHABET), parse_word("a", P_ALPHABET)]
    perm = []
    for word in ball.words:
        img = p_eval(word.substitute(images))
        perm.append(ball.index[img])
    return perm


def encode_swap_search(ball: CayleyBall) -> CnfInstance:
    """CNF for swap units: V is U composed with the swap automorphism.

    The V-coefficient of g is the U-coefficient of pi(g), so no fresh
    V-variables are introduced; models decode to U with U * pi(U) = 1.
    """
    n = len(ball)
    perm = swap_permutation(ball)
    meta = {"kind": "swap", "group": type(ball.group).__name__, "radius": ball.radius}
    b = _Builder(meta)
    u_vars = b.new_vars(n)
    chain: list[int] = []
    identity = ball.group.identity()
    for target, pairs in _product_pairs(ball).items():
        lits = [b.and_var(u_vars[i], u_vars[perm[j]]) for i, j in pairs]
        b.parity(lits, 1 if target == identity else 0, chain)
    b.at_least_two(u_vars)
    varmap = {
        "u": u_vars,
        "swap_perm": perm,
        "product_aux": {f"{x},{y}": p for (x, y), p in b.and_cache.items()},
        "parity_aux": chain,
    }
    return CnfInstance(b.num_vars, b.clauses, varmap, meta, ball=ball)


def encode_upp_search(elements: Sequence, mul: Callable) -> CnfInstance:
    """CNF whose models are pairs (A, B) witnessing failure of the UPP.

    Variables a_s, b_s select the subsets; c_{u,v} <-> a_u and b_v; both
    subsets are non-empty and every selected product (u, v) must be
    matched by a selected (u', v') with u' != u and u'v' = uv.
    """
    elements = list(elements)
    n = len(elements)
    meta = {"kind": "upp", "set_size": n}
    b = _Builder(meta)
    a_vars = b.new_vars(n)
    b_vars = b.new_vars(n)
    c_vars = {}
    for i in range(n):
        for j in range(n):
            c = b.new_var()
            c_vars[(i, j)] = c
            b.add(-c, a_vars[i])
            b.add(-c, b_vars[j])
            b.add(-a_vars[i], -b_vars[j], c)
    b.add(*a_vars)
    b.add(*b_vars)
    by_product: dict = {}
    for i, g in enumerate(elements):
        for j, h in enumerate(elements):
            by_product.setdefault(mul(g, h), []).append((i, j))
    for pairs in by_product.values():
        for i, j in pairs:
            support = [c_vars[(x, y)] for x, y in pairs if x != i]
            b.add(-c_vars[(i, j)], *support)
    varmap = {
        "u": a_vars,
        "v": b_vars,
        "product_aux": {f"{i},{j}": c for (i, j), c in c_vars.items()},
        "parity_aux": [],
    }
    return CnfInstance(b.num_vars, b.clauses, varmap, meta, elements=elements)


def s_ball(n: int) -> list[SElement]:
    """B_N = {a^u b^v z^w : |u|+|v|+|w| <= N}, canonically ordered."""
    out = []
    for u in range(-n, n + 1):
        for v in range(-(n - abs(u)), n - abs(u) + 1):
            rest = n - abs(u) - abs(v)
            for w in range(-rest, rest + 1):
                out.append(SElement(u, v, w))
    return sorted(out)


def encode_h4_split_unit_search(n: int) -> CnfInstance:
    """CNF for units of F2[H4] in split form over the S-ball B_N.

    Four coefficient blocks alpha, beta, alpha', beta'; parity
    constraints realize alpha*alpha' + z*beta^r*beta' = 1 and
    beta*alpha' + alpha^r*beta' = 0.  Nontriviality demands a true
    variable in each of the four blocks.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    elems = s_ball(n)
    m = len(elems)
    meta = {"kind": "h4-split-unit", "ball": f"B_{n}", "set_size": m}
    b = _Builder(meta)
    alpha = b.new_vars(m)
    beta = b.new_vars(m)
    alpha2 = b.new_vars(m)
    beta2 = b.new_vars(m)
    chain: list[int] = []

    def conj(e: SElement) -> SElement:
        return e.conj_r()

    # a unit with alpha = 0 or beta = 0 lies in F2[S] or r*F2[S] and is
    # trivial there, so nontriviality is: all four blocks nonempty
    eq1: dict[SElement, list[int]] = {}
    eq2: dict[SElement, list[int]] = {}
    for i, g in enumerate(elems):
        gc = conj(g)
        for j, h in enumerate(elems):
            p = g * h
            eq1.setdefault(p, []).append(b.and_var(alpha[i], alpha2[j]))
            q = gc * h
            eq1.setdefault(SElement(q.u, q.v, q.w + 1), []).append(
                b.and_var(beta[i], beta2[j])
            )
            eq2.setdefault(p, []).append(b.and_var(beta[i], alpha2[j]))
            eq2.setdefault(q, []).append(b.and_var(alpha[i], beta2[j]))
    identity = SElement()
    for target in sorted(eq1):
        b.parity(eq1[target], 1 if target == identity else 0, chain)
    for target in sorted(eq2):
        b.parity(eq2[target], 0, chain)
    b.add(*alpha)
    b.add(*beta)
    b.add(*alpha2)
    b.add(*beta2)
    varmap = {
        "alpha": alpha,
        "beta": beta,
        "alpha2": alpha2,
        "beta2": beta2,
        "parity_aux": chain,
        "product_aux": {f"{x},{y}": p for (x, y), p in b.and_cache.items()},
    }
    return CnfInstance(b.num_vars, b.clauses, varmap, meta, elements=elems)


# --- decoding ----------------------------------------------------------------


def decode_support(inst: CnfInstance, model: dict[int, bool], role: str) -> list:
    """Support elements selected by the model in the given variable block."""
    domain = inst.ball.elements if inst.ball is not None else inst.elements
    return [domain[i] for i, var in enumerate(inst.varmap[role]) if model.get(var)]


def decode_unit_model(inst: CnfInstance, model: dict[int, bool]):
    """Model -> (U, V) as ring elements (V via the swap image if encoded)."""
    from .groupring import SWAP_IMAGES, apply_automorphism

    group = inst.ball.group
    u = RingElt(group, decode_support(inst, model, "u"))
    if inst.metadata["kind"] == "swap":
        v = apply_automorphism(SWAP_IMAGES, u)
    else:
        v = RingElt(group, decode_support(inst, model, "v"))
    return u, v


# --- DIMACS ------------------------------------------------------------------


def write_dimacs(inst: CnfInstance, sink: TextIO):
    sink.write("c unitlab CNF instance\n")
    sink.write(f"c meta {json.dumps(inst.metadata, sort_keys=True)}\n")
    sink.write(f"c varmap {json.dumps(inst.varmap, sort_keys=True)}\n")
    sink.write(f"p cnf {inst.num_vars} {len(inst.clauses)}\n")
    for clause in inst.clauses:
        sink.write(" ".join(map(str, clause)) + " 0\n")


def parse_dimacs(text: str) -> CnfInstance:
    num_vars = 0
    clauses = []
    varmap: dict = {}
    metadata: dict = {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if line.startswith("c meta "):
            metadata = json.loads(line[len("c meta "):])
        elif line.startswith("c varmap "):
            varmap = json.loads(line[len("c varmap "):])
        elif line.startswith("c"):
            continue
        elif line.startswith("p cnf"):
            num_vars = int(line.split()[2])
        else:
            lits = [int(tok) for tok in line.split()]
            if lits and lits[-1] == 0:
                lits = lits[:-1]
            clauses.append(tuple(lits))
    return CnfInstance(num_vars, clauses, varmap, metadata)


def parse_model(text: str) -> dict[int, bool]:
    """Parse DIMACS `v`-line model output (multi-line, 0-terminated)."""
    model: dict[int, bool] = {}
    saw_v = False
    for line in text.splitlines():
        line = line.strip()
        if not line.startswith("v"):
            continue
        saw_v = True
        for tok in line[1:].split():
            lit = int(tok)
            if lit == 0:
                return model
            model[abs(lit)] = lit > 0
    if not saw_v:
        raise ValueError("no v-lines in model text")
    return model
