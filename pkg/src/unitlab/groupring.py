"""Group-ring arithmetic over GF(2) and the associated checkers.

An element of F2[G] is identified with its support: a finite set of
canonical group elements.  Addition is symmetric difference and
multiplication is parity convolution.  The unique split u = alpha + r*beta
of F2[H4] over the index-2 subgroup S gets its own representation with
the closed-form product.
"""

from __future__ import annotations

import operator
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .h4 import H4_GROUP, H4Element, SElement
from .pgroup import P_ALPHABET, P_GROUP, PElement, geodesic_word_of, p_eval
from .words import GroupWord, parse_word


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class RingElt:
    """An element of F2[G]: the support set with implicit 1-coefficients."""

    group: object
    support: frozenset

    def __post_init__(self):
        object.__setattr__(self, "support", frozenset(self.support))

    @property
    def is_zero(self) -> bool:
        return not self.support

    @property
    def is_one(self) -> bool:
        return self.support == frozenset({self.group.identity()})

    @property
    def is_trivial_unit(self) -> bool:
        return len(self.support) == 1

    def __len__(self) -> int:
        return len(self.support)

    def _check(self, other: "RingElt"):
        if other.group is not self.group:
            raise RingError("group tag mismatch")

    def __add__(self, other: "RingElt") -> "RingElt":
        self._check(other)
        return RingElt(self.group, self.support ^ other.support)

    def __mul__(self, other: "RingElt") -> "RingElt":
        self._check(other)
        counts = Counter()
        mul = self.group.mul
        for g in self.support:
            for h in other.support:
                counts[mul(g, h)] += 1
        return RingElt(self.group, {g for g, c in counts.items() if c % 2})


def ring_one(group) -> RingElt:
    return RingElt(group, {group.identity()})


def ring_add(x: RingElt, y: RingElt) -> RingElt:
    return x + y


def ring_mul(x: RingElt, y: RingElt) -> RingElt:
    return x * y


def ring_from_words(group, words: Iterable[GroupWord | str]) -> RingElt:
    support = set()
    for w in words:
        elem = group.eval_word(parse_word(w, group.alphabet) if isinstance(w, str) else w)
        if elem in support:
            support.discard(elem)  # GF(2): repeated terms cancel
        else:
            support.add(elem)
    return RingElt(group, support)


def verify_unit_pair(u: RingElt, v: RingElt, two_sided: bool = False) -> str:
    """Classify (u, v): 'trivial-unit' | 'nontrivial-unit' | 'not-inverse'.

    Checks u*v = 1 (and v*u = 1 when two_sided); triviality over GF(2)
    means a singleton support.
    """
    if not (u * v).is_one:
        return "not-inverse"
    if two_sided and not (v * u).is_one:
        return "not-inverse"
    return "trivial-unit" if u.is_trivial_unit else "nontrivial-unit"


# --- automorphism action ----------------------------------------------------


def apply_automorphism(images: Mapping[str, GroupWord | str], x: RingElt) -> RingElt:
    """Extend a generator-image map of P to F2[P], elementwise on the support.

    Each support element is mapped through its geodesic word with the
    generators substituted, then re-canonicalized.
    """
    if x.group is not P_GROUP:
        raise RingError("automorphism action is defined over P")
    image_words = [
        parse_word(w, P_ALPHABET) if isinstance(w, str) else w
        for w in (images["a"], images["b"])
    ]
    support = {
        p_eval(geodesic_word_of(g).substitute(image_words)) for g in x.support
    }
    return RingElt(P_GROUP, support)


SWAP_IMAGES = {"a": "b", "b": "a"}


def is_swap_unit(u: RingElt) -> bool:
    """True iff u is nontrivial and u * pi(u) = 1 (pi swaps a and b)."""
    if len(u.support) <= 1:
        return False
    return (u * apply_automorphism(SWAP_IMAGES, u)).is_one


# --- the alpha + r*beta split of F2[H4] -------------------------------------


@dataclass(frozen=True)
class SplitElt:
    """u = alpha + r*beta with alpha, beta in F2[S], S = <a,b,z> <= H4."""

    alpha: frozenset  # of SElement
    beta: frozenset

    def __post_init__(self):
        object.__setattr__(self, "alpha", frozenset(self.alpha))
        object.__setattr__(self, "beta", frozenset(self.beta))


def _s_convolve(x: frozenset, y: frozenset, zshift: int = 0, conj_first: bool = False):
    counts = Counter()
    for g in x:
        gg = g.conj_r() if conj_first else g
        for h in y:
            p = gg * h
            counts[SElement(p.u, p.v, p.w + zshift)] += 1
    return frozenset(g for g, c in counts.items() if c % 2)


def h4_split(u: RingElt) -> SplitElt:
    """Split by the r-exponent bit: r^0-part -> alpha, r^1-part -> beta."""
    if u.group is not H4_GROUP:
        raise RingError("h4_split expects an element of F2[H4]")
    alpha, beta = set(), set()
    for g in u.support:
        (beta if g.w else alpha).add(g.spart)
    return SplitElt(frozenset(alpha), frozenset(beta))


def h4_recompose(x: SplitElt) -> RingElt:
    support = {H4Element(0, s.u, s.v, s.w) for s in x.alpha}
    support |= {H4Element(1, s.u, s.v, s.w) for s in x.beta}
    return RingElt(H4_GROUP, support)


def h4_split_mul(x: SplitElt, y: SplitElt) -> SplitElt:
    """(a + r b)(a' + r b') = aa' + z b^r b' + r (b a' + a^r b')."""
    alpha = _s_convolve(x.alpha, y.alpha) ^ _s_convolve(x.beta, y.beta, zshift=1, conj_first=True)
    beta = _s_convolve(x.beta, y.alpha) ^ _s_convolve(x.alpha, y.beta, conj_first=True)
    return SplitElt(alpha, beta)


# --- unique product property -------------------------------------------------


def product_multiplicities(A: Iterable, B: Iterable, mul: Callable = operator.mul) -> Counter:
    """Multiset multiplicities of {a*b : a in A, b in B}."""
    counts = Counter()
    for a in A:
        for b in B:
            counts[mul(a, b)] += 1
    return counts


def upp_witness_check(A: Iterable, B: Iterable, mul: Callable = operator.mul) -> bool:
    """True iff A, B are nonempty and every product multiplicity is >= 2.

    Such a pair witnesses the failure of the unique product property.
    For A = B in a torsion-free group a witness needs |A| >= 8; smaller
    symmetric witnesses indicate a data or arithmetic error.
    """
    A, B = list(A), list(B)
    if not A or not B:
        return False
    counts = product_multiplicities(A, B, mul)
    if not all(c >= 2 for c in counts.values()):
        return False
    if A == B and len(A) < 8:
        import warnings

        warnings.warn("symmetric UPP witness below the proven size bound of 8")
    return True
