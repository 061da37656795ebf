"""Automorphisms of the group P and orbit analysis of unit lists.

The three basic automorphisms fix the generating set {a, b, a^-1, b^-1}:
pi swaps a and b, alpha inverts a, beta inverts b.  Together they
generate an order-8 group S = <alpha, beta> x| <pi>; the subgroup
T = <pi, alpha o beta> has order 4.  Automorphisms are stored as
generator-image maps and act on group elements through geodesic words,
so no coordinate formula is needed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cayley import cayley_ball
from .groupring import RingElt, apply_automorphism, is_swap_unit
from .pgroup import P_GROUP, PElement, geodesic_word_of
from .words import GroupWord, parse_word

# radius used when deciding equality of automorphisms on ball elements
EQUALITY_RADIUS = 6


@dataclass(frozen=True)
class Automorphism:
    """An automorphism of P given by images of the generators a and b."""

    name: str
    images: dict[str, str]

    def image_words(self) -> list[GroupWord]:
        # ordered by generator index: [image of a, image of b]
        return [parse_word(self.images[g], P_GROUP.alphabet) for g in ("a", "b")]

    def apply_element(self, g: PElement) -> PElement:
        word = geodesic_word_of(g)
        return P_GROUP.eval_word(word.substitute(self.image_words()))

    def apply_ring(self, x: RingElt) -> RingElt:
        return apply_automorphism(self.images, x)

    def compose(self, other: "Automorphism", name: str | None = None) -> "Automorphism":
        # (self o other)(g) = self(other(g)): substitute self's images
        # into other's image words
        mine = self.image_words()
        images = {
            gen: str(word.substitute(mine))
            for gen, word in zip(("a", "b"), other.image_words())
        }
        return Automorphism(name or f"{self.name}*{other.name}", images)


PI = Automorphism("pi", {"a": "b", "b": "a"})
ALPHA = Automorphism("alpha", {"a": "a^-1", "b": "b"})
BETA = Automorphism("beta", {"a": "a", "b": "b^-1"})
IDENTITY_AUTO = Automorphism("id", {"a": "a", "b": "b"})


def autos_equal(f: Automorphism, g: Automorphism, radius: int = EQUALITY_RADIUS) -> bool:
    """Decide f = g by agreement on the radius-r ball.

    Since a and b generate P, agreement on any ball containing the
    generators already pins the automorphism down; the larger default
    radius doubles as a sanity check.
    """
    ball = cayley_ball(P_GROUP, radius)
    return all(f.apply_element(h) == g.apply_element(h) for h in ball.elements)


@dataclass(frozen=True)
class AutoGroup:
    """A finite group of automorphisms of P, closed under composition."""

    name: str
    elements: tuple[Automorphism, ...]

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


def _generator_fingerprint(f: Automorphism) -> tuple:
    return tuple(P_GROUP.eval_word(w) for w in f.image_words())


def close_under_composition(name: str, generators: list[Automorphism],
                            max_size: int = 64) -> AutoGroup:
    """Generate the group closure of the given automorphisms."""
    seen = {_generator_fingerprint(IDENTITY_AUTO): IDENTITY_AUTO}
    frontier = [IDENTITY_AUTO]
    while frontier:
        f = frontier.pop()
        for g in generators:
            h = g.compose(f)
            key = _generator_fingerprint(h)
            if key not in seen:
                if len(seen) >= max_size:
                    raise RuntimeError("automorphism closure exceeded bound")
                seen[key] = h
                frontier.append(h)
    elements = sorted(seen.values(), key=lambda f: (len(f.name), f.name))
    return AutoGroup(name, tuple(elements))


def auto_group_s() -> AutoGroup:
    return close_under_composition("S", [ALPHA, BETA, PI])


def auto_group_t() -> AutoGroup:
    return close_under_composition("T", [PI, ALPHA.compose(BETA, "alpha*beta")])


class ClosureViolation(Exception):
    """An automorphism image left the input unit list."""


def orbits_partition(units: list[RingElt], group: AutoGroup) -> list[list[int]]:
    """Partition a unit list into orbits under an automorphism group.

    Returns orbits as sorted lists of indices into the input list.  The
    action must map the list into itself; an image outside the list is
    a closure violation, not a silently dropped point.
    """
    if len(set(u.support for u in units)) != len(units):
        raise ValueError("unit list contains duplicates")
    index = {u.support: i for i, u in enumerate(units)}
    assigned = [None] * len(units)
    orbits: list[list[int]] = []
    for start, u in enumerate(units):
        if assigned[start] is not None:
            continue
        orbit = set()
        for f in group:
            image = f.apply_ring(u)
            j = index.get(image.support)
            if j is None:
                raise ClosureViolation(
                    f"{group.name}-image of unit #{start} under {f.name} "
                    "is not in the input list")
            orbit.add(j)
        orbit_id = len(orbits)
        for j in sorted(orbit):
            assigned[j] = orbit_id
        orbits.append(sorted(orbit))
    return orbits


def swap_compat_check(u: RingElt) -> dict:
    """For a swap unit u, report whether alpha(u) = beta(u).

    When the two images agree, both are again swap units; when they
    differ, neither alpha(u) nor beta(u) is a swap unit.
    """
    if not is_swap_unit(u):
        raise ValueError("input is not a swap unit")
    au = ALPHA.apply_ring(u)
    bu = BETA.apply_ring(u)
    equal = au.support == bu.support
    return {
        "alpha_equals_beta": equal,
        "alpha_image_is_swap_unit": is_swap_unit(au),
        "beta_image_is_swap_unit": is_swap_unit(bu),
    }


def count_squares_in_support(u: RingElt, radius: int = 6) -> int:
    """Count support elements of u that are squares in P.

    A support element g counts when g = h^2 for some h in the radius-r
    ball.  Reading note: "contains n squares" is interpreted as exactly
    this support count; squares of elements outside the scanned ball
    are not seen, so the radius should comfortably exceed half the
    geodesic length of the support.
    """
    ball = cayley_ball(P_GROUP, radius)
    squares = {P_GROUP.mul(h, h) for h in ball.elements}
    return sum(1 for g in u.support if g in squares)
