"""Exact arithmetic in the crystallographic group P.

P = <a,b | b^-1 a^2 b = a^-2, a^-1 b^2 a = b^-2> embeds into a direct
cube of infinite dihedral groups D = <u,t | u^2, t^u = t^-1> via

    a -> (t, u, u)        b -> (u, t, t*u)

(the generators D.2*D.3*D.5 and D.1*D.4*D.6*D.5 of the pc supergroup).
Elements of D are pairs (flip, shift) standing for u^flip * t^shift,
giving O(1) canonical multiplication for P.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import GeneratorAlphabet, GroupWord, WordError, parse_word

P_ALPHABET = GeneratorAlphabet(("a", "b"))


@dataclass(frozen=True, order=True)
class DihedralElement:
    flip: int
    shift: int

    def __mul__(self, other: "DihedralElement") -> "DihedralElement":
        sign = -1 if other.flip else 1
        return DihedralElement((self.flip + other.flip) % 2, self.shift * sign + other.shift)

    def inverse(self) -> "DihedralElement":
        return DihedralElement(self.flip, self.shift if self.flip else -self.shift)


_D_ID = DihedralElement(0, 0)
_U = DihedralElement(1, 0)
_T = DihedralElement(0, 1)


@dataclass(frozen=True, order=True)
class PElement:
    d1: DihedralElement = _D_ID
    d2: DihedralElement = _D_ID
    d3: DihedralElement = _D_ID

    @property
    def is_identity(self) -> bool:
        return self == P_IDENTITY

    def __mul__(self, other: "PElement") -> "PElement":
        return PElement(self.d1 * other.d1, self.d2 * other.d2, self.d3 * other.d3)

    def inverse(self) -> "PElement":
        return PElement(self.d1.inverse(), self.d2.inverse(), self.d3.inverse())


P_IDENTITY = PElement()
P_GEN_A = PElement(_T, _U, _U)
P_GEN_B = PElement(_U, _T, _T * _U)


def p_mul(x: PElement, y: PElement) -> PElement:
    return x * y


def p_inv(x: PElement) -> PElement:
    return x.inverse()


def p_eval(word: GroupWord | str) -> PElement:
    """Canonical image of a word over {a, b}."""
    if isinstance(word, str):
        word = parse_word(word, P_ALPHABET)
    if word.alphabet != P_ALPHABET:
        raise WordError("p_eval expects the {a,b} alphabet")
    gens = (P_GEN_A, P_GEN_B)
    out = P_IDENTITY
    for gen, exp in word.letters:
        g = gens[gen] if exp > 0 else gens[gen].inverse()
        for _ in range(abs(exp)):
            out = out * g
    return out


class PGroup:
    """Canonical-form provider for Cayley-ball generation over {a, b}."""

    alphabet = P_ALPHABET

    def identity(self) -> PElement:
        return P_IDENTITY

    def eval_word(self, word: GroupWord) -> PElement:
        return p_eval(word)

    def mul(self, x: PElement, y: PElement) -> PElement:
        return x * y

    def inv(self, x: PElement) -> PElement:
        return x.inverse()


P_GROUP = PGroup()

# Translation subgroup: x = a^2, y = b^2, z = abab, free abelian of rank 3
# and index 4; coset representatives fixed as 1, a, b, ab.
P_X = p_eval("a^2")
P_Y = p_eval("b^2")
P_Z = p_eval("a*b*a*b")
_COSET_WORDS = ("1", "a", "b", "a*b")
_COSET_REPS = tuple(p_eval(w) for w in _COSET_WORDS)
_COSET_BY_FLIPS = {
    (c.d1.flip, c.d2.flip, c.d3.flip): (w, c) for w, c in zip(_COSET_WORDS, _COSET_REPS)
}


def p_translation_decompose(x: PElement) -> tuple[tuple[int, int, int], str]:
    """Write x = X^tx * Y^ty * Z^tz * c with c in {1, a, b, ab}.

    Returns ((tx, ty, tz), coset word).  The coset is determined by the
    dihedral flip pattern; the remaining part is a pure translation.
    """
    key = (x.d1.flip, x.d2.flip, x.d3.flip)
    if key not in _COSET_BY_FLIPS:
        raise ValueError(f"flip pattern {key} not in the image of P")
    coset_word, coset = _COSET_BY_FLIPS[key]
    t = x * coset.inverse()
    s1, s2, s3 = t.d1.shift, t.d2.shift, t.d3.shift
    if t.d1.flip or t.d2.flip or t.d3.flip or s1 % 2 or s2 % 2 or s3 % 2:
        raise ValueError("residual part is not a translation")
    # X = t1^2, Y = t2^2, Z = t3^-2 in the embedded coordinates
    return (s1 // 2, s2 // 2, -s3 // 2), coset_word


def p_translation_recompose(t: tuple[int, int, int], coset_word: str) -> PElement:
    tx, ty, tz = t
    out = P_IDENTITY
    for base, exp in ((P_X, tx), (P_Y, ty), (P_Z, tz)):
        g = base if exp >= 0 else base.inverse()
        for _ in range(abs(exp)):
            out = out * g
    return out * p_eval(_to_word(coset_word))


def _to_word(text: str) -> GroupWord:
    return parse_word(text, P_ALPHABET)


# --- rewrite-rule oracle --------------------------------------------------
#
# The presentation's complete rewrite system (length-preserving "<->"
# rules) is used as an independent cross-check of the dihedral-cube
# arithmetic: equality is certified by an explicit rewrite path,
# distinctness by comparing canonical images.


def _rule_neighbours(flat: tuple[tuple[int, int], ...]):
    """All single-rule applications to a word in +-1 letters."""
    n = len(flat)
    for i in range(n - 2):
        (g0, s0), (g1, s1), (g2, s2) = flat[i], flat[i + 1], flat[i + 2]
        # a^e b^d <-> b^d a^-e and the (a <-> b) mirror, e = +-2
        if g0 == g1 and s0 == s1 and g2 != g0:
            yield flat[:i] + ((g2, s2), (g0, -s0), (g1, -s1)) + flat[i + 3:]
        if g1 == g2 and s1 == s2 and g0 != g1:
            yield flat[:i] + ((g1, -s1), (g2, -s2), (g0, s0)) + flat[i + 3:]
        # a^d b^c a^d <-> a^-d b^c a^-d and the mirror
        if g0 == g2 and s0 == s2 and g1 != g0:
            yield flat[:i] + ((g0, -s0), (g1, s1), (g2, -s2)) + flat[i + 3:]


def p_rewrite_oracle(w1: GroupWord | str, w2: GroupWord | str, budget: int = 10000) -> str:
    """Decide equality in P by rewrite search: 'equal' | 'distinct' | 'unknown'.

    'distinct' is certified by differing canonical images; 'equal' by an
    explicit path of rewrite-rule applications from w1 to w2.  Rules
    preserve length, so the search space is the finite set of
    freely reduced words of len(w1) letters.
    """
    if isinstance(w1, str):
        w1 = parse_word(w1, P_ALPHABET)
    if isinstance(w2, str):
        w2 = parse_word(w2, P_ALPHABET)
    if p_eval(w1) != p_eval(w2):
        return "distinct"

    def reduced(flat):
        return GroupWord(P_ALPHABET, flat).single_letters()

    start = w1.single_letters()
    goal = w2.single_letters()
    if start == goal:
        return "equal"
    seen = {start}
    frontier = [start]
    spent = 0
    while frontier and spent < budget:
        nxt = []
        for flat in frontier:
            for neigh in map(reduced, _rule_neighbours(flat)):
                if neigh in seen:
                    continue
                spent += 1
                if neigh == goal:
                    return "equal"
                seen.add(neigh)
                nxt.append(neigh)
                if spent >= budget:
                    break
            if spent >= budget:
                break
        frontier = nxt
    return "unknown"


# --- automorphism support -------------------------------------------------

_WORD_CACHE: dict[PElement, GroupWord] = {}
_WORD_CACHE_RADIUS = 0


def geodesic_word_of(elem: PElement, max_radius: int = 12) -> GroupWord:
    """A geodesic word for a ball element, growing a cached ball on demand."""
    global _WORD_CACHE_RADIUS
    from .cayley import cayley_ball

    while elem not in _WORD_CACHE:
        if _WORD_CACHE_RADIUS >= max_radius:
            raise ValueError("element outside the cached ball radius")
        _WORD_CACHE_RADIUS += 1
        ball = cayley_ball(P_GROUP, _WORD_CACHE_RADIUS)
        _WORD_CACHE.update(zip(ball.elements, ball.words))
    return _WORD_CACHE[elem]
