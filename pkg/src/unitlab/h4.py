"""Exact arithmetic in H4 = F(3,4) via its polycyclic presentation.

H4 = pc< r,a,b,z | r^2 = z, a^r = a^-1, b^r = b^-1, b^a = b z^2 >, with
z central.  Normal forms are r^w a^s b^t z^u with w in {0,1}.  The
index-2 subgroup S = <a,b,z> has the closed multiplication law

    (a^u b^v z^w)(a^u' b^v' z^w') = a^(u+u') b^(v+v') z^(w+w'+2vu')

and conjugation by r negates the a- and b-exponents.
"""

from __future__ import annotations

from dataclasses import dataclass

from .words import GeneratorAlphabet, GroupWord, WordError, parse_word

H4_ALPHABET = GeneratorAlphabet(("r", "a", "b", "z"))
X_ALPHABET = GeneratorAlphabet(("x1", "x2", "x3", "x4"))


@dataclass(frozen=True, order=True)
class SElement:
    """a^u b^v z^w in S = pc<a,b,z | b^a = b z^2>."""

    u: int = 0
    v: int = 0
    w: int = 0

    def __mul__(self, other: "SElement") -> "SElement":
        return SElement(
            self.u + other.u,
            self.v + other.v,
            self.w + other.w + 2 * self.v * other.u,
        )

    def inverse(self) -> "SElement":
        return SElement(-self.u, -self.v, -self.w + 2 * self.u * self.v)

    def conj_r(self) -> "SElement":
        return SElement(-self.u, -self.v, self.w)

    @property
    def is_identity(self) -> bool:
        return self.u == 0 and self.v == 0 and self.w == 0


S_IDENTITY = SElement()


def s_mul(x: SElement, y: SElement) -> SElement:
    return x * y


def s_conj_r(x: SElement) -> SElement:
    return x.conj_r()


@dataclass(frozen=True, order=True)
class H4Element:
    """Normal form r^w a^s b^t z^u; w is the r-exponent bit."""

    w: int = 0
    s: int = 0
    t: int = 0
    u: int = 0

    @property
    def spart(self) -> SElement:
        return SElement(self.s, self.t, self.u)

    @property
    def is_identity(self) -> bool:
        return self == H4_IDENTITY

    def __mul__(self, other: "H4Element") -> "H4Element":
        # r^w A r^w' A' = r^(w+w') A^(r^w') A'; fold r^2 = z into z.
        a = self.spart.conj_r() if other.w else self.spart
        s = a * other.spart
        carry = (self.w + other.w) // 2
        return H4Element((self.w + other.w) % 2, s.u, s.v, s.w + carry)

    def inverse(self) -> "H4Element":
        ainv = self.spart.inverse()
        if not self.w:
            return H4Element(0, ainv.u, ainv.v, ainv.w)
        # (r A)^-1 = A^-1 r^-1 = r (A^-1)^r z^-1
        c = ainv.conj_r()
        return H4Element(1, c.u, c.v, c.w - 1)


H4_IDENTITY = H4Element()
H4_R = H4Element(1, 0, 0, 0)
H4_A = H4Element(0, 1, 0, 0)
H4_B = H4Element(0, 0, 1, 0)
H4_Z = H4Element(0, 0, 0, 1)
_H4_GENS = (H4_R, H4_A, H4_B, H4_Z)


def h4_mul(x: H4Element, y: H4Element) -> H4Element:
    return x * y


def h4_inv(x: H4Element) -> H4Element:
    return x.inverse()


def h4_eval(word: GroupWord | str) -> H4Element:
    """Canonical image of a word over the pc alphabet {r,a,b,z}."""
    if isinstance(word, str):
        word = parse_word(word, H4_ALPHABET)
    if word.alphabet != H4_ALPHABET:
        raise WordError("h4_eval expects the {r,a,b,z} alphabet")
    out = H4_IDENTITY
    for gen, exp in word.letters:
        g = _H4_GENS[gen] if exp > 0 else _H4_GENS[gen].inverse()
        for _ in range(abs(exp)):
            out = out * g
    return out


# Images of the Fibonacci generators x1..x4 inside the pc group, from
# inverting r = x1, a = x1 x4^-1, b = x1 x2 x4^-2, z = x1 x2 x3 x4.
PSI_IMAGE_WORDS = {
    "x1": "r",
    "x2": "r^-1*b*a^-1*r*a^-1*r",
    "x3": "r^-1*a*r^-1*a*b^-1*z*r^-1*a",
    "x4": "a^-1*r",
}
_PSI_IMAGES = {name: h4_eval(w) for name, w in PSI_IMAGE_WORDS.items()}


def psi_eval(word: GroupWord | str) -> H4Element:
    """Canonical image of a word over {x1..x4} under the isomorphism."""
    if isinstance(word, str):
        word = parse_word(word, X_ALPHABET)
    if word.alphabet != X_ALPHABET:
        raise WordError("psi_eval expects the {x1..x4} alphabet")
    out = H4_IDENTITY
    for gen, exp in word.letters:
        img = _PSI_IMAGES[X_ALPHABET.names[gen]]
        g = img if exp > 0 else img.inverse()
        for _ in range(abs(exp)):
            out = out * g
    return out


# Words expressing the pc generators in terms of x1..x4 (the inverse map).
PHI_IMAGE_WORDS = {
    "r": "x1",
    "a": "x1*x4^-1",
    "b": "x1*x2*x4^-2",
    "z": "x1*x2*x3*x4",
}


class H4Group:
    """Canonical-form provider over the pc alphabet {r,a,b,z}."""

    alphabet = H4_ALPHABET

    def identity(self) -> H4Element:
        return H4_IDENTITY

    def eval_word(self, word: GroupWord) -> H4Element:
        return h4_eval(word)

    def mul(self, x: H4Element, y: H4Element) -> H4Element:
        return x * y

    def inv(self, x: H4Element) -> H4Element:
        return x.inverse()


class H4XGroup:
    """Canonical-form provider over the Fibonacci alphabet {x1..x4}."""

    alphabet = X_ALPHABET

    def identity(self) -> H4Element:
        return H4_IDENTITY

    def eval_word(self, word: GroupWord) -> H4Element:
        return psi_eval(word)

    def mul(self, x: H4Element, y: H4Element) -> H4Element:
        return x * y

    def inv(self, x: H4Element) -> H4Element:
        return x.inverse()


H4_GROUP = H4Group()
H4_X_GROUP = H4XGroup()


@dataclass(frozen=True)
class FibPresentation:
    """The Fibonacci presentation F(r, n): n cyclic relators of length r+1."""

    r: int
    n: int
    alphabet: GeneratorAlphabet
    relators: tuple[GroupWord, ...]


def fib_presentation(r: int, n: int) -> FibPresentation:
    if not 2 <= r < n:
        raise ValueError(f"need 2 <= r < n, got r={r}, n={n}")
    alphabet = GeneratorAlphabet(tuple(f"x{i}" for i in range(1, n + 1)))
    relators = []
    for i in range(n):
        letters = [((i + j) % n, 1) for j in range(r)]
        letters.append(((i + r) % n, -1))
        relators.append(GroupWord(alphabet, tuple(letters)))
    return FibPresentation(r=r, n=n, alphabet=alphabet, relators=tuple(relators))
