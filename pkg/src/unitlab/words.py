"""Generator alphabets, free words, parsing and printing.

Words are stored freely reduced: no zero exponents, no two adjacent
letters on the same generator.  The ASCII grammar is

    word := term (('*'|' ') term)* | ''
    term := NAME ('^' INT)?

where NAME is a symbol of the alphabet and INT a signed decimal.  The
identity prints (and parses) as ``1``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

_FORBIDDEN = set(" \t\n^*-")


class WordError(ValueError):
    """Raised on malformed word text or alphabet mismatch."""


@dataclass(frozen=True)
class GeneratorAlphabet:
    names: tuple[str, ...]

    def __init__(self, names: Iterable[str]):
        names = tuple(names)
        if not names:
            raise WordError("alphabet must be non-empty")
        if len(set(names)) != len(names):
            raise WordError("generator names must be distinct")
        for name in names:
            if not name or any(ch in _FORBIDDEN for ch in name):
                raise WordError(f"bad generator name {name!r}")
        object.__setattr__(self, "names", names)

    def __len__(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise WordError(f"unknown generator {name!r}") from None


def free_reduce(letters: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """Cancel adjacent letters on the same generator; drop zero exponents."""
    out: list[list[int]] = []
    for gen, exp in letters:
        if exp == 0:
            continue
        if out and out[-1][0] == gen:
            out[-1][1] += exp
            if out[-1][1] == 0:
                out.pop()
        else:
            out.append([gen, exp])
    return tuple((g, e) for g, e in out)


@dataclass(frozen=True)
class GroupWord:
    """A freely reduced word over a generator alphabet."""

    alphabet: GeneratorAlphabet
    letters: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", free_reduce(self.letters))
        for gen, _ in self.letters:
            if not 0 <= gen < len(self.alphabet):
                raise WordError(f"generator index {gen} out of range")

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __len__(self) -> int:
        return sum(abs(e) for _, e in self.letters)

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if other.alphabet != self.alphabet:
            raise WordError("alphabet mismatch")
        return GroupWord(self.alphabet, self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(
            self.alphabet, tuple((g, -e) for g, e in reversed(self.letters))
        )

    def __pow__(self, n: int) -> "GroupWord":
        base = self if n >= 0 else self.inverse()
        result = GroupWord(self.alphabet)
        for _ in range(abs(n)):
            result = result * base
        return result

    def substitute(self, images: Sequence["GroupWord"]) -> "GroupWord":
        """Replace generator i by images[i]; the homomorphic extension."""
        if len(images) != len(self.alphabet):
            raise WordError("one image per generator required")
        out = GroupWord(images[0].alphabet) if images else GroupWord(self.alphabet)
        for gen, exp in self.letters:
            out = out * images[gen] ** exp
        return out

    def single_letters(self) -> tuple[tuple[int, int], ...]:
        """Expand to letters with exponent +-1 (e.g. (a,2) -> (a,1),(a,1))."""
        flat = []
        for gen, exp in self.letters:
            step = 1 if exp > 0 else -1
            flat.extend((gen, step) for _ in range(abs(exp)))
        return tuple(flat)

    def __str__(self) -> str:
        return format_word(self)


_TERM_RE = re.compile(r"^(?P<name>[^\^]+?)(?:\^(?P<exp>[+-]?\d+))?$")


def parse_word(text: str, alphabet: GeneratorAlphabet) -> GroupWord:
    """Parse the ASCII word grammar; result is freely reduced."""
    text = text.strip()
    if text in ("", "1"):
        return GroupWord(alphabet)
    letters = []
    for term in re.split(r"[ *]+", text):
        m = _TERM_RE.match(term)
        if m is None:
            raise WordError(f"malformed term {term!r}")
        gen = alphabet.index(m.group("name"))
        exp = 1 if m.group("exp") is None else int(m.group("exp"))
        letters.append((gen, exp))
    return GroupWord(alphabet, tuple(letters))


def format_word(word: GroupWord) -> str:
    if word.is_identity:
        return "1"
    parts = []
    for gen, exp in word.letters:
        name = word.alphabet.names[gen]
        parts.append(name if exp == 1 else f"{name}^{exp}")
    return "*".join(parts)
