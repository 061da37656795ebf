"""Breadth-first Cayley balls for groups with canonical forms."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Hashable, Protocol, Sequence

from .words import GeneratorAlphabet, GroupWord


class CanonicalGroup(Protocol):
    """A group supplying canonical elements for words over its alphabet."""

    alphabet: GeneratorAlphabet

    def identity(self): ...

    def eval_word(self, word: GroupWord): ...

    def mul(self, x, y): ...

    def inv(self, x): ...


def _letter_rank(letter: tuple[int, int]) -> int:
    # token order: gen0, gen0^-1, gen1, gen1^-1, ...
    gen, sign = letter
    return 2 * gen + (0 if sign > 0 else 1)


def word_sort_key(word: GroupWord) -> tuple:
    flat = word.single_letters()
    return (len(flat), tuple(_letter_rank(l) for l in flat))


@dataclass
class CayleyBall:
    """All elements of geodesic length <= radius, in deterministic order.

    Elements are sorted by (radius, length-lex geodesic word); index 0 is
    the identity.  The ball is closed under inverse since the generating
    set is symmetric.
    """

    group: CanonicalGroup
    radius: int
    elements: list
    words: list[GroupWord]
    radii: list[int]
    index: dict[Hashable, int] = field(repr=False)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, elem) -> bool:
        return elem in self.index

    def word_of(self, elem) -> GroupWord:
        return self.words[self.index[elem]]

    def radius_of(self, elem) -> int:
        return self.radii[self.index[elem]]

    def sphere_sizes(self) -> list[int]:
        sizes = [0] * (self.radius + 1)
        for r in self.radii:
            sizes[r] += 1
        return sizes

    def ball_sizes(self) -> list[int]:
        sizes, total = [], 0
        for s in self.sphere_sizes():
            total += s
            sizes.append(total)
        return sizes


def cayley_ball(
    group: CanonicalGroup,
    radius: int,
    generators: Sequence[int] | None = None,
) -> CayleyBall:
    """BFS closure of the identity under a symmetric generating set.

    ``generators`` selects alphabet indices (default: all); each chosen
    generator is used together with its inverse.  Geodesic words are the
    length-lex least among BFS discoveries, making the ball ordering and
    index map fully deterministic.
    """
    if radius < 0:
        raise ValueError("radius must be >= 0")
    alphabet = group.alphabet
    if generators is None:
        generators = range(len(alphabet))
    steps = []
    for gen in generators:
        for sign in (1, -1):
            letter = (gen, sign)
            steps.append((letter, group.eval_word(GroupWord(alphabet, (letter,)))))

    identity = group.identity()
    words = {identity: GroupWord(alphabet)}
    radii = {identity: 0}
    frontier = [identity]
    for level in range(1, radius + 1):
        candidates: dict = {}
        for elem in frontier:
            base = words[elem]
            for letter, step_elem in steps:
                nxt = group.mul(elem, step_elem)
                if nxt in radii:
                    continue
                word = GroupWord(alphabet, base.letters + (letter,))
                prev = candidates.get(nxt)
                if prev is None or word_sort_key(word) < word_sort_key(prev):
                    candidates[nxt] = word
        frontier = list(candidates)
        for elem, word in candidates.items():
            words[elem] = word
            radii[elem] = level

    ordered = sorted(words, key=lambda e: (radii[e], word_sort_key(words[e])))
    return CayleyBall(
        group=group,
        radius=radius,
        elements=ordered,
        words=[words[e] for e in ordered],
        radii=[radii[e] for e in ordered],
        index={e: i for i, e in enumerate(ordered)},
    )
