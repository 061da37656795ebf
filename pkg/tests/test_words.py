"""Word parsing, free reduction and homomorphic substitution."""

import random

import pytest

from unitlab.words import (GeneratorAlphabet, GroupWord, WordError, format_word,
                           parse_word)

AB = GeneratorAlphabet(("a", "b"))


def test_parse_and_format_round_trip():
    for text in ["a", "a*b", "a^2*b^-1", "b^-3", "1", "a*b*a^-1*b^-1"]:
        w = parse_word(text, AB)
        assert parse_word(format_word(w), AB) == w


def test_identity_forms():
    assert parse_word("1", AB).letters == ()
    assert parse_word("a*a^-1", AB).letters == ()
    assert parse_word("a^0", AB).letters == ()


def test_free_reduction_merges_adjacent_powers():
    w = parse_word("a*a*b*b^-1*a", AB)
    assert w == parse_word("a^2*a", AB)
    assert w.letters == ((0, 3),)


def test_space_separator_accepted():
    assert parse_word("a b^-1", AB) == parse_word("a*b^-1", AB)


def test_malformed_terms_rejected():
    for bad in ["c", "a^", "a^^2", "a^x"]:
        with pytest.raises(WordError):
            parse_word(bad, AB)


def test_inverse_and_pow():
    w = parse_word("a*b^2*a^-1", AB)
    assert (w * w.inverse()).letters == ()
    assert w ** 3 == w * w * w
    assert w ** -2 == (w.inverse()) ** 2
    assert w ** 0 == GroupWord(AB)


def test_substitute_is_homomorphic():
    rng = random.Random(5)
    images = [parse_word("b*a", AB), parse_word("a^-1", AB)]
    for _ in range(100):
        letters = [(rng.randrange(2), rng.choice([-2, -1, 1, 2]))
                   for _ in range(rng.randrange(6))]
        u = GroupWord(AB, tuple(letters))
        v = GroupWord(AB, tuple(reversed(letters)))
        assert (u * v).substitute(images) == u.substitute(images) * v.substitute(images)


def test_substitute_arity_checked():
    with pytest.raises(WordError):
        parse_word("a", AB).substitute([parse_word("a", AB)])


def test_single_letters_expansion():
    w = parse_word("a^2*b^-2", AB)
    assert w.single_letters() == ((0, 1), (0, 1), (1, -1), (1, -1))
