"""GF(2) group ring arithmetic, unit verification, and the H4 split form."""

import random

import pytest

from unitlab.datasets import (DATASET_INDEX, load_swap_unit, load_unit_pair,
                              radius4_units)
from unitlab.groupring import (RingElt, RingError, apply_automorphism,
                               h4_recompose, h4_split, h4_split_mul,
                               is_swap_unit, product_multiplicities, ring_add,
                               ring_from_words, ring_mul, ring_one,
                               upp_witness_check, verify_unit_pair)
from unitlab.h4 import H4_GROUP, H4Element, h4_mul
from unitlab.pgroup import P_GROUP


def test_ring_axioms_small():
    one = ring_one(P_GROUP)
    x = ring_from_words(P_GROUP, ["a", "b", "a*b"])
    y = ring_from_words(P_GROUP, ["1", "b^-1"])
    assert ring_add(x, x).support == frozenset()
    assert ring_mul(x, one) == x
    assert ring_mul(one, y) == y
    # distributivity on a spot check
    z = ring_from_words(P_GROUP, ["a^-1", "b"])
    assert ring_mul(x, ring_add(y, z)) == ring_add(ring_mul(x, y), ring_mul(x, z))


def test_verify_unit_pair_classification():
    u, v = load_unit_pair(DATASET_INDEX["pair01"])
    assert verify_unit_pair(u, v, two_sided=True) == "nontrivial-unit"
    one = ring_one(P_GROUP)
    assert verify_unit_pair(one, one) == "trivial-unit"
    g = ring_from_words(P_GROUP, ["a"])
    ginv = ring_from_words(P_GROUP, ["a^-1"])
    assert verify_unit_pair(g, ginv, two_sided=True) == "trivial-unit"
    assert verify_unit_pair(u, one) == "not-inverse"


def test_one_sided_inverses_are_two_sided_here():
    # every bundled pair passes both orders
    for name in ("pair01", "pair07", "pair18", "example31"):
        u, v = load_unit_pair(DATASET_INDEX[name])
        assert ring_mul(u, v).is_one
        assert ring_mul(v, u).is_one


def test_is_swap_unit_positive_and_negative():
    w1 = load_swap_unit(DATASET_INDEX["W1"])
    assert is_swap_unit(w1)
    units = dict(radius4_units())
    # U1 happens to be a swap unit, U3 is not
    assert is_swap_unit(units["U1"])
    assert not is_swap_unit(units["U3"])
    assert not is_swap_unit(ring_one(P_GROUP))


def test_apply_automorphism_is_additive_hom():
    rng = random.Random(3)
    words = ["1", "a", "b", "a^-1", "b^-1", "a*b", "b*a", "a^2", "b^-2",
             "a*b^-1", "a^-1*b"]
    images = {"a": "a^-1", "b": "b"}
    for _ in range(200):
        x = ring_from_words(P_GROUP, rng.sample(words, rng.randint(0, 5)))
        y = ring_from_words(P_GROUP, rng.sample(words, rng.randint(0, 5)))
        fx, fy = (apply_automorphism(images, t) for t in (x, y))
        assert apply_automorphism(images, ring_add(x, y)) == ring_add(fx, fy)
        assert apply_automorphism(images, ring_mul(x, y)) == ring_mul(fx, fy)


def test_apply_automorphism_rejects_wrong_ring():
    u = RingElt(H4_GROUP, frozenset({H4Element()}))
    with pytest.raises(RingError):
        apply_automorphism({"a": "b", "b": "a"}, u)


def rand_h4_elt(rng):
    support = frozenset(
        H4Element(rng.randint(0, 1), rng.randint(-2, 2), rng.randint(-2, 2),
                  rng.randint(-2, 2))
        for _ in range(rng.randint(0, 6))
    )
    return RingElt(H4_GROUP, support)


def test_h4_split_mul_matches_ring_mul():
    rng = random.Random(5)
    for _ in range(2000):
        x, y = rand_h4_elt(rng), rand_h4_elt(rng)
        via_split = h4_recompose(h4_split_mul(h4_split(x), h4_split(y)))
        assert via_split == ring_mul(x, y)


def test_h4_split_roundtrip():
    rng = random.Random(7)
    for _ in range(500):
        x = rand_h4_elt(rng)
        assert h4_recompose(h4_split(x)) == x


def test_product_multiplicities_and_upp_check():
    # in the integers every translate is unique, so no witness exists
    A = [0, 1, 3]
    B = [0, 5]
    counts = product_multiplicities(A, B, mul=lambda a, b: a + b)
    assert counts[0] == 1 and counts[8] == 1
    assert not upp_witness_check(A, B, mul=lambda a, b: a + b)
    # a two-element group gives the classic multiplicity-2 failure
    mul2 = lambda a, b: (a + b) % 2
    assert upp_witness_check([0, 1], [0, 1], mul=mul2)
    assert not upp_witness_check([], [0], mul=mul2)


def test_upp_witness_check_h4_kind():
    e = H4Element()
    a = H4Element(0, 1, 0, 0)
    assert not upp_witness_check([e], [e, a], mul=h4_mul)
