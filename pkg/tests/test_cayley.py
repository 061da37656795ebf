"""Ball enumeration: sizes, geodesic words, deterministic order."""

from unitlab.cayley import cayley_ball
from unitlab.h4 import H4_GROUP, H4_X_GROUP
from unitlab.pgroup import P_GROUP

# radius -> (sphere, ball) for P over {a,b}^+-1
P_GROWTH = [(1, 1), (4, 5), (12, 17), (24, 41), (42, 83), (64, 147), (92, 239)]


def test_p_ball_growth_table():
    ball = cayley_ball(P_GROUP, 6)
    assert ball.sphere_sizes() == [s for s, _ in P_GROWTH]
    assert ball.ball_sizes() == [b for _, b in P_GROWTH]


def test_ball_starts_at_identity():
    ball = cayley_ball(P_GROUP, 2)
    assert ball.elements[0] == P_GROUP.identity()
    assert str(ball.words[0]) == "1"
    assert ball.radii[0] == 0


def test_words_are_geodesic():
    ball = cayley_ball(P_GROUP, 4)
    for g, w, r in zip(ball.elements, ball.words, ball.radii):
        assert sum(abs(e) for _, e in w.letters) == r
        assert P_GROUP.eval_word(w) == g


def test_ball_closed_under_inverse():
    ball = cayley_ball(P_GROUP, 4)
    for g in ball.elements:
        assert P_GROUP.inv(g) in ball


def test_deterministic_order():
    a = cayley_ball(P_GROUP, 3)
    b = cayley_ball(P_GROUP, 3)
    assert [str(w) for w in a.words] == [str(w) for w in b.words]
    # radii are monotone in the stored order
    assert a.radii == sorted(a.radii)


def test_h4_balls_enumerable_on_both_alphabets():
    pc = cayley_ball(H4_GROUP, 2)
    fib = cayley_ball(H4_X_GROUP, 2)
    assert pc.elements[0] == fib.elements[0]
    assert len(pc) > 1 and len(fib) > 1
    for g, w in zip(fib.elements, fib.words):
        assert H4_X_GROUP.eval_word(w) == g


def test_index_lookup():
    ball = cayley_ball(P_GROUP, 3)
    for i, g in enumerate(ball.elements):
        assert ball.index[g] == i
        assert ball.word_of(g) is ball.words[i]
        assert ball.radius_of(g) == ball.radii[i]
