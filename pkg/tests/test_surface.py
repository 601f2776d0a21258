import random
from fractions import Fraction

import pytest

from qpsurf.algebra import conjugacy_class
from qpsurf.surface import (
    BasedGenericLoop,
    GenericLoop,
    LoopError,
    QuasiSurface,
    Turn,
    based_word,
    chords_cross,
    class_to_loop,
    close_loop,
    disk_intersections,
    is_admissible,
    loop_to_class,
    make_admissible_pair,
    push_move,
    random_based_loop,
    random_loop,
    rotate_turns,
    validate_loop,
    word_to_based,
)

X = QuasiSurface(3, 2)
A = X.alphabet


def C(text):
    return conjugacy_class(A.parse_word(text))


def turns_of(a):
    return [(t.in_gate, t.out_gate, A.format_word(t.y_word)) for t in a.turns]


def loop(*triples):
    """Turns ``(in, out, y-text)`` with distinct positions."""
    n = 2 * len(triples) + 1
    return GenericLoop(tuple(Turn.make(a, b, A.parse_word(w), Fraction(2 * i + 1, n), Fraction(2 * i + 2, n))
                             for i, (a, b, w) in enumerate(triples)))


def test_loop_to_class_examples():
    assert loop_to_class(X, GenericLoop.singular(A.parse_word("y1 y2 y1^-1"))) == C("y2")
    assert loop_to_class(X, loop((1, 2, ""))) == C("g2")
    assert loop_to_class(X, loop((2, 2, "y1"))) == C("y1")


def test_class_to_loop_examples():
    assert class_to_loop(X, C("y1")) == GenericLoop.singular(A.parse_word("y1"))
    assert turns_of(class_to_loop(X, C("g2"))) == [(1, 2, "1")]
    # the turn order is fixed only up to rotation
    got = turns_of(class_to_loop(X, C("g2 y1 g3^-1")))
    expected = [(1, 2, "y1"), (3, 1, "1")]
    assert any(got[r:] + got[:r] == expected for r in range(len(got)))


def test_class_round_trip_on_random_loops():
    for seed in range(200):
        a = random_loop(X, seed=seed)
        c = loop_to_class(X, a)
        b = class_to_loop(X, c)
        validate_loop(X, b)
        assert loop_to_class(X, b) == c


def test_bad_loops_rejected():
    with pytest.raises(LoopError):
        Turn.make(1, 2, in_pos=Fraction(3, 2))
    with pytest.raises(ValueError):
        validate_loop(X, GenericLoop((Turn.make(1, 4),)))
    with pytest.raises(LoopError):
        GenericLoop((Turn.make(1, 1, in_pos=Fraction(1, 2), out_pos=Fraction(1, 2)),))


# -- admissibility ----------------------------------------------------------


def test_admissible_pair_examples():
    s, t = GenericLoop.singular(A.parse_word("y1")), GenericLoop.singular(())
    assert make_admissible_pair(X, s, t) == (s, t)

    a = GenericLoop((Turn.make(1, 2, (), Fraction(1, 2), Fraction(1, 2)),))
    b = GenericLoop((Turn.make(1, 2, (), Fraction(1, 4), Fraction(1, 4)),))
    assert not is_admissible(a, b)
    a2, b2 = make_admissible_pair(X, a, b)
    assert is_admissible(a2, b2)
    assert a2.turns[0].entry.pos < b2.turns[0].entry.pos

    c, d = make_admissible_pair(X, a, a)
    assert is_admissible(c, d)
    assert loop_to_class(X, c) == loop_to_class(X, d) == loop_to_class(X, a)


# -- chords -----------------------------------------------------------------


def test_one_crossing_of_parallel_chords():
    a = GenericLoop((Turn.make(1, 2, (), Fraction(1, 3), Fraction(1, 3)),))
    b = GenericLoop((Turn.make(1, 2, (), Fraction(2, 3), Fraction(2, 3)),))
    assert disk_intersections(X, a, b) == [(0, 0, 1)]
    assert disk_intersections(X, b, a) == [(0, 0, -1)]


def test_nested_chords_do_not_cross():
    assert chords_cross((1, 0), (1, 1), (2, 0), (2, 1)) == 0
    assert chords_cross((1, 0), (2, 1), (2, 0), (3, 0)) == 1


def test_swapping_negates_signs():
    rng = random.Random(4)
    for _ in range(50):
        a, b = make_admissible_pair(X, random_loop(X, seed=rng), random_loop(X, seed=rng))
        ab = {(i, j): s for i, j, s in disk_intersections(X, a, b)}
        ba = {(j, i): s for i, j, s in disk_intersections(X, b, a)}
        assert ab == {k: -s for k, s in ba.items()}


def test_shared_endpoint_is_an_error():
    with pytest.raises(LoopError):
        chords_cross((1, 0), (2, 0), (1, 0), (3, 0))


# -- moves ------------------------------------------------------------------


def crossing_count(a, k):
    return sum(1 for c in a.crossings() if c.gate == k)


def test_push_in_then_out_is_identity():
    rng = random.Random(11)
    for _ in range(100):
        a = random_loop(X, seed=rng, min_turns=1)
        i = rng.randrange(len(a.turns))
        split = rng.randint(0, len(a.turns[i].y_word))
        k = rng.randint(1, X.gates)
        b = push_move(X, a, i, split, k, "in")
        assert loop_to_class(X, b) == loop_to_class(X, a)
        assert crossing_count(b, k) == crossing_count(a, k) + 2
        assert sorted(c.sign for c in b.crossings() if c.gate == k).count(1) \
            == sorted(c.sign for c in a.crossings() if c.gate == k).count(1) + 1
        assert push_move(X, b, i, 0, k, "out") == a


def test_push_into_singular_loop():
    s = GenericLoop.singular(A.parse_word("y1 y2"))
    b = push_move(X, s, 0, 1, 2, "in")
    assert turns_of(b) == [(2, 2, "y2 y1")]
    assert loop_to_class(X, b) == loop_to_class(X, s)
    assert push_move(X, b, 0, 0, 2, "out") == GenericLoop.singular(A.parse_word("y2 y1"))


def test_push_out_requires_a_gate_turn():
    a = loop((1, 2, ""))
    with pytest.raises(LoopError):
        push_move(X, a, 0, 0, 1, "out")


def test_rotation_keeps_class():
    for seed in range(50):
        a = random_loop(X, seed=seed, min_turns=1)
        for r in range(len(a.turns)):
            assert loop_to_class(X, rotate_turns(a, r)) == loop_to_class(X, a)


# -- random loops -----------------------------------------------------------


def test_random_loop_is_valid_and_deterministic():
    for seed in range(100):
        a = random_loop(X, max_turns=5, max_ylen=3, seed=seed)
        validate_loop(X, a)
        assert len(a.turns) <= 5
        assert all(len(t.y_word) <= 3 for t in a.turns)
        assert random_loop(X, max_turns=5, max_ylen=3, seed=seed) == a


def test_zero_turns_gives_singular_loop():
    assert random_loop(X, max_turns=0, seed=3).is_singular


# -- based loops ------------------------------------------------------------


def test_based_product_and_closing():
    rng = random.Random(5)
    for _ in range(100):
        a, b = random_based_loop(X, seed=rng), random_based_loop(X, seed=rng)
        ab = a * b
        validate_loop(X, ab)
        from qpsurf.algebra import multiply
        assert based_word(X, ab) == multiply(based_word(X, a), based_word(X, b))
        assert loop_to_class(X, close_loop(a)) == conjugacy_class(based_word(X, a))


def test_word_to_based_reads_the_word():
    w = A.parse_word("y1 g2 y2 g3^-1 y1")
    a = word_to_based(X, w)
    assert a.start == A.parse_word("y1")
    assert based_word(X, a) == w
    assert isinstance(a, BasedGenericLoop)
