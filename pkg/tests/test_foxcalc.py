import random

import pytest

from qpsurf.algebra import (
    AlgebraElement,
    Alphabet,
    LoopCombination,
    aug,
    conjugacy_class,
    invert,
    multiply,
    project,
)
from qpsurf.checks import random_element, random_fox, random_word
from qpsurf.foxcalc import (
    FoxDerivative,
    delta_apply,
    fox_apply,
    fox_brace,
    fox_lifted_derivation,
    format_fox,
    gate_derivative,
    gate_fox_derivative,
    parse_fox,
)
from qpsurf.surface import BasedGenericLoop, QuasiSurface, Turn, based_word, random_based_loop

A = Alphabet(2, 2)
D1 = FoxDerivative.partial(A, "y1")


def E(text):
    return A.parse_element(text)


def C(text):
    return conjugacy_class(A.parse_word(text))


def test_fox_apply_examples():
    assert fox_apply(D1, E("y1 y2")) == E("1")
    assert fox_apply(D1, E("y1^-1")) == E("-y1^-1")
    assert fox_apply(D1, E("y1 y1 y2")) == E("1 + y1")
    assert A.format_element(fox_apply(D1, E("y1 y1 y2"))) == "1 + y1"


def test_delta_examples():
    assert delta_apply(D1, E("y1")) == E("y1")
    assert delta_apply(D1, E("y1 y2")) == E("y1 y2")
    assert delta_apply(D1, E("y2 y1")) == E("y1 y2")
    assert delta_apply(D1, E("1")) == 0


def test_fox_brace_examples():
    assert fox_brace([D1, D1], [C("y1"), C("y2")]) == 0
    assert fox_brace([D1, D1], [C("y1"), C("y1")]) == LoopCombination.of(C("y1 y1"))


def test_fox_brace_ignores_representatives():
    rng = random.Random(3)
    for _ in range(50):
        d = random_fox(A, rng)
        xs = [random_word(A, rng) for _ in range(rng.randint(1, 3))]
        conj = [multiply(v, x, invert(v)) for x in xs for v in [random_word(A, rng)]]
        assert fox_brace([d] * len(xs), [conjugacy_class(x) for x in xs]) \
            == fox_brace([d] * len(xs), [conjugacy_class(x) for x in conj])


def test_delta_is_a_class_function():
    rng = random.Random(5)
    for _ in range(100):
        d = random_fox(A, rng)
        x, y = AlgebraElement.word(random_word(A, rng)), AlgebraElement.word(random_word(A, rng))
        assert delta_apply(d, x * y) == delta_apply(d, y * x)
        assert project(delta_apply(d, x * y - y * x)) == 0


def test_lifted_derivation():
    assert fox_lifted_derivation(D1, E("1"), E("y1")) == E("y1")
    assert fox_lifted_derivation(D1, E("y2"), E("1")) == 0
    rng = random.Random(7)
    for _ in range(100):
        d, F = random_fox(A, rng), random_element(A, rng)
        x, y = random_element(A, rng), random_element(A, rng)
        assert fox_lifted_derivation(d, F, x * y) == \
            fox_lifted_derivation(d, F, x) * y + x * fox_lifted_derivation(d, F, y)


def test_fox_cocycle_on_elements():
    rng = random.Random(8)
    for _ in range(100):
        d = random_fox(A, rng)
        x, y = random_element(A, rng), random_element(A, rng)
        # d(xy) = d(x) aug(y) + x d(y)
        assert fox_apply(d, x * y) == fox_apply(d, x).scale(aug(y)) + x * fox_apply(d, y)


def test_derivative_must_cover_generators():
    with pytest.raises(KeyError):
        FoxDerivative({0: E("1")}, A.rank)


# -- gate derivatives -------------------------------------------------------

X = QuasiSurface(3, 2)


def test_gate_derivative_example():
    a = BasedGenericLoop((), (Turn.make(1, 2),))
    assert gate_fox_derivative(X, 1, a) == AlgebraElement.one()
    assert gate_fox_derivative(X, 2, a) == AlgebraElement.word(X.g(2), -1)
    assert gate_fox_derivative(X, 3, a) == 0
    assert gate_fox_derivative(X, 1, BasedGenericLoop(X.alphabet.parse_word("y1"), ())) == 0


def test_gate_derivative_on_generators():
    g2, g3 = X.g(2), X.g(3)
    assert fox_apply(gate_derivative(X, 1), AlgebraElement.word(g2)) == AlgebraElement.one()
    assert fox_apply(gate_derivative(X, 2), AlgebraElement.word(g2)) == AlgebraElement.word(g2, -1)
    assert fox_apply(gate_derivative(X, 2), AlgebraElement.word(g3)) == 0
    assert fox_apply(gate_derivative(X, 3), AlgebraElement.word(X.alphabet.parse_word("y1 y2"))) == 0


def test_gate_derivative_cocycle():
    rng = random.Random(12)
    for _ in range(100):
        a, b = random_based_loop(X, 3, seed=rng), random_based_loop(X, 3, seed=rng)
        k = rng.randint(1, 3)
        wa = AlgebraElement.word(based_word(X, a))
        assert gate_fox_derivative(X, k, a * b) == \
            gate_fox_derivative(X, k, a) + wa * gate_fox_derivative(X, k, b)
        assert gate_fox_derivative(X, k, a) == fox_apply(gate_derivative(X, k), wa)


def test_gate_derivatives_sum_to_one_minus_word():
    # without y-generators the sum over gates sends every generator g to 1 - g
    X0 = QuasiSurface(4, 0)
    rng = random.Random(2)
    for _ in range(50):
        a = random_based_loop(X0, seed=rng)
        total = sum((gate_fox_derivative(X0, k, a) for k in range(1, 5)), AlgebraElement())
        assert total == AlgebraElement.one() - AlgebraElement.word(based_word(X0, a))


# -- text -------------------------------------------------------------------


def test_fox_text_round_trip():
    rng = random.Random(1)
    for _ in range(30):
        d = random_fox(A, rng)
        assert parse_fox(A, format_fox(A, d).splitlines()) == d


def test_fox_text_defaults_to_zero():
    d = parse_fox(A, ["d y1 = 1"])
    assert d == D1
