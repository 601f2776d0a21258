from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qpsurf.algebra import (
    IDENTITY,
    TRIVIAL_CLASS,
    AlgebraElement,
    Alphabet,
    LoopCombination,
    ParseError,
    aug,
    conjugacy_class,
    invert,
    multiply,
    project,
    reduce_word,
)

A = Alphabet(2, 3)
W = A.parse_word
y1, y1i, y2, y2i = A.y_letter(1), A.y_letter(1, -1), A.y_letter(2), A.y_letter(2, -1)
g2 = A.gate_word(2)[0]

letters = st.integers(min_value=0, max_value=A.rank * 2 - 1)
raw_words = st.lists(letters, max_size=10).map(tuple)
words = raw_words.map(reduce_word)


def E(text):
    return A.parse_element(text)


# -- reduction --------------------------------------------------------------


@pytest.mark.parametrize("raw, expected", [
    ((y1, y1i), ()),
    ((y1, y2, y2i, y1), (y1, y1)),
    ((g2, y1), (g2, y1)),
])
def test_reduce_examples(raw, expected):
    assert reduce_word(raw) == expected


def test_multiply_and_invert():
    assert multiply((y1,), (y1i,)) == IDENTITY
    assert invert(W("g2 y1")) == W("y1^-1 g2^-1")
    assert multiply((g2,), (y1,)) == W("g2 y1")


@given(raw_words)
def test_reduce_is_idempotent_and_reduced(w):
    r = reduce_word(w)
    assert reduce_word(r) == r
    assert all(a != b ^ 1 for a, b in zip(r, r[1:]))


@given(raw_words, raw_words)
def test_reduction_is_confluent(u, v):
    # reducing pieces first gives the same word
    assert reduce_word(u + v) == multiply(reduce_word(u), reduce_word(v))


@given(words, words, words)
def test_group_axioms(u, v, w):
    assert multiply(multiply(u, v), w) == multiply(u, multiply(v, w))
    assert multiply(u, invert(u)) == IDENTITY
    assert invert(multiply(u, v)) == multiply(invert(v), invert(u))


# -- classes ----------------------------------------------------------------


def test_conjugacy_class_examples():
    assert conjugacy_class(W("y1 y2 y1^-1")) == conjugacy_class(W("y2"))
    assert conjugacy_class(W("g2 y1 g2^-1 g2")) == conjugacy_class(W("y1 g2"))
    assert conjugacy_class(()) == TRIVIAL_CLASS
    assert A.format_class(TRIVIAL_CLASS) == "1"


@given(words, words)
def test_class_is_conjugation_invariant(u, v):
    assert conjugacy_class(multiply(v, u, invert(v))) == conjugacy_class(u)


@given(words, words)
def test_class_of_rotation(u, v):
    assert conjugacy_class(multiply(u, v)) == conjugacy_class(multiply(v, u))


@given(words)
def test_class_canonical_word_is_in_class(u):
    c = conjugacy_class(u)
    assert conjugacy_class(c.word) == c
    assert len(c.word) <= len(u)


# -- linear algebra ---------------------------------------------------------


def test_project_examples():
    assert project(E("3 y1 y2 - 3 y2 y1")) == 0
    assert project(E("1")) == LoopCombination.of(TRIVIAL_CLASS)
    assert project(E("2 y1 g2 + g2 y1")) == LoopCombination.of(conjugacy_class(W("y1 g2")), 3)


def test_aug_examples():
    assert aug(E("2 y1 - 5 g2 y2")) == -3
    assert aug(AlgebraElement()) == 0
    assert aug(E("1")) == 1


def test_zero_coefficients_dropped():
    x = E("y1") - E("y1")
    assert not x and len(x) == 0
    assert AlgebraElement({(y1,): 0}) == 0


def test_fraction_coefficients():
    x = E("1/2 y1 - 3/4 y2^-1")
    assert x[(y1,)] == Fraction(1, 2)
    assert A.format_element(x) == "1/2 y1 - 3/4 y2^-1"
    assert A.format_element(x.scale(2)) == "y1 - 3/2 y2^-1"


elements = st.dictionaries(words, st.integers(-3, 3), max_size=4).map(AlgebraElement)


@settings(max_examples=60)
@given(elements, elements, elements)
def test_ring_laws(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert aug(x * y) == aug(x) * aug(y)


@settings(max_examples=60)
@given(elements, elements)
def test_project_kills_commutators(x, y):
    assert project(x * y - y * x) == 0


@given(elements)
def test_element_text_round_trip(x):
    assert A.parse_element(A.format_element(x)) == x


# -- text -------------------------------------------------------------------


def test_parse_word_forms():
    assert W("1") == ()
    assert W("") == ()
    assert W("y1^-1 g3") == (y1i, A.gate_word(3)[0])
    assert A.format_word(W("g2^-1 y2")) == "g2^-1 y2"


@pytest.mark.parametrize("bad", ["y3", "g1", "g4", "y1^2", "x", "y1^-"])
def test_parse_word_rejects(bad):
    with pytest.raises(ParseError):
        W(bad)


def test_parse_class_strips_brackets():
    assert A.parse_class("<g2 y1>") == conjugacy_class(W("y1 g2"))


def test_letter_order_puts_y_first():
    assert [A.format_word((x,)) for x in range(A.rank * 2)] == [
        "y1", "y1^-1", "y2", "y2^-1", "g2", "g2^-1", "g3", "g3^-1"]
