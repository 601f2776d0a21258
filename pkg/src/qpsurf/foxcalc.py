"""Fox derivatives in the free group algebra and the braces they generate."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Dict, Mapping, Sequence

from .algebra import (
    IDENTITY,
    AlgebraElement,
    Alphabet,
    Coeff,
    CyclicWord,
    LoopCombination,
    ParseError,
    Word,
    add_into,
    conjugacy_class,
    invert,
    multiply,
)
from .surface import BasedGenericLoop, QuasiSurface, based_splits


@dataclass(frozen=True)
class FoxDerivative:
    """Values of a left Fox derivative on the free generators.

    ``values[j]`` is the derivative of generator ``j``; inverse letters follow
    from ``d(g^-1) = -g^-1 d(g)``.
    """

    values: Mapping[int, AlgebraElement]
    rank: int

    def __post_init__(self):
        missing = [j for j in range(self.rank) if j not in self.values]
        if missing:
            raise KeyError(f"Fox derivative undefined on generators {missing}")

    @classmethod
    def partial(cls, alphabet: Alphabet, name: str) -> "FoxDerivative":
        """The free derivative ``d/d name``."""
        j0 = alphabet.generator(name)
        vals = {j: AlgebraElement.one() if j == j0 else AlgebraElement() for j in range(alphabet.rank)}
        return cls(vals, alphabet.rank)

    def of_letter(self, letter: int) -> AlgebraElement:
        v = self.values[letter >> 1]
        if letter & 1:
            return AlgebraElement.word((letter,), -1) * v
        return v

    def times(self, w: Word) -> "FoxDerivative":
        """``x -> d(x) w``, again a Fox derivative; models a change of gate reference path."""
        right = AlgebraElement.word(w)
        return FoxDerivative({j: v * right for j, v in self.values.items()}, self.rank)


def _fox_word(d: FoxDerivative, word: Word, acc: Dict[Word, Coeff], coeff: Coeff) -> None:
    prefix: Word = IDENTITY
    for x in word:
        for w, c in d.of_letter(x).items():
            add_into(acc, multiply(prefix, w), coeff * c)
        prefix = multiply(prefix, (x,))


def fox_apply(d: FoxDerivative, x: AlgebraElement) -> AlgebraElement:
    acc: Dict[Word, Coeff] = {}
    for w, c in x.items():
        _fox_word(d, w, acc, c)
    return AlgebraElement._raw(acc)


def delta_apply(d: FoxDerivative, x: AlgebraElement) -> AlgebraElement:
    """``w -> sum_a (w/a) a^-1 w a`` extended linearly."""
    acc: Dict[Word, Coeff] = {}
    for w, c in x.items():
        for a, r in fox_apply(d, AlgebraElement._raw({w: 1})).items():
            add_into(acc, multiply(invert(a), w, a), c * r)
    return AlgebraElement._raw(acc)


def _as_combination(x) -> LoopCombination:
    if isinstance(x, LoopCombination):
        return x
    return LoopCombination.of(conjugacy_class(x))


def fox_brace(derivs: Sequence[FoxDerivative], xs: Sequence) -> LoopCombination:
    """``p(Delta_1(x_1) ... Delta_m(x_m))`` on classes or combinations of classes."""
    if len(derivs) != len(xs) or not xs:
        raise ValueError("need one Fox derivative per argument, m >= 1")
    deltas = []
    for d, x in zip(derivs, xs):
        lifted = AlgebraElement._raw({c.word: r for c, r in _as_combination(x).items()})
        deltas.append(delta_apply(d, lifted))
    acc: Dict[CyclicWord, Coeff] = {}
    for terms in product(*(dl.items() for dl in deltas)):
        coeff = 1
        words = []
        for w, r in terms:
            coeff *= r
            words.append(w)
        add_into(acc, conjugacy_class(multiply(*words)), coeff)
    return LoopCombination._raw(acc)


def fox_lifted_derivation(d: FoxDerivative, F: AlgebraElement, x: AlgebraElement) -> AlgebraElement:
    """The derivation ``w -> sum_a (w/a) a F a^-1 w`` used to show braces are weak derivations."""
    acc: Dict[Word, Coeff] = {}
    for w, c in x.items():
        for a, r in fox_apply(d, AlgebraElement._raw({w: 1})).items():
            ainv = invert(a)
            for f, s in F.items():
                add_into(acc, multiply(a, f, ainv, w), c * r * s)
    return AlgebraElement._raw(acc)


# ---------------------------------------------------------------------------
# gate derivatives


def gate_fox_derivative(X: QuasiSurface, k: int, a: BasedGenericLoop) -> AlgebraElement:
    """Signed prefixes of ``a`` at its crossings with gate ``k``.

    A prefix runs along ``a`` to the crossing and returns to the base point
    along the reference path of gate ``k``.
    """
    X.check_gate(k)
    acc: Dict[Word, Coeff] = {}
    for _, crossing, pre, _ in based_splits(X, a, k):
        add_into(acc, pre, crossing.sign)
    return AlgebraElement._raw(acc)


def gate_derivative(X: QuasiSurface, k: int) -> FoxDerivative:
    """The Fox derivative of gate ``k`` on generators: ``g_j -> [k=1] - [k=j] g_j``, ``y -> 0``."""
    X.check_gate(k)
    alpha = X.alphabet
    vals = {j: AlgebraElement() for j in range(alpha.rank)}
    for j in range(2, X.gates + 1):
        gj = X.g(j)
        terms = {}
        if k == 1:
            terms[IDENTITY] = 1
        if k == j:
            terms[gj] = -1
        vals[gj[0] >> 1] = AlgebraElement(terms)
    return FoxDerivative(vals, alpha.rank)


# ---------------------------------------------------------------------------
# text format: lines "d GEN = ELEMENT"


def parse_fox(alphabet: Alphabet, lines: Sequence[str]) -> FoxDerivative:
    vals = {}
    for line in lines:
        head, sep, body = line.partition("=")
        parts = head.split()
        if not sep or len(parts) != 2 or parts[0] != "d":
            raise ParseError(f"expected 'd GEN = ELEMENT', got {line!r}")
        j = alphabet.generator(parts[1])
        if j in vals:
            raise ParseError(f"generator {parts[1]} defined twice")
        vals[j] = alphabet.parse_element(body)
    for j in range(alphabet.rank):
        vals.setdefault(j, AlgebraElement())
    return FoxDerivative(vals, alphabet.rank)


def format_fox(alphabet: Alphabet, d: FoxDerivative) -> str:
    return "\n".join(f"d {alphabet.names[j]} = {alphabet.format_element(d.values[j])}"
                     for j in range(d.rank))
