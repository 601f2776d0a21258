"""Gate brackets, the 2-bracket of a quasi-surface and their based lifts."""

from __future__ import annotations

from itertools import product
from typing import Callable, Dict, Sequence, Tuple

from .algebra import (
    AlgebraElement,
    Coeff,
    CyclicWord,
    LoopCombination,
    Word,
    add_into,
    conjugacy_class,
    invert,
    multiply,
)
from .surface import (
    BasedGenericLoop,
    GenericLoop,
    QuasiSurface,
    based_splits,
    class_to_loop,
    disk_intersections,
    gate_crossings,
    make_admissible_pair,
    rotation_at,
)


def _gate_sum(X: QuasiSurface, k: int, loops: Sequence[GenericLoop], acc: Dict, scale: int = 1):
    crossing_lists = [gate_crossings(X, a, k) for a in loops]
    for combo in product(*crossing_lists):
        sign = scale
        words = []
        for s, w in combo:
            sign *= s
            words.append(w)
        add_into(acc, conjugacy_class(multiply(*words)), sign)


def mu_gate(X: QuasiSurface, k: int, loops: Sequence[GenericLoop]) -> LoopCombination:
    """Gate m-bracket at gate ``k``: signed classes of products of rebased loops."""
    X.check_gate(k)
    if not loops:
        raise ValueError("mu_gate needs at least one loop")
    acc: Dict[CyclicWord, Coeff] = {}
    _gate_sum(X, k, loops, acc)
    return LoopCombination._raw(acc)


def mu_total(X: QuasiSurface, loops: Sequence[GenericLoop]) -> LoopCombination:
    """Total gate m-bracket, ``m = len(loops)``."""
    if not loops:
        raise ValueError("mu_total needs at least one loop")
    acc: Dict[CyclicWord, Coeff] = {}
    for k in range(1, X.gates + 1):
        _gate_sum(X, k, loops, acc)
    return LoopCombination._raw(acc)


def _disk_class_word(X: QuasiSurface, a: GenericLoop, i: int, b: GenericLoop, j: int) -> Word:
    """Word of ``a_r b_r`` for the crossing ``r`` of chord ``i`` of ``a`` and chord ``j`` of ``b``."""
    ga = X.g(a.turns[i].in_gate)
    gb = X.g(b.turns[j].in_gate)
    bridge = multiply(invert(ga), gb)
    return multiply(rotation_at(X, a.turns, i, False), bridge,
                    rotation_at(X, b.turns, j, False), invert(bridge))


def bracket2_parts(X: QuasiSurface, a: GenericLoop, b: GenericLoop) -> Tuple[LoopCombination, LoopCombination]:
    """``(disk term, gate term)`` of the 2-bracket; their sum is ``[a, b]``."""
    a, b = make_admissible_pair(X, a, b)
    disk: Dict[CyclicWord, Coeff] = {}
    for i, j, sign in disk_intersections(X, a, b):
        add_into(disk, conjugacy_class(_disk_class_word(X, a, i, b, j)), 2 * sign)
    gate: Dict[CyclicWord, Coeff] = {}
    for k in range(1, X.gates + 1):
        _gate_sum(X, k, (a, b), gate, scale=-1)
    return LoopCombination._raw(disk), LoopCombination._raw(gate)


def bracket2(X: QuasiSurface, a: GenericLoop, b: GenericLoop) -> LoopCombination:
    disk, gate = bracket2_parts(X, a, b)
    return disk + gate


# ---------------------------------------------------------------------------
# based lifts


def mu_refined(X: QuasiSurface, k: int, a1: BasedGenericLoop,
               rest: Sequence[GenericLoop]) -> AlgebraElement:
    """Based refinement of the gate bracket; a derivation in ``a1``.

    Each crossing ``p`` of ``a1`` with gate ``k`` contributes the based word
    ``prefix(p) * u_2 ... u_m * suffix(p)`` where the ``u_i`` are the other
    loops read from their own gate-``k`` crossings.
    """
    X.check_gate(k)
    others = [gate_crossings(X, a, k) for a in rest]
    acc: Dict[Word, Coeff] = {}
    for _, crossing, pre, suf in based_splits(X, a1, k):
        for combo in product(*others):
            sign = crossing.sign
            words = [pre]
            for s, w in combo:
                sign *= s
                words.append(w)
            words.append(suf)
            add_into(acc, multiply(*words), sign)
    return AlgebraElement._raw(acc)


def based_d(X: QuasiSurface, a: BasedGenericLoop, b: GenericLoop) -> AlgebraElement:
    """Derivation ``[a] -> d([a])`` lifting ``x -> [x, <b>]``.

    Each chord crossing inserts ``b`` read from the crossing, conjugated into
    the entry gate of ``a``'s chord; each pair of gate crossings inserts ``b``
    read from its gate crossing.
    """
    a, b = make_admissible_pair(X, a, b)
    acc: Dict[Word, Coeff] = {}
    splits = list(based_splits(X, a))
    entry_split = {}
    for i, crossing, pre, suf in splits:
        if crossing.sign == 1:
            entry_split[i] = (pre, suf)
    for i, j, sign in disk_intersections(X, a, b):
        pre, suf = entry_split[i]
        bridge = multiply(invert(X.g(a.turns[i].in_gate)), X.g(b.turns[j].in_gate))
        inserted = multiply(bridge, rotation_at(X, b.turns, j, False), invert(bridge))
        add_into(acc, multiply(pre, inserted, suf), 2 * sign)
    gate_words = {k: gate_crossings(X, b, k) for k in range(1, X.gates + 1)}
    for i, crossing, pre, suf in splits:
        for s, w in gate_words[crossing.gate]:
            add_into(acc, multiply(pre, w, suf), -crossing.sign * s)
    return AlgebraElement._raw(acc)


# ---------------------------------------------------------------------------
# multilinear extensions on classes


class LoopCache:
    """Representative loops for classes, built once per class."""

    def __init__(self, X: QuasiSurface):
        self.X = X
        self._loops: Dict[CyclicWord, GenericLoop] = {}

    def __call__(self, c: CyclicWord) -> GenericLoop:
        loop = self._loops.get(c)
        if loop is None:
            loop = self._loops[c] = class_to_loop(self.X, c)
        return loop


def _as_combination(x) -> LoopCombination:
    if isinstance(x, LoopCombination):
        return x
    if isinstance(x, CyclicWord):
        return LoopCombination._raw({x: 1})
    return LoopCombination.of(conjugacy_class(x))


def multilinear(rule: Callable[..., LoopCombination], *args) -> LoopCombination:
    """Extend a rule on classes to combinations of classes."""
    combos = [_as_combination(x) for x in args]
    acc: Dict[CyclicWord, Coeff] = {}
    for terms in product(*(c.items() for c in combos)):
        coeff = 1
        classes = []
        for c, r in terms:
            coeff *= r
            classes.append(c)
        for c, r in rule(*classes).items():
            add_into(acc, c, r * coeff)
    return LoopCombination._raw(acc)


class ClassBrackets:
    """Brackets of the quasi-surface ``X`` on classes, memoized per argument tuple."""

    def __init__(self, X: QuasiSurface):
        self.X = X
        self.loop = LoopCache(X)
        self._b2: Dict[Tuple[CyclicWord, CyclicWord], LoopCombination] = {}
        self._mu: Dict[Tuple[CyclicWord, ...], LoopCombination] = {}

    def bracket2_class(self, x: CyclicWord, y: CyclicWord) -> LoopCombination:
        key = (x, y)
        val = self._b2.get(key)
        if val is None:
            val = self._b2[key] = bracket2(self.X, self.loop(x), self.loop(y))
        return val

    def mu_class(self, *xs: CyclicWord) -> LoopCombination:
        val = self._mu.get(xs)
        if val is None:
            val = self._mu[xs] = mu_total(self.X, [self.loop(x) for x in xs])
        return val

    def bracket2(self, x, y) -> LoopCombination:
        return multilinear(self.bracket2_class, x, y)

    def mu(self, *xs) -> LoopCombination:
        return multilinear(self.mu_class, *xs)

    def jacobiator(self, x, y, z) -> LoopCombination:
        b = self.bracket2
        return b(b(x, y), z) + b(b(y, z), x) + b(b(z, x), y)

    def quasi_jacobi_defect(self, x, y, z) -> LoopCombination:
        """Left side minus right side of the quasi-Jacobi identity (zero when it holds)."""
        return self.jacobiator(x, y, z) - self.mu(x, y, z) + self.mu(z, y, x)


def bracket2_linear(X: QuasiSurface, x, y) -> LoopCombination:
    return ClassBrackets(X).bracket2(x, y)


def mu_linear(X: QuasiSurface, *xs) -> LoopCombination:
    return ClassBrackets(X).mu(*xs)
