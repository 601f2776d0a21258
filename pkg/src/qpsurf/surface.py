"""Combinatorial quasi-surfaces: a disk core with gates glued to a wedge of circles.

The disk is oriented and its boundary runs counterclockwise through the gates
``1..K`` in order.  A point of gate ``k`` has a coordinate ``pos`` in (0, 1)
increasing along the boundary orientation, so boundary points are ordered by
``(gate, pos)`` cyclically.

A loop that meets the disk is a cyclic sequence of turns.  Turn ``i`` enters
the disk at gate ``a_i``, follows the (unique up to homotopy) chord to gate
``b_i``, exits, and wanders through the singular part along the y-word
``w_i`` until the next entry.  Its group word is ``g_{a_i}^-1 g_{b_i} w_i``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .algebra import (
    IDENTITY,
    Alphabet,
    CyclicWord,
    Word,
    conjugacy_class,
    cyclic_reduce,
    invert,
    multiply,
)


class LoopError(ValueError):
    """A loop violating the generic-loop invariants."""


@dataclass(frozen=True)
class QuasiSurface:
    gates: int
    ygens: int = 0

    def __post_init__(self):
        if self.gates < 1:
            raise ValueError(f"need at least one gate, got {self.gates}")
        if self.ygens < 0:
            raise ValueError(f"ygens must be >= 0, got {self.ygens}")

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(self.ygens, self.gates)

    def check_gate(self, k: int) -> int:
        if not 1 <= k <= self.gates:
            raise ValueError(f"gate {k} out of range 1..{self.gates}")
        return k

    def g(self, k: int) -> Word:
        return self.alphabet.gate_word(k)

    def chord_word(self, a: int, b: int) -> Word:
        """``g_a^-1 g_b``: the passage through the disk from gate a to gate b."""
        return multiply(invert(self.g(a)), self.g(b))


@dataclass(frozen=True)
class Crossing:
    gate: int
    pos: Fraction
    sign: int

    def __post_init__(self):
        if not 0 < self.pos < 1:
            raise LoopError(f"crossing position {self.pos} not in (0, 1)")
        if self.sign not in (1, -1):
            raise LoopError(f"crossing sign must be +-1, got {self.sign}")


@dataclass(frozen=True)
class Turn:
    entry: Crossing
    exit: Crossing
    y_word: Word = IDENTITY

    def __post_init__(self):
        if self.entry.sign != 1 or self.exit.sign != -1:
            raise LoopError("a turn enters with sign +1 and exits with sign -1")

    @classmethod
    def make(cls, in_gate: int, out_gate: int, y_word: Word = IDENTITY,
             in_pos=Fraction(1, 2), out_pos=Fraction(1, 2)) -> "Turn":
        return cls(Crossing(in_gate, Fraction(in_pos), 1),
                   Crossing(out_gate, Fraction(out_pos), -1), tuple(y_word))

    @property
    def in_gate(self) -> int:
        return self.entry.gate

    @property
    def out_gate(self) -> int:
        return self.exit.gate


def _check_turns(turns: Sequence[Turn], X: Optional[QuasiSurface] = None) -> None:
    seen = set()
    for t in turns:
        for c in (t.entry, t.exit):
            key = (c.gate, c.pos)
            if key in seen:
                raise LoopError(f"two crossings of one loop at gate {c.gate}, pos {c.pos}")
            seen.add(key)
            if X is not None:
                X.check_gate(c.gate)
        if X is not None:
            for x in t.y_word:
                if not X.alphabet.is_y_letter(x):
                    raise LoopError("turn y-word contains a gate letter")


@dataclass(frozen=True)
class GenericLoop:
    """A free loop: ``Singular(c)`` if ``turns`` is empty, else ``Alternating(turns)``."""

    turns: Tuple[Turn, ...] = ()
    singular_class: CyclicWord = field(default=CyclicWord(()))

    def __post_init__(self):
        if self.turns and self.singular_class:
            raise LoopError("an alternating loop carries no singular word")
        _check_turns(self.turns)

    @classmethod
    def singular(cls, word: Word) -> "GenericLoop":
        return cls((), conjugacy_class(word))

    @classmethod
    def alternating(cls, turns: Sequence[Turn]) -> "GenericLoop":
        if not turns:
            raise LoopError("an alternating loop needs at least one turn")
        return cls(tuple(turns))

    @property
    def is_singular(self) -> bool:
        return not self.turns

    def crossings(self):
        for t in self.turns:
            yield t.entry
            yield t.exit


@dataclass(frozen=True)
class BasedGenericLoop:
    """A loop at the base point in the singular part: ``start`` then turns."""

    start: Word = IDENTITY
    turns: Tuple[Turn, ...] = ()

    def __post_init__(self):
        _check_turns(self.turns)

    def crossings(self):
        for t in self.turns:
            yield t.entry
            yield t.exit

    def __mul__(self, other: "BasedGenericLoop") -> "BasedGenericLoop":
        """Concatenation; ``other``'s crossings are placed after ours on each gate."""
        if not isinstance(other, BasedGenericLoop):
            return NotImplemented
        if not self.turns:
            return BasedGenericLoop(multiply(self.start, other.start), other.turns)
        first, second = _stack_positions(self.turns, other.turns)
        last = first[-1]
        first[-1] = replace(last, y_word=multiply(last.y_word, other.start))
        return BasedGenericLoop(self.start, tuple(first + second))


def validate_loop(X: QuasiSurface, a: Union[GenericLoop, BasedGenericLoop]) -> None:
    """Check gates and y-words of ``a`` against ``X``."""
    _check_turns(a.turns, X)
    words = [a.singular_class] if isinstance(a, GenericLoop) else [a.start]
    for w in words:
        X.alphabet.validate(w)
        if not all(X.alphabet.is_y_letter(x) for x in w):
            raise LoopError("singular-part word contains a gate letter")


# ---------------------------------------------------------------------------
# words of loops


def turn_factor(X: QuasiSurface, t: Turn) -> Word:
    return multiply(X.chord_word(t.in_gate, t.out_gate), t.y_word)


def loop_word(X: QuasiSurface, a: GenericLoop) -> Word:
    """A word representing the free loop (read from the first turn's entry)."""
    if a.is_singular:
        return a.singular_class.word
    return multiply(*(turn_factor(X, t) for t in a.turns))


def based_word(X: QuasiSurface, a: BasedGenericLoop) -> Word:
    return multiply(a.start, *(turn_factor(X, t) for t in a.turns))


def loop_to_class(X: QuasiSurface, a: GenericLoop) -> CyclicWord:
    return conjugacy_class(loop_word(X, a))


def rotation_at(X: QuasiSurface, turns: Sequence[Turn], i: int, at_exit: bool) -> Word:
    """Loop word read from a crossing of turn ``i``.

    At the entry the reading starts with ``g_{a_i}^-1``; at the exit it starts
    with ``w_i`` and ends with ``g_{a_i}^-1 g_{b_i}``.  Both are the free loop
    conjugated into the base point along the gate's reference path.
    """
    n = len(turns)
    t = turns[i]
    rest = [turn_factor(X, turns[(i + j) % n]) for j in range(1, n)]
    chord = X.chord_word(t.in_gate, t.out_gate)
    if at_exit:
        return multiply(t.y_word, *rest, chord)
    return multiply(chord, t.y_word, *rest)


def gate_crossings(X: QuasiSurface, a: GenericLoop, k: int) -> List[Tuple[int, Word]]:
    """``(sign, rebased word)`` for every crossing of ``a`` with gate ``k``."""
    out = []
    for i, t in enumerate(a.turns):
        if t.in_gate == k:
            out.append((1, rotation_at(X, a.turns, i, False)))
        if t.out_gate == k:
            out.append((-1, rotation_at(X, a.turns, i, True)))
    return out


def based_splits(X: QuasiSurface, a: BasedGenericLoop, k: Optional[int] = None):
    """Yield ``(turn index, crossing, prefix, suffix)`` for crossings of ``a``.

    ``prefix`` runs from the base point to the crossing and returns along the
    gate's reference path; ``prefix * suffix`` is the word of ``a``.
    Restricted to gate ``k`` when given.
    """
    factors = [turn_factor(X, t) for t in a.turns]
    prefix = a.start
    for i, t in enumerate(a.turns):
        chord = X.chord_word(t.in_gate, t.out_gate)
        if k is None or t.in_gate == k:
            suffix = multiply(chord, t.y_word, *factors[i + 1:])
            yield i, t.entry, prefix, suffix
        mid = multiply(prefix, chord)
        if k is None or t.out_gate == k:
            suffix = multiply(t.y_word, *factors[i + 1:])
            yield i, t.exit, mid, suffix
        prefix = multiply(mid, t.y_word)


# ---------------------------------------------------------------------------
# building loops


def _fresh_positions(count: int) -> List[Fraction]:
    return [Fraction(i + 1, count + 1) for i in range(count)]


def assign_positions(turns: Sequence[Tuple[int, int, Word]]) -> Tuple[Turn, ...]:
    """Turns from ``(in, out, y_word)`` triples with increasing positions per gate."""
    per_gate: Dict[int, int] = {}
    for a, b, _ in turns:
        per_gate[a] = per_gate.get(a, 0) + 1
        per_gate[b] = per_gate.get(b, 0) + 1
    pools = {k: iter(_fresh_positions(n)) for k, n in per_gate.items()}
    return tuple(Turn.make(a, b, w, next(pools[a]), next(pools[b])) for a, b, w in turns)


def _word_to_triples(X: QuasiSurface, word: Word):
    """Split a word starting with a gate letter into turn triples."""
    alpha = X.alphabet
    triples = []
    for x in word:
        if alpha.is_y_letter(x):
            a, b, w = triples[-1]
            triples[-1] = (a, b, w + (x,))
        else:
            k = alpha.gate_of(x)
            triples.append((k, 1, ()) if x & 1 else (1, k, ()))
    return triples


def class_to_loop(X: QuasiSurface, c: Union[CyclicWord, Word]) -> GenericLoop:
    """A generic loop in the class ``c``: one turn per gate letter."""
    word = cyclic_reduce(tuple(c))
    X.alphabet.validate(word)
    alpha = X.alphabet
    starts = [i for i, x in enumerate(word) if not alpha.is_y_letter(x)]
    if not starts:
        return GenericLoop.singular(word)
    s = starts[0]
    return GenericLoop(assign_positions(_word_to_triples(X, word[s:] + word[:s])))


def word_to_based(X: QuasiSurface, word: Word) -> BasedGenericLoop:
    """A based loop reading ``word``: leading y-letters form the start word."""
    alpha = X.alphabet
    word = X.alphabet.validate(word)
    s = next((i for i, x in enumerate(word) if not alpha.is_y_letter(x)), len(word))
    return BasedGenericLoop(word[:s], assign_positions(_word_to_triples(X, word[s:])))


def close_loop(a: BasedGenericLoop) -> GenericLoop:
    """Forget the base point."""
    if not a.turns:
        return GenericLoop.singular(a.start)
    last = a.turns[-1]
    turns = a.turns[:-1] + (replace(last, y_word=multiply(last.y_word, a.start)),)
    return GenericLoop(turns)


def rotate_turns(a: GenericLoop, r: int) -> GenericLoop:
    if a.is_singular:
        return a
    r %= len(a.turns)
    return GenericLoop(a.turns[r:] + a.turns[:r])


def _relabel(turns: Sequence[Turn], where: Dict[Tuple[int, Fraction], Fraction]) -> List[Turn]:
    out = []
    for t in turns:
        e, x = t.entry, t.exit
        out.append(Turn(replace(e, pos=where[(e.gate, e.pos)]),
                        replace(x, pos=where[(x.gate, x.pos)]), t.y_word))
    return out


def _stack_positions(first: Sequence[Turn], second: Sequence[Turn]):
    """Reposition so that on every gate all of ``first`` precede all of ``second``.

    Each loop keeps the relative order of its own crossings.
    """
    by_gate: Dict[int, Tuple[List[Fraction], List[Fraction]]] = {}
    for side, turns in enumerate((first, second)):
        for t in turns:
            for c in (t.entry, t.exit):
                by_gate.setdefault(c.gate, ([], []))[side].append(c.pos)
    new = ({}, {})
    for k, (p1, p2) in by_gate.items():
        fresh = _fresh_positions(len(p1) + len(p2))
        for side, ps in enumerate((sorted(p1), sorted(p2))):
            offset = 0 if side == 0 else len(p1)
            for r, p in enumerate(ps):
                new[side][(k, p)] = fresh[offset + r]
    return _relabel(first, new[0]), _relabel(second, new[1])


LoopLike = Union[GenericLoop, BasedGenericLoop]


def _rebuild(a: LoopLike, turns) -> LoopLike:
    if isinstance(a, BasedGenericLoop):
        return BasedGenericLoop(a.start, tuple(turns))
    if not turns:
        return a
    return GenericLoop(tuple(turns))


def make_admissible_pair(X: QuasiSurface, a: LoopLike, b: LoopLike) -> Tuple[LoopLike, LoopLike]:
    """Freely homotopic copies with every crossing of ``a`` before those of ``b``.

    With the boundary counterclockwise, a gate tangent pointing from a crossing
    of ``a`` to one of ``b`` followed by the inward normal is a positive frame
    exactly when ``a``'s coordinate is the smaller one.
    """
    ta, tb = _stack_positions(a.turns, b.turns)
    return _rebuild(a, ta), _rebuild(b, tb)


def is_admissible(a: LoopLike, b: LoopLike) -> bool:
    for ca in a.crossings():
        for cb in b.crossings():
            if ca.gate == cb.gate and not ca.pos < cb.pos:
                return False
    return True


# ---------------------------------------------------------------------------
# chords in the disk


def _between(start, end, x) -> bool:
    """Whether ``x`` lies on the counterclockwise boundary arc from ``start`` to ``end``."""
    if start < end:
        return start < x < end
    return x > start or x < end


def chords_cross(x1, x2, y1, y2) -> int:
    """Intersection sign of chords ``x1 -> x2`` and ``y1 -> y2`` (0 if disjoint).

    Endpoints are boundary keys ``(gate, pos)``.  The sign is +1 when the
    counterclockwise cyclic order is ``(x1, y1, x2, y2)``: in the round disk
    the directions of the two chords then form a positive frame.
    """
    if len({x1, x2, y1, y2}) < 4:
        raise LoopError("chords share an endpoint; make the pair admissible first")
    s1 = _between(x1, x2, y1)
    s2 = _between(x1, x2, y2)
    if s1 == s2:
        return 0
    return 1 if s1 else -1


def _key(c: Crossing):
    return (c.gate, c.pos)


def disk_intersections(X: QuasiSurface, a: LoopLike, b: LoopLike) -> List[Tuple[int, int, int]]:
    """``(turn of a, turn of b, sign)`` for each crossing of their chords in the disk."""
    out = []
    for i, s in enumerate(a.turns):
        x1, x2 = _key(s.entry), _key(s.exit)
        for j, t in enumerate(b.turns):
            sign = chords_cross(x1, x2, _key(t.entry), _key(t.exit))
            if sign:
                out.append((i, j, sign))
    return out


# ---------------------------------------------------------------------------
# homotopy moves


def _gap_positions(turns: Sequence[Turn], k: int) -> Tuple[Fraction, Fraction]:
    """Two fresh positions on gate ``k`` above every existing one (midpoint insertion)."""
    top = max((c.pos for t in turns for c in (t.entry, t.exit) if c.gate == k),
              default=Fraction(0))
    p1 = (top + 1) / 2
    return p1, (p1 + 1) / 2


def push_move(X: QuasiSurface, a: GenericLoop, i: int = 0, split: int = 0,
              gate: int = 1, direction: str = "in") -> GenericLoop:
    """Push a branch of ``a`` across gate ``gate``, or undo such a push.

    ``direction="in"`` cuts the y-word of turn ``i`` after ``split`` letters
    and inserts a turn entering and leaving the disk through ``gate``.
    ``direction="out"`` removes turn ``i + 1`` (which must enter and leave
    through ``gate``) and joins the y-words around it.
    """
    X.check_gate(gate)
    if direction == "in":
        if a.is_singular:
            w = a.singular_class.word
            if not 0 <= split <= len(w):
                raise LoopError(f"split {split} outside word of length {len(w)}")
            p1, p2 = _gap_positions((), gate)
            return GenericLoop((Turn.make(gate, gate, w[split:] + w[:split], p1, p2),))
        turns = list(a.turns)
        t = turns[i % len(turns)]
        if not 0 <= split <= len(t.y_word):
            raise LoopError(f"split {split} outside y-word of length {len(t.y_word)}")
        p1, p2 = _gap_positions(turns, gate)
        new = Turn.make(gate, gate, t.y_word[split:], p1, p2)
        turns[i % len(turns)] = replace(t, y_word=t.y_word[:split])
        turns.insert(i % len(turns) + 1, new)
        return GenericLoop(tuple(turns))
    if direction == "out":
        turns = list(a.turns)
        if not turns:
            raise LoopError("no turn to remove from a singular loop")
        j = (i + 1) % len(turns)
        t = turns[j]
        if t.in_gate != gate or t.out_gate != gate:
            raise LoopError(f"turn {j} does not enter and exit through gate {gate}")
        if len(turns) == 1:
            return GenericLoop.singular(t.y_word)
        prev = (j - 1) % len(turns)
        turns[prev] = replace(turns[prev], y_word=multiply(turns[prev].y_word, t.y_word))
        del turns[j]
        return GenericLoop(tuple(turns))
    raise ValueError(f"direction must be 'in' or 'out', not {direction!r}")


# ---------------------------------------------------------------------------
# random loops


def random_y_word(X: QuasiSurface, rng: random.Random, max_len: int) -> Word:
    if X.ygens == 0 or max_len <= 0:
        return IDENTITY
    out: List[int] = []
    for _ in range(rng.randint(0, max_len)):
        choices = [x for x in range(2 * X.ygens) if not out or x != out[-1] ^ 1]
        out.append(rng.choice(choices))
    return tuple(out)


def _random_turns(X: QuasiSurface, rng: random.Random, n: int, max_ylen: int):
    triples = [(rng.randint(1, X.gates), rng.randint(1, X.gates),
                random_y_word(X, rng, max_ylen)) for _ in range(n)]
    counts: Dict[int, int] = {}
    for a, b, _ in triples:
        counts[a] = counts.get(a, 0) + 1
        counts[b] = counts.get(b, 0) + 1
    pools = {}
    for k, n_k in counts.items():
        den = 8 * n_k + 1
        pools[k] = iter([Fraction(p, den) for p in rng.sample(range(1, den), n_k)])
    return tuple(Turn.make(a, b, w, next(pools[a]), next(pools[b])) for a, b, w in triples)


def random_loop(X: QuasiSurface, max_turns: int = 5, max_ylen: int = 3,
                seed: Union[int, random.Random, None] = 0, min_turns: int = 0) -> GenericLoop:
    """A random generic loop; a pure function of ``seed`` (or draws from a ``Random``)."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = rng.randint(min(min_turns, max_turns), max_turns)
    if n == 0:
        return GenericLoop.singular(random_y_word(X, rng, max_ylen + 1))
    return GenericLoop(_random_turns(X, rng, n, max_ylen))


def random_based_loop(X: QuasiSurface, max_turns: int = 5, max_ylen: int = 3,
                      seed: Union[int, random.Random, None] = 0) -> BasedGenericLoop:
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    n = rng.randint(0, max_turns)
    start = random_y_word(X, rng, max_ylen)
    return BasedGenericLoop(start, _random_turns(X, rng, n, max_ylen))


def random_surface(rng: random.Random, max_gates: int = 4, max_ygens: int = 3) -> QuasiSurface:
    return QuasiSurface(rng.randint(1, max_gates), rng.randint(0, max_ygens))
