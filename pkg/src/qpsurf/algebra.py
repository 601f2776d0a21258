"""Free-group words, conjugacy classes and exact group-algebra arithmetic.

Letters are small integers.  Generator ``j`` (0-based) has the positive letter
``2*j`` and the inverse letter ``2*j + 1``, so ``letter ^ 1`` inverts a letter
and integer order is the canonical letter order
``y1 < y1^-1 < y2 < ... < g2 < g2^-1 < g3 < ...``.  The y-generators come
first, then the gate generators ``g2..gK`` (``g1`` is the identity and is
never stored).

A :data:`Word` is a plain tuple of letters.  A :class:`CyclicWord` is a tuple
holding the canonical representative of a conjugacy class.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational
from typing import Dict, Iterable, Iterator, Mapping, Tuple, Union

Word = Tuple[int, ...]
Coeff = Union[int, Fraction]

IDENTITY: Word = ()


class ParseError(ValueError):
    """Malformed textual input (words, elements, files)."""


@dataclass(frozen=True)
class Alphabet:
    """Generators ``y1..y_m`` of the singular part and ``g2..g_K`` of the gates."""

    y_count: int
    gate_count: int = 1

    def __post_init__(self):
        if self.y_count < 0:
            raise ValueError(f"y_count must be >= 0, got {self.y_count}")
        if self.gate_count < 1:
            raise ValueError(f"gate_count must be >= 1, got {self.gate_count}")

    @property
    def rank(self) -> int:
        return self.y_count + self.gate_count - 1

    @cached_property
    def names(self) -> Tuple[str, ...]:
        ys = [f"y{i}" for i in range(1, self.y_count + 1)]
        gs = [f"g{k}" for k in range(2, self.gate_count + 1)]
        return tuple(ys + gs)

    @cached_property
    def _index(self) -> Dict[str, int]:
        return {name: j for j, name in enumerate(self.names)}

    def generator(self, name: str) -> int:
        """Generator index for ``name``; raises ``ParseError`` if unknown."""
        try:
            return self._index[name]
        except KeyError:
            raise ParseError(f"unknown generator {name!r} for {self}") from None

    def y_letter(self, i: int, exp: int = 1) -> int:
        """Letter for ``y_i`` (1-based) raised to ``exp`` = +-1."""
        if not 1 <= i <= self.y_count:
            raise ValueError(f"no generator y{i}")
        return 2 * (i - 1) + (exp < 0)

    def gate_word(self, k: int) -> Word:
        """Word of the gate letter ``g_k``; empty for ``k == 1``."""
        if not 1 <= k <= self.gate_count:
            raise ValueError(f"gate {k} out of range 1..{self.gate_count}")
        if k == 1:
            return IDENTITY
        return (2 * (self.y_count + k - 2),)

    def is_y_letter(self, letter: int) -> bool:
        return letter >> 1 < self.y_count

    def gate_of(self, letter: int) -> int:
        """Gate id ``k`` of a gate letter."""
        return (letter >> 1) - self.y_count + 2

    def validate(self, word: Iterable[int]) -> Word:
        word = tuple(word)
        bound = 2 * self.rank
        for letter in word:
            if not (isinstance(letter, int) and 0 <= letter < bound):
                raise ValueError(f"letter id {letter!r} not in {self}")
        return word

    def parse_word(self, text: str) -> Word:
        """Parse ``"y1 y2^-1 g3"``; ``"1"`` or an empty string is the identity."""
        tokens = text.split()
        if tokens == ["1"]:
            return IDENTITY
        letters = []
        for tok in tokens:
            name, sep, exp = tok.partition("^")
            if sep and exp not in ("-1", "1"):
                raise ParseError(f"bad exponent in {tok!r} (only ^-1 allowed)")
            letters.append(2 * self.generator(name) + (exp == "-1"))
        return reduce_word(letters)

    def format_word(self, word: Iterable[int]) -> str:
        parts = [self.names[x >> 1] + ("^-1" if x & 1 else "") for x in word]
        return " ".join(parts) if parts else "1"

    def parse_element(self, text: str) -> "AlgebraElement":
        """Parse ``"2 y1 - 1/2 g2 y1^-1 + 1"`` into an :class:`AlgebraElement`."""
        terms = {}
        for coeff, body in _split_terms(text):
            word = self.parse_word(body) if body else IDENTITY
            terms[word] = terms.get(word, 0) + coeff
        return AlgebraElement(terms)

    def format_element(self, x: "AlgebraElement") -> str:
        return _format_terms(((self.format_word(w), c) for w, c in x.sorted_items()))

    def format_class(self, c: "CyclicWord") -> str:
        return self.format_word(c)

    def parse_class(self, text: str) -> "CyclicWord":
        text = text.strip()
        if text.startswith("<") and text.endswith(">"):
            text = text[1:-1]
        return conjugacy_class(self.parse_word(text))


_TERM_RE = re.compile(r"\s*([+-])?\s*(\d+(?:/\d+)?(?![\w^]))?\s*([^+-]*)")


def _split_terms(text: str):
    """Yield ``(coeff, body)`` for a signed sum of ``coeff body`` terms."""
    text = text.strip()
    if not text:
        raise ParseError("empty algebraic expression")
    # '-' inside an exponent is not a term separator
    protected = text.replace("^-", "^~")
    pos = 0
    first = True
    while pos < len(protected):
        m = _TERM_RE.match(protected, pos)
        if m is None or m.end() == pos:
            raise ParseError(f"cannot parse {text!r} near position {pos}")
        sign, num, body = m.groups()
        if sign is None and not first:
            raise ParseError(f"missing operator in {text!r}")
        body = body.strip().replace("^~", "^-")
        if num is None and not body:
            raise ParseError(f"empty term in {text!r}")
        coeff = Fraction(num) if num is not None else Fraction(1)
        if sign == "-":
            coeff = -coeff
        yield _normalize(coeff), body
        pos = m.end()
        first = False


def _normalize(c: Coeff) -> Coeff:
    if isinstance(c, Fraction) and c.denominator == 1:
        return int(c)
    return c


def format_coeff(c: Coeff) -> str:
    return str(Fraction(c))


def _format_terms(items) -> str:
    out = []
    for body, c in items:
        c = Fraction(c)
        mag = abs(c)
        if body == "1":
            piece = str(mag)
        elif mag == 1:
            piece = body
        else:
            piece = f"{mag} {body}"
        if not out:
            out.append(piece if c > 0 else f"-{piece}")
        else:
            out.append(("+ " if c > 0 else "- ") + piece)
    return " ".join(out) if out else "0"


# ---------------------------------------------------------------------------
# words


def reduce_word(raw: Iterable[int]) -> Word:
    """Free reduction of a letter sequence."""
    out = []
    for x in raw:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def multiply(*words: Word) -> Word:
    """Reduced product of words."""
    out = []
    for w in words:
        for x in w:
            if out and out[-1] == x ^ 1:
                out.pop()
            else:
                out.append(x)
    return tuple(out)


def invert(word: Word) -> Word:
    return tuple(x ^ 1 for x in reversed(word))


def word_sort_key(word: Word):
    return (len(word), word)


class CyclicWord(tuple):
    """Canonical representative of a conjugacy class of the free group.

    Build instances with :func:`conjugacy_class`; the constructor trusts its
    input.
    """

    __slots__ = ()

    def __repr__(self):
        return f"CyclicWord({tuple(self)!r})"

    @property
    def word(self) -> Word:
        return tuple(self)


def cyclic_reduce(word: Word) -> Word:
    word = reduce_word(word)
    i, j = 0, len(word)
    while j - i >= 2 and word[i] == word[j - 1] ^ 1:
        i += 1
        j -= 1
    return word[i:j]


def least_rotation(word: Word) -> Word:
    n = len(word)
    if n < 2:
        return word
    doubled = word + word
    best = min(range(n), key=lambda i: doubled[i:i + n])
    return doubled[best:best + n]


_class_cache: Dict[Word, CyclicWord] = {}


def conjugacy_class(word: Iterable[int]) -> CyclicWord:
    """Canonical cyclic word of the conjugacy class of ``word``."""
    word = tuple(word)
    cached = _class_cache.get(word)
    if cached is not None:
        return cached
    c = CyclicWord(least_rotation(cyclic_reduce(word)))
    if len(_class_cache) > 200_000:
        _class_cache.clear()
    _class_cache[word] = c
    return c


TRIVIAL_CLASS = CyclicWord(())


# ---------------------------------------------------------------------------
# linear combinations


class _Linear(Mapping):
    """Finite map basis -> exact nonzero coefficient."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for key, c in items:
                if not isinstance(c, Rational):
                    raise TypeError(f"coefficient {c!r} is not an exact rational")
                key = self._key(key)
                total = clean.get(key, 0) + c
                if total:
                    clean[key] = _normalize(total)
                else:
                    clean.pop(key, None)
        self._terms = clean

    @staticmethod
    def _key(key):
        return key

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    def __getitem__(self, key):
        return self._terms[key]

    def __iter__(self) -> Iterator:
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, _Linear):
            return type(self) is type(other) and self._terms == other._terms
        if other == 0:
            return not self._terms
        return NotImplemented

    def __hash__(self):
        return hash((type(self), frozenset(self._terms.items())))

    def __bool__(self):
        return bool(self._terms)

    def __add__(self, other):
        if isinstance(other, type(self)):
            out = dict(self._terms)
            for k, c in other._terms.items():
                t = out.get(k, 0) + c
                if t:
                    out[k] = t
                else:
                    del out[k]
            return self._raw(out)
        if other == 0:
            return self
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return self._raw({k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, r: Coeff):
        if not isinstance(r, Rational):
            raise TypeError(f"scalar {r!r} is not an exact rational")
        if not r:
            return self._raw({})
        return self._raw({k: _normalize(c * r) for k, c in self._terms.items()})

    def sorted_items(self):
        return sorted(self._terms.items(), key=lambda kv: word_sort_key(kv[0]))


class AlgebraElement(_Linear):
    """Element of the group algebra ``Q[pi]``: reduced words with coefficients."""

    __slots__ = ()

    @staticmethod
    def _key(key):
        return reduce_word(key)

    @classmethod
    def word(cls, w: Word, coeff: Coeff = 1) -> "AlgebraElement":
        return cls({w: coeff})

    @classmethod
    def one(cls) -> "AlgebraElement":
        return cls({IDENTITY: 1})

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            out: Dict[Word, Coeff] = {}
            for u, a in self._terms.items():
                for v, b in other._terms.items():
                    w = multiply(u, v)
                    t = out.get(w, 0) + a * b
                    if t:
                        out[w] = t
                    else:
                        del out[w]
            return AlgebraElement._raw(out)
        if isinstance(other, Rational):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Rational):
            return self.scale(other)
        return NotImplemented

    def __repr__(self):
        return f"AlgebraElement({dict(self.sorted_items())!r})"


class LoopCombination(_Linear):
    """Finite rational combination of conjugacy classes (an element of M(X))."""

    __slots__ = ()

    @staticmethod
    def _key(key):
        if isinstance(key, CyclicWord):
            return key
        return conjugacy_class(key)

    @classmethod
    def of(cls, c, coeff: Coeff = 1) -> "LoopCombination":
        return cls({c: coeff})

    def __mul__(self, other):
        if isinstance(other, Rational):
            return self.scale(other)
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"LoopCombination({dict(self.sorted_items())!r})"


def add_into(acc: Dict, key, c: Coeff) -> None:
    """Accumulate ``c`` at ``key`` in a plain dict, dropping zeros."""
    t = acc.get(key, 0) + c
    if t:
        acc[key] = t
    else:
        acc.pop(key, None)


def project(x: AlgebraElement) -> LoopCombination:
    """Projection ``A -> A/[A, A]`` onto conjugacy classes."""
    out: Dict[CyclicWord, Coeff] = {}
    for w, c in x.items():
        add_into(out, conjugacy_class(w), c)
    return LoopCombination._raw(out)


def aug(x: AlgebraElement) -> Coeff:
    """Augmentation: every group element goes to 1."""
    return _normalize(sum(x.values(), 0))
