"""Trace polynomials, induced brackets and exact evaluation at representations.

The trace algebra is modelled by the free commutative polynomial algebra on
symbols ``T[c]`` (one per conjugacy class ``c``).  Functions on the actual
trace algebra are compared by evaluating at exact rational matrix
representations of the free group.
"""

from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from numbers import Rational
from typing import Callable, Dict, Iterable, Mapping, Sequence, Tuple, Union

import numpy as np

from .algebra import (
    Alphabet,
    Coeff,
    CyclicWord,
    LoopCombination,
    ParseError,
    _format_terms,
    _normalize,
    _split_terms,
    add_into,
    conjugacy_class,
    word_sort_key,
)

Monomial = Tuple[Tuple[CyclicWord, int], ...]
ONE: Monomial = ()


def _mono_mul(m1: Monomial, m2: Monomial) -> Monomial:
    if not m1:
        return m2
    if not m2:
        return m1
    exps = dict(m1)
    for c, e in m2:
        exps[c] = exps.get(c, 0) + e
    return tuple(sorted(exps.items(), key=lambda ce: word_sort_key(ce[0])))


class TracePolynomial(Mapping):
    """Commutative polynomial in class symbols with exact coefficients."""

    __slots__ = ("_terms",)

    def __init__(self, terms=None):
        clean: Dict[Monomial, Coeff] = {}
        if terms:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for mono, c in items:
                if not isinstance(c, Rational):
                    raise TypeError(f"coefficient {c!r} is not an exact rational")
                mono = _mono_mul(ONE, tuple(mono)) if mono else ONE
                add_into(clean, mono, c)
        self._terms = clean

    @classmethod
    def _raw(cls, terms):
        obj = cls.__new__(cls)
        obj._terms = terms
        return obj

    @classmethod
    def T(cls, c, coeff: Coeff = 1) -> "TracePolynomial":
        """The trace symbol of a class (words are reduced to their class)."""
        if not isinstance(c, CyclicWord):
            c = conjugacy_class(c)
        return cls._raw({((c, 1),): coeff} if coeff else {})

    @classmethod
    def constant(cls, r: Coeff) -> "TracePolynomial":
        return cls._raw({ONE: r} if r else {})

    @classmethod
    def linear(cls, x: LoopCombination) -> "TracePolynomial":
        """Image of a combination of classes under the trace."""
        return cls._raw({((c, 1),): r for c, r in x.items()})

    def __getitem__(self, key):
        return self._terms[key]

    def __iter__(self):
        return iter(self._terms)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def __eq__(self, other):
        if isinstance(other, TracePolynomial):
            return self._terms == other._terms
        if isinstance(other, Rational):
            return self == TracePolynomial.constant(other)
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._terms.items()))

    def __add__(self, other):
        if isinstance(other, Rational):
            other = TracePolynomial.constant(other)
        if not isinstance(other, TracePolynomial):
            return NotImplemented
        out = dict(self._terms)
        for m, c in other._terms.items():
            add_into(out, m, c)
        return TracePolynomial._raw(out)

    __radd__ = __add__

    def __neg__(self):
        return TracePolynomial._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, Rational):
            if not other:
                return TracePolynomial()
            return TracePolynomial._raw({m: _normalize(c * other) for m, c in self._terms.items()})
        if not isinstance(other, TracePolynomial):
            return NotImplemented
        out: Dict[Monomial, Coeff] = {}
        for m1, a in self._terms.items():
            for m2, b in other._terms.items():
                add_into(out, _mono_mul(m1, m2), a * b)
        return TracePolynomial._raw(out)

    __rmul__ = __mul__

    def __pow__(self, e: int):
        out = TracePolynomial.constant(1)
        for _ in range(e):
            out = out * self
        return out

    def variables(self):
        seen = {}
        for m in self._terms:
            for c, _ in m:
                seen[c] = None
        return list(seen)

    def diff(self, c: CyclicWord) -> "TracePolynomial":
        """Partial derivative with respect to ``T[c]``."""
        out: Dict[Monomial, Coeff] = {}
        for m, r in self._terms.items():
            for idx, (v, e) in enumerate(m):
                if v == c:
                    rest = m[:idx] + (((v, e - 1),) if e > 1 else ()) + m[idx + 1:]
                    add_into(out, rest, r * e)
        return TracePolynomial._raw(out)

    def degree(self) -> int:
        return max((sum(e for _, e in m) for m in self._terms), default=0)

    def sorted_items(self):
        def key(item):
            m = item[0]
            return (sum(e for _, e in m), [(word_sort_key(c), e) for c, e in m])
        return sorted(self._terms.items(), key=key)

    def __repr__(self):
        return f"TracePolynomial({dict(self.sorted_items())!r})"


BaseRule = Union[Callable[..., TracePolynomial], Mapping[Tuple[CyclicWord, ...], TracePolynomial]]


class MissingBaseValue(KeyError):
    pass


def poly_brace_extend(base: BaseRule, args: Sequence[TracePolynomial]) -> TracePolynomial:
    """Unique brace on polynomials agreeing with ``base`` on symbol tuples.

    ``F(a_1..a_m) = sum over symbols x_i of prod(da_i/dx_i) * f(x_1..x_m)``.
    """
    if not args:
        raise ValueError("need at least one argument")
    partials = []
    for a in args:
        partials.append([(x, a.diff(x)) for x in a.variables()])
    total = TracePolynomial()
    for combo in product(*partials):
        xs = tuple(x for x, _ in combo)
        if callable(base):
            value = base(*xs)
        else:
            try:
                value = base[xs]
            except KeyError:
                raise MissingBaseValue(f"base rule undefined on {xs}") from None
        if not value:
            continue
        coeff = TracePolynomial.constant(1)
        for _, da in combo:
            coeff = coeff * da
        total = total + coeff * value
    return total


@dataclass
class InducedBrace:
    """An m-bracket on classes, pushed to trace polynomials."""

    arity: int
    rule: Callable[..., LoopCombination]
    _cache: Dict[Tuple[CyclicWord, ...], TracePolynomial] = field(default_factory=dict, repr=False)

    def on_symbols(self, *xs: CyclicWord) -> TracePolynomial:
        val = self._cache.get(xs)
        if val is None:
            val = self._cache[xs] = TracePolynomial.linear(self.rule(*xs))
        return val

    def __call__(self, *args: TracePolynomial) -> TracePolynomial:
        return induced_bracket(self, args)


def induced_bracket(br: InducedBrace, args: Sequence[TracePolynomial]) -> TracePolynomial:
    if len(args) != br.arity:
        raise ValueError(f"bracket of arity {br.arity} given {len(args)} arguments")
    return poly_brace_extend(br.on_symbols, args)


def zero_rule(*xs) -> LoopCombination:
    return LoopCombination()


def quasi_jacobi_sides(two: InducedBrace, three: InducedBrace, x, y, z):
    """``(L, R)`` of the quasi-Jacobi identity for induced brackets."""
    left = two(two(x, y), z) + two(two(y, z), x) + two(two(z, x), y)
    right = three(x, y, z) - three(z, y, x)
    return left, right


# ---------------------------------------------------------------------------
# representations


def _mat(rows) -> np.ndarray:
    a = np.empty((len(rows), len(rows)), dtype=object)
    for i, row in enumerate(rows):
        if len(row) != len(rows):
            raise ValueError("matrix must be square")
        for j, v in enumerate(row):
            a[i, j] = _normalize(Fraction(v))
    return a


def identity_matrix(n: int) -> np.ndarray:
    return _mat([[int(i == j) for j in range(n)] for i in range(n)])


def exact_inverse(m: np.ndarray) -> np.ndarray:
    """Inverse over the rationals; raises ``ValueError`` if singular."""
    import sympy  # only needed for parsed or conjugating matrices

    sm = sympy.Matrix([[sympy.Rational(v.numerator, v.denominator) for v in map(Fraction, row)]
                       for row in m.tolist()])
    if sm.det() == 0:
        raise ValueError("matrix is singular")
    inv = sm.inv()
    return _mat([[Fraction(int(v.p), int(v.q)) for v in inv.row(i)] for i in range(inv.rows)])


@dataclass(frozen=True)
class RepresentationPoint:
    """Invertible exact matrices for the free generators (inverses stored)."""

    n: int
    matrices: Mapping[int, np.ndarray]
    inverses: Mapping[int, np.ndarray]

    def __post_init__(self):
        eye = identity_matrix(self.n)
        for j, m in self.matrices.items():
            if m.shape != (self.n, self.n):
                raise ValueError(f"generator {j}: expected {self.n}x{self.n} matrix")
            if not np.array_equal(m.dot(self.inverses[j]), eye):
                raise ValueError(f"generator {j}: stored inverse is wrong")

    @classmethod
    def from_matrices(cls, n: int, matrices: Mapping[int, object]) -> "RepresentationPoint":
        mats = {j: _mat(m) if not isinstance(m, np.ndarray) else m for j, m in matrices.items()}
        return cls(n, mats, {j: exact_inverse(m) for j, m in mats.items()})

    def letter(self, x: int) -> np.ndarray:
        try:
            return self.inverses[x >> 1] if x & 1 else self.matrices[x >> 1]
        except KeyError:
            raise KeyError(f"representation has no matrix for generator {x >> 1}") from None

    def word_matrix(self, word: Iterable[int]) -> np.ndarray:
        out = identity_matrix(self.n)
        for x in word:
            out = out.dot(self.letter(x))
        return out

    def trace(self, c: Iterable[int]) -> Coeff:
        return _normalize(sum(self.word_matrix(c).diagonal(), 0))

    def __eq__(self, other):
        if not isinstance(other, RepresentationPoint):
            return NotImplemented
        return (self.n == other.n and self.matrices.keys() == other.matrices.keys()
                and all(np.array_equal(self.matrices[j], other.matrices[j]) for j in self.matrices))


def evaluate(p: TracePolynomial, rho: RepresentationPoint) -> Coeff:
    """Value of ``p`` with ``T[c]`` sent to the trace of ``c`` under ``rho``."""
    traces: Dict[CyclicWord, Coeff] = {}
    total: Coeff = 0
    for mono, r in p.items():
        term = r
        for c, e in mono:
            t = traces.get(c)
            if t is None:
                t = traces[c] = rho.trace(c)
            term *= t ** e
        total += term
    return _normalize(Fraction(total)) if isinstance(total, Fraction) else total


def _elementary(n: int, i: int, j: int, t) -> np.ndarray:
    m = identity_matrix(n)
    m[i, j] = t
    return m


def random_representation(n: int, alphabet: Alphabet, seed: Union[int, random.Random, None] = 0,
                          steps: int = 4, bound: int = 2) -> RepresentationPoint:
    """Products of elementary matrices with bounded integer entries and a random sign flip.

    Determinants are +-1 and inverses are assembled from the inverse factors.
    For ``n == 1`` the matrices are random nonzero rationals.
    """
    if n < 1:
        raise ValueError("dimension must be >= 1")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    mats, invs = {}, {}
    for j in range(alphabet.rank):
        if n == 1:
            v = Fraction(rng.choice([-1, 1]) * rng.randint(1, 3 * bound), rng.randint(1, bound + 1))
            mats[j], invs[j] = _mat([[v]]), _mat([[1 / v]])
            continue
        m, inv = identity_matrix(n), identity_matrix(n)
        for _ in range(steps):
            i, k = rng.sample(range(n), 2)
            t = rng.choice([s for s in range(-bound, bound + 1) if s])
            m = m.dot(_elementary(n, i, k, t))
            inv = _elementary(n, i, k, -t).dot(inv)
        if rng.random() < 0.5:
            flip = _elementary(n, 0, 0, -1)
            m, inv = m.dot(flip), flip.dot(inv)
        mats[j], invs[j] = m, inv
    return RepresentationPoint(n, mats, invs)


def conjugate_representation(rho: RepresentationPoint, g) -> RepresentationPoint:
    """Every generator matrix ``M`` replaced by ``g M g^-1``."""
    g = g if isinstance(g, np.ndarray) else _mat(g)
    if g.shape != (rho.n, rho.n):
        raise ValueError("conjugating matrix has the wrong size")
    ginv = exact_inverse(g)
    return RepresentationPoint(
        rho.n,
        {j: g.dot(m).dot(ginv) for j, m in rho.matrices.items()},
        {j: g.dot(m).dot(ginv) for j, m in rho.inverses.items()},
    )


# ---------------------------------------------------------------------------
# text formats


_SYMBOL_RE = re.compile(r"T\[([^\]]*)\](?:\^(\d+))?")


def parse_trace_polynomial(alphabet: Alphabet, text: str) -> TracePolynomial:
    """Parse ``"2 T[y1]^2 T[g2 y1] - 3/2"``."""
    total = TracePolynomial()
    for coeff, body in _split_terms(text.replace("T[", " T[")):
        term = TracePolynomial.constant(coeff)
        pos = 0
        body = body.strip()
        while pos < len(body):
            m = _SYMBOL_RE.match(body, pos)
            if m is None:
                raise ParseError(f"bad trace monomial {body!r}")
            term = term * TracePolynomial.T(alphabet.parse_class(m.group(1))) ** int(m.group(2) or 1)
            pos = m.end()
            while pos < len(body) and body[pos] in " *":
                pos += 1
        total = total + term
    return total


def format_trace_polynomial(alphabet: Alphabet, p: TracePolynomial) -> str:
    items = []
    for mono, c in p.sorted_items():
        factors = [f"T[{alphabet.format_class(v)}]" + (f"^{e}" if e > 1 else "") for v, e in mono]
        items.append((" ".join(factors) if factors else "1", c))
    return _format_terms(items)


def _parse_matrix(text: str):
    text = text.strip()
    if not (text.startswith("[[") and text.endswith("]]")):
        raise ParseError(f"bad matrix {text!r}")
    rows = []
    for row in text[2:-2].split("],["):
        rows.append([Fraction(v.strip()) for v in row.split(",")])
    return rows


def _top_level_tokens(text: str):
    """Split on whitespace outside square brackets."""
    tokens, buf, depth = [], [], 0
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch.isspace() and depth == 0:
            if buf:
                tokens.append("".join(buf))
                buf = []
        elif not ch.isspace():
            buf.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced brackets in {text!r}")
    if buf:
        tokens.append("".join(buf))
    return tokens


def parse_representation(alphabet: Alphabet, text: str) -> RepresentationPoint:
    """Parse ``"n=2 y1=[[1,1],[0,1]] g2=[[...]]"`` (a leading ``rep`` is allowed)."""
    tokens = _top_level_tokens(text)
    if tokens and tokens[0] == "rep":
        tokens = tokens[1:]
    n = None
    mats = {}
    for tok in tokens:
        key, sep, val = tok.partition("=")
        if not sep:
            raise ParseError(f"expected KEY=VALUE, got {tok!r}")
        try:
            if key == "n":
                n = int(val)
            else:
                mats[alphabet.generator(key)] = _parse_matrix(val)
        except (ValueError, ZeroDivisionError) as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad value in {tok!r}: {exc}") from None
    if n is None:
        raise ParseError("representation needs n=DIM")
    try:
        return RepresentationPoint.from_matrices(n, mats)
    except ValueError as exc:
        raise ParseError(f"bad representation: {exc}") from None


def format_representation(alphabet: Alphabet, rho: RepresentationPoint) -> str:
    parts = [f"rep n={rho.n}"]
    for j in sorted(rho.matrices):
        rows = ",".join("[" + ",".join(str(Fraction(v)) for v in row) + "]"
                        for row in rho.matrices[j].tolist())
        parts.append(f"{alphabet.names[j]}=[{rows}]")
    return " ".join(parts)
