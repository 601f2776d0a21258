"""Randomized exact identity checks.

Every instance draws from its own ``random.Random`` seeded by
``(seed, suite, index)``, so any failing instance can be replayed alone and
suites can be fanned out across processes without changing the report.
"""

from __future__ import annotations

import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

from .algebra import AlgebraElement, Alphabet, Word, multiply, project
from .brackets import (
    ClassBrackets,
    based_d,
    bracket2,
    bracket2_parts,
    mu_gate,
    mu_refined,
    mu_total,
)
from .foxcalc import (
    FoxDerivative,
    delta_apply,
    fox_apply,
    fox_brace,
    fox_lifted_derivation,
    gate_derivative,
    gate_fox_derivative,
)
from .surface import (
    GenericLoop,
    QuasiSurface,
    based_word,
    class_to_loop,
    close_loop,
    loop_to_class,
    push_move,
    random_based_loop,
    random_loop,
    random_surface,
    rotate_turns,
)
from .tracealg import (
    InducedBrace,
    TracePolynomial,
    conjugate_representation,
    evaluate,
    format_trace_polynomial as fmt,
    quasi_jacobi_sides,
    random_representation,
)
from .workspace import format_based, format_loop


@dataclass
class CheckOptions:
    max_turns: int = 5
    max_ylen: int = 3
    max_gates: int = 4
    max_ygens: int = 3
    gates: Optional[int] = None
    ygens: Optional[int] = None
    dims: Sequence[int] = (1, 2, 3)
    points: int = 20

    def surface(self, rng: random.Random) -> QuasiSurface:
        X = random_surface(rng, self.max_gates, self.max_ygens)
        return QuasiSurface(self.gates or X.gates, X.ygens if self.ygens is None else self.ygens)

    def loop(self, X: QuasiSurface, rng: random.Random, **kw) -> GenericLoop:
        return random_loop(X, kw.get("max_turns", self.max_turns), kw.get("max_ylen", self.max_ylen),
                           rng, min_turns=kw.get("min_turns", 0))


class CheckFailure(AssertionError):
    pass


def _require(ok: bool, what: str, *context: str) -> None:
    if not ok:
        raise CheckFailure("\n".join([what, *context]))


def _describe(X: QuasiSurface, **loops) -> List[str]:
    out = [f"surface gates={X.gates} ygens={X.ygens}"]
    for name, a in loops.items():
        if isinstance(a, GenericLoop):
            out.append(f"loop {name}")
            out.extend("  " + line for line in format_loop(X.alphabet, a))
        else:
            out.append(f"based {name}")
            out.extend("  " + line for line in format_based(X.alphabet, a))
    return out


def random_word(alpha: Alphabet, rng: random.Random, max_len: int = 6) -> Word:
    out: List[int] = []
    if alpha.rank == 0:
        return ()
    for _ in range(rng.randint(0, max_len)):
        out.append(rng.randrange(2 * alpha.rank))
    return multiply(tuple(out))


def random_element(alpha: Alphabet, rng: random.Random, terms: int = 3, max_len: int = 4) -> AlgebraElement:
    return AlgebraElement({random_word(alpha, rng, max_len): rng.choice([-2, -1, 1, 2, 3])
                           for _ in range(rng.randint(0, terms))})


def random_fox(alpha: Alphabet, rng: random.Random) -> FoxDerivative:
    return FoxDerivative({j: random_element(alpha, rng, 2, 3) for j in range(alpha.rank)}, alpha.rank)


def random_trace_poly(X: QuasiSurface, rng: random.Random, opts: CheckOptions) -> TracePolynomial:
    p = TracePolynomial()
    for _ in range(rng.randint(1, 2)):
        mono = TracePolynomial.constant(rng.choice([-2, -1, 1, 2]))
        for _ in range(rng.randint(1, 2)):
            c = loop_to_class(X, opts.loop(X, rng, max_turns=3, max_ylen=2, min_turns=1))
            mono = mono * TracePolynomial.T(c)
        p = p + mono
    return p


# ---------------------------------------------------------------------------
# suites: one function per randomized instance


def check_skew(rng, opts):
    X = opts.surface(rng)
    a, b = opts.loop(X, rng), opts.loop(X, rng)
    _require(bracket2(X, a, b) + bracket2(X, b, a) == 0, "[a,b] + [b,a] != 0", *_describe(X, a=a, b=b))


def check_cyclic(rng, opts):
    X = opts.surface(rng)
    m = rng.choice([2, 3])
    loops = [opts.loop(X, rng) for _ in range(m)]
    shifted = loops[-1:] + loops[:-1]
    names = {f"a{i}": a for i, a in enumerate(loops)}
    _require(mu_total(X, loops) == mu_total(X, shifted), f"mu^{m} not cyclically symmetric",
             *_describe(X, **names))
    for k in range(1, X.gates + 1):
        _require(mu_gate(X, k, loops) == mu_gate(X, k, shifted),
                 f"gate bracket {k} not cyclically symmetric", *_describe(X, **names))


def check_mu1(rng, opts):
    X = opts.surface(rng)
    a = opts.loop(X, rng)
    _require(mu_total(X, [a]) == 0, "mu^1(a) != 0", *_describe(X, a=a))


def check_jacobi(rng, opts):
    X = opts.surface(rng)
    loops = [opts.loop(X, rng) for _ in range(3)]
    x, y, z = (loop_to_class(X, a) for a in loops)
    defect = ClassBrackets(X).quasi_jacobi_defect(x, y, z)
    _require(defect == 0, f"quasi-Jacobi defect {defect!r}", *_describe(X, x=loops[0], y=loops[1], z=loops[2]))


def _variants(X: QuasiSurface, a: GenericLoop, rng: random.Random):
    yield "round-trip", class_to_loop(X, loop_to_class(X, a))
    if not a.is_singular:
        yield "rotation", rotate_turns(a, rng.randrange(len(a.turns)))
    i = rng.randrange(max(1, len(a.turns)))
    wlen = len(a.singular_class) if a.is_singular else len(a.turns[i].y_word)
    k = rng.randint(1, X.gates)
    pushed = push_move(X, a, i, rng.randint(0, wlen), k, "in")
    yield "push", pushed
    yield "push-undo", push_move(X, pushed, i, 0, k, "out")


def check_invariance(rng, opts):
    X = opts.surface(rng)
    a, b, c = opts.loop(X, rng), opts.loop(X, rng), opts.loop(X, rng)
    ref2 = bracket2(X, a, b)
    refm2 = mu_total(X, [a, b])
    refm3 = mu_total(X, [a, b, c])
    for name, a2 in _variants(X, a, rng):
        ctx = _describe(X, a=a, b=b, c=c, moved=a2)
        _require(loop_to_class(X, a2) == loop_to_class(X, a), f"{name} changed the class", *ctx)
        _require(bracket2(X, a2, b) == ref2, f"[a,b] changed under {name} of a", *ctx)
        _require(mu_total(X, [a2, b]) == refm2, f"mu^2 changed under {name} of a", *ctx)
        _require(mu_total(X, [a2, b, c]) == refm3, f"mu^3 changed under {name} of a", *ctx)
    for name, b2 in _variants(X, b, rng):
        ctx = _describe(X, a=a, b=b, moved=b2)
        _require(bracket2(X, a, b2) == ref2, f"[a,b] changed under {name} of b", *ctx)


def check_derivation(rng, opts):
    X = opts.surface(rng)
    half = max(1, opts.max_turns // 2)
    a = random_based_loop(X, half, opts.max_ylen, rng)
    a2 = random_based_loop(X, half, opts.max_ylen, rng)
    b = opts.loop(X, rng)
    ctx = _describe(X, a=a, a2=a2, b=b)
    wa = AlgebraElement.word(based_word(X, a))
    wa2 = AlgebraElement.word(based_word(X, a2))
    prod = a * a2
    _require(based_word(X, prod) == multiply(based_word(X, a), based_word(X, a2)), "concatenation word", *ctx)
    lhs = based_d(X, prod, b)
    _require(lhs == based_d(X, a, b) * wa2 + wa * based_d(X, a2, b), "based_d is not a derivation", *ctx)
    _require(project(based_d(X, a, b)) == bracket2(X, close_loop(a), b), "based_d does not lift [-,b]", *ctx)
    m = rng.choice([1, 2, 3])
    rest = [opts.loop(X, rng, max_turns=3) for _ in range(m - 1)]
    for k in range(1, X.gates + 1):
        lhs = mu_refined(X, k, prod, rest)
        rhs = mu_refined(X, k, a, rest) * wa2 + wa * mu_refined(X, k, a2, rest)
        _require(lhs == rhs, f"refined gate bracket {k} (m={m}) is not a derivation", *ctx)
        _require(project(mu_refined(X, k, a, rest)) == mu_gate(X, k, [close_loop(a), *rest]),
                 f"refined gate bracket {k} (m={m}) does not lift", *ctx)


def check_fox(rng, opts):
    X = opts.surface(rng)
    alpha = X.alphabet
    d = random_fox(alpha, rng)
    x, y = random_word(alpha, rng), random_word(alpha, rng)
    ex, ey = AlgebraElement.word(x), AlgebraElement.word(y)
    ctx = [f"surface gates={X.gates} ygens={X.ygens}", f"x = {alpha.format_word(x)}",
           f"y = {alpha.format_word(y)}"]
    _require(delta_apply(d, ex * ey) == delta_apply(d, ey * ex), "Delta(xy) != Delta(yx)", *ctx)
    _require(project(delta_apply(d, ex * ey - ey * ex)) == 0, "p(Delta(xy - yx)) != 0", *ctx)
    F = random_element(alpha, rng)
    lhs = fox_lifted_derivation(d, F, ex * ey)
    rhs = fox_lifted_derivation(d, F, ex) * ey + ex * fox_lifted_derivation(d, F, ey)
    _require(lhs == rhs, "lifted derivation fails Leibniz", *ctx)
    _require(fox_apply(d, ex * ey) == fox_apply(d, ex) + ex * fox_apply(d, ey), "Fox cocycle rule", *ctx)
    k = rng.randint(1, X.gates)
    a = random_based_loop(X, 3, opts.max_ylen, rng)
    b = random_based_loop(X, 3, opts.max_ylen, rng)
    ctx = _describe(X, a=a, b=b) + [f"gate {k}"]
    wa = AlgebraElement.word(based_word(X, a))
    _require(gate_fox_derivative(X, k, a * b) == gate_fox_derivative(X, k, a) + wa * gate_fox_derivative(X, k, b),
             "gate derivative fails the cocycle rule", *ctx)
    _require(gate_fox_derivative(X, k, a) == fox_apply(gate_derivative(X, k), wa),
             "gate derivative disagrees with its values on generators", *ctx)


def check_fox_gate_equiv(rng, opts):
    X = opts.surface(rng)
    m = rng.choice([1, 2, 3])
    k = rng.randint(1, X.gates)
    loops = [opts.loop(X, rng, max_turns=4) for _ in range(m)]
    classes = [loop_to_class(X, a) for a in loops]
    d = gate_derivative(X, k)
    ctx = _describe(X, **{f"a{i}": a for i, a in enumerate(loops)}) + [f"gate {k}"]
    _require(fox_brace([d] * m, classes) == mu_gate(X, k, loops), "Fox brace != gate bracket", *ctx)
    shift = random_word(X.alphabet, rng, 4)
    _require(fox_brace([d.times(shift)] * m, classes) == mu_gate(X, k, loops),
             "Fox brace depends on the gate reference path", *ctx)


def check_consistency(rng, opts):
    X = opts.surface(rng)
    a, b = opts.loop(X, rng), opts.loop(X, rng)
    disk, gate = bracket2_parts(X, a, b)
    ctx = _describe(X, a=a, b=b)
    _require(gate == -mu_total(X, [a, b]), "gate term of [a,b] != -mu^2(a,b)", *ctx)
    s = bracket2(X, a, b) + mu_total(X, [a, b])
    _require(s == disk and all(c % 2 == 0 for c in s.values()), "[a,b] + mu^2 is not the even disk term", *ctx)


def check_trace(rng, opts):
    X = QuasiSurface(max(2, opts.gates or rng.randint(2, opts.max_gates)),
                     opts.ygens if opts.ygens is not None else rng.randint(1, opts.max_ygens))
    cb = ClassBrackets(X)
    two = InducedBrace(2, cb.bracket2_class)
    three = InducedBrace(3, cb.mu_class)
    x, y, z = (random_trace_poly(X, rng, opts) for _ in range(3))
    alpha = X.alphabet
    ctx = [f"surface gates={X.gates} ygens={X.ygens}", f"x = {fmt(alpha, x)}",
           f"y = {fmt(alpha, y)}", f"z = {fmt(alpha, z)}"]
    _require(two(x * y, z) == x * two(y, z) + two(x, z) * y, "induced bracket fails Leibniz", *ctx)
    _require(two(x, y) == -two(y, x), "induced bracket not skew", *ctx)
    _require(three(x, y, z) == three(z, x, y), "induced 3-bracket not cyclic", *ctx)
    left, right = quasi_jacobi_sides(two, three, x, y, z)
    _require(left == right, "quasi-Jacobi fails symbolically", *ctx)
    for n in opts.dims:
        for _ in range(opts.points):
            rho = random_representation(n, alpha, rng)
            _require(evaluate(left, rho) == evaluate(right, rho), f"quasi-Jacobi fails at a point (n={n})", *ctx)
        g = random_representation(n, Alphabet(1), rng).matrices[0]
        _require(evaluate(left, conjugate_representation(rho, g)) == evaluate(left, rho),
                 f"evaluation not conjugation invariant (n={n})", *ctx)


SUITES: Dict[str, Callable] = {
    "skew": check_skew,
    "cyclic": check_cyclic,
    "mu1": check_mu1,
    "jacobi": check_jacobi,
    "invariance": check_invariance,
    "derivation": check_derivation,
    "fox": check_fox,
    "fox-gate-equiv": check_fox_gate_equiv,
    "consistency": check_consistency,
    "trace": check_trace,
}


@dataclass
class SuiteReport:
    suite: str
    seed: int
    instances: int
    failures: List[int] = field(default_factory=list)
    counterexample: Optional[str] = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def render(self) -> str:
        head = f"{self.suite}: {'pass' if self.passed else 'FAIL'} ({self.instances} instances, seed {self.seed})"
        if self.passed:
            return head
        return (f"{head}\n  {len(self.failures)} failing instance(s); first is #{self.failures[0]}\n"
                + "\n".join("  " + line for line in self.counterexample.splitlines()))

    def as_dict(self) -> dict:
        return {"suite": self.suite, "seed": self.seed, "instances": self.instances,
                "passed": self.passed, "failures": self.failures,
                "counterexample": self.counterexample}


def instance_rng(suite: str, seed: int, index: int) -> random.Random:
    return random.Random(f"{seed}:{suite}:{index}")


def run_instance(suite: str, seed: int, index: int, opts: CheckOptions) -> Optional[str]:
    """``None`` on success, else the failure description."""
    try:
        SUITES[suite](instance_rng(suite, seed, index), opts)
    except CheckFailure as exc:
        return str(exc)
    except Exception as exc:  # a crash is reported like any other counterexample
        return f"error: {type(exc).__name__}: {exc}"
    return None


def _run_star(args):
    return run_instance(*args)


def run_suite(suite: str, instances: int, seed: int, opts: Optional[CheckOptions] = None,
              parallel: bool = False) -> SuiteReport:
    if suite not in SUITES:
        raise KeyError(f"unknown suite {suite!r}")
    opts = opts or CheckOptions()
    jobs = [(suite, seed, i, opts) for i in range(instances)]
    if parallel and instances > 1:
        with ProcessPoolExecutor() as pool:
            results = list(pool.map(_run_star, jobs, chunksize=max(1, instances // 32)))
    else:
        results = [_run_star(j) for j in jobs]
    report = SuiteReport(suite, seed, instances)
    for i, res in enumerate(results):
        if res is not None:
            report.failures.append(i)
            if report.counterexample is None:
                report.counterexample = f"instance {i}: {res}"
    return report
