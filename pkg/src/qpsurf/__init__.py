"""Exact brackets on loops in quasi-surfaces.

The modules build on each other: ``algebra`` (free groups, group algebras,
classes), ``surface`` (generic loops), ``brackets`` (gate m-brackets and the
2-bracket), ``foxcalc`` (Fox derivatives and their braces), ``tracealg``
(trace polynomials and representation points) and ``cli``.
"""

from .algebra import (
    AlgebraElement,
    Alphabet,
    CyclicWord,
    LoopCombination,
    ParseError,
    conjugacy_class,
    invert,
    multiply,
    project,
    reduce_word,
)
from .brackets import (
    ClassBrackets,
    based_d,
    bracket2,
    bracket2_linear,
    mu_gate,
    mu_linear,
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
    BasedGenericLoop,
    Crossing,
    GenericLoop,
    LoopError,
    QuasiSurface,
    Turn,
    class_to_loop,
    disk_intersections,
    loop_to_class,
    push_move,
    random_loop,
)
from .tracealg import (
    InducedBrace,
    RepresentationPoint,
    TracePolynomial,
    conjugate_representation,
    evaluate,
    induced_bracket,
    poly_brace_extend,
    random_representation,
)

__version__ = "0.1.0"

__all__ = [
    "AlgebraElement",
    "Alphabet",
    "CyclicWord",
    "LoopCombination",
    "ParseError",
    "conjugacy_class",
    "invert",
    "multiply",
    "project",
    "reduce_word",
    "ClassBrackets",
    "based_d",
    "bracket2",
    "bracket2_linear",
    "mu_gate",
    "mu_linear",
    "mu_refined",
    "mu_total",
    "FoxDerivative",
    "delta_apply",
    "fox_apply",
    "fox_brace",
    "fox_lifted_derivation",
    "gate_derivative",
    "gate_fox_derivative",
    "BasedGenericLoop",
    "Crossing",
    "GenericLoop",
    "LoopError",
    "QuasiSurface",
    "Turn",
    "class_to_loop",
    "disk_intersections",
    "loop_to_class",
    "push_move",
    "random_loop",
    "InducedBrace",
    "RepresentationPoint",
    "TracePolynomial",
    "conjugate_representation",
    "evaluate",
    "induced_bracket",
    "poly_brace_extend",
    "random_representation",
]
