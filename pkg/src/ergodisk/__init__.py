"""Mean ergodicity of composition operators on spaces of analytic functions on the disk."""

from .disk import blaschke_factor, mobius_swap, pseudo_dist
from .ergodicity import (
    CesaroDeviation,
    CriterionTrace,
    Dyadic,
    ErgodicityReport,
    Explicit,
    PowerMatched,
    RadiusSchedule,
    Verdict,
    VerdictParams,
    cesaro_apply,
    cesaro_deviation,
    cesaro_limit_candidate,
    criterion_e1,
    criterion_e2,
    essential_lower_bound_harness,
    hinf_criterion,
    verdict,
)
from .grid import GridSpec
from .interpolation import (
    NodeSequence,
    PickProblem,
    lagrange_basis,
    min_norm,
    separation_constant,
    sum_bound,
    thm1_test_function,
    thm3_test_function,
)
from .maps import (
    Automorphism,
    Compose,
    ConvexCombination,
    LinearFractional,
    Monomial,
    Rotation,
    Scale,
    classify,
    conjugate_to_origin,
    identity,
    iterate,
    sup_modulus,
)
from .weights import ExpWeight, LogWeight, StandardAlpha, Tabulated, associated_weight_bracket, check_properties

__version__ = "0.1.0"
