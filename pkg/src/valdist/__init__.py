"""Numerical value-distribution toolkit for rational functions.

Counting, proximity, and characteristic functions computed by independent
numerical routes; argument-principle root counting with certified
enclosures; verifiers for the growth and distribution theorems; and a
constructive shift-and-localize pipeline that produces a concrete root
witness for any non-constant polynomial.
"""

from .algebra import (
    INFINITY,
    Polynomial,
    RationalFunction,
    TargetValue,
    as_target,
    format_complex,
    parse_complex_literal,
    poly_derivative,
    poly_eval,
    poly_shift,
    reduce_common_roots,
)
from .errors import (
    BinomialShape,
    BoundaryCoincidence,
    ConstantFunction,
    ConstantPolynomial,
    ContourTooClose,
    DegreeTooSmall,
    DuplicateTargets,
    FunctionIdenticallyA,
    IdenticallyZeroDenominator,
    LinearCoefficientNonzero,
    LocalizationFailed,
    QuadratureNotConverged,
    RootOnBoundary,
    SubdivisionDepthExceeded,
    TooFewTargets,
    ValdistError,
)
from .localize import (
    Box,
    Disk,
    Region,
    RootEnclosure,
    WitnessLevel,
    WitnessTrace,
    fta_witness,
    localize_roots,
    winding_count,
)
from .nevanlinna import (
    NevanlinnaProfile,
    ProfileRow,
    QuadratureConfig,
    build_profile,
    characteristic_T,
    count_n,
    counting_N,
    counting_N_integral,
    enumerate_a_points,
    proximity_m,
)
from .verify import (
    Claim1Decomposition,
    DegreeFit,
    DeviationReport,
    claim1_chain_report,
    claim1_shape_check,
    jensen_constant,
    log_rgrid,
    remark_fft_check,
    verify_degree_growth,
    verify_first_fundamental,
    verify_second_fundamental,
)

__all__ = [
    "INFINITY",
    "Polynomial",
    "RationalFunction",
    "TargetValue",
    "as_target",
    "format_complex",
    "parse_complex_literal",
    "poly_derivative",
    "poly_eval",
    "poly_shift",
    "reduce_common_roots",
    "BinomialShape",
    "BoundaryCoincidence",
    "ConstantFunction",
    "ConstantPolynomial",
    "ContourTooClose",
    "DegreeTooSmall",
    "DuplicateTargets",
    "FunctionIdenticallyA",
    "IdenticallyZeroDenominator",
    "LinearCoefficientNonzero",
    "LocalizationFailed",
    "QuadratureNotConverged",
    "RootOnBoundary",
    "SubdivisionDepthExceeded",
    "TooFewTargets",
    "ValdistError",
    "Box",
    "Disk",
    "Region",
    "RootEnclosure",
    "WitnessLevel",
    "WitnessTrace",
    "fta_witness",
    "localize_roots",
    "winding_count",
    "NevanlinnaProfile",
    "ProfileRow",
    "QuadratureConfig",
    "build_profile",
    "characteristic_T",
    "count_n",
    "counting_N",
    "counting_N_integral",
    "enumerate_a_points",
    "proximity_m",
    "Claim1Decomposition",
    "DegreeFit",
    "DeviationReport",
    "claim1_chain_report",
    "claim1_shape_check",
    "jensen_constant",
    "log_rgrid",
    "remark_fft_check",
    "verify_degree_growth",
    "verify_first_fundamental",
    "verify_second_fundamental",
]
