"""qamlab: a numerical laboratory for the mixed quasi-arithmetic mean
inequality over finite measure spaces.

Builds the two partially mixed mean operators from a catalog of monotone
generators, measures the inequality gap, classifies generator pairs against
the known commuting/subcommuting conditions, checks the structural
properties (homogeneity, superadditivity, convexity, Cauchy additivity)
those conditions reduce to, and searches for violating simple functions.
"""

from .analysis import (
    CheckerVerdict,
    LambdaStructure,
    PairMap,
    check_homogeneous,
    check_inequality7,
    check_liminf_origin,
    check_superadditive,
    convexity_check,
    kappa_eval,
    kappa_second,
    lambda_gamma,
    lambda_structure,
    pairmap_eval,
    phi_map,
    phi_tilde,
    psi_t,
    remark_identity,
    section_concavity,
)
from .classify import (
    Classification,
    ParameterError,
    classify_pair,
    fit_affine,
    fit_power,
    probe_grid,
)
from .generators import (
    Conjugation,
    DomainError,
    Generator,
    GeneratorError,
    Interval,
    RangeError,
    affine,
    affine_of,
    apower,
    common_domain,
    conjugate_eval,
    exponential,
    identity,
    parse_generator,
    power,
    power_of,
    reciprocal,
    scaled,
    tabulated,
)
from .means import (
    GapReport,
    WellDefinednessError,
    four_point_gap,
    gap,
    lhs_mixed,
    minkowski_gap,
    qam,
    rhs_mixed,
)
from .measure import (
    Admissibility,
    MeasureSpace,
    SimpleFunction,
    admissibility,
    random_simple_function,
    subset_mass,
)
from .search import Scenario, SearchResult, sweep, violate_four_point

__version__ = "0.1.0"
