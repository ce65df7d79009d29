"""Exact denominator sequences of elliptic-curve points over Q and
multiplicative-dependence counting experiments.
"""

from .curve import (
    INFINITY,
    CurveQ,
    HeightEstimate,
    LowestForm,
    PointQ,
    add,
    canonical_height,
    format_curve,
    format_point,
    is_torsion,
    lowest_form,
    negate,
    on_curve,
    parse_curve,
    parse_point,
    scalar_mul,
)
from .errors import BudgetExceeded
from .modp import (
    ApIndex,
    BadReduction,
    CensusResult,
    CurveFp,
    PointFp,
    appearance_index,
    group_order,
    point_order,
    reduce_curve,
    reduce_point,
    small_index_census,
)
from .sequences import (
    EdsTerm,
    SequenceWindow,
    count_divisible,
    count_power_divisible,
    count_valuation_hits,
    generate,
    iter_denominators,
    primitive_part,
    s_unit_terms,
    zsigmondy_threshold,
)
from .mdep import (
    CoprimeBasis,
    ExponentMatrix,
    MdVerdict,
    SemigroupReport,
    exponent_vectors,
    factor_refine,
    integer_kernel,
    is_md,
    is_md_maximal_rank,
    semigroup_membership,
    verdict_json_dict,
    zsigmondy_semigroup_count,
)
from .counting import (
    BoxSpec,
    CountResult,
    ExperimentReport,
    Graph,
    HalfCover,
    count_box,
    exponent_fit,
    gcd_graph,
    half_cover,
    theoretical_exponent,
)

__version__ = "0.1.0"

__all__ = [
    "INFINITY",
    "CurveQ",
    "PointQ",
    "LowestForm",
    "HeightEstimate",
    "add",
    "negate",
    "scalar_mul",
    "on_curve",
    "lowest_form",
    "is_torsion",
    "canonical_height",
    "parse_curve",
    "parse_point",
    "format_curve",
    "format_point",
    "BadReduction",
    "BudgetExceeded",
    "CurveFp",
    "PointFp",
    "ApIndex",
    "CensusResult",
    "reduce_curve",
    "reduce_point",
    "group_order",
    "point_order",
    "appearance_index",
    "small_index_census",
    "EdsTerm",
    "SequenceWindow",
    "generate",
    "iter_denominators",
    "primitive_part",
    "zsigmondy_threshold",
    "count_divisible",
    "count_valuation_hits",
    "count_power_divisible",
    "s_unit_terms",
    "CoprimeBasis",
    "ExponentMatrix",
    "MdVerdict",
    "SemigroupReport",
    "factor_refine",
    "exponent_vectors",
    "integer_kernel",
    "is_md",
    "is_md_maximal_rank",
    "semigroup_membership",
    "verdict_json_dict",
    "zsigmondy_semigroup_count",
    "BoxSpec",
    "CountResult",
    "Graph",
    "HalfCover",
    "ExperimentReport",
    "count_box",
    "gcd_graph",
    "half_cover",
    "exponent_fit",
    "theoretical_exponent",
]
