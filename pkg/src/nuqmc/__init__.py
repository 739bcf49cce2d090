"""Quasi-Monte Carlo integration with respect to general (non-uniform)
measures on the unit cube: exact star-discrepancy, Hardy-Krause variation,
the correspondence between BV functions and signed measures,
variation-times-discrepancy error certificates, and inverse-CDF point-set
transformations including the Chelson counterexample."""

from .errors import (
    BudgetExceededError,
    DimensionMismatchError,
    NuqmcError,
    UnsupportedIntegrandError,
    UnsupportedMeasureError,
    ValidationError,
)
from .measures import (
    AT_POINT,
    LEFT_LIMIT,
    AnalyticCdfMeasure,
    Atom,
    AxisCdf,
    DiscreteMeasure,
    DiscreteSignedMeasure,
    ProductMeasure,
    UniformMeasure,
    box_measure,
    cdf_eval,
    cdf_one_sided,
    jordan_decompose_measure,
    total_variation,
)
from .variation import (
    ANCHOR_ONE,
    ANCHOR_ZERO,
    MULTILINEAR,
    STEP,
    Box,
    FaceSelector,
    GridFunction,
    JordanPair,
    box_indicator,
    corner_indicator,
    function_to_measure,
    hk0_prefix,
    hk0_prefix_grid,
    hk_variation,
    is_completely_monotone,
    jordan_decompose_function,
    leonov_decompose,
    measure_to_function,
    mirror,
    quasi_volume,
    vitali_variation,
)
from .discrepancy import (
    DiscrepancyResult,
    PointSet,
    local_discrepancy,
    one_sided_deviation,
    random_search_lower_bound,
    star_discrepancy,
)
from .transforms import (
    ConditionalCdf2D,
    TransformIdentityReport,
    chelson_cdf,
    chelson_conditional,
    chelson_density,
    chelson_identity_check,
    chelson_measure,
    conditional_transform_2d,
    forward_cdf_map,
    product_transform,
    pseudo_inverse,
)
from .integrate import (
    KHCertificate,
    importance_sampling_estimate,
    integral_under_measure,
    kh_certificate,
    qmc_estimate,
)
from .sequences import halton, van_der_corput

__version__ = "0.1.0"

__all__ = [
    "ANCHOR_ONE",
    "ANCHOR_ZERO",
    "AT_POINT",
    "AnalyticCdfMeasure",
    "Atom",
    "AxisCdf",
    "Box",
    "BudgetExceededError",
    "ConditionalCdf2D",
    "DimensionMismatchError",
    "DiscreteMeasure",
    "DiscreteSignedMeasure",
    "DiscrepancyResult",
    "FaceSelector",
    "GridFunction",
    "JordanPair",
    "KHCertificate",
    "LEFT_LIMIT",
    "MULTILINEAR",
    "NuqmcError",
    "PointSet",
    "ProductMeasure",
    "STEP",
    "TransformIdentityReport",
    "UniformMeasure",
    "UnsupportedIntegrandError",
    "UnsupportedMeasureError",
    "ValidationError",
    "box_indicator",
    "box_measure",
    "cdf_eval",
    "cdf_one_sided",
    "chelson_cdf",
    "chelson_conditional",
    "chelson_density",
    "chelson_identity_check",
    "chelson_measure",
    "conditional_transform_2d",
    "corner_indicator",
    "forward_cdf_map",
    "function_to_measure",
    "halton",
    "hk0_prefix",
    "hk0_prefix_grid",
    "hk_variation",
    "importance_sampling_estimate",
    "integral_under_measure",
    "is_completely_monotone",
    "jordan_decompose_function",
    "jordan_decompose_measure",
    "kh_certificate",
    "leonov_decompose",
    "local_discrepancy",
    "measure_to_function",
    "mirror",
    "one_sided_deviation",
    "product_transform",
    "pseudo_inverse",
    "qmc_estimate",
    "quasi_volume",
    "random_search_lower_bound",
    "star_discrepancy",
    "total_variation",
    "van_der_corput",
    "vitali_variation",
]
