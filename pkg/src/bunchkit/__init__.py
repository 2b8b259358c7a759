"""Bunching order for restricted Beta families, with GB2 income fitting.

The core objects: a two-shape Beta family Beta(n*a, m*a) whose mean is fixed
while a controls concentration, verification that raising a bunches the
distribution around a unique crossing point x_star, monotone-transform
invariance of that crossing, a grouped-data GB2 fitter, and model Gini
computation for income tables.
"""

from .bunching import (
    BunchingReport,
    ConjectureScan,
    DEFAULT_GRID,
    DEFAULT_MC_SEED,
    Direction,
    IcvConclusion,
    MonotoneTransform,
    TransformKind,
    TransformedCrossing,
    XStarCurve,
    check_icv_icx,
    conjecture_scan,
    crossing_point,
    density_crossings,
    gamma_mc_oracle,
    push_forward_map,
    sign_changes,
    transform_crossing,
    verify_bunching,
    xstar_curve,
)
from .distributions import (
    GB2Params,
    Moments,
    RestrictedBetaParams,
    XiA,
    beta_pdf,
    density_ratio,
    gb2_cdf,
    gb2_mean,
    gb2_quantile,
    ratio_second_derivative,
    restricted_cdf,
    restricted_moments,
)
from .errors import (
    BunchkitError,
    DegenerateParams,
    DomainError,
    MaxDepthExceeded,
    MeanUndefined,
    MedianInOpenBin,
    MismatchedFamily,
    NoSignChange,
    NonFiniteObjective,
    NonMonotoneTransform,
    ParseError,
    RatioAboveOne,
    ValidationError,
)
from .fitting import (
    FitConfig,
    FitResult,
    GroupedTable,
    bin_probabilities,
    chi_square_objective,
    estimate_median_from_groups,
    fit_gb2,
    xi_a_from_shapes,
)
from .income import (
    TREND_COLUMNS,
    TrendRow,
    YearComparison,
    build_trend,
    compare_years,
    format_number,
    load_gini_official,
    load_grouped_csv,
    model_gini,
    write_trend_csv,
)
from .numerics import (
    Bracket,
    DEFAULT_FTOL,
    DEFAULT_INTEGRATE_TOL,
    DEFAULT_XTOL,
    OptimResult,
    find_root,
    integrate,
    minimize_1d,
    nelder_mead,
)
from .specfun import (
    MAX_SHAPE,
    ShapePair,
    inv_reg_inc_beta,
    log_beta,
    log_gamma,
    reg_inc_beta,
)

__version__ = "0.1.0"

__all__ = [
    "BunchingReport",
    "Bracket",
    "BunchkitError",
    "ConjectureScan",
    "DEFAULT_FTOL",
    "DEFAULT_GRID",
    "DEFAULT_INTEGRATE_TOL",
    "DEFAULT_MC_SEED",
    "DEFAULT_XTOL",
    "DegenerateParams",
    "Direction",
    "DomainError",
    "FitConfig",
    "FitResult",
    "GB2Params",
    "GroupedTable",
    "IcvConclusion",
    "MAX_SHAPE",
    "MaxDepthExceeded",
    "MeanUndefined",
    "MedianInOpenBin",
    "MismatchedFamily",
    "Moments",
    "MonotoneTransform",
    "NoSignChange",
    "NonFiniteObjective",
    "NonMonotoneTransform",
    "OptimResult",
    "ParseError",
    "RatioAboveOne",
    "RestrictedBetaParams",
    "ShapePair",
    "TREND_COLUMNS",
    "TransformKind",
    "TransformedCrossing",
    "TrendRow",
    "ValidationError",
    "XStarCurve",
    "XiA",
    "YearComparison",
    "beta_pdf",
    "bin_probabilities",
    "build_trend",
    "chi_square_objective",
    "check_icv_icx",
    "compare_years",
    "conjecture_scan",
    "crossing_point",
    "density_crossings",
    "density_ratio",
    "estimate_median_from_groups",
    "find_root",
    "fit_gb2",
    "format_number",
    "gamma_mc_oracle",
    "gb2_cdf",
    "gb2_mean",
    "gb2_quantile",
    "integrate",
    "inv_reg_inc_beta",
    "load_gini_official",
    "load_grouped_csv",
    "log_beta",
    "log_gamma",
    "minimize_1d",
    "model_gini",
    "nelder_mead",
    "push_forward_map",
    "ratio_second_derivative",
    "reg_inc_beta",
    "restricted_cdf",
    "restricted_moments",
    "sign_changes",
    "transform_crossing",
    "verify_bunching",
    "write_trend_csv",
    "xi_a_from_shapes",
    "xstar_curve",
]
