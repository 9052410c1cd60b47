"""spectrisk: exact high-dimensional asymptotics of ridge regression and
regularized discriminant analysis for arbitrary covariance spectra, plus
seeded Monte Carlo verification at desk scale."""

__version__ = "0.1.0"

from . import errors, montecarlo, rda_theory, ridge_theory, silverstein, spectra
from .montecarlo import (
    CovarianceModel,
    RdaSimConfig,
    RidgeSimConfig,
    SimResult,
    build_covariance,
    calibrate_alpha,
    simulate_rda,
    simulate_ridge,
    spectrum_of,
)
from .rda_theory import (
    RdaErrorReport,
    WorstCaseReport,
    bayes_margin,
    cosine,
    cosine_identity,
    cosine_strong_limit,
    ir_margin,
    lda_margin,
    margin,
    normal_cdf,
    normal_quantile,
    unequal_error,
    worst_case,
)
from .rda_theory import error as rda_error
from .ridge_theory import (
    RegimeReport,
    RidgeRiskReport,
    estimation_risk,
    identity_optimal_risk,
    identity_risk,
    identity_stieltjes,
    inaccuracy_gap,
    optimal_risk,
    predictive_risk,
    regimes,
)
from .silverstein import TransformPoint, solve_companion, transform_point, v_at_zero
from .spectra import (
    MomentSummary,
    SpectralDistribution,
    ar1_limit,
    binary_tree_spectrum,
    exponential_quantiles,
    from_eigenvalues,
    integrate,
    make_point_masses,
    moments,
)
