"""Limiting predictive risk of ridge regression.

With noise variance fixed at 1, signal strength alpha2 = E||w||^2 and aspect
ratio gamma = lim p/n, the limiting predictive risk at regularization lambda
is

    R(lambda) = 1/(lambda v) * { 1 + (lambda alpha2/gamma - 1) (1 - lambda v'/v) },

minimized at lambda* = gamma/alpha2 where it collapses to 1/(lambda* v(-lambda*)).
The optimally tuned estimation risk is gamma * m(-lambda*), and the two risks
are linked by 1 - 1/R_P = gamma (1 - R_E/alpha2) for every spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import BadArgument, InverseMomentInfinite, SpectriskError
from .silverstein import TransformPoint, transform_point, v_at_zero
from .spectra import DEFAULT_QUAD_NODES, SpectralDistribution, moments


@dataclass(frozen=True)
class RidgeRiskReport:
    """Risk summary for one (H, gamma, alpha2) at one lambda."""

    gamma: float
    alpha2: float
    lam: float
    risk: float
    lambda_star: float
    risk_star: float
    estimation_risk: float
    transform: TransformPoint


@dataclass(frozen=True)
class RegimeReport:
    """Weak- and strong-signal behavior of the optimally tuned risk.

    ``strong_kind`` is "constant" (gamma < 1, the OLS limit), "linear"
    (gamma = 1, risk ~ coefficient * alpha) or "quadratic" (gamma > 1,
    risk ~ coefficient * alpha^2).
    """

    gamma: float
    weak_slope: float
    strong_kind: str
    strong_coefficient: float


def identity_stieltjes(gamma: float, lam: float) -> float:
    """Closed-form Stieltjes transform m(-lambda) for the unit point-mass spectrum."""
    if lam <= 0 or gamma <= 0:
        raise BadArgument("lambda and gamma must be > 0")
    b = 1.0 - gamma + lam
    return (-b + math.sqrt(b * b + 4.0 * gamma * lam)) / (2.0 * gamma * lam)


def identity_stieltjes_derivative(gamma: float, lam: float) -> float:
    """m'(-lambda) for the unit point-mass spectrum, via the self-consistency
    equation m = 1/(1 - gamma - z - gamma z m) differentiated at z = -lambda."""
    m = identity_stieltjes(gamma, lam)
    return m * m * (1.0 + gamma * m) / (1.0 + gamma * lam * m * m)


def identity_risk(gamma: float, alpha2: float, lam: float) -> float:
    """Explicit identity-covariance risk 1 + gamma*m + lambda*(lambda*alpha2 - gamma)*m'."""
    m = identity_stieltjes(gamma, lam)
    mp = identity_stieltjes_derivative(gamma, lam)
    return 1.0 + gamma * m + lam * (lam * alpha2 - gamma) * mp


def identity_optimal_risk(gamma: float, alpha2: float) -> float:
    """Closed-form optimally tuned identity-covariance risk."""
    a = (gamma - 1.0) / gamma * alpha2
    return 0.5 * (1.0 + a + math.sqrt((1.0 - a) ** 2 + 4.0 * alpha2))


def predictive_risk(dist: SpectralDistribution, gamma: float, alpha2: float,
                    lam: float, nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Limiting predictive risk at an arbitrary lambda > 0 (alpha2 >= 0)."""
    if alpha2 < 0:
        raise BadArgument(f"alpha2 must be >= 0, got {alpha2}")
    tp = transform_point(dist, gamma, lam, nodes=nodes)
    lv = lam * tp.v
    return (1.0 + (lam * alpha2 / gamma - 1.0) * (1.0 - lam * tp.v_prime / tp.v)) / lv


def optimal_risk(dist: SpectralDistribution, gamma: float, alpha2: float,
                 nodes: int = DEFAULT_QUAD_NODES) -> tuple[float, float]:
    """Optimal tuning lambda* = gamma/alpha2 and the risk there, 1/(lambda* v).

    Guards the minimality of lambda* on a small surrounding grid.
    """
    if alpha2 <= 0:
        raise BadArgument(f"alpha2 must be > 0, got {alpha2}")
    lam_star = gamma / alpha2
    tp = transform_point(dist, gamma, lam_star, nodes=nodes)
    risk_star = 1.0 / (lam_star * tp.v)
    for factor in (0.25, 0.5, 1.0, 2.0, 4.0):
        other = predictive_risk(dist, gamma, alpha2, factor * lam_star, nodes=nodes)
        if other < risk_star * (1.0 - 1e-9):
            raise SpectriskError(
                f"risk at {factor}*lambda* fell below the optimum "
                f"({other} < {risk_star}); solver inconsistency")
    return lam_star, risk_star


def estimation_risk(dist: SpectralDistribution, gamma: float, alpha2: float,
                    nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Limiting estimation risk of optimally tuned ridge: gamma * m(-gamma/alpha2)."""
    if alpha2 <= 0:
        raise BadArgument(f"alpha2 must be > 0, got {alpha2}")
    tp = transform_point(dist, gamma, gamma / alpha2, nodes=nodes)
    return gamma * tp.m


def inaccuracy_gap(dist: SpectralDistribution, gamma: float, alpha2: float,
                   nodes: int = DEFAULT_QUAD_NODES) -> float:
    """|(1 - 1/R*) - gamma (1 - R_E/alpha2)|; zero up to solver accuracy."""
    _, risk_star = optimal_risk(dist, gamma, alpha2, nodes=nodes)
    est = estimation_risk(dist, gamma, alpha2, nodes=nodes)
    return abs((1.0 - 1.0 / risk_star) - gamma * (1.0 - est / alpha2))


def regimes(dist: SpectralDistribution, gamma: float,
            nodes: int = DEFAULT_QUAD_NODES) -> RegimeReport:
    """Weak-signal slope and strong-signal descriptor of the optimal risk."""
    if gamma <= 0:
        raise BadArgument(f"gamma must be > 0, got {gamma}")
    mom = moments(dist, nodes)
    if gamma < 1.0:
        kind, coeff = "constant", 1.0 / (1.0 - gamma)
    elif gamma == 1.0:
        if not mom.inverse_finite:
            raise InverseMomentInfinite(
                "strong-signal slope at gamma = 1 needs a finite inverse moment")
        kind, coeff = "linear", 1.0 / math.sqrt(mom.inverse)
    else:
        kind, coeff = "quadratic", 1.0 / (gamma * v_at_zero(dist, gamma, nodes))
    return RegimeReport(gamma=gamma, weak_slope=mom.mean,
                        strong_kind=kind, strong_coefficient=coeff)


def risk_report(dist: SpectralDistribution, gamma: float, alpha2: float,
                lam: float, nodes: int = DEFAULT_QUAD_NODES) -> RidgeRiskReport:
    """Full per-lambda report used by the command-line surface."""
    tp = transform_point(dist, gamma, lam, nodes=nodes)
    lv = lam * tp.v
    risk = (1.0 + (lam * alpha2 / gamma - 1.0) * (1.0 - lam * tp.v_prime / tp.v)) / lv
    lam_star, risk_star = optimal_risk(dist, gamma, alpha2, nodes=nodes)
    est = estimation_risk(dist, gamma, alpha2, nodes=nodes)
    return RidgeRiskReport(gamma=gamma, alpha2=alpha2, lam=lam, risk=risk,
                           lambda_star=lam_star, risk_star=risk_star,
                           estimation_risk=est, transform=tp)
