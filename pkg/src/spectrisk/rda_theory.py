"""Limiting classification error of regularized discriminant analysis.

The margin of the regularized rule (covariance shrunk by lambda) is

    Theta(lambda) = alpha2 * tau / sqrt(alpha2 * eta + xi),

with components read off the companion transform at z = -lambda:

    tau = lambda m v,   eta = (v - lambda v') / gamma,   xi = v'/v^2 - 1,

and the limiting error is Phi(-Theta). The oracle margin is
Delta = alpha * sqrt(E[T^-1]); Gamma = Theta/Delta is the limiting cosine of
the angle (in the covariance metric) between the learned and oracle
directions. The lambda -> 0 and lambda -> infinity endpoints give the
classical margins of LDA and of the equal-variance independence rule.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtr, ndtri

from .errors import BadArgument, InverseMomentInfinite
from .ridge_theory import identity_stieltjes
from .silverstein import TransformPoint, transform_point
from .spectra import (
    DEFAULT_QUAD_NODES,
    SpectralDistribution,
    make_point_masses,
    moments,
)


@dataclass(frozen=True)
class RdaErrorReport:
    """Margin decomposition, error and cosine geometry at one lambda."""

    gamma: float
    alpha2: float
    lam: float
    tau: float
    eta: float
    xi: float
    theta: float
    error: float
    bayes_margin: float
    bayes_error: float
    cosine: float


@dataclass(frozen=True)
class WorstCaseReport:
    """Worst-case margins over unit-mean spectra supported on [k1, k2].

    The LDA fields are None when gamma >= 1 (LDA needs gamma < 1); the
    comparison verdict is only defined in that branch as well.
    """

    k1: float
    k2: float
    gamma: float
    alpha2: float
    ir_margin: float
    ir_least_favorable: SpectralDistribution
    lda_margin: float | None
    lda_least_favorable: SpectralDistribution | None
    ir_beats_lda: bool | None


def normal_cdf(x):
    """Standard normal CDF (complementary-error-function accuracy)."""
    return ndtr(x) if np.ndim(x) else float(ndtr(x))


def normal_quantile(q: float) -> float:
    """Inverse standard normal CDF on (0, 1)."""
    if not 0.0 < q < 1.0:
        raise BadArgument(f"quantile argument must be in (0, 1), got {q}")
    return float(ndtri(q))


def margin_components(tp: TransformPoint) -> tuple[float, float, float]:
    """(tau, eta, xi) from an already-solved transform point.

    xi is nonnegative analytically; tiny negative values from cancellation at
    extreme lambda are clamped to zero with a warning.
    """
    tau = tp.lam * tp.m * tp.v
    eta = (tp.v - tp.lam * tp.v_prime) / tp.gamma
    xi = tp.v_prime / (tp.v * tp.v) - 1.0
    if xi < 0.0:
        warnings.warn(f"xi = {xi:.3e} clamped to 0 (cancellation at lambda={tp.lam})",
                      RuntimeWarning, stacklevel=3)
        xi = 0.0
    return tau, eta, xi


def margin(dist: SpectralDistribution, gamma: float, alpha2: float, lam: float,
           nodes: int = DEFAULT_QUAD_NODES) -> tuple[float, float, float, float]:
    """(tau, eta, xi, Theta) at one lambda."""
    if alpha2 <= 0:
        raise BadArgument(f"alpha2 must be > 0, got {alpha2}")
    tp = transform_point(dist, gamma, lam, nodes=nodes)
    tau, eta, xi = margin_components(tp)
    theta = alpha2 * tau / math.sqrt(alpha2 * eta + xi)
    return tau, eta, xi, theta


def error(dist: SpectralDistribution, gamma: float, alpha2: float, lam: float,
          nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Limiting classification error Phi(-Theta(lambda))."""
    _, _, _, theta = margin(dist, gamma, alpha2, lam, nodes)
    return normal_cdf(-theta)


def bayes_margin(dist: SpectralDistribution, alpha2: float,
                 nodes: int = DEFAULT_QUAD_NODES) -> tuple[float, float]:
    """Oracle margin Delta = alpha*sqrt(E[T^-1]) and oracle error Phi(-Delta)."""
    if alpha2 <= 0:
        raise BadArgument(f"alpha2 must be > 0, got {alpha2}")
    mom = moments(dist, nodes)
    if not mom.inverse_finite:
        raise InverseMomentInfinite("oracle margin needs a finite inverse moment")
    delta = math.sqrt(alpha2 * mom.inverse)
    return delta, normal_cdf(-delta)


def cosine(dist: SpectralDistribution, gamma: float, alpha2: float, lam: float,
           nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Limiting cosine Gamma = Theta/Delta in (0, 1]."""
    _, _, _, theta = margin(dist, gamma, alpha2, lam, nodes)
    delta, _ = bayes_margin(dist, alpha2, nodes)
    return theta / delta


def cosine_identity(gamma: float, alpha2: float, lam: float) -> float:
    """Closed-form cosine for the unit point-mass spectrum: the alpha factor
    and the lambda factor decouple."""
    if alpha2 <= 0:
        raise BadArgument(f"alpha2 must be > 0, got {alpha2}")
    m = identity_stieltjes(gamma, lam)
    alpha_factor = math.sqrt(alpha2 / (alpha2 + gamma))
    lam_factor = math.sqrt((1.0 + gamma * lam * m * m) / (1.0 + gamma * m))
    return alpha_factor * lam_factor


def cosine_strong_limit(dist: SpectralDistribution, gamma: float, lam: float,
                        nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Strong-signal limit of the cosine: tau / sqrt(eta * E[T^-1])."""
    tp = transform_point(dist, gamma, lam, nodes=nodes)
    tau, eta, _ = margin_components(tp)
    mom = moments(dist, nodes)
    if not mom.inverse_finite:
        raise InverseMomentInfinite("strong-signal cosine needs a finite inverse moment")
    return tau / math.sqrt(eta * mom.inverse)


def lda_margin(dist: SpectralDistribution, gamma: float, alpha2: float,
               nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Margin of unregularized LDA (the lambda -> 0 endpoint), gamma < 1 only."""
    if not 0.0 < gamma < 1.0:
        raise BadArgument(f"LDA margin requires 0 < gamma < 1, got {gamma}")
    if alpha2 <= 0:
        raise BadArgument(f"alpha2 must be > 0, got {alpha2}")
    mom = moments(dist, nodes)
    if not mom.inverse_finite:
        raise InverseMomentInfinite("LDA margin needs a finite inverse moment")
    inv = mom.inverse
    return alpha2 * math.sqrt(1.0 - gamma) * inv / math.sqrt(alpha2 * inv + gamma)


def ir_margin(dist: SpectralDistribution, gamma: float, alpha2: float,
              nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Margin of the equal-variance independence rule (lambda -> infinity)."""
    if gamma <= 0:
        raise BadArgument(f"gamma must be > 0, got {gamma}")
    if alpha2 <= 0:
        raise BadArgument(f"alpha2 must be > 0, got {alpha2}")
    mom = moments(dist, nodes)
    return alpha2 / math.sqrt(alpha2 * mom.mean + gamma * mom.second)


def least_favorable_ir(k1: float, k2: float) -> SpectralDistribution:
    """Unit-mean two-point mixture on {k1, k2} maximizing E[T^2]."""
    if k1 == k2:
        return make_point_masses([(1.0, 1.0)])
    w1 = (k2 - 1.0) / (k2 - k1)
    w2 = (1.0 - k1) / (k2 - k1)
    atoms = [(k1, w1)] if w2 == 0.0 else ([(k2, w2)] if w1 == 0.0 else [(k1, w1), (k2, w2)])
    return make_point_masses(atoms)


def worst_case(k1: float, k2: float, gamma: float, alpha2: float) -> WorstCaseReport:
    """Worst-case margins of LDA and of the independence rule over the
    unit-mean spectra supported on [k1, k2], with least-favorable spectra
    and (for gamma < 1) the comparison verdict."""
    if not 0.0 < k1 <= 1.0 <= k2:
        raise BadArgument(f"need 0 < k1 <= 1 <= k2, got k1={k1}, k2={k2}")
    if gamma <= 0 or alpha2 <= 0:
        raise BadArgument("gamma and alpha2 must be > 0")
    spread = k1 + k2 - k1 * k2
    ir = alpha2 / math.sqrt(alpha2 + gamma * spread)
    ir_spectrum = least_favorable_ir(k1, k2)
    if gamma < 1.0:
        lda = alpha2 * math.sqrt(1.0 - gamma) / math.sqrt(alpha2 + gamma)
        lda_spectrum = make_point_masses([(1.0, 1.0)])
        verdict = alpha2 + 1.0 > (1.0 - gamma) * spread
    else:
        lda, lda_spectrum, verdict = None, None, None
    return WorstCaseReport(k1=k1, k2=k2, gamma=gamma, alpha2=alpha2,
                           ir_margin=ir, ir_least_favorable=ir_spectrum,
                           lda_margin=lda, lda_least_favorable=lda_spectrum,
                           ir_beats_lda=verdict)


def unequal_margins(dist: SpectralDistribution, gamma_plus: float, gamma_minus: float,
                    alpha2: float, lam: float, c: float = 0.0,
                    nodes: int = DEFAULT_QUAD_NODES,
                    main_text_q: bool = False) -> tuple[float, float]:
    """Effective margins (Theta_plus, Theta_minus) under unequal sampling.

    The overall aspect ratio is gamma = gamma_plus*gamma_minus /
    (gamma_plus + gamma_minus). The variance term carries a 1/gamma factor so
    that the balanced case reduces exactly to the equal-sampling margin;
    ``main_text_q`` switches to the variant without that factor, kept only
    for comparison.
    """
    if gamma_plus <= 0 or gamma_minus <= 0:
        raise BadArgument("gamma_plus and gamma_minus must be > 0")
    if alpha2 <= 0:
        raise BadArgument(f"alpha2 must be > 0, got {alpha2}")
    gamma = gamma_plus * gamma_minus / (gamma_plus + gamma_minus)
    tp = transform_point(dist, gamma, lam, nodes=nodes)
    v, vp, m = tp.v, tp.v_prime, tp.m
    lv = lam * v
    kappa = (1.0 / lv - 1.0) / gamma
    shift = 0.25 * (gamma_minus - gamma_plus) * kappa
    second = (vp - v * v) / (lam * lam * v ** 4)
    weight = 0.25 * (gamma_minus + gamma_plus)
    if not main_text_q:
        weight /= gamma
    q = alpha2 * (v - lam * vp) / (gamma * lv * lv) + weight * second
    root_q = math.sqrt(q)
    theta_plus = (alpha2 * m + shift + c) / root_q
    theta_minus = (alpha2 * m - shift - c) / root_q
    return theta_plus, theta_minus


def unequal_error(dist: SpectralDistribution, gamma_plus: float, gamma_minus: float,
                  pi_plus: float, pi_minus: float, alpha2: float, lam: float,
                  c: float = 0.0, nodes: int = DEFAULT_QUAD_NODES,
                  main_text_q: bool = False) -> float:
    """Total limiting error pi_minus*Phi(-Theta_minus) + pi_plus*Phi(-Theta_plus)."""
    if abs(pi_plus + pi_minus - 1.0) > 1e-12 or pi_plus < 0 or pi_minus < 0:
        raise BadArgument("class probabilities must be nonnegative and sum to 1")
    theta_plus, theta_minus = unequal_margins(
        dist, gamma_plus, gamma_minus, alpha2, lam, c, nodes, main_text_q)
    return pi_minus * normal_cdf(-theta_minus) + pi_plus * normal_cdf(-theta_plus)


def error_report(dist: SpectralDistribution, gamma: float, alpha2: float,
                 lam: float, nodes: int = DEFAULT_QUAD_NODES) -> RdaErrorReport:
    """Full per-lambda report used by the command-line surface."""
    tau, eta, xi, theta = margin(dist, gamma, alpha2, lam, nodes)
    delta, bayes_err = bayes_margin(dist, alpha2, nodes)
    return RdaErrorReport(gamma=gamma, alpha2=alpha2, lam=lam,
                          tau=tau, eta=eta, xi=xi, theta=theta,
                          error=normal_cdf(-theta),
                          bayes_margin=delta, bayes_error=bayes_err,
                          cosine=theta / delta)
