"""Companion Stieltjes transform at real negative arguments.

For a population spectral distribution H and aspect ratio gamma, the
companion transform v(z) of the limiting sample-covariance spectrum solves,
at z = -lambda < 0,

    1 / v = lambda + gamma * Integral t dH(t) / (1 + t v),         (v > 0)

and determines everything else evaluated here:

    v'      = 1 / (1/v^2 - gamma * Integral t^2 dH(t) / (1 + t v)^2)
    m       = (v - 1/lambda) / gamma + 1/lambda
    m'      = (v' - 1/lambda^2) / gamma + 1/lambda^2

(derivatives are with respect to z, evaluated at z = -lambda).

The solver runs a damped fixed-point iteration to machine stagnation and
falls back to bracketed root finding on the inverse map
z(v) = -1/v + gamma * Integral t dH/(1 + t v) when the iteration oscillates
or converges too slowly (the contraction rate approaches 1 as lambda -> 0 at
gamma = 1). Every accepted v is verified against the fixed-point residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import BadArgument, NoConvergence, SingularDerivative
from .spectra import DEFAULT_QUAD_NODES, SpectralDistribution, integrate

_EPS = np.finfo(float).eps

# Iterations of plain fixed point before handing over to bracketed root
# finding; the iteration's contraction rate degrades to 1 as lambda -> 0 at
# gamma = 1, where Brent on the inverse map needs only tens of evaluations.
_FIXED_POINT_BUDGET = 600


@dataclass(frozen=True)
class TransformPoint:
    """Transform values and solver diagnostics at z = -lambda."""

    lam: float
    gamma: float
    v: float
    v_prime: float
    m: float
    m_prime: float
    residual: float
    iterations: int

    def dual_gap(self) -> float:
        """Absolute defect of gamma*(m - 1/lam) = v - 1/lam."""
        return abs(self.gamma * (self.m - 1.0 / self.lam) - (self.v - 1.0 / self.lam))


def _tilted_mean(dist: SpectralDistribution, v: float, nodes: int) -> float:
    return integrate(dist, lambda t: t / (1.0 + t * v), nodes)


def _residual(dist, gamma, lam, v, nodes) -> float:
    return 1.0 / v - lam - gamma * _tilted_mean(dist, v, nodes)


def _solve(dist: SpectralDistribution, gamma: float, lam: float,
           tol: float, max_iter: int, nodes: int) -> tuple[float, float, int]:
    mean_t = dist.mean(nodes)
    v = 1.0 / (lam + gamma * mean_t) if mean_t > 0 else 1.0 / lam
    budget = min(_FIXED_POINT_BUDGET, max_iter)

    damping = 1.0
    prev_step = 0.0
    iterations = 0
    converged = False
    for _ in range(budget):
        iterations += 1
        g = 1.0 / (lam + gamma * _tilted_mean(dist, v, nodes))
        step = g - v
        if step * prev_step < 0.0:
            damping = 0.5
        prev_step = step
        v_new = v + damping * step
        if not (math.isfinite(v_new) and v_new > 0.0):
            break
        done = abs(v_new - v) <= 4.0 * _EPS * v_new
        v = v_new
        if done:
            converged = True
            break

    if not converged:
        v = _bracketed_root(dist, gamma, lam, v, nodes)
        iterations += 1

    residual = _residual(dist, gamma, lam, v, nodes)
    scale = max(1.0, lam, gamma * mean_t)
    if not abs(residual) <= tol * scale:
        raise NoConvergence(
            f"residual {residual:.3e} above {tol:.1e}*{scale:.3g} after "
            f"{iterations} iterations (lambda={lam}, gamma={gamma})")
    return v, residual, iterations


def _bracketed_root(dist, gamma, lam, v_guess, nodes) -> float:
    # Root of lambda + z(v) in log-v; z(v) is the functional inverse of the
    # transform, so the root is unique for lambda > 0.
    def gap(u: float) -> float:
        v = math.exp(u)
        return lam - 1.0 / v + gamma * _tilted_mean(dist, v, nodes)

    hi = math.log(1.0 / lam)          # gap(hi) = gamma * integral >= 0
    lo = min(math.log(max(v_guess, 1e-300)), hi) - 1.0
    for _ in range(600):
        if gap(lo) < 0.0:
            break
        lo -= 4.0
    else:
        raise NoConvergence(f"could not bracket the transform (lambda={lam}, gamma={gamma})")
    u = brentq(gap, lo, hi, xtol=1e-15, rtol=4.0 * _EPS, maxiter=300)
    return math.exp(u)


def solve_companion(dist: SpectralDistribution, gamma: float, lam: float,
                    tol: float = 1e-12, max_iter: int = 10000,
                    nodes: int = DEFAULT_QUAD_NODES) -> float:
    """The unique v > 0 solving the companion fixed-point equation at z = -lambda."""
    if lam <= 0:
        raise BadArgument(f"lambda must be > 0, got {lam}")
    if gamma <= 0:
        raise BadArgument(f"gamma must be > 0, got {gamma}")
    if tol <= 0:
        raise BadArgument(f"tol must be > 0, got {tol}")
    v, _, _ = _solve(dist, gamma, lam, tol, max_iter, nodes)
    return v


def transform_point(dist: SpectralDistribution, gamma: float, lam: float,
                    tol: float = 1e-12, max_iter: int = 10000,
                    nodes: int = DEFAULT_QUAD_NODES) -> TransformPoint:
    """Evaluate (v, v', m, m') at z = -lambda with solver diagnostics."""
    if lam <= 0:
        raise BadArgument(f"lambda must be > 0, got {lam}")
    if gamma <= 0:
        raise BadArgument(f"gamma must be > 0, got {gamma}")
    v, residual, iterations = _solve(dist, gamma, lam, tol, max_iter, nodes)

    curvature = integrate(dist, lambda t: (t / (1.0 + t * v)) ** 2, nodes)
    denom = 1.0 / (v * v) - gamma * curvature
    if denom <= 0.0:
        raise SingularDerivative(
            f"derivative denominator {denom:.3e} <= 0 at lambda={lam}, gamma={gamma}")
    v_prime = 1.0 / denom

    if gamma == 1.0:
        m, m_prime = v, v_prime
    else:
        inv_lam = 1.0 / lam
        m = (v - inv_lam) / gamma + inv_lam
        m_prime = (v_prime - inv_lam * inv_lam) / gamma + inv_lam * inv_lam
    return TransformPoint(lam=lam, gamma=gamma, v=v, v_prime=v_prime,
                          m=m, m_prime=m_prime, residual=residual,
                          iterations=iterations)


def v_at_zero(dist: SpectralDistribution, gamma: float,
              nodes: int = DEFAULT_QUAD_NODES) -> float:
    """The limit v(0) for gamma > 1: the unique c > 0 with
    Integral t c / (1 + t c) dH(t) = 1/gamma."""
    if gamma <= 1.0:
        raise BadArgument(f"v(0) exists only for gamma > 1, got {gamma}")

    def excess(c: float) -> float:
        return integrate(dist, lambda t: t * c / (1.0 + t * c), nodes) - 1.0 / gamma

    lo, hi = 1.0, 1.0
    for _ in range(2000):
        if excess(lo) < 0.0:
            break
        lo *= 0.5
    for _ in range(2000):
        if excess(hi) > 0.0:
            break
        hi *= 2.0
    else:
        raise BadArgument(
            "spectrum has too much mass at zero for v(0) to exist at this gamma")
    return brentq(excess, lo, hi, xtol=1e-300, rtol=4.0 * _EPS, maxiter=300)
