"""Population spectral distributions and integration against them.

A spectral distribution H describes the limiting eigenvalue law of a
covariance matrix family. Four representations are supported:

* ``point_masses``     -- finitely many atoms (t_i, w_i)
* ``ar1``              -- limit of AR-1 Toeplitz matrices Sigma_ij = rho^|i-j|,
                          i.e. the pushforward of a uniform angle under the
                          symbol f(theta) = (1-rho^2)/(1+rho^2-2 rho cos theta)
* ``exponential_quantiles`` -- p atoms at Exp(1) quantiles F^-1((i-1/2)/p)
* ``eigenvalues``      -- explicit finite eigenvalue list, equal weights
                          (the binary-tree family is stored this way)

All constructors validate and normalize; instances are immutable and safe
to share across threads.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_legendre

from .errors import (
    BadArgument,
    BadWeights,
    DepthTooLarge,
    NegativeAtom,
    NonFiniteIntegrand,
    SmallAtomWarning,
)

DEFAULT_QUAD_NODES = 2000

# Atoms below this are treated as "support touching zero" for inverse moments.
SMALL_ATOM_THRESHOLD = 1e-6

MAX_TREE_DEPTH = 14


@dataclass(frozen=True)
class MomentSummary:
    """First, second and inverse moments of a spectral distribution.

    ``inverse`` is None exactly when the inverse moment is infinite
    (mass at zero); ``inverse_finite`` makes the flag explicit.
    """

    mean: float
    second: float
    inverse: float | None
    inverse_finite: bool


@dataclass(frozen=True)
class SpectralDistribution:
    """Immutable population spectral distribution.

    ``atoms``/``weights`` are set for the atomic families; ``rho`` for the
    AR-1 limit. ``meta`` records construction parameters (depth, count).
    """

    kind: str
    atoms: np.ndarray | None = None
    weights: np.ndarray | None = None
    rho: float | None = None
    meta: dict = field(default_factory=dict)

    # -- basic functionals -------------------------------------------------

    def integrate(self, f: Callable[[np.ndarray], np.ndarray],
                  nodes: int = DEFAULT_QUAD_NODES) -> float:
        return integrate(self, f, nodes)

    def mean(self, nodes: int = DEFAULT_QUAD_NODES) -> float:
        return integrate(self, lambda t: t, nodes)

    def moments(self, nodes: int = DEFAULT_QUAD_NODES) -> MomentSummary:
        return moments(self, nodes)

    def min_support(self) -> float:
        """Smallest point of the support (exact for atoms, symbol minimum for AR-1)."""
        if self.kind == "ar1":
            return (1.0 - self.rho) / (1.0 + self.rho)
        return float(np.min(self.atoms))

    # -- JSON wire format --------------------------------------------------

    def to_json_dict(self) -> dict:
        if self.kind == "point_masses":
            return {"type": "point_masses",
                    "atoms": [{"t": float(t), "w": float(w)}
                              for t, w in zip(self.atoms, self.weights)]}
        if self.kind == "ar1":
            return {"type": "ar1", "rho": self.rho}
        if self.kind == "exponential_quantiles":
            return {"type": "exponential_quantiles", "count": self.meta["count"]}
        if self.kind == "binary_tree":
            return {"type": "binary_tree", "depth": self.meta["depth"]}
        return {"type": "eigenvalues", "values": [float(t) for t in self.atoms]}


def from_json_dict(spec: dict) -> SpectralDistribution:
    """Build a distribution from its JSON wire representation."""
    if not isinstance(spec, dict) or "type" not in spec:
        raise BadArgument("spectrum: expected an object with a 'type' field")
    kind = spec["type"]
    try:
        if kind == "point_masses":
            return make_point_masses([(a["t"], a["w"]) for a in spec["atoms"]])
        if kind == "ar1":
            return ar1_limit(float(spec["rho"]))
        if kind == "exponential_quantiles":
            return exponential_quantiles(int(spec["count"]))
        if kind == "binary_tree":
            return binary_tree_spectrum(int(spec["depth"]))
        if kind == "eigenvalues":
            return from_eigenvalues(spec["values"])
    except KeyError as exc:
        raise BadArgument(f"spectrum of type {kind!r}: missing field {exc}") from exc
    raise BadArgument(f"spectrum: unknown type {kind!r}")


# -- constructors ----------------------------------------------------------

def make_point_masses(atoms: Sequence[tuple[float, float]]) -> SpectralDistribution:
    """Atomic distribution from (eigenvalue, weight) pairs.

    Weights must be positive and sum to one within 1e-9 (they are then
    renormalized exactly).
    """
    if len(atoms) == 0:
        raise BadWeights("at least one atom required")
    t = np.asarray([a[0] for a in atoms], dtype=float)
    w = np.asarray([a[1] for a in atoms], dtype=float)
    if np.any(t < 0):
        raise NegativeAtom(f"atoms must be >= 0, got min {t.min()}")
    if np.any(w <= 0):
        raise BadWeights("weights must be > 0")
    total = w.sum()
    if abs(total - 1.0) > 1e-9:
        raise BadWeights(f"weights sum to {total}, expected 1 within 1e-9")
    return SpectralDistribution(kind="point_masses", atoms=t, weights=w / total)


def ar1_limit(rho: float) -> SpectralDistribution:
    """Limiting spectrum of the AR-1 covariance family with correlation rho."""
    if not 0.0 <= rho < 1.0:
        raise BadArgument(f"ar1 requires 0 <= rho < 1, got {rho}")
    return SpectralDistribution(kind="ar1", rho=float(rho))


def exponential_quantiles(count: int) -> SpectralDistribution:
    """Equal-weight atoms at the Exp(1) quantiles (i - 1/2)/count."""
    if count < 1:
        raise BadArgument(f"count must be >= 1, got {count}")
    q = (np.arange(count) + 0.5) / count
    t = -np.log1p(-q)
    w = np.full(count, 1.0 / count)
    return SpectralDistribution(kind="exponential_quantiles", atoms=t, weights=w,
                                meta={"count": count})


def from_eigenvalues(values: Sequence[float]) -> SpectralDistribution:
    """Equal-weight atoms at explicitly given eigenvalues."""
    t = np.sort(np.asarray(values, dtype=float))
    if t.size == 0:
        raise BadArgument("at least one eigenvalue required")
    # tolerate symmetric-eigensolver jitter around zero
    tiny = -1e-10 * max(1.0, float(np.max(np.abs(t))))
    if np.any(t < tiny):
        raise NegativeAtom(f"eigenvalues must be >= 0, got min {t.min()}")
    t = np.clip(t, 0.0, None)
    w = np.full(t.size, 1.0 / t.size)
    return SpectralDistribution(kind="eigenvalues", atoms=t, weights=w)


def binary_tree_covariance(depth: int) -> np.ndarray:
    """Covariance of the balanced-binary-tree family, normalized to unit diagonal.

    Entry (i, j) counts root-to-leaf edges shared by leaves i and j, divided
    by the depth so that the average eigenvalue is 1.
    """
    if depth < 1:
        raise BadArgument(f"depth must be >= 1, got {depth}")
    if depth > MAX_TREE_DEPTH:
        raise DepthTooLarge(f"depth {depth} exceeds desk scale (max {MAX_TREE_DEPTH})")
    c = np.zeros((1, 1))
    for _ in range(depth):
        c = np.kron(np.eye(2), c + np.ones_like(c))
    return c / depth


def binary_tree_spectrum(depth: int) -> SpectralDistribution:
    """Exact spectrum of the depth-d binary-tree covariance (p = 2^d atoms)."""
    sigma = binary_tree_covariance(depth)
    eigs = np.linalg.eigvalsh(sigma)
    dist = from_eigenvalues(eigs)
    return SpectralDistribution(kind="binary_tree", atoms=dist.atoms,
                                weights=dist.weights, meta={"depth": depth})


# -- integration -----------------------------------------------------------

@lru_cache(maxsize=8)
def _angle_rule(nodes: int) -> tuple[np.ndarray, np.ndarray]:
    # Gauss-Legendre on [0, pi], weights normalized to a probability measure.
    x, w = roots_legendre(nodes)
    theta = 0.5 * np.pi * (x + 1.0)
    return theta, w / 2.0


def _ar1_symbol(rho: float, theta: np.ndarray) -> np.ndarray:
    return (1.0 - rho * rho) / (1.0 + rho * rho - 2.0 * rho * np.cos(theta))


def integrate(dist: SpectralDistribution, f: Callable[[np.ndarray], np.ndarray],
              nodes: int = DEFAULT_QUAD_NODES) -> float:
    """Integral of f against the spectral distribution.

    Exact weighted sum for atomic families; fixed-order Gauss-Legendre in the
    angle over [0, pi] for the AR-1 limit (the symbol is even, so the half
    period suffices).
    """
    if nodes < 1:
        raise BadArgument(f"nodes must be >= 1, got {nodes}")
    with np.errstate(all="ignore"):
        if dist.kind == "ar1":
            theta, w = _angle_rule(nodes)
            values = np.asarray(f(_ar1_symbol(dist.rho, theta)), dtype=float)
        else:
            w = dist.weights
            values = np.asarray(f(dist.atoms), dtype=float)
    if not np.all(np.isfinite(values)):
        raise NonFiniteIntegrand("integrand is not finite on the support")
    return float(np.dot(w, values))


def moments(dist: SpectralDistribution, nodes: int = DEFAULT_QUAD_NODES) -> MomentSummary:
    """Mean, second moment and inverse moment, with an explicit finiteness flag.

    An atom exactly at zero makes the inverse moment infinite; atoms merely
    close to zero keep it finite but numerically meaningless, so a
    SmallAtomWarning is emitted.
    """
    mean = integrate(dist, lambda t: t, nodes)
    second = integrate(dist, lambda t: t * t, nodes)
    lo = dist.min_support()
    if lo == 0.0:
        return MomentSummary(mean=mean, second=second, inverse=None, inverse_finite=False)
    if lo < SMALL_ATOM_THRESHOLD:
        warnings.warn(
            f"smallest spectral atom {lo:.3e} is close to zero; "
            "the inverse moment is numerically unreliable",
            SmallAtomWarning, stacklevel=2)
    inverse = integrate(dist, lambda t: 1.0 / t, nodes)
    return MomentSummary(mean=mean, second=second, inverse=inverse, inverse_finite=True)
