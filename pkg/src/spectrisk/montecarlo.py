"""Finite-sample Gaussian simulation of ridge regression and RDA.

Both simulators draw from the generative models the asymptotic formulas
describe (rows x = Sigma^{1/2} z with standard Gaussian z, random dense
signal / class-mean difference), evaluate the realized risk of the fitted
rule exactly by default, and attach the matching theory value per lambda so
the output table is directly plottable.

Exact evaluation:

* ridge  -- realized predictive risk 1 + (w_hat - w)' Sigma (w_hat - w);
* RDA    -- the conditional Gaussian error of a linear rule (w, b),
            pi_- Phi((w'mu_- + b)/s) + pi_+ Phi(-(w'mu_+ + b)/s),
            s = sqrt(w' Sigma w).

Test-set modes mirror the figure-style empirical evaluation instead.
Replicate r uses an RNG stream derived from (seed, r), so serial and
parallel runs produce bitwise-identical results.
"""

from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy.linalg import solve_triangular

from . import rda_theory, ridge_theory
from .errors import (
    BadArgument,
    BadClassSizes,
    InverseMomentInfinite,
    NotPositiveDefinite,
    SingularSigma,
    SingularSolve,
)
from .rda_theory import normal_cdf, normal_quantile
from .spectra import (
    SpectralDistribution,
    ar1_limit,
    binary_tree_covariance,
    binary_tree_spectrum,
    exponential_quantiles,
    from_eigenvalues,
    make_point_masses,
    moments,
)

_COV_KINDS = ("identity", "ar1", "exponential_quantiles", "binary_tree", "explicit")


@dataclass(frozen=True)
class CovarianceModel:
    """Tagged union of the finite-p covariance families."""

    kind: str
    rho: float | None = None
    depth: int | None = None
    matrix: tuple | None = None  # row tuples, kept hashable

    def __post_init__(self):
        if self.kind not in _COV_KINDS:
            raise BadArgument(f"unknown covariance kind {self.kind!r}")

    @staticmethod
    def identity() -> "CovarianceModel":
        return CovarianceModel(kind="identity")

    @staticmethod
    def ar1(rho: float) -> "CovarianceModel":
        if not 0.0 <= rho < 1.0:
            raise BadArgument(f"ar1 requires 0 <= rho < 1, got {rho}")
        return CovarianceModel(kind="ar1", rho=float(rho))

    @staticmethod
    def exponential() -> "CovarianceModel":
        return CovarianceModel(kind="exponential_quantiles")

    @staticmethod
    def binary_tree(depth: int) -> "CovarianceModel":
        return CovarianceModel(kind="binary_tree", depth=int(depth))

    @staticmethod
    def explicit(matrix: np.ndarray) -> "CovarianceModel":
        m = np.asarray(matrix, dtype=float)
        return CovarianceModel(kind="explicit", matrix=tuple(map(tuple, m)))

    @staticmethod
    def from_json_dict(spec: dict) -> "CovarianceModel":
        kind = spec.get("type")
        if kind == "identity":
            return CovarianceModel.identity()
        if kind == "ar1":
            return CovarianceModel.ar1(float(spec["rho"]))
        if kind == "exponential_quantiles":
            return CovarianceModel.exponential()
        if kind == "binary_tree":
            return CovarianceModel.binary_tree(int(spec["depth"]))
        if kind == "explicit":
            return CovarianceModel.explicit(np.asarray(spec["values"], dtype=float))
        raise BadArgument(f"covariance: unknown type {kind!r}")

    def to_json_dict(self) -> dict:
        out = {"type": self.kind}
        if self.kind == "ar1":
            out["rho"] = self.rho
        elif self.kind == "binary_tree":
            out["depth"] = self.depth
        elif self.kind == "explicit":
            out["values"] = [list(row) for row in self.matrix]
        return out


def build_covariance(model: CovarianceModel, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Dense covariance and its lower-triangular Cholesky factor at size p."""
    if p < 1:
        raise BadArgument(f"p must be >= 1, got {p}")
    if model.kind == "identity":
        eye = np.eye(p)
        return eye, eye.copy()
    if model.kind == "ar1":
        idx = np.arange(p)
        sigma = model.rho ** np.abs(idx[:, None] - idx[None, :])
        return sigma, np.linalg.cholesky(sigma)
    if model.kind == "exponential_quantiles":
        vals = exponential_quantiles(p).atoms
        return np.diag(vals), np.diag(np.sqrt(vals))
    if model.kind == "binary_tree":
        if 2 ** model.depth != p:
            raise BadArgument(f"binary_tree depth {model.depth} implies p={2**model.depth}, got p={p}")
        sigma = binary_tree_covariance(model.depth)
        return sigma, np.linalg.cholesky(sigma)
    sigma = np.asarray(model.matrix, dtype=float)
    if sigma.shape != (p, p):
        raise BadArgument(f"explicit covariance has shape {sigma.shape}, expected ({p}, {p})")
    if not np.allclose(sigma, sigma.T, atol=1e-10):
        raise NotPositiveDefinite("explicit covariance is not symmetric")
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite("explicit covariance is not positive definite") from exc
    return sigma, chol


def spectrum_of(model: CovarianceModel, p: int) -> SpectralDistribution:
    """Spectral distribution used for the theory overlay at size p."""
    if model.kind == "identity":
        return make_point_masses([(1.0, 1.0)])
    if model.kind == "ar1":
        return ar1_limit(model.rho)
    if model.kind == "exponential_quantiles":
        return exponential_quantiles(p)
    if model.kind == "binary_tree":
        return binary_tree_spectrum(model.depth)
    sigma = np.asarray(model.matrix, dtype=float)
    return from_eigenvalues(np.linalg.eigvalsh(sigma))


def calibrate_alpha(target_bayes_error: float, sigma: np.ndarray | None = None,
                    spectrum: SpectralDistribution | None = None) -> float:
    """Signal strength alpha2 that puts the oracle error at the target.

    Uses the finite-p normalized inverse trace when a covariance matrix is
    given, the asymptotic inverse moment when a spectrum is given.
    """
    if not 0.0 < target_bayes_error < 0.5:
        raise BadArgument(f"target error must be in (0, 0.5), got {target_bayes_error}")
    if (sigma is None) == (spectrum is None):
        raise BadArgument("pass exactly one of sigma or spectrum")
    delta_target = normal_quantile(1.0 - target_bayes_error)
    if sigma is not None:
        evals = np.linalg.eigvalsh(np.asarray(sigma, dtype=float))
        if np.min(evals) <= 1e-12 * max(1.0, float(np.max(evals))):
            raise SingularSigma("covariance is numerically singular")
        inv_trace = float(np.mean(1.0 / evals))
    else:
        mom = moments(spectrum)
        if not mom.inverse_finite:
            raise InverseMomentInfinite("calibration needs a finite inverse moment")
        inv_trace = mom.inverse
    return delta_target ** 2 / inv_trace


@dataclass(frozen=True)
class RidgeSimConfig:
    """Ridge simulation settings.

    ``test_size`` = 0 evaluates the fitted rule exactly; ``evaluation``
    then picks between the realized risk 1 + (w_hat-w)' Sigma (w_hat-w)
    (default) and the (w, eps)-averaged conditional trace formula, which has
    far less replicate noise.
    """

    covariance: CovarianceModel
    p: int
    gamma: float
    lambdas: tuple[float, ...]
    replicates: int
    seed: int
    alpha2: float = 1.0
    test_size: int = 0
    evaluation: str = "realized"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(sorted(float(l) for l in self.lambdas)))
        if self.seed is None:
            raise BadArgument("seed is mandatory")
        if self.p < 2 or self.n < 2:
            raise BadArgument(f"need p, n >= 2, got p={self.p}, n={self.n}")
        if not all(l > 0 and math.isfinite(l) for l in self.lambdas):
            raise BadArgument("lambda grid must be strictly positive and finite")
        if self.replicates < 1:
            raise BadArgument("replicates must be >= 1")
        if self.alpha2 < 0:
            raise BadArgument("alpha2 must be >= 0")
        if self.evaluation not in ("realized", "conditional"):
            raise BadArgument(f"unknown evaluation mode {self.evaluation!r}")
        if self.test_size > 0 and self.evaluation != "realized":
            raise BadArgument("test_size > 0 already selects test-set evaluation")

    @property
    def n(self) -> int:
        return int(round(self.p / self.gamma))

    def to_json_dict(self) -> dict:
        out = asdict(self)
        out["covariance"] = self.covariance.to_json_dict()
        out["lambdas"] = list(self.lambdas)
        return out


@dataclass(frozen=True)
class RdaSimConfig:
    covariance: CovarianceModel
    p: int
    gamma: float
    lambdas: tuple[float, ...]
    replicates: int
    seed: int
    alpha2: float | None = None
    bayes_error: float | None = None
    n_plus: int | None = None
    n_minus: int | None = None
    offset_c: float = 0.0
    pi_plus: float = 0.5
    test_size: int = 0
    mu_bar_mode: str = "zero"
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "lambdas", tuple(sorted(float(l) for l in self.lambdas)))
        if self.seed is None:
            raise BadArgument("seed is mandatory")
        if (self.alpha2 is None) == (self.bayes_error is None):
            raise BadArgument("pass exactly one of alpha2 or bayes_error")
        if self.alpha2 is not None and self.alpha2 <= 0:
            raise BadArgument("alpha2 must be > 0")
        if not all(l > 0 for l in self.lambdas):
            raise BadArgument("lambda grid must be strictly positive (inf allowed)")
        if self.replicates < 1:
            raise BadArgument("replicates must be >= 1")
        if not 0.0 < self.pi_plus < 1.0:
            raise BadArgument("pi_plus must be in (0, 1)")
        if self.mu_bar_mode not in ("zero", "stress"):
            raise BadArgument(f"unknown mu_bar_mode {self.mu_bar_mode!r}")
        n = int(round(self.p / self.gamma))
        if self.n_plus is None and self.n_minus is None:
            object.__setattr__(self, "n_plus", n // 2)
            object.__setattr__(self, "n_minus", n - n // 2)
        elif self.n_plus is None or self.n_minus is None:
            raise BadClassSizes("pass both n_plus and n_minus or neither")
        elif self.n_plus + self.n_minus != n:
            raise BadClassSizes(
                f"n_plus + n_minus = {self.n_plus + self.n_minus} != round(p/gamma) = {n}")
        if self.p < 2 or self.n - 2 <= 0 or self.n_plus < 1 or self.n_minus < 1:
            raise BadClassSizes(f"need p >= 2, n > 2 and both classes nonempty (n={self.n})")

    @property
    def n(self) -> int:
        return int(round(self.p / self.gamma))

    @property
    def pi_minus(self) -> float:
        return 1.0 - self.pi_plus

    @property
    def balanced(self) -> bool:
        return (self.n_plus == self.n_minus and self.offset_c == 0.0
                and self.pi_plus == 0.5)

    def to_json_dict(self) -> dict:
        out = asdict(self)
        out["covariance"] = self.covariance.to_json_dict()
        out["lambdas"] = list(self.lambdas)
        return out


@dataclass(frozen=True)
class SimResult:
    """Per-lambda empirical summary with theory (and oracle) overlay."""

    lambdas: np.ndarray
    empirical_mean: np.ndarray
    standard_error: np.ndarray
    theory: np.ndarray
    oracle: np.ndarray | None
    per_replicate: np.ndarray
    oracle_per_replicate: np.ndarray | None
    provenance: dict = field(repr=False)

    def rows(self):
        for j, lam in enumerate(self.lambdas):
            yield {
                "lambda": float(lam),
                "empirical_mean": float(self.empirical_mean[j]),
                "standard_error": float(self.standard_error[j]),
                "theory": float(self.theory[j]),
                **({"oracle": float(self.oracle[j])} if self.oracle is not None else {}),
            }


def config_hash(config_dict: dict) -> str:
    return hashlib.sha256(
        json.dumps(config_dict, sort_keys=True).encode()).hexdigest()


def _replicate_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed, spawn_key=(index,)))


def _run_replicates(fn: Callable[[int], np.ndarray], replicates: int,
                    width: int, workers: int) -> np.ndarray:
    out = np.empty((replicates, width))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for i, row in enumerate(pool.map(fn, range(replicates))):
                out[i] = row
    else:
        for i in range(replicates):
            out[i] = fn(i)
    return out


def _summarize(per_replicate: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = per_replicate.mean(axis=0)
    r = per_replicate.shape[0]
    if r == 1:
        return mean, np.zeros_like(mean)
    return mean, per_replicate.std(axis=0, ddof=1) / math.sqrt(r)


def simulate_ridge(cfg: RidgeSimConfig) -> SimResult:
    """Seeded ridge simulation; see the module docstring for the two modes."""
    p, n = cfg.p, cfg.n
    sigma, chol = build_covariance(cfg.covariance, p)
    spectrum = spectrum_of(cfg.covariance, p)
    gamma_eff = p / n
    lambdas = np.asarray(cfg.lambdas)
    theory = np.array([ridge_theory.predictive_risk(spectrum, gamma_eff, cfg.alpha2, lam)
                       for lam in lambdas])
    scale = math.sqrt(cfg.alpha2 / p)

    def one(i: int) -> np.ndarray:
        rng = _replicate_rng(cfg.seed, i)
        w = rng.standard_normal(p) * scale
        x = rng.standard_normal((n, p)) @ chol.T
        eps = rng.standard_normal(n)
        y = x @ w + eps
        evals, q = np.linalg.eigh(x.T @ x)
        evals = np.clip(evals, 0.0, None)
        qt_xty = q.T @ (x.T @ y)
        conditional = cfg.test_size == 0 and cfg.evaluation == "conditional"
        if conditional:
            # diag(Q' Sigma Q) for the trace formula, with S = X'X/n
            sample_evals = evals / n
            sigma_diag = np.einsum("ij,ij->j", q, sigma @ q)
            gam_p = p / n
        if cfg.test_size > 0:
            x_test = rng.standard_normal((cfg.test_size, p)) @ chol.T
            y_test = x_test @ w + rng.standard_normal(cfg.test_size)
        risks = np.empty(lambdas.size)
        for j, lam in enumerate(lambdas):
            if conditional:
                resolvent = 1.0 / (sample_evals + lam)
                trace1 = float(np.mean(sigma_diag * resolvent))
                trace2 = float(np.mean(sigma_diag * resolvent * resolvent))
                risks[j] = 1.0 + gam_p * trace1 + (lam * cfg.alpha2 - gam_p) * lam * trace2
                continue
            shifted = evals + n * lam
            if np.any(shifted <= 0.0):
                raise SingularSolve(f"singular ridge system at lambda={lam}")
            w_hat = q @ (qt_xty / shifted)
            if cfg.test_size > 0:
                risks[j] = float(np.mean((y_test - x_test @ w_hat) ** 2))
            else:
                e = w_hat - w
                risks[j] = 1.0 + float(e @ (sigma @ e))
        return risks

    per_replicate = _run_replicates(one, cfg.replicates, lambdas.size, cfg.workers)
    mean, se = _summarize(per_replicate)
    config = cfg.to_json_dict()
    return SimResult(lambdas=lambdas, empirical_mean=mean, standard_error=se,
                     theory=theory, oracle=None, per_replicate=per_replicate,
                     oracle_per_replicate=None,
                     provenance={"seed": cfg.seed, "config": config,
                                 "config_hash": config_hash(config)})


def _rda_theory_value(cfg: RdaSimConfig, spectrum, gamma_eff: float,
                      alpha2: float, lam: float) -> float:
    if math.isinf(lam):
        if not cfg.balanced:
            raise BadArgument("lambda = inf rows are only supported in the balanced case")
        return normal_cdf(-rda_theory.ir_margin(spectrum, gamma_eff, alpha2))
    if cfg.balanced:
        return rda_theory.error(spectrum, gamma_eff, alpha2, lam)
    return rda_theory.unequal_error(
        spectrum, cfg.p / cfg.n_plus, cfg.p / cfg.n_minus,
        cfg.pi_plus, cfg.pi_minus, alpha2, lam, cfg.offset_c)


def gaussian_error_rate(w: np.ndarray, b: float, mu_plus: np.ndarray,
                        mu_minus: np.ndarray, sigma: np.ndarray,
                        pi_plus: float = 0.5) -> float:
    """Exact error of the rule sign(w . x + b) under the two-class Gaussian model."""
    s = math.sqrt(float(w @ (sigma @ w)))
    if s == 0.0:
        raise SingularSolve("degenerate discriminant direction")
    pi_minus = 1.0 - pi_plus
    return (pi_minus * normal_cdf((float(w @ mu_minus) + b) / s)
            + pi_plus * normal_cdf(-(float(w @ mu_plus) + b) / s))


def simulate_rda(cfg: RdaSimConfig) -> SimResult:
    """Seeded RDA simulation; returns errors with theory and oracle overlays."""
    p, n = cfg.p, cfg.n
    sigma, chol = build_covariance(cfg.covariance, p)
    spectrum = spectrum_of(cfg.covariance, p)
    gamma_eff = p / n
    alpha2 = cfg.alpha2 if cfg.alpha2 is not None else calibrate_alpha(
        cfg.bayes_error, sigma=sigma)
    lambdas = np.asarray(cfg.lambdas)
    theory = np.array([_rda_theory_value(cfg, spectrum, gamma_eff, alpha2, lam)
                       for lam in lambdas])
    scale = math.sqrt(alpha2 / p)
    oracle_col = np.empty(cfg.replicates)

    def one(i: int) -> np.ndarray:
        rng = _replicate_rng(cfg.seed, i)
        delta = rng.standard_normal(p) * scale
        if cfg.mu_bar_mode == "stress":
            u = rng.standard_normal(p)
            mu_bar = u * (p ** 0.125 / float(np.linalg.norm(u)))
        else:
            mu_bar = np.zeros(p)
        mu_plus, mu_minus = mu_bar + delta, mu_bar - delta
        x_plus = mu_plus + rng.standard_normal((cfg.n_plus, p)) @ chol.T
        x_minus = mu_minus + rng.standard_normal((cfg.n_minus, p)) @ chol.T
        hmu_plus = x_plus.mean(axis=0)
        hmu_minus = x_minus.mean(axis=0)
        centered = np.vstack([x_plus - hmu_plus, x_minus - hmu_minus])
        sigma_c = (centered.T @ centered) / (n - 2)
        evals, q = np.linalg.eigh(sigma_c)
        evals = np.clip(evals, 0.0, None)
        hdelta = 0.5 * (hmu_plus - hmu_minus)
        hmu = 0.5 * (hmu_plus + hmu_minus)
        qt_hdelta = q.T @ hdelta

        half = solve_triangular(chol, delta, lower=True)
        oracle_col[i] = normal_cdf(-float(np.linalg.norm(half)))

        errs = np.empty(lambdas.size)
        for j, lam in enumerate(lambdas):
            w = hdelta if math.isinf(lam) else q @ (qt_hdelta / (evals + lam))
            b = -float(hmu @ w) + cfg.offset_c
            if cfg.test_size > 0:
                labels = rng.random(cfg.test_size) < cfg.pi_plus
                z = rng.standard_normal((cfg.test_size, p)) @ chol.T
                x_test = z + np.where(labels[:, None], mu_plus, mu_minus)
                predicted = (x_test @ w + b) > 0.0
                errs[j] = float(np.mean(predicted != labels))
            else:
                errs[j] = gaussian_error_rate(w, b, mu_plus, mu_minus, sigma,
                                              cfg.pi_plus)
        return errs

    per_replicate = _run_replicates(one, cfg.replicates, lambdas.size, cfg.workers)
    mean, se = _summarize(per_replicate)
    config = cfg.to_json_dict()
    config["alpha2_resolved"] = alpha2
    return SimResult(lambdas=lambdas, empirical_mean=mean, standard_error=se,
                     theory=theory, oracle=np.full(lambdas.size, oracle_col.mean()),
                     per_replicate=per_replicate, oracle_per_replicate=oracle_col.copy(),
                     provenance={"seed": cfg.seed, "config": config,
                                 "config_hash": config_hash(config)})
