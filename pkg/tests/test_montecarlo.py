import math

import numpy as np
import pytest

from spectrisk import montecarlo as mc
from spectrisk import rda_theory, spectra
from spectrisk.errors import (
    BadArgument,
    BadClassSizes,
    NotPositiveDefinite,
    SingularSigma,
)

GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0


class TestBuildCovariance:
    def test_identity(self):
        sigma, chol = mc.build_covariance(mc.CovarianceModel.identity(), 3)
        assert np.array_equal(sigma, np.eye(3))
        assert np.array_equal(chol, np.eye(3))

    def test_ar1(self):
        sigma, chol = mc.build_covariance(mc.CovarianceModel.ar1(0.5), 3)
        expected = np.array([[1.0, 0.5, 0.25], [0.5, 1.0, 0.5], [0.25, 0.5, 1.0]])
        assert np.allclose(sigma, expected)
        assert np.allclose(chol @ chol.T, expected)
        assert np.allclose(np.diag(sigma), 1.0)

    def test_binary_tree_matches_spectrum(self):
        sigma, _ = mc.build_covariance(mc.CovarianceModel.binary_tree(2), 4)
        eigs = np.sort(np.linalg.eigvalsh(sigma))
        assert np.allclose(eigs, [0.5, 0.5, 1.5, 1.5])
        assert np.allclose(np.sort(spectra.binary_tree_spectrum(2).atoms), eigs)

    def test_binary_tree_size_mismatch(self):
        with pytest.raises(BadArgument):
            mc.build_covariance(mc.CovarianceModel.binary_tree(2), 5)

    def test_exponential_diagonal(self):
        sigma, chol = mc.build_covariance(mc.CovarianceModel.exponential(), 8)
        assert np.allclose(sigma, np.diag(np.diag(sigma)))
        assert np.allclose(chol @ chol.T, sigma)
        assert np.trace(sigma) / 8 == pytest.approx(1.0, abs=0.1)

    def test_explicit_not_positive_definite(self):
        bad = np.array([[1.0, 2.0], [2.0, 1.0]])  # eigenvalues 3, -1
        with pytest.raises(NotPositiveDefinite):
            mc.build_covariance(mc.CovarianceModel.explicit(bad), 2)
        asym = np.array([[1.0, 0.5], [0.2, 1.0]])
        with pytest.raises(NotPositiveDefinite):
            mc.build_covariance(mc.CovarianceModel.explicit(asym), 2)

    def test_spectrum_of_explicit(self):
        model = mc.CovarianceModel.explicit(np.diag([0.5, 1.5]))
        dist = mc.spectrum_of(model, 2)
        assert np.allclose(np.sort(dist.atoms), [0.5, 1.5])


class TestCalibrateAlpha:
    def test_identity_one_percent(self):
        alpha2 = mc.calibrate_alpha(0.01, sigma=np.eye(4))
        assert alpha2 == pytest.approx(rda_theory.normal_quantile(0.99) ** 2, abs=1e-12)
        assert alpha2 == pytest.approx(5.411894431323715, abs=1e-9)

    def test_ar1_asymptotic(self, ar1_09):
        alpha2 = mc.calibrate_alpha(0.01, spectrum=ar1_09)
        assert alpha2 == pytest.approx(5.411894431323715 / (1.81 / 0.19), rel=1e-7)

    def test_target_domain(self):
        with pytest.raises(BadArgument):
            mc.calibrate_alpha(0.6, sigma=np.eye(2))
        with pytest.raises(BadArgument):
            mc.calibrate_alpha(0.0, sigma=np.eye(2))

    def test_singular_sigma(self):
        with pytest.raises(SingularSigma):
            mc.calibrate_alpha(0.01, sigma=np.diag([1.0, 0.0]))

    def test_exactly_one_input(self, ar1_09):
        with pytest.raises(BadArgument):
            mc.calibrate_alpha(0.01, sigma=np.eye(2), spectrum=ar1_09)
        with pytest.raises(BadArgument):
            mc.calibrate_alpha(0.01)

    def test_calibrated_oracle_hits_target(self):
        sigma, _ = mc.build_covariance(mc.CovarianceModel.ar1(0.9), 200)
        alpha2 = mc.calibrate_alpha(0.05, sigma=sigma)
        cfg = mc.RdaSimConfig(covariance=mc.CovarianceModel.ar1(0.9), p=200, gamma=1.0,
                              lambdas=(1.0,), replicates=40, seed=5, alpha2=alpha2)
        res = mc.simulate_rda(cfg)
        assert res.oracle[0] == pytest.approx(0.05, abs=0.01)


class TestSimulateRidge:
    def test_golden_ratio_identity(self):
        cfg = mc.RidgeSimConfig(covariance=mc.CovarianceModel.identity(), p=16, gamma=1.0,
                                lambdas=(1.0,), replicates=500, seed=7)
        res = mc.simulate_ridge(cfg)
        assert res.theory[0] == pytest.approx(GOLDEN, abs=1e-10)
        gap = abs(res.empirical_mean[0] - GOLDEN)
        assert gap <= 3.0 * res.standard_error[0]

    def test_zero_signal_saturates(self):
        cfg = mc.RidgeSimConfig(covariance=mc.CovarianceModel.identity(), p=16, gamma=1.0,
                                lambdas=(1.0, 1e3), replicates=100, seed=3, alpha2=0.0)
        res = mc.simulate_ridge(cfg)
        assert np.all(res.per_replicate >= 1.0)
        assert res.empirical_mean[-1] == pytest.approx(1.0, abs=1e-3)  # lam = 1e3 row

    def test_determinism(self):
        cfg = mc.RidgeSimConfig(covariance=mc.CovarianceModel.ar1(0.5), p=12, gamma=0.75,
                                lambdas=(0.5, 2.0), replicates=20, seed=99)
        a, b = mc.simulate_ridge(cfg), mc.simulate_ridge(cfg)
        assert np.array_equal(a.per_replicate, b.per_replicate)
        assert a.provenance["config_hash"] == b.provenance["config_hash"]

    def test_parallel_matches_serial(self):
        base = dict(covariance=mc.CovarianceModel.ar1(0.5), p=12, gamma=0.75,
                    lambdas=(0.5, 2.0), replicates=16, seed=99)
        serial = mc.simulate_ridge(mc.RidgeSimConfig(**base, workers=1))
        threaded = mc.simulate_ridge(mc.RidgeSimConfig(**base, workers=4))
        assert np.array_equal(serial.per_replicate, threaded.per_replicate)

    def test_test_set_mode_agrees(self):
        base = dict(covariance=mc.CovarianceModel.binary_tree(3), p=8, gamma=0.5,
                    lambdas=(1.0,), replicates=300, seed=11)
        exact = mc.simulate_ridge(mc.RidgeSimConfig(**base))
        held_out = mc.simulate_ridge(mc.RidgeSimConfig(**base, test_size=200))
        combined = math.hypot(exact.standard_error[0], held_out.standard_error[0])
        assert abs(exact.empirical_mean[0] - held_out.empirical_mean[0]) <= 3.0 * combined

    def test_conditional_mode_agrees_with_realized(self):
        base = dict(covariance=mc.CovarianceModel.ar1(0.5), p=32, gamma=1.0,
                    lambdas=(1.0,), replicates=400, seed=2)
        realized = mc.simulate_ridge(mc.RidgeSimConfig(**base))
        conditional = mc.simulate_ridge(mc.RidgeSimConfig(**base, evaluation="conditional"))
        combined = math.hypot(realized.standard_error[0], conditional.standard_error[0])
        assert abs(realized.empirical_mean[0] - conditional.empirical_mean[0]) <= 3.0 * combined
        # averaging over (w, eps) analytically shrinks the replicate spread
        assert conditional.standard_error[0] < realized.standard_error[0]

    def test_rows_sorted_by_lambda(self):
        cfg = mc.RidgeSimConfig(covariance=mc.CovarianceModel.identity(), p=8, gamma=1.0,
                                lambdas=(2.0, 0.5, 1.0), replicates=3, seed=1)
        res = mc.simulate_ridge(cfg)
        assert list(res.lambdas) == [0.5, 1.0, 2.0]
        assert [row["lambda"] for row in res.rows()] == [0.5, 1.0, 2.0]

    def test_convergence_in_p(self):
        # the |empirical - theory| gap at lambda = 1 shrinks like 1/p; the
        # conditional evaluation keeps replicate noise at the same 1/p order,
        # so the decrease is monotone at these replicate counts
        gaps = []
        for p, reps in ((64, 400), (256, 150), (1024, 100)):
            cfg = mc.RidgeSimConfig(covariance=mc.CovarianceModel.identity(), p=p,
                                    gamma=1.0, lambdas=(1.0,), replicates=reps,
                                    seed=42, evaluation="conditional")
            res = mc.simulate_ridge(cfg)
            gaps.append(abs(float(res.empirical_mean[0]) - float(res.theory[0])))
        assert gaps[0] > gaps[1] > gaps[2]

    def test_config_validation(self):
        identity = mc.CovarianceModel.identity()
        with pytest.raises(BadArgument):
            mc.RidgeSimConfig(covariance=identity, p=8, gamma=1.0, lambdas=(0.0,),
                              replicates=1, seed=1)
        with pytest.raises(BadArgument):
            mc.RidgeSimConfig(covariance=identity, p=8, gamma=1.0, lambdas=(math.inf,),
                              replicates=1, seed=1)
        with pytest.raises(BadArgument):
            mc.RidgeSimConfig(covariance=identity, p=8, gamma=1.0, lambdas=(1.0,),
                              replicates=1, seed=None)
        with pytest.raises(BadArgument):
            mc.RidgeSimConfig(covariance=identity, p=8, gamma=1.0, lambdas=(1.0,),
                              replicates=1, seed=1, evaluation="bogus")
        with pytest.raises(BadArgument):
            mc.RidgeSimConfig(covariance=identity, p=1, gamma=1.0, lambdas=(1.0,),
                              replicates=1, seed=1)


class TestSimulateRda:
    def test_no_signal_is_coin_flip(self):
        cfg = mc.RdaSimConfig(covariance=mc.CovarianceModel.identity(), p=40, gamma=1.0,
                              lambdas=(1.0,), replicates=60, seed=17, alpha2=1e-8)
        res = mc.simulate_rda(cfg)
        gap = abs(res.empirical_mean[0] - 0.5)
        assert gap <= max(3.0 * res.standard_error[0], 1e-3)

    def test_matches_theory_identity(self):
        cfg = mc.RdaSimConfig(covariance=mc.CovarianceModel.identity(), p=200, gamma=1.0,
                              lambdas=(0.1, 1.0, 10.0), replicates=30, seed=4, alpha2=1.0)
        res = mc.simulate_rda(cfg)
        assert np.max(np.abs(res.empirical_mean - res.theory)) < 0.02

    def test_infinite_lambda_is_mean_difference_rule(self, ar1_05):
        cfg = mc.RdaSimConfig(covariance=mc.CovarianceModel.ar1(0.5), p=150, gamma=1.5,
                              lambdas=(math.inf,), replicates=40, seed=23, alpha2=2.0)
        res = mc.simulate_rda(cfg)
        target = rda_theory.normal_cdf(-rda_theory.ir_margin(ar1_05, 150 / 100, 2.0))
        assert res.theory[0] == pytest.approx(target, abs=1e-12)
        assert abs(res.empirical_mean[0] - target) <= max(4.0 * res.standard_error[0], 5e-3)

    def test_error_dominates_oracle_every_replicate(self):
        cfg = mc.RdaSimConfig(covariance=mc.CovarianceModel.binary_tree(5), p=32, gamma=1.0,
                              lambdas=(0.01, 1.0, 100.0), replicates=50, seed=8, alpha2=1.0)
        res = mc.simulate_rda(cfg)
        worst = res.per_replicate.min(axis=1)
        assert np.all(worst >= res.oracle_per_replicate - 1e-12)

    def test_determinism_and_parallel(self):
        base = dict(covariance=mc.CovarianceModel.identity(), p=30, gamma=1.0,
                    lambdas=(1.0, math.inf), replicates=12, seed=6, alpha2=1.0)
        one = mc.simulate_rda(mc.RdaSimConfig(**base))
        two = mc.simulate_rda(mc.RdaSimConfig(**base))
        threaded = mc.simulate_rda(mc.RdaSimConfig(**base, workers=3))
        assert np.array_equal(one.per_replicate, two.per_replicate)
        assert np.array_equal(one.per_replicate, threaded.per_replicate)
        assert np.array_equal(one.oracle_per_replicate, threaded.oracle_per_replicate)

    def test_test_set_mode_agrees(self):
        base = dict(covariance=mc.CovarianceModel.identity(), p=60, gamma=1.0,
                    lambdas=(1.0,), replicates=150, seed=13, alpha2=2.0)
        exact = mc.simulate_rda(mc.RdaSimConfig(**base))
        held_out = mc.simulate_rda(mc.RdaSimConfig(**base, test_size=400))
        combined = math.hypot(exact.standard_error[0], held_out.standard_error[0])
        assert abs(exact.empirical_mean[0] - held_out.empirical_mean[0]) <= 3.0 * combined

    def test_unequal_sampling_overlay(self):
        cfg = mc.RdaSimConfig(covariance=mc.CovarianceModel.identity(), p=120, gamma=1.2,
                              lambdas=(1.0,), replicates=60, seed=31, alpha2=2.0,
                              n_plus=60, n_minus=40, pi_plus=0.6, offset_c=0.2)
        res = mc.simulate_rda(cfg)
        expected = rda_theory.unequal_error(
            mc.spectrum_of(cfg.covariance, cfg.p), 2.0, 3.0, 0.6, 0.4, 2.0, 1.0, 0.2)
        assert res.theory[0] == pytest.approx(expected, abs=1e-12)
        assert abs(res.empirical_mean[0] - expected) <= max(4.0 * res.standard_error[0], 5e-3)

    def test_stress_mu_bar_mode(self):
        cfg = mc.RdaSimConfig(covariance=mc.CovarianceModel.identity(), p=150, gamma=1.0,
                              lambdas=(1.0,), replicates=40, seed=19, alpha2=1.0,
                              mu_bar_mode="stress")
        res = mc.simulate_rda(cfg)
        assert abs(res.empirical_mean[0] - res.theory[0]) < 0.02

    def test_class_size_validation(self):
        identity = mc.CovarianceModel.identity()
        with pytest.raises(BadClassSizes):
            mc.RdaSimConfig(covariance=identity, p=20, gamma=1.0, lambdas=(1.0,),
                            replicates=1, seed=1, alpha2=1.0, n_plus=9, n_minus=10)
        with pytest.raises(BadClassSizes):
            mc.RdaSimConfig(covariance=identity, p=20, gamma=10.0, lambdas=(1.0,),
                            replicates=1, seed=1, alpha2=1.0)  # n = 2
        with pytest.raises(BadArgument):
            mc.RdaSimConfig(covariance=identity, p=20, gamma=1.0, lambdas=(1.0,),
                            replicates=1, seed=1)  # neither alpha2 nor bayes_error

    def test_alpha2_and_target_mutually_exclusive(self):
        with pytest.raises(BadArgument):
            mc.RdaSimConfig(covariance=mc.CovarianceModel.identity(), p=20, gamma=1.0,
                            lambdas=(1.0,), replicates=1, seed=1, alpha2=1.0,
                            bayes_error=0.01)
