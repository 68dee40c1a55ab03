import math

import numpy as np
import pytest
from scipy import stats as sps

from deplen.features import zscore
from deplen.stats import (RankDeficientError, crossval_accuracy, fit_logistic,
                          mcnemar, pearson, predict_proba, rfecv)


def simulate_logistic(rng, n, beta, intercept=0.0):
    X = rng.normal(size=(n, len(beta)))
    p = 1.0 / (1.0 + np.exp(-(intercept + X @ np.asarray(beta))))
    y = (rng.random(n) < p).astype(int)
    return X, y


class TestFitLogistic:
    def test_recovers_known_coefficients(self):
        rng = np.random.default_rng(12)
        X, y = simulate_logistic(rng, 50_000, [0.5, -1.0, 2.0])
        fit = fit_logistic(X, y)
        assert fit.converged
        assert np.all(np.abs(fit.coefficients[1:] - [0.5, -1.0, 2.0]) < 0.05)

    def test_null_model_z_values(self):
        rng = np.random.default_rng(5)
        big_z = 0
        for _ in range(100):
            X = rng.normal(size=(2000, 2))
            y = (rng.random(2000) < 0.5).astype(int)
            fit = fit_logistic(X, y)
            if np.any(np.abs(fit.z_values[1:]) >= 3):
                big_z += 1
        assert big_z <= 5

    def test_intercept_only_balanced(self):
        y = np.array([0, 1] * 500)
        X = np.random.default_rng(0).normal(size=(1000, 1))
        fit = fit_logistic(X, y)
        assert abs(fit.coefficients[0]) < 0.15

    def test_z_is_coef_over_se(self):
        rng = np.random.default_rng(3)
        X, y = simulate_logistic(rng, 2000, [1.0])
        fit = fit_logistic(X, y)
        assert np.allclose(fit.z_values, fit.coefficients / fit.std_errors)

    def test_separation_fallback(self):
        X = np.concatenate([-np.ones(20), np.ones(20)])[:, None]
        y = np.concatenate([np.zeros(20), np.ones(20)]).astype(int)
        fit = fit_logistic(X, y)
        assert fit.separation
        assert fit.ridge > 0

    def test_rank_deficiency_named(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=200)
        X = np.column_stack([x, 2 * x])
        y = (rng.random(200) < 0.5).astype(int)
        with pytest.raises(RankDeficientError, match="collinear"):
            fit_logistic(X, y, feature_names=["a", "a_doubled"])

    def test_std_errors_match_fd_hessian(self):
        # inverse observed information vs centered finite differences
        rng = np.random.default_rng(77)
        for trial in range(20):
            X, y = simulate_logistic(rng, 800, rng.normal(size=2))
            fit = fit_logistic(X, y)
            design = np.column_stack([np.ones(len(y)), X])

            def ll(beta):
                eta = design @ beta
                return float(y @ eta - np.sum(np.log1p(np.exp(eta))))

            h = 1e-4
            p = len(fit.coefficients)
            H = np.empty((p, p))
            for i in range(p):
                for j in range(p):
                    ei = np.eye(p)[i] * h
                    ej = np.eye(p)[j] * h
                    b = fit.coefficients
                    H[i, j] = (ll(b + ei + ej) - ll(b + ei - ej)
                               - ll(b - ei + ej) + ll(b - ei - ej)) / (4 * h * h)
            se_fd = np.sqrt(np.diag(np.linalg.inv(-H)))
            assert np.allclose(fit.std_errors, se_fd, rtol=1e-5)

    def test_base_rate_identity(self):
        rng = np.random.default_rng(8)
        X, y = simulate_logistic(rng, 5000, [0.7], intercept=-0.4)
        fit = fit_logistic(X, y)
        assert abs(predict_proba(fit, X).mean() - y.mean()) < 1e-8

    def test_prediction_scale_invariance(self):
        rng = np.random.default_rng(10)
        X, y = simulate_logistic(rng, 3000, [0.5, -0.8])
        Z, _, _ = zscore(X)
        base = predict_proba(fit_logistic(Z, y), Z) > 0.5
        Z2 = Z.copy()
        Z2[:, 1] *= 7.5
        rescaled = predict_proba(fit_logistic(Z2, y), Z2) > 0.5
        assert np.array_equal(base, rescaled)


class TestCrossval:
    def test_separable_data(self):
        X = np.concatenate([np.linspace(-2, -1, 100),
                            np.linspace(1, 2, 100)])[:, None]
        y = (X[:, 0] > 0).astype(int)
        report = crossval_accuracy(X, y, folds=10, seed=0)
        assert report.mean_accuracy == 1.0

    def test_null_accuracy_half(self):
        rng = np.random.default_rng(44)
        X = rng.normal(size=(10_000, 2))
        y = (rng.random(10_000) < 0.5).astype(int)
        report = crossval_accuracy(X, y, folds=10, seed=1)
        assert abs(report.mean_accuracy - 0.5) < 0.02

    def test_fold_partition(self):
        rng = np.random.default_rng(6)
        X = rng.normal(size=(103, 1))
        y = (rng.random(103) < 0.5).astype(int)
        report = crossval_accuracy(X, y, folds=10, seed=2)
        assert len(report.predictions) == 103
        assert len(report.fold_accuracies) == 10
        assert math.isclose(report.mean_accuracy,
                            float(report.fold_accuracies.mean()))

    def test_deterministic_under_seed(self):
        rng = np.random.default_rng(9)
        X = rng.normal(size=(400, 2))
        y = (rng.random(400) < 0.5).astype(int)
        r1 = crossval_accuracy(X, y, folds=5, seed=3)
        r2 = crossval_accuracy(X, y, folds=5, seed=3)
        assert np.array_equal(r1.predictions, r2.predictions)

    def test_bad_args(self):
        X, y = np.zeros((5, 1)), np.zeros(5, dtype=int)
        with pytest.raises(ValueError):
            crossval_accuracy(X, y, folds=1)
        with pytest.raises(ValueError):
            crossval_accuracy(X, y, folds=10)
        with pytest.raises(ValueError):
            crossval_accuracy(X, y, folds=2, zscore_mode="nope")


class TestMcNemar:
    def test_identical_classifiers(self):
        truth = np.array([0, 1, 1, 0])
        pred = np.array([0, 1, 0, 0])
        res = mcnemar(pred, pred, truth)
        assert res.p_two_tailed == 1.0 and res.statistic == 0.0

    def test_exact_branch_frozen(self):
        truth = np.zeros(10, dtype=int)
        a = np.zeros(10, dtype=int)       # always correct
        b = np.ones(10, dtype=int)        # always wrong
        res = mcnemar(a, b, truth)
        assert (res.n01, res.n10) == (10, 0)
        assert math.isclose(res.p_two_tailed, 2 * 0.5 ** 10)  # 0.001953125

    def test_exact_matches_binomial_oracle(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            n01 = int(rng.integers(0, 13))
            n10 = int(rng.integers(0, 25 - n01)) if n01 < 24 else 0
            if n01 + n10 == 0 or n01 + n10 >= 25:
                continue
            truth = np.zeros(n01 + n10 + 5, dtype=int)
            a = truth.copy()
            b = truth.copy()
            a[:n10] = 1                      # a wrong, b correct
            b[n10:n10 + n01] = 1             # b wrong, a correct
            res = mcnemar(a, b, truth)
            m, n = min(n01, n10), n01 + n10
            oracle = min(1.0, 2 * float(sps.binom.cdf(m, n, 0.5)))
            assert math.isclose(res.p_two_tailed, oracle, abs_tol=1e-12)

    def test_chi_square_branch(self):
        truth = np.zeros(200, dtype=int)
        a = truth.copy()
        b = truth.copy()
        a[:60] = 1                  # a wrong, b correct: n10 = 60
        b[60:160] = 1               # b wrong, a correct: n01 = 100
        res = mcnemar(a, b, truth)
        assert (res.n01, res.n10) == (100, 60)
        assert math.isclose(res.statistic, 39 ** 2 / 160)          # 9.50625
        assert math.isclose(res.p_two_tailed,
                            float(sps.chi2.sf(res.statistic, df=1)), rel_tol=1e-9)

    def test_length_mismatch(self):
        with pytest.raises(ValueError):
            mcnemar([0, 1], [0], [0, 1])


class TestRfecv:
    def test_informative_feature_retained(self):
        kept = 0
        for trial in range(100):
            rng = np.random.default_rng(1000 + trial)
            n = 400
            signal = rng.normal(size=n)
            p = 1.0 / (1.0 + np.exp(-2.0 * signal))
            y = (rng.random(n) < p).astype(int)
            X = np.column_stack([signal] + [rng.normal(size=n) for _ in range(4)])
            result = rfecv(X, y, folds=5, seed=trial,
                           feature_names=["signal", "n1", "n2", "n3", "n4"])
            if "signal" in result.selected:
                kept += 1
        assert kept >= 95

    def test_all_noise_flat_curve(self):
        rng = np.random.default_rng(2)
        X = rng.normal(size=(4000, 4))
        y = (rng.random(4000) < 0.5).astype(int)
        result = rfecv(X, y, folds=5, seed=0)
        for acc in result.curve.values():
            assert abs(acc - 0.5) < 0.02

    def test_needs_two_features(self):
        with pytest.raises(ValueError):
            rfecv(np.zeros((10, 1)), np.zeros(10, dtype=int))


class TestPearson:
    def test_perfect_correlation(self):
        x = np.arange(10.0)
        assert math.isclose(pearson(x, x), 1.0)
        assert math.isclose(pearson(x, -x), -1.0)

    def test_independent_near_zero(self):
        rng = np.random.default_rng(15)
        assert abs(pearson(rng.normal(size=10_000), rng.normal(size=10_000))) < 0.05

    def test_matches_numpy(self):
        rng = np.random.default_rng(16)
        x, y = rng.normal(size=100), rng.normal(size=100)
        assert math.isclose(pearson(x, y), float(np.corrcoef(x, y)[0, 1]),
                            rel_tol=1e-12)

    def test_zero_variance_rejected(self):
        with pytest.raises(ValueError):
            pearson([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
