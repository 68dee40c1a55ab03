"""Logistic regression with Wald inference, cross-validation, McNemar's
test, recursive feature elimination, and Pearson correlation.

The logistic fit is iteratively reweighted least squares, matching the
classic GLM reference implementations: convergence when the largest
coefficient change drops below 1e-8, standard errors from the inverse
observed information.
"""

import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .features import zscore

__all__ = [
    "RegressionFit",
    "CvReport",
    "McNemarResult",
    "RfecvResult",
    "RankDeficientError",
    "fit_logistic",
    "predict_proba",
    "crossval_accuracy",
    "mcnemar",
    "rfecv",
    "pearson",
]

MAX_ITER = 100
TOL = 1e-8
SEPARATION_COEF_BOUND = 30.0   # on standardized predictors
SEPARATION_RIDGE = 1e-6
MCNEMAR_EXACT_THRESHOLD = 25


class RankDeficientError(ValueError):
    pass


@dataclass
class RegressionFit:
    coefficients: np.ndarray    # intercept first
    std_errors: np.ndarray
    z_values: np.ndarray
    converged: bool
    iterations: int
    log_likelihood: float
    ridge: float = 0.0
    separation: bool = False
    feature_names: Optional[list] = None

    def to_dict(self) -> dict:
        names = self.feature_names or [f"x{i}" for i in range(len(self.coefficients) - 1)]
        rows = []
        for name, b, se, z in zip(["intercept"] + list(names),
                                  self.coefficients, self.std_errors, self.z_values):
            p = math.erfc(abs(z) / math.sqrt(2.0))
            rows.append({"predictor": name, "estimate": float(b),
                         "std_error": float(se), "z_value": float(z),
                         "significant": "***" if p < 0.001 else ""})
        return {"rows": rows, "converged": self.converged,
                "iterations": self.iterations,
                "log_likelihood": self.log_likelihood,
                "ridge": self.ridge, "separation": self.separation}


def _sigmoid(eta):
    with np.errstate(over="ignore"):
        return 1.0 / (1.0 + np.exp(-eta))


def _check_rank(X: np.ndarray, names) -> None:
    rank = np.linalg.matrix_rank(X)
    if rank < X.shape[1]:
        # name the columns loading on the null space
        _, _, vt = np.linalg.svd(X, full_matrices=False)
        null = np.abs(vt[-1])
        guilty = [names[j] if j < len(names) else f"col{j}"
                  for j in np.flatnonzero(null > 0.1)]
        raise RankDeficientError(
            f"design matrix is rank deficient; collinear columns: {guilty}")


def fit_logistic(X: np.ndarray, y: np.ndarray, ridge: float = 0.0,
                 feature_names: Optional[list] = None) -> RegressionFit:
    """Maximum-likelihood logit fit via IRLS. X excludes the intercept
    column, which is added internally; ridge > 0 is reserved for the
    documented fallback on detected separation."""
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=float)
    if len(y) != X.shape[0]:
        raise ValueError("X and y length mismatch")
    design = np.column_stack([np.ones(len(y)), X])
    _check_rank(design, ["intercept"] + list(feature_names or []))
    p_cols = design.shape[1]

    def irls(penalty):
        beta = np.zeros(p_cols)
        for it in range(1, MAX_ITER + 1):
            mu = _sigmoid(design @ beta)
            w = np.clip(mu * (1.0 - mu), 1e-12, None)
            grad = design.T @ (y - mu) - penalty * beta
            hess = (design.T * w) @ design + penalty * np.eye(p_cols)
            step = np.linalg.solve(hess, grad)
            beta = beta + step
            if np.max(np.abs(step)) < TOL:
                return beta, it, True
            if np.max(np.abs(beta)) > SEPARATION_COEF_BOUND and penalty == 0.0:
                return beta, it, False
        return beta, MAX_ITER, False

    separation = False
    beta, iterations, converged = irls(ridge)
    if not converged and ridge == 0.0 and np.max(np.abs(beta)) > SEPARATION_COEF_BOUND:
        separation = True
        ridge = SEPARATION_RIDGE
        beta, iterations, converged = irls(ridge)

    mu = _sigmoid(design @ beta)
    w = np.clip(mu * (1.0 - mu), 1e-12, None)
    info = (design.T * w) @ design + ridge * np.eye(p_cols)
    cov = np.linalg.inv(info)
    se = np.sqrt(np.diag(cov))
    ll = float(np.sum(y * np.log(np.clip(mu, 1e-300, None))
                      + (1 - y) * np.log(np.clip(1 - mu, 1e-300, None))))
    return RegressionFit(beta, se, beta / se, converged, iterations, ll,
                         ridge=ridge, separation=separation,
                         feature_names=list(feature_names) if feature_names else None)


def predict_proba(fit: RegressionFit, X: np.ndarray) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    design = np.column_stack([np.ones(X.shape[0]), X])
    return _sigmoid(design @ fit.coefficients)


@dataclass
class CvReport:
    fold_accuracies: np.ndarray
    mean_accuracy: float
    predictions: np.ndarray     # per-example predicted labels, input order
    flagged_folds: list = field(default_factory=list)


def crossval_accuracy(X: np.ndarray, y: np.ndarray, folds: int = 10,
                      seed=0, zscore_mode: str = "fold") -> CvReport:
    """Seeded shuffled k-fold CV of the logistic model.

    zscore_mode "fold" standardizes each training fold and applies the
    stored statistics to its test fold; "global" standardizes once on the
    full data before splitting.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    y = np.asarray(y, dtype=int)
    n = len(y)
    if folds < 2:
        raise ValueError("folds must be >= 2")
    if n < folds:
        raise ValueError("need at least one example per fold")
    if zscore_mode not in ("fold", "global"):
        raise ValueError(f"unknown zscore mode: {zscore_mode!r}")

    if zscore_mode == "global":
        X, _, _ = zscore(X)

    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    assignments = np.array_split(perm, folds)

    accuracies = np.empty(folds)
    predictions = np.empty(n, dtype=int)
    flagged = []
    for f, test_idx in enumerate(assignments):
        train_idx = np.setdiff1d(perm, test_idx, assume_unique=True)
        Xtr, Xte = X[train_idx], X[test_idx]
        if zscore_mode == "fold":
            Xtr, stats, _ = zscore(Xtr)
            Xte, _, _ = zscore(Xte, stats)
        ytr = y[train_idx]
        if ytr.min() == ytr.max():
            fit = fit_logistic(Xtr, ytr, ridge=SEPARATION_RIDGE)
            flagged.append(f)
        else:
            fit = fit_logistic(Xtr, ytr)
            if fit.separation:
                flagged.append(f)
        pred = (predict_proba(fit, Xte) > 0.5).astype(int)
        predictions[test_idx] = pred
        accuracies[f] = float(np.mean(pred == y[test_idx]))
    return CvReport(accuracies, float(accuracies.mean()), predictions, flagged)


@dataclass(frozen=True)
class McNemarResult:
    statistic: float
    p_two_tailed: float
    n01: int
    n10: int


def mcnemar(pred_a, pred_b, truth) -> McNemarResult:
    """Paired test on discordant predictions.

    n01: a correct, b wrong; n10: a wrong, b correct. Exact two-tailed
    binomial p when n01 + n10 < 25, else chi-square with continuity
    correction (|n01 - n10| - 1)^2 / (n01 + n10).
    """
    pred_a = np.asarray(pred_a, dtype=int)
    pred_b = np.asarray(pred_b, dtype=int)
    truth = np.asarray(truth, dtype=int)
    if not (len(pred_a) == len(pred_b) == len(truth)):
        raise ValueError("prediction and truth vectors must have equal length")
    a_ok = pred_a == truth
    b_ok = pred_b == truth
    n01 = int(np.sum(a_ok & ~b_ok))
    n10 = int(np.sum(~a_ok & b_ok))
    n = n01 + n10
    if n == 0:
        return McNemarResult(0.0, 1.0, 0, 0)
    if n < MCNEMAR_EXACT_THRESHOLD:
        m = min(n01, n10)
        tail = sum(math.comb(n, i) for i in range(m + 1)) / 2.0 ** n
        p = min(1.0, 2.0 * tail)
        return McNemarResult(float(m), p, n01, n10)
    stat = (abs(n01 - n10) - 1.0) ** 2 / n
    # chi-square survival with 1 df
    p = math.erfc(math.sqrt(stat / 2.0))
    return McNemarResult(stat, p, n01, n10)


@dataclass
class RfecvResult:
    selected: list                       # feature names, original order
    curve: dict                          # size -> mean CV accuracy
    sets_by_size: dict                   # size -> feature names evaluated


def rfecv(X: np.ndarray, y: np.ndarray, folds: int = 10, seed=0,
          feature_names: Optional[Sequence] = None) -> RfecvResult:
    """Recursive feature elimination with cross-validation, step size 1.

    At each size the feature with smallest |standardized coefficient| in a
    full-data fit is dropped; the smallest set within 1e-9 of the best mean
    CV accuracy is selected.
    """
    X = np.asarray(X, dtype=float)
    if X.ndim == 1 or X.shape[1] < 2:
        raise ValueError("rfecv needs at least 2 candidate features")
    p = X.shape[1]
    names = list(feature_names) if feature_names is not None else [f"x{j}" for j in range(p)]
    active = list(range(p))
    curve, sets_by_size = {}, {}
    while True:
        size = len(active)
        report = crossval_accuracy(X[:, active], y, folds=folds, seed=seed)
        curve[size] = report.mean_accuracy
        sets_by_size[size] = [names[j] for j in active]
        if size == 1:
            break
        Z, _, _ = zscore(X[:, active])
        fit = fit_logistic(Z, y)
        weakest = int(np.argmin(np.abs(fit.coefficients[1:])))
        active.pop(weakest)
    best = max(curve.values())
    chosen_size = min(s for s, acc in curve.items() if acc >= best - 1e-9)
    return RfecvResult(sets_by_size[chosen_size], curve, sets_by_size)


def pearson(x, y) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if len(x) != len(y) or len(x) < 2:
        raise ValueError("need equal-length vectors with at least 2 entries")
    xc = x - x.mean()
    yc = y - y.mean()
    denom = math.sqrt(float(xc @ xc) * float(yc @ yc))
    if denom == 0.0:
        raise ValueError("pearson undefined for zero-variance input")
    return float(xc @ yc) / denom
