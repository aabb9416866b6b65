"""Fixed-effect count GLMs: Poisson via IRLS, NB2 via direct ML."""

from __future__ import annotations

import numpy as np
from scipy.special import gammaln

from .design import DesignMatrix
from .fitbase import FitResult, covariance_from_hessian, maximize
from .kernels import nb2_row_terms

_ETA_CAP = 30.0
_BETA_CAP = 30.0


class DispersionError(ValueError):
    pass


def poisson_loglik(y: np.ndarray, eta: np.ndarray) -> float:
    return float(np.sum(y * eta - np.exp(eta) - gammaln(y + 1.0)))


def fit_poisson(design: DesignMatrix) -> FitResult:
    """Maximum-likelihood Poisson regression, log link, no random effect.

    Iteratively reweighted least squares; divergence (e.g. an all-zero
    response pushing the intercept to -inf) flags the fit unconverged
    instead of raising.
    """
    y, X = design.y, design.X
    n, p = X.shape
    beta = np.zeros(p)
    beta[0] = np.log(y.mean() + 1e-8) if y.mean() > 0 else -_BETA_CAP
    ll_old = -np.inf
    converged = False
    message = ""
    for _ in range(200):
        eta = np.clip(X @ beta, -_ETA_CAP, _ETA_CAP)
        mu = np.exp(eta)
        W = mu
        z = eta + (y - mu) / np.maximum(mu, 1e-12)
        XtW = X.T * W
        try:
            beta_new = np.linalg.solve(XtW @ X, XtW @ z)
        except np.linalg.LinAlgError:
            message = "singular weighted design"
            break
        if not np.all(np.isfinite(beta_new)) or np.max(np.abs(beta_new)) > _BETA_CAP:
            beta = np.clip(beta_new, -_BETA_CAP, _BETA_CAP)
            message = "diverging coefficients"
            break
        beta = beta_new
        ll = poisson_loglik(y, np.clip(X @ beta, -_ETA_CAP, _ETA_CAP))
        if abs(ll - ll_old) < 1e-10 * (1.0 + abs(ll)):
            converged = True
            break
        ll_old = ll
    eta = np.clip(X @ beta, -_ETA_CAP, _ETA_CAP)
    mu = np.exp(eta)
    info = (X.T * mu) @ X
    cov, cov_ok = covariance_from_hessian(info)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    return FitResult(
        model="poisson",
        names=list(design.names),
        beta=beta,
        se=se,
        cov=cov,
        ll=poisson_loglik(y, eta),
        converged=converged and cov_ok,
        n_obs=n,
        mu_hat=mu,
        message=message,
        grad_norm=float(np.max(np.abs(X.T @ (y - mu)))),
    )


def dispersion_statistic(fit: FitResult, design: DesignMatrix) -> float:
    """Pearson chi-square over residual degrees of freedom."""
    y = design.y
    mu = fit.mu_hat
    pearson = float(np.sum((y - mu) ** 2 / np.maximum(mu, 1e-12)))
    df = design.y.size - design.X.shape[1]
    if df <= 0:
        raise DispersionError(f"non-positive residual degrees of freedom: {df}")
    return pearson / df


def fit_negbin_glm(design: DesignMatrix, theta_fixed: float | None = None) -> FitResult:
    """NB2 GLM with log link; theta estimated jointly unless pinned."""
    y, X = design.y, design.X
    n, p = X.shape
    start = fit_poisson(design)
    beta0 = start.beta if np.all(np.isfinite(start.beta)) else np.zeros(p)
    m, v = float(y.mean()), float(y.var())
    theta0 = m * m / (v - m) if v > m and m > 0 else 10.0
    theta0 = float(np.clip(theta0, 1e-2, 1e4))

    if theta_fixed is not None:

        def obj(params):
            beta = params
            eta = np.clip(X @ beta, -_ETA_CAP, _ETA_CAP)
            ll, a, *_rest = nb2_row_terms(y, eta, theta_fixed)
            return float(ll.sum()), X.T @ a

        out = maximize(obj, beta0)
        beta, log_theta = out.x, np.log(theta_fixed)
    else:

        def obj(params):
            beta = params[:-1]
            theta = float(np.exp(params[-1]))
            eta = np.clip(X @ beta, -_ETA_CAP, _ETA_CAP)
            ll, a, _b, _c, lth, *_ = nb2_row_terms(y, eta, theta)
            grad = np.concatenate([X.T @ a, [theta * float(lth.sum())]])
            return float(ll.sum()), grad

        bounds = [(-_BETA_CAP, _BETA_CAP)] * p + [(-6.0, 14.0)]
        out = maximize(obj, np.concatenate([beta0, [np.log(theta0)]]), bounds)
        beta, log_theta = out.x[:-1], out.x[-1]

    theta = float(np.exp(log_theta))
    eta = np.clip(X @ beta, -_ETA_CAP, _ETA_CAP)
    mu = np.exp(eta)
    cov_full, _ = covariance_from_hessian(out.hessian, out.active)
    cov = cov_full[:p, :p]  # beta block of the full inverse (theta uncertainty included)
    se = np.sqrt(np.maximum(np.diag(cov), 0.0))
    cov_ok = bool(np.all(se[:p] > 0))
    return FitResult(
        model="nb_glm",
        names=list(design.names),
        beta=beta,
        se=se[:p],
        cov=cov,
        ll=out.ll,
        converged=out.converged and cov_ok and bool(y.sum() > 0),
        n_obs=n,
        mu_hat=mu,
        theta=theta,
        message=out.message,
        grad_norm=float(np.max(np.abs(out.grad))),
    )
