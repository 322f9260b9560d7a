"""Maximum-likelihood fitting of EGD(3, lam) and inference on R = P(X > Y)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import distribution as dist
from ._validation import Sample, ValidationError, check_level, check_rate, check_sample
from .reliability import QuadratureError, r_closed_form, r_gradient

__all__ = [
    "FitResult",
    "ReliabilityEstimate",
    "ConvergenceError",
    "log_likelihood",
    "score",
    "neg_hessian",
    "moment_start",
    "fit_mle",
    "estimate_r",
    "expected_information",
    "normal_quantile",
]

MAX_ITER = 100
MAX_HALVINGS = 30


class ConvergenceError(RuntimeError):
    """Newton iteration failed; ``result`` holds the last iterate."""

    def __init__(self, message: str, result: "FitResult"):
        super().__init__(message)
        self.result = result


@dataclass(frozen=True)
class FitResult:
    lam_hat: float
    loglik: float
    score_at_mle: float
    observed_info: float
    std_err: float
    iterations: int
    converged: bool
    n: int


@dataclass(frozen=True)
class ReliabilityEstimate:
    r_hat: float
    avar: float
    ci_low: float
    ci_high: float
    level: float
    strength_fit: FitResult
    stress_fit: FitResult

    @property
    def std_err(self) -> float:
        return math.sqrt(self.avar)


def log_likelihood(lam, data) -> float:
    """``2n log lam - n log(1 + lam) - lam sum(x) + sum(log(1 + lam x^2 / 2))``."""
    lam = check_rate(lam, "lam")
    x = check_sample(data)
    n = x.size
    return (
        2.0 * n * math.log(lam)
        - n * math.log1p(lam)
        - lam * math.fsum(x)
        + math.fsum(np.log1p(0.5 * lam * x * x))
    )


def score(lam, data) -> float:
    """First derivative of :func:`log_likelihood` in ``lam``."""
    lam = check_rate(lam, "lam")
    x = check_sample(data)
    n = x.size
    x2 = x * x
    return 2.0 * n / lam - n / (1.0 + lam) - math.fsum(x) + math.fsum(x2 / (2.0 + lam * x2))


def neg_hessian(lam, data) -> float:
    """Minus the second derivative of :func:`log_likelihood`; always positive."""
    lam = check_rate(lam, "lam")
    x = check_sample(data)
    n = x.size
    x2 = x * x
    return 2.0 * n / lam**2 - n / (1.0 + lam) ** 2 + math.fsum((x2 / (2.0 + lam * x2)) ** 2)


def moment_start(data) -> float:
    """Positive root of ``xbar lam^2 + (xbar - 1) lam - 3 = 0`` (method of moments)."""
    xbar = float(np.mean(check_sample(data)))
    b = xbar - 1.0
    disc = math.sqrt(b * b + 12.0 * xbar)
    # stable form of (-b + disc) / (2 xbar)
    return 6.0 / (b + disc) if b > 0 else (disc - b) / (2.0 * xbar)


def fit_mle(data, start: float | None = None, *, label: str | None = None) -> FitResult:
    """Maximum-likelihood estimate of ``lam`` by damped Newton-Raphson.

    Starts from the method-of-moments root unless ``start`` is given.  A step
    that leaves ``(0, inf)`` or lowers the log-likelihood is halved, up to 30
    times.  Stops when ``|score| <= 1e-10 max(1, n)`` or the step falls below
    ``1e-12 lam``.

    Raises
    ------
    ConvergenceError
        No convergence within 100 iterations; carries the last iterate.
    """
    if label is None:
        label = data.label if isinstance(data, Sample) else "sample"
    x = check_sample(data, label, min_size=2)
    n = x.size
    lam = moment_start(x) if start is None else check_rate(start, "start")
    ll = log_likelihood(lam, x)
    g = score(lam, x)
    h = neg_hessian(lam, x)
    converged = False
    it = 0
    for it in range(1, MAX_ITER + 1):
        if abs(g) <= 1e-10 * max(1.0, n):
            converged = True
            it -= 1
            break
        step = g / h
        if abs(step) <= 1e-12 * lam:
            converged = True
            break
        for _ in range(MAX_HALVINGS):
            cand = lam + step
            if cand > 0.0 and math.isfinite(cand):
                cand_ll = log_likelihood(cand, x)
                if cand_ll >= ll - 1e-15 * abs(ll):
                    break
            step *= 0.5
        else:
            break
        lam, ll = cand, cand_ll
        g = score(lam, x)
        h = neg_hessian(lam, x)
        if abs(step) <= 1e-12 * lam:
            converged = True
            break
    result = FitResult(
        lam_hat=lam,
        loglik=ll,
        score_at_mle=g,
        observed_info=h,
        std_err=1.0 / math.sqrt(h),
        iterations=it,
        converged=converged,
        n=n,
    )
    if not converged:
        raise ConvergenceError(
            f"{label}: Newton iteration did not converge after {it} iterations "
            f"(lam={lam:.6g}, score={g:.3g})",
            result,
        )
    return result


def normal_quantile(p: float) -> float:
    """Standard normal inverse CDF."""
    return float(special.ndtri(p))


def estimate_r(strength, stress, level: float = 0.95) -> ReliabilityEstimate:
    """MLE of R with a delta-method confidence interval.

    Each rate is fitted on its own sample; the estimate is
    ``r_closed_form(lam1_hat, lam2_hat)``.  Since the samples are independent
    the information matrix is diagonal and

        avar = d1^2 / I1 + d2^2 / I2

    with ``(d1, d2)`` the gradient of R and ``I1, I2`` the observed
    information at each MLE.  The interval ``r_hat +/- z * sqrt(avar)`` is
    not clipped to [0, 1].
    """
    level = check_level(level)
    xs = check_sample(strength, getattr(strength, "label", "strength"), min_size=2)
    ys = check_sample(stress, getattr(stress, "label", "stress"), min_size=2)
    fit1 = fit_mle(xs, label=getattr(strength, "label", "strength"))
    fit2 = fit_mle(ys, label=getattr(stress, "label", "stress"))
    return _reliability_from_fits(fit1, fit2, level)


def _reliability_from_fits(fit1: FitResult, fit2: FitResult, level: float) -> ReliabilityEstimate:
    r_hat = r_closed_form(fit1.lam_hat, fit2.lam_hat)
    d1, d2 = r_gradient(fit1.lam_hat, fit2.lam_hat)
    avar = d1 * d1 / fit1.observed_info + d2 * d2 / fit2.observed_info
    half = normal_quantile(0.5 + 0.5 * level) * math.sqrt(avar)
    return ReliabilityEstimate(
        r_hat=r_hat,
        avar=avar,
        ci_low=r_hat - half,
        ci_high=r_hat + half,
        level=level,
        strength_fit=fit1,
        stress_fit=fit2,
    )


def expected_information(lam, n: int = 1, tol: float = 1e-10) -> float:
    """Fisher information ``n E[2/lam^2 - 1/(1+lam)^2 + X^4 / (4 (1 + lam X^2/2)^2)]``.

    The expectation is taken by adaptive quadrature against the density.
    """
    lam = check_rate(lam, "lam")
    n = int(n)
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    model = dist.EgdModel(lam)

    def integrand(x):
        x2 = x * x
        return (x2 / (2.0 + lam * x2)) ** 2 * dist.pdf(model, x)

    upper = 200.0 / lam
    value, err, info = integrate.quad(
        integrand, 0.0, upper, epsabs=tol, epsrel=tol, limit=500,
        points=[1.0 / lam, 3.0 / lam, 10.0 / lam], full_output=1
    )[:3]
    if err > max(tol, tol * abs(value)) or info.get("ier", 0) != 0:
        raise QuadratureError(f"expected information quadrature error {err:.3g}")
    return n * (2.0 / lam**2 - 1.0 / (1.0 + lam) ** 2 + value)
