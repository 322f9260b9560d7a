"""Exponential-Gamma(3, lambda) distribution.

The density is

    f(x) = lam^2 / (1 + lam) * (1 + lam * x^2 / 2) * exp(-lam * x),   x > 0,

which is a two-component mixture: Exponential(lam) with weight
``lam / (1 + lam)`` and Gamma(shape=3, rate=lam) with weight ``1 / (1 + lam)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._validation import Sample, ValidationError, check_rate

__all__ = ["EgdModel", "pdf", "log_pdf", "cdf", "sf", "quantile", "sample", "mean", "variance"]


@dataclass(frozen=True)
class EgdModel:
    """Immutable EGD(3, lam) model with rate ``lam``."""

    lam: float = field()

    def __post_init__(self):
        object.__setattr__(self, "lam", check_rate(self.lam, "lam"))

    @property
    def weight(self) -> float:
        """Probability of the exponential component."""
        return self.lam / (1.0 + self.lam)

    def pdf(self, x):
        return pdf(self, x)

    def log_pdf(self, x):
        return log_pdf(self, x)

    def cdf(self, x):
        return cdf(self, x)

    def sf(self, x):
        return sf(self, x)

    def quantile(self, p):
        return quantile(self, p)

    def sample(self, n, rng=None, label="sample"):
        return sample(self, n, rng, label)

    def mean(self):
        return mean(self)

    def variance(self):
        return variance(self)


def _model(model) -> EgdModel:
    return model if isinstance(model, EgdModel) else EgdModel(model)


def _scalar_or_array(out, x):
    return float(out) if np.ndim(x) == 0 else out


def pdf(model, x):
    """Density at ``x``; zero for ``x < 0`` and ``lam^2/(1+lam)`` at the origin."""
    lam = _model(model).lam
    x = np.asarray(x, dtype=float)
    xp = np.where(x < 0.0, 0.0, x)
    out = lam * lam / (1.0 + lam) * (1.0 + 0.5 * lam * xp * xp) * np.exp(-lam * xp)
    out = np.where(x < 0.0, 0.0, out)
    return _scalar_or_array(out, x)


def log_pdf(model, x):
    """Log-density, evaluated term by term rather than as ``log(pdf)``."""
    lam = _model(model).lam
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (
            2.0 * math.log(lam)
            - math.log1p(lam)
            + np.log1p(0.5 * lam * x * x)
            - lam * x
        )
        out = np.where(x < 0.0, -np.inf, out)
    return _scalar_or_array(out, x)


def sf(model, x):
    """Survival function ``1 - F(x)``."""
    lam = _model(model).lam
    x = np.asarray(x, dtype=float)
    xp = np.where(x > 0.0, x, 0.0)
    t = lam * xp
    out = np.exp(-t) * (1.0 + (t + 0.5 * t * t) / (1.0 + lam))
    out = np.where(x > 0.0, out, 1.0)
    return _scalar_or_array(out, x)


def cdf(model, x):
    """Distribution function ``F(x) = 1 - (lam(x(lam x + 2) + 2) + 2) e^{-lam x} / (2(1 + lam))``.

    Small arguments go through ``-expm1`` to avoid cancellation near the origin.
    """
    lam = _model(model).lam
    x = np.asarray(x, dtype=float)
    xp = np.where(x > 0.0, x, 0.0)
    t = lam * xp
    # numerator is t^2 + 2t + 2(1 + lam), so F = 1 - e^{-t} - e^{-t} (t + t^2/2) / (1 + lam)
    out = -np.expm1(-t) - np.exp(-t) * (t + 0.5 * t * t) / (1.0 + lam)
    out = np.where(x > 0.0, out, 0.0)
    out = np.clip(out, 0.0, 1.0)
    return _scalar_or_array(out, x)


def _quantile_scalar(lam: float, p: float, tol: float = 1e-12) -> float:
    model = EgdModel(lam)
    lo, hi = 0.0, 1.0 / lam
    while cdf(model, hi) <= p:
        lo, hi = hi, 2.0 * hi
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if cdf(model, mid) < p:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-6 * hi:
            break
    x = 0.5 * (lo + hi)
    # Newton polish, kept inside the bracket, run until the step stalls
    for _ in range(100):
        err = cdf(model, x) - p
        if err == 0.0:
            break
        if err < 0.0:
            lo = x
        else:
            hi = x
        dens = pdf(model, x)
        nxt = x - err / dens if dens > 0.0 else 0.5 * (lo + hi)
        if not lo <= nxt <= hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - x) <= 4.0 * np.finfo(float).eps * x:
            x = nxt
            break
        x = nxt
    if abs(cdf(model, x) - p) > tol:
        raise ArithmeticError(f"quantile did not reach |F(x) - p| <= {tol:g} at p={p!r}")
    return x


def quantile(model, p):
    """Inverse CDF for ``p`` in (0, 1).

    Bisection on a doubling bracket followed by Newton steps; the returned
    ``x`` satisfies ``|F(x) - p| <= 1e-12``.
    """
    lam = _model(model).lam
    parr = np.asarray(p, dtype=float)
    if np.any(~((parr > 0.0) & (parr < 1.0))):
        raise ValidationError("quantile: probabilities must lie strictly inside (0, 1)")
    out = np.array([_quantile_scalar(lam, float(q)) for q in parr.ravel()]).reshape(parr.shape)
    return _scalar_or_array(out, parr)


def _draw(lam: float, n: int, rng: np.random.Generator):
    """Return ``(values, is_exponential_branch)`` for ``n`` mixture draws."""
    branch = rng.random(n) < lam / (1.0 + lam)
    u = rng.random((n, 3))
    e = -np.log1p(-u) / lam  # inverse-CDF exponentials; u == 0 gives an exact zero
    x = np.where(branch, e[:, 0], e.sum(axis=1))
    zero = np.flatnonzero(x <= 0.0)
    while zero.size:
        redo, redo_branch = _draw(lam, zero.size, rng)
        x[zero] = redo
        branch[zero] = redo_branch
        zero = np.flatnonzero(x <= 0.0)
    return x, branch


def sample(model, n: int, rng=None, label: str = "sample") -> Sample:
    """Draw ``n`` observations through the exponential/gamma mixture.

    ``rng`` is anything :func:`numpy.random.default_rng` accepts; the same
    generator state always yields the same sequence.
    """
    lam = _model(model).lam
    n = int(n)
    if n < 1:
        raise ValidationError(f"sample size must be >= 1, got {n}")
    values, _ = _draw(lam, n, np.random.default_rng(rng))
    return Sample(values, label)


def mean(model) -> float:
    """``(lam + 3) / (lam (1 + lam))``."""
    lam = _model(model).lam
    return (lam + 3.0) / (lam * (1.0 + lam))


def variance(model) -> float:
    lam = _model(model).lam
    w = lam / (1.0 + lam)
    second = w * 2.0 / lam**2 + (1.0 - w) * 12.0 / lam**2
    return second - mean(lam) ** 2
