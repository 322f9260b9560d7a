"""Kolmogorov-Smirnov and Cramer-von Mises tests against a fully specified CDF."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import distribution as dist
from ._validation import check_sample

__all__ = [
    "GofResult",
    "ks_statistic",
    "ks_test",
    "kolmogorov_sf",
    "ks_exact_cdf",
    "cvm_statistic",
    "cvm_test",
    "cvm_asymptotic_sf",
    "goodness_of_fit",
]

SERIES_TOL = 1e-12
EXACT_KS_MAX_N = 100


@dataclass(frozen=True)
class GofResult:
    ks_stat: float
    ks_p: float
    cvm_stat: float
    cvm_p: float
    n: int


def _probabilities(data, model) -> np.ndarray:
    x = np.sort(check_sample(data))
    if isinstance(model, dist.EgdModel):
        return np.asarray(dist.cdf(model, x), dtype=float)
    if callable(model):
        return np.asarray(model(x), dtype=float)
    return np.asarray(dist.cdf(dist.EgdModel(model), x), dtype=float)


def ks_statistic(u: np.ndarray) -> float:
    """Sup distance for sorted probability-integral values ``u``."""
    n = u.size
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - u), np.max(u - (i - 1) / n)))


def kolmogorov_sf(z: float) -> float:
    """Limiting ``P(sqrt(n) D > z)``.

    Uses ``2 sum (-1)^(k-1) exp(-2 k^2 z^2)`` for ``z >= 1`` and the
    theta-function form of the CDF below that, where the alternating series
    converges slowly.
    """
    if z <= 0.0:
        return 1.0
    if z < 1.0:
        c = math.pi**2 / (8.0 * z * z)
        total, k = 0.0, 1
        while True:
            term = math.exp(-((2 * k - 1) ** 2) * c)
            total += term
            if term < SERIES_TOL:
                break
            k += 1
        return min(1.0, max(0.0, 1.0 - math.sqrt(2.0 * math.pi) / z * total))
    total, k = 0.0, 1
    while True:
        term = math.exp(-2.0 * k * k * z * z)
        total += term if k % 2 else -term
        if term < SERIES_TOL:
            break
        k += 1
    return min(1.0, max(0.0, 2.0 * total))


def ks_exact_cdf(d: float, n: int) -> float:
    """Exact ``P(D_n < d)`` for the two-sided statistic.

    Marsaglia, Tsang and Wang (2003): an ``(2k-1)``-square matrix raised to
    the ``n``-th power, with the exponent of the running product tracked
    separately to avoid overflow.
    """
    if d <= 0.0:
        return 0.0
    if d >= 1.0:
        return 1.0
    nd = n * d
    k = int(nd) + 1
    m = 2 * k - 1
    h = k - nd
    i = np.arange(m)
    diff = i[:, None] - i[None, :] + 1
    H = (diff >= 0).astype(float)
    H[:, 0] -= h ** (i + 1)
    H[m - 1, :] -= h ** (m - i)
    if 2.0 * h - 1.0 > 0.0:
        H[m - 1, 0] += (2.0 * h - 1.0) ** m
    fact = special.factorial(np.where(diff > 0, diff, 0))
    H = np.where(diff > 0, H / fact, H)

    log_scale = 0.0
    result = H.copy()
    for _ in range(n - 1):
        result = result @ H
        s = np.max(np.abs(result))
        if s > 1e100:
            result /= s
            log_scale += math.log(s)
    val = result[k - 1, k - 1]
    if val <= 0.0:
        return 0.0
    log_p = math.log(val) + log_scale + special.gammaln(n + 1) - n * math.log(n)
    return min(1.0, math.exp(log_p))


def ks_test(data, model, method: str = "auto") -> tuple[float, float]:
    """One-sample KS statistic and p-value.

    ``method`` is ``"exact"`` (finite-n distribution), ``"asymptotic"``
    (limiting Kolmogorov law at ``sqrt(n) D``) or ``"auto"``, which uses the
    exact law up to n = 100.
    """
    u = _probabilities(data, model)
    n = u.size
    d = ks_statistic(u)
    if method == "auto":
        method = "exact" if n <= EXACT_KS_MAX_N else "asymptotic"
    if method == "exact":
        p = 1.0 - ks_exact_cdf(d, n)
    elif method == "asymptotic":
        p = kolmogorov_sf(math.sqrt(n) * d)
    else:
        raise ValueError(f"unknown method {method!r}")
    return d, min(1.0, max(0.0, p))


def cvm_statistic(u: np.ndarray) -> float:
    """``W^2 = 1/(12n) + sum (u_(i) - (2i-1)/(2n))^2`` for sorted ``u``."""
    n = u.size
    i = np.arange(1, n + 1)
    return 1.0 / (12.0 * n) + math.fsum((u - (2 * i - 1) / (2.0 * n)) ** 2)


def cvm_asymptotic_sf(w2: float) -> float:
    """Upper tail of the limiting W^2 distribution.

    Anderson and Darling's (1952) series

        P(W^2 <= x) = 1/(pi sqrt x) sum_k c_k sqrt(4k+1) exp(-u_k) K_{1/4}(u_k),
        u_k = (4k+1)^2 / (16 x),  c_k = Gamma(k+1/2) / (Gamma(1/2) k!)
    """
    if w2 <= 0.0:
        return 1.0
    total = 0.0
    for k in range(10_000):
        u = (4 * k + 1) ** 2 / (16.0 * w2)
        logc = special.gammaln(k + 0.5) - special.gammaln(0.5) - special.gammaln(k + 1)
        # kve(v, u) = K_v(u) e^u
        term = math.exp(logc - 2.0 * u) * math.sqrt(4 * k + 1) * special.kve(0.25, u)
        total += term
        if term < SERIES_TOL * max(total, 1e-300) or term == 0.0:
            break
    cdf = total / (math.pi * math.sqrt(w2))
    return min(1.0, max(0.0, 1.0 - cdf))


def cvm_test(data, model) -> tuple[float, float]:
    """Cramer-von Mises W^2 and its asymptotic p-value."""
    u = _probabilities(data, model)
    w2 = cvm_statistic(u)
    return w2, float(cvm_asymptotic_sf(w2))


def goodness_of_fit(data, model, ks_method: str = "auto") -> GofResult:
    """Both tests against ``model`` (an :class:`EgdModel`, a rate, or a CDF callable).

    With a rate estimated from the same data the p-values are approximate.
    """
    ks_stat, ks_p = ks_test(data, model, method=ks_method)
    cvm_stat, cvm_p = cvm_test(data, model)
    return GofResult(ks_stat, ks_p, cvm_stat, cvm_p, int(np.size(check_sample(data))))
