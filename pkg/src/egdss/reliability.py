"""Stress-strength reliability R = P(X > Y) for X ~ EGD(3, lam1), Y ~ EGD(3, lam2)."""
from __future__ import annotations

from typing import NamedTuple

from scipy import integrate

from . import distribution as dist
from ._validation import check_rate

__all__ = [
    "ParamPair",
    "RGradient",
    "QuadratureError",
    "r_closed_form",
    "r_numeric_oracle",
    "r_gradient",
]


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class ParamPair(NamedTuple):
    """Rates of the strength (``lam1``) and stress (``lam2``) distributions."""

    lam1: float
    lam2: float

    @classmethod
    def of(cls, lam1, lam2) -> "ParamPair":
        return cls(check_rate(lam1, "lam1"), check_rate(lam2, "lam2"))


class RGradient(NamedTuple):
    d1: float
    d2: float


def r_closed_form(lam1, lam2) -> float:
    """Closed-form reliability.

    Uses the five-term expansion obtained by integrating the strength
    density against the stress CDF term by term::

        R = 1 - [ a^2 (b^2 + ab + a) / (A B s^3) + a^2 b / (A B s^2) + a^2 / (A s)
                  + 6 a^3 b^2 / (A B s^5) + 3 a^3 b / (A B s^4) ]

    with ``a = lam1``, ``b = lam2``, ``A = 1 + a``, ``B = 1 + b``, ``s = a + b``.
    """
    a, b = ParamPair.of(lam1, lam2)
    if a == b:
        return 0.5  # i.i.d. continuous strength and stress
    A, B, s = 1.0 + a, 1.0 + b, a + b
    a2 = a * a
    inner = (
        a2 * (b * b + a * b + a) / (A * B * s**3)
        + a2 * b / (A * B * s**2)
        + a2 / (A * s)
        + 6.0 * a2 * a * b * b / (A * B * s**5)
        + 3.0 * a2 * a * b / (A * B * s**4)
    )
    return 1.0 - inner


def r_polynomial(lam1, lam2) -> float:
    """Single-fraction form of the same reliability (used as a cross-check)."""
    a, b = ParamPair.of(lam1, lam2)
    num = b * b * (
        a**5 + 4 * a**4 * b + 3 * a**4 + 6 * a**3 * b**2 + 10 * a**3 * b
        + 4 * a**2 * b**3 + 12 * a**2 * b**2 + 10 * a**2 * b
        + a * b**4 + 6 * a * b**3 + 5 * a * b**2 + b**4 + b**3
    )
    return num / ((1.0 + a) * (1.0 + b) * (a + b) ** 5)


def r_numeric_oracle(lam1, lam2, atol: float = 1e-12) -> float:
    """Reliability by adaptive quadrature of ``f_X(x) F_Y(x)`` over ``(0, inf)``.

    Shares no algebra with :func:`r_closed_form`.  The integrand is cut at
    ``U = 40 / min(lam1, lam2)``; the neglected tail is bounded by
    ``P(X > U)`` and checked against ``atol``.
    """
    a, b = ParamPair.of(lam1, lam2)
    fx, fy = dist.EgdModel(a), dist.EgdModel(b)
    upper = 40.0 / min(a, b)
    tail = dist.sf(fx, upper)
    if tail > atol:
        raise QuadratureError(f"tail mass {tail:.3g} beyond cutoff exceeds {atol:g}")

    def integrand(x):
        return dist.pdf(fx, x) * dist.cdf(fy, x)

    # split at the bulk of each density so the adaptive rule sees both scales
    points = sorted({min(upper, c / a) for c in (1.0, 3.0, 10.0)} | {min(upper, c / b) for c in (1.0, 3.0, 10.0)})
    value, err, info = integrate.quad(
        integrand, 0.0, upper, epsabs=atol, epsrel=1e-13, limit=500, points=points, full_output=1
    )[:3]
    if err > atol or info.get("ier", 0) not in (0,):
        raise QuadratureError(f"quadrature error estimate {err:.3g} exceeds {atol:g}")
    return value


def r_gradient(lam1, lam2) -> RGradient:
    """Exact partial derivatives of :func:`r_closed_form` in ``(lam1, lam2)``."""
    a, b = ParamPair.of(lam1, lam2)
    s6 = (a + b) ** 6
    p1 = (
        a**5 + 4 * a**4 * b + 6 * a**4 + 6 * a**3 * b**2 + 20 * a**3 * b + 3 * a**3
        + 4 * a**2 * b**3 + 24 * a**2 * b**2 + 48 * a**2 * b
        + a * b**4 + 12 * a * b**3 + 21 * a * b**2 + 30 * a * b + 2 * b**4 + 6 * b**3
    )
    d1 = -a * b * b * p1 / ((1.0 + a) ** 2 * (1.0 + b) * s6)
    p2 = (
        a**4 * b + 2 * a**4 + 4 * a**3 * b**2 + 12 * a**3 * b + 6 * a**3
        + 6 * a**2 * b**3 + 24 * a**2 * b**2 + 21 * a**2 * b
        + 4 * a * b**4 + 20 * a * b**3 + 48 * a * b**2 + 30 * a * b
        + b**5 + 6 * b**4 + 3 * b**3
    )
    d2 = a * a * b * p2 / ((1.0 + a) * (1.0 + b) ** 2 * s6)
    return RGradient(d1, d2)
