"""scikit-learn style wrappers around the fitting and reliability routines."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, DensityMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import distribution as dist
from ._validation import ValidationError, check_level, check_sample
from .gof import goodness_of_fit
from .inference import _reliability_from_fits, fit_mle


def _column(X, label="X"):
    """Accept a 1-D array or a single-column 2-D array of observations."""
    arr = np.asarray(X, dtype=float)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValidationError(f"{label}: expected a single column, got shape {arr.shape}")
        arr = arr[:, 0]
    elif arr.ndim != 1:
        raise ValidationError(f"{label}: expected 1-D data, got shape {arr.shape}")
    return check_sample(arr, label)


class EGDEstimator(DensityMixin, TransformerMixin, BaseEstimator):
    """Maximum-likelihood EGD(3, lam) fit.

    ``transform`` maps observations through the fitted CDF, so the estimator
    can sit in a pipeline as a probability-integral transform.

    Parameters
    ----------
    start : float, optional
        Initial rate for Newton-Raphson; the method-of-moments root by default.

    Attributes
    ----------
    lam_ : float
    fit_result_ : FitResult
    model_ : EgdModel
    """

    def __init__(self, start=None):
        self.start = start

    def fit(self, X, y=None):
        x = _column(X)
        if x.size < 2:
            raise ValidationError("need at least 2 observations to fit")
        self.fit_result_ = fit_mle(x, start=self.start)
        self.lam_ = self.fit_result_.lam_hat
        self.model_ = dist.EgdModel(self.lam_)
        self.n_features_in_ = 1
        return self

    def score_samples(self, X):
        check_is_fitted(self, "lam_")
        return np.asarray(dist.log_pdf(self.model_, _column(X)))

    def score(self, X, y=None):
        """Total log-likelihood of ``X`` under the fitted model."""
        return float(np.sum(self.score_samples(X)))

    def transform(self, X):
        check_is_fitted(self, "lam_")
        return np.asarray(dist.cdf(self.model_, _column(X))).reshape(-1, 1)

    def sample(self, n_samples=1, random_state=None):
        check_is_fitted(self, "lam_")
        return dist.sample(self.model_, n_samples, random_state).values.copy()

    def goodness_of_fit(self, X, ks_method="auto"):
        check_is_fitted(self, "lam_")
        return goodness_of_fit(_column(X), self.model_, ks_method=ks_method)


class StressStrengthReliability(BaseEstimator):
    """Estimate R = P(strength > stress) from two independent samples.

    Parameters
    ----------
    level : float, default 0.95
        Confidence level of the delta-method interval.

    Attributes
    ----------
    r_hat_, avar_ : float
    ci_ : tuple of float
        Unclipped interval ``(low, high)``.
    strength_ , stress_ : EGDEstimator
        Per-sample fits.
    """

    def __init__(self, level=0.95):
        self.level = level

    def fit(self, strength, stress):
        level = check_level(self.level)
        self.strength_ = EGDEstimator().fit(_column(strength, "strength"))
        self.stress_ = EGDEstimator().fit(_column(stress, "stress"))
        self.estimate_ = _reliability_from_fits(
            self.strength_.fit_result_, self.stress_.fit_result_, level
        )
        self.r_hat_ = self.estimate_.r_hat
        self.avar_ = self.estimate_.avar
        self.ci_ = (self.estimate_.ci_low, self.estimate_.ci_high)
        return self
