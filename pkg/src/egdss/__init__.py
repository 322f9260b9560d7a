"""Stress-strength reliability under the Exponential-Gamma(3, lambda) distribution."""
__version__ = "0.1.0"

from ._validation import Sample, ValidationError
from .distribution import EgdModel, cdf, log_pdf, mean, pdf, quantile, sample, sf, variance
from .estimators import EGDEstimator, StressStrengthReliability
from .gof import GofResult, cvm_test, goodness_of_fit, ks_test
from .inference import (
    ConvergenceError,
    FitResult,
    ReliabilityEstimate,
    estimate_r,
    expected_information,
    fit_mle,
    log_likelihood,
    neg_hessian,
    score,
)
from .reliability import QuadratureError, r_closed_form, r_gradient, r_numeric_oracle
from .simulation import SimulationSpec, run_cell, run_tables
