import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from egdss import distribution as dist
from egdss._validation import Sample, ValidationError
from egdss.distribution import EgdModel


def _pdf_oracle(lam, x):
    return lam**2 / (1 + lam) * (1 + lam / 2 * x**2) * math.exp(-lam * x)


def _cdf_oracle(lam, x):
    return 1 - (lam * (x * (lam * x + 2) + 2) + 2) * math.exp(-lam * x) / (2 * (1 + lam))


class TestModel:
    @pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan, 2e6])
    def test_rejects_bad_rates(self, bad):
        with pytest.raises(ValidationError):
            EgdModel(bad)

    @pytest.mark.parametrize("lam", [0.01, 1.0, 50.0])
    def test_mixture_weight(self, lam):
        w = EgdModel(lam).weight
        assert 0 < w < 1
        assert w == pytest.approx(lam / (1 + lam))

    def test_immutable(self):
        m = EgdModel(1.0)
        with pytest.raises(AttributeError):
            m.lam = 2.0


class TestPdf:
    def test_origin(self):
        assert dist.pdf(1.0, 0.0) == 0.5

    def test_hand_values(self):
        assert dist.pdf(1.0, 1.0) == pytest.approx(0.75 * math.exp(-1), rel=1e-15)
        assert dist.pdf(2.0, 0.5) == pytest.approx(4 / 3 * 1.25 * math.exp(-1), rel=1e-15)
        assert dist.pdf(2.0, 0.5) == pytest.approx(0.6131324, abs=1e-7)

    def test_negative_support(self):
        assert dist.pdf(1.0, -0.3) == 0.0
        np.testing.assert_array_equal(dist.pdf(1.0, np.array([-2.0, -1e-9])), [0.0, 0.0])

    @pytest.mark.parametrize("lam", [0.1, 0.5, 1, 1.5, 5, 20])
    def test_normalisation(self, lam):
        total = integrate.quad(lambda x: dist.pdf(lam, x), 0, np.inf, epsabs=1e-12, epsrel=1e-12)[0]
        assert abs(total - 1) <= 1e-8


class TestLogPdf:
    def test_hand_values(self):
        assert dist.log_pdf(1.0, 1.0) == pytest.approx(math.log(0.75) - 1, abs=1e-14)
        # 2 log 0.5 - log 1.5 + log(1 + 0.5 * 4 / 2) - 1
        assert dist.log_pdf(0.5, 2.0) == pytest.approx(-math.log(2) - math.log(1.5) - 1, abs=1e-14)

    def test_boundary(self):
        assert dist.log_pdf(1.0, 1e-300) == pytest.approx(math.log(0.5), abs=1e-14)

    @given(st.floats(0.01, 50), st.floats(1e-3, 100))
    def test_matches_log_of_pdf(self, lam, x):
        p = _pdf_oracle(lam, x)
        if p > 1e-300:
            assert dist.log_pdf(lam, x) == pytest.approx(math.log(p), rel=1e-10, abs=1e-12)


class TestCdf:
    def test_origin_and_tail(self):
        assert dist.cdf(1.5, 0.0) == 0.0
        assert dist.cdf(1.5, -4.0) == 0.0
        assert abs(dist.cdf(1.0, 50.0) - 1.0) <= 1e-12

    def test_hand_value(self):
        assert dist.cdf(1.0, 1.0) == pytest.approx(1 - 7 * math.exp(-1) / 4, abs=1e-15)

    @pytest.mark.parametrize("lam,x", [(1.0, 1.0), (0.5, 3.0), (1.5, 0.2), (7.0, 0.4)])
    def test_against_quadrature(self, lam, x):
        q = integrate.quad(lambda t: _pdf_oracle(lam, t), 0, x, epsabs=1e-14, epsrel=1e-14)[0]
        assert dist.cdf(lam, x) == pytest.approx(q, abs=1e-13)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
    def test_derivative_is_pdf(self, lam):
        xs = np.linspace(0.05, 15 / lam, 50)
        h = 1e-5 * np.maximum(1, xs)
        fd = (dist.cdf(lam, xs + h) - dist.cdf(lam, xs - h)) / (2 * h)
        np.testing.assert_allclose(fd, dist.pdf(lam, xs), rtol=1e-6)

    @given(st.floats(0.01, 100), st.lists(st.floats(0, 200), min_size=2, max_size=50))
    def test_nondecreasing(self, lam, xs):
        vals = dist.cdf(lam, np.sort(xs))
        assert np.all(np.diff(vals) >= 0)

    @given(st.floats(0.05, 20), st.floats(0, 60))
    def test_sf_complements(self, lam, x):
        assert dist.cdf(lam, x) + dist.sf(lam, x) == pytest.approx(1.0, abs=1e-14)

    def test_closed_form_expression(self):
        for lam in (0.3, 1.0, 4.0):
            for x in (0.5, 2.0, 9.0):
                assert dist.cdf(lam, x) == pytest.approx(_cdf_oracle(lam, x), abs=1e-14)


class TestQuantile:
    def test_round_trip_point(self):
        assert abs(dist.quantile(1.0, dist.cdf(1.0, 2.0)) - 2.0) <= 1e-9

    def test_median_by_bisection(self):
        lo, hi = 0.0, 50.0
        while hi - lo > 1e-14:
            mid = 0.5 * (lo + hi)
            lo, hi = (mid, hi) if _cdf_oracle(1.0, mid) < 0.5 else (lo, mid)
        q = dist.quantile(1.0, 0.5)
        assert q == pytest.approx(lo, abs=1e-10)
        assert abs(dist.cdf(1.0, q) - 0.5) <= 1e-12

    def test_upper_tail(self):
        q = dist.quantile(0.5, 0.999)
        assert math.isfinite(q)
        assert abs(dist.cdf(0.5, q) - 0.999) <= 1e-12

    @pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
    @pytest.mark.parametrize("x", [0.01, 0.1, 1, 5, 20])
    def test_round_trip(self, lam, x):
        # p carries only ~eps absolute precision, which pins x to within eps / pdf(x)
        limit = max(1e-8, 4 * np.finfo(float).eps / dist.pdf(lam, x))
        assert abs(dist.quantile(lam, dist.cdf(lam, x)) - x) <= limit

    def test_strictly_increasing(self):
        ps = np.linspace(0.001, 0.999, 200)
        assert np.all(np.diff(dist.quantile(1.3, ps)) > 0)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1, 1.5, math.nan])
    def test_rejects_outside_unit_interval(self, p):
        with pytest.raises(ValidationError):
            dist.quantile(1.0, p)


class TestMoments:
    def test_mean_values(self):
        assert dist.mean(1.0) == 2.0
        assert dist.mean(3.0) == 0.5
        assert dist.mean(100.0) < 0.011

    @pytest.mark.parametrize("lam", [0.4, 1.0, 3.0])
    def test_mean_and_variance_by_quadrature(self, lam):
        m1 = integrate.quad(lambda x: x * _pdf_oracle(lam, x), 0, np.inf)[0]
        m2 = integrate.quad(lambda x: x * x * _pdf_oracle(lam, x), 0, np.inf)[0]
        assert dist.mean(lam) == pytest.approx(m1, rel=1e-10)
        assert dist.variance(lam) == pytest.approx(m2 - m1 * m1, rel=1e-9)


class TestSampling:
    def test_mean_within_four_se(self):
        x = dist.sample(1.0, 10**6, 12345).values
        se = math.sqrt(dist.variance(1.0) / x.size)
        assert abs(x.mean() - 2.0) <= 4 * se

    def test_deterministic(self):
        a = dist.sample(1.5, 10**5, np.random.default_rng(7)).values
        b = dist.sample(1.5, 10**5, np.random.default_rng(7)).values
        np.testing.assert_array_equal(a, b)

    @pytest.mark.parametrize("lam", [0.5, 1.0, 1.5])
    def test_ks_distance(self, lam):
        x = np.sort(dist.sample(lam, 10**5, 99).values)
        f = dist.cdf(lam, x)
        n = x.size
        i = np.arange(1, n + 1)
        d = max(np.max(i / n - f), np.max(f - (i - 1) / n))
        assert d < 0.01

    def test_branch_fraction(self):
        lam = 0.8
        n = 10**6
        _, branch = dist._draw(lam, n, np.random.default_rng(3))
        w = lam / (1 + lam)
        assert abs(branch.mean() - w) <= 4 * math.sqrt(w * (1 - w) / n)

    def test_values_positive_and_labelled(self):
        s = dist.sample(20.0, 1000, 1, label="stress")
        assert isinstance(s, Sample)
        assert s.label == "stress"
        assert np.all(s.values > 0)

    def test_rejects_empty(self):
        with pytest.raises(ValidationError):
            dist.sample(1.0, 0)


class TestSample:
    @pytest.mark.parametrize("bad", [[], [1.0, -2.0], [0.0], [1.0, math.inf], [math.nan]])
    def test_rejects(self, bad):
        with pytest.raises(ValidationError):
            Sample(bad)

    def test_error_names_label(self):
        with pytest.raises(ValidationError, match="stress"):
            Sample([1.0, -1.0], "stress")
