import numpy as np
import pytest
from hypothesis import given, strategies as st

from egdss._validation import ValidationError
from egdss.reliability import r_closed_form, r_gradient, r_numeric_oracle, r_polynomial

GRID = np.geomspace(0.1, 10, 10)
rates = st.floats(0.05, 20)


def _fd(lam1, lam2):
    h1 = 1e-6 * max(1.0, lam1)
    h2 = 1e-6 * max(1.0, lam2)
    d1 = (r_closed_form(lam1 + h1, lam2) - r_closed_form(lam1 - h1, lam2)) / (2 * h1)
    d2 = (r_closed_form(lam1, lam2 + h2) - r_closed_form(lam1, lam2 - h2)) / (2 * h2)
    return d1, d2


@pytest.mark.parametrize("pair,expected", [((0.5, 1.5), 0.8391), ((1, 1.5), 0.6405), ((1, 0.5), 0.2551)])
def test_published_values(pair, expected):
    assert round(r_closed_form(*pair), 4) == expected
    assert round(r_numeric_oracle(*pair), 4) == expected


@pytest.mark.parametrize("lam", [0.1, 0.3, 0.5, 1, 2, 4, 10])
def test_equal_rates_give_half(lam):
    assert abs(r_closed_form(lam, lam) - 0.5) <= 1e-13


def test_oracle_agreement_point():
    assert abs(r_closed_form(0.7, 1.3) - r_numeric_oracle(0.7, 1.3)) <= 1e-10


def test_oracle_symmetry_and_skew():
    assert abs(r_numeric_oracle(1, 1) - 0.5) <= 1e-10
    v = r_numeric_oracle(10, 0.1)
    assert 0 < v < 1
    assert abs(v + r_numeric_oracle(0.1, 10) - 1) <= 1e-10


def test_grid_properties():
    vals = np.array([[r_closed_form(a, b) for b in GRID] for a in GRID])
    assert np.all((vals > 0) & (vals < 1))
    assert np.all(np.abs(vals + vals.T - 1) <= 1e-12)
    assert np.all(np.diff(vals, axis=0) < 0)  # decreasing in lam1
    assert np.all(np.diff(vals, axis=1) > 0)  # increasing in lam2
    oracle = np.array([[r_numeric_oracle(a, b) for b in GRID] for a in GRID])
    assert np.max(np.abs(vals - oracle)) <= 1e-10


@given(rates, rates)
def test_polynomial_form_agrees(a, b):
    assert r_polynomial(a, b) == pytest.approx(r_closed_form(a, b), abs=1e-12)


@given(rates, rates)
def test_complementarity(a, b):
    assert abs(r_closed_form(a, b) + r_closed_form(b, a) - 1) <= 1e-12


def test_gradient_on_diagonal_is_antisymmetric():
    g = r_gradient(1, 1)
    assert g.d1 == pytest.approx(-g.d2, rel=1e-14)


def test_gradient_signs():
    g = r_gradient(0.5, 1.5)
    assert g.d1 < 0 < g.d2


def test_gradient_matches_finite_differences():
    g = r_gradient(1, 1.5)
    np.testing.assert_allclose(g, _fd(1, 1.5), rtol=1e-6)


@given(st.floats(0.1, 10), st.floats(0.1, 10))
def test_gradient_property(a, b):
    g = r_gradient(a, b)
    assert g.d1 < 0 < g.d2
    np.testing.assert_allclose(g, _fd(a, b), rtol=1e-6)


def test_gradient_swap_antisymmetry():
    g, h = r_gradient(0.4, 2.5), r_gradient(2.5, 0.4)
    assert g.d1 == pytest.approx(-h.d2, rel=1e-13)
    assert g.d2 == pytest.approx(-h.d1, rel=1e-13)


@pytest.mark.parametrize("bad", [(0, 1), (1, -1), (np.nan, 1)])
def test_rejects_invalid_rates(bad):
    with pytest.raises(ValidationError):
        r_closed_form(*bad)
