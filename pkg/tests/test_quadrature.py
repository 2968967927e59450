import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial import Polynomial
from scipy import integrate as sp_integrate

from ostrowski.invex import InvalidInput, InvexSegment, ScalarFn
from ostrowski.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    QuadratureError,
    integrate,
    identity_residual,
    mean_value,
)
from ostrowski.registry import ETA_MAPS, FUNCTIONS, polynomial


def test_rule_weights_integrate_constants():
    assert math.fsum(KRONROD_WEIGHTS) == pytest.approx(2.0, abs=1e-15)
    assert math.fsum(GAUSS_WEIGHTS) == pytest.approx(2.0, abs=1e-15)
    assert np.allclose(NODES, -NODES[::-1])


@pytest.mark.parametrize("degree", range(0, 23))
def test_kronrod_rule_exact_to_degree_22(degree):
    # a single 15-point panel is exact through degree 3*7+1
    exact = 0.0 if degree % 2 else 2.0 / (degree + 1)
    assert math.fsum(KRONROD_WEIGHTS * NODES**degree) == pytest.approx(exact, abs=1e-14)


def test_square_on_unit_interval():
    # antiderivative x^3/3
    assert integrate(FUNCTIONS["square"], 0.0, 1.0).value == pytest.approx(1 / 3, abs=1e-10)


def test_constant_is_exact():
    res = integrate(lambda x: np.full_like(x, 2.5), -1.0, 3.0)
    assert res.value == 2.5 * 4.0


def test_identity_on_zero_two():
    # antiderivative x^2/2
    assert integrate(FUNCTIONS["identity"], 0.0, 2.0).value == pytest.approx(2.0, abs=1e-10)


def test_degenerate_interval_is_exactly_zero():
    res = integrate(FUNCTIONS["exp"], 1.3, 1.3)
    assert res.value == 0.0 and res.err_estimate == 0.0


def test_reversed_interval_rejected():
    with pytest.raises(InvalidInput):
        integrate(FUNCTIONS["exp"], 1.0, 0.0)


def test_nonfinite_sample_rejected():
    with np.errstate(divide="ignore"), pytest.raises(InvalidInput):
        integrate(lambda x: 1.0 / x, -1.0, 1.0)


def test_result_invariants():
    res = integrate(FUNCTIONS["exp"], 0.0, 1.0)
    assert res.err_estimate >= 0 and res.evals >= 15 and res.converged


def test_budget_exhaustion_reports_best_value():
    rough = lambda x: np.sqrt(np.abs(x - 1 / 3))
    res = integrate(rough, 0.0, 1.0, tol=1e-15, max_evals=200)
    assert not res.converged and math.isfinite(res.value)
    with pytest.raises(QuadratureError) as info:
        integrate(rough, 0.0, 1.0, tol=1e-15, max_evals=200, strict=True)
    assert info.value.result.value == res.value


@pytest.mark.parametrize("fn,lo,hi", [
    (np.exp, -1.0, 2.0),
    (np.cos, 0.0, 10.0),
    (lambda x: np.abs(x - 0.3), 0.0, 1.0),
    (lambda x: 1.0 / (1.0 + 25.0 * x**2), -1.0, 1.0),
])
def test_agrees_with_scipy_quad(fn, lo, hi):
    oracle, _ = sp_integrate.quad(fn, lo, hi, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert integrate(fn, lo, hi).value == pytest.approx(oracle, abs=1e-9)


def test_breakpoints_split_kinks():
    res = integrate(lambda x: np.abs(x - 0.3), 0.0, 1.0, breakpoints=(0.3,))
    assert res.value == pytest.approx(0.5 * 0.3**2 + 0.5 * 0.7**2, abs=1e-14)


coeffs = st.lists(st.floats(-5, 5), min_size=1, max_size=7)


@given(coeffs, coeffs, st.floats(-3, 3), st.floats(-3, 3))
def test_linearity(c1, c2, alpha, beta):
    p, q = Polynomial(c1), Polynomial(c2)
    rp = integrate(p, -1.0, 2.0)
    rq = integrate(q, -1.0, 2.0)
    rsum = integrate(lambda x: alpha * p(x) + beta * q(x), -1.0, 2.0)
    combined = abs(alpha) * rp.err_estimate + abs(beta) * rq.err_estimate + rsum.err_estimate
    assert abs(rsum.value - (alpha * rp.value + beta * rq.value)) <= 2 * combined + 1e-12


@given(coeffs, st.floats(0.01, 0.99))
def test_interval_additivity(c, frac):
    p = Polynomial(c)
    m = -1.0 + 3.0 * frac
    whole = integrate(p, -1.0, 2.0)
    left = integrate(p, -1.0, m)
    right = integrate(p, m, 2.0)
    assert abs(whole.value - left.value - right.value) <= whole.err_estimate + left.err_estimate + right.err_estimate + 1e-12


@given(coeffs)
def test_polynomials_match_exact_antiderivative(c):
    p = Polynomial(c)
    exact = p.integ()(2.0) - p.integ()(-1.0)
    assert integrate(p, -1.0, 2.0).value == pytest.approx(exact, abs=1e-10 * max(1.0, abs(exact)))


# ---------------------------------------------------------------------------
# segment means and the kernel identity
# ---------------------------------------------------------------------------


def test_mean_value_examples(unit):
    assert mean_value(FUNCTIONS["square"], unit) == pytest.approx(1 / 3, abs=1e-12)
    assert mean_value(FUNCTIONS["constant"], unit) == 1.5
    assert mean_value(FUNCTIONS["identity"], unit) == pytest.approx(0.5, abs=1e-12)


def test_mean_under_nonzero_map():
    seg = InvexSegment(ETA_MAPS["nonzero_reals"], 1.0, 3.0)
    # (27 - 1) / 3 / 2
    assert mean_value(FUNCTIONS["square"], seg) == pytest.approx(13 / 3, abs=1e-12)


def test_identity_equality_case(unit):
    # f(x) = x at x = a + eta: both sides eta / 2
    r = identity_residual(FUNCTIONS["identity"], unit, 1.0)
    assert r.lhs == pytest.approx(0.5, abs=1e-14)
    assert r.rhs == pytest.approx(0.5, abs=1e-14)
    assert r.residual <= 1e-14


def test_identity_constant(unit):
    r = identity_residual(FUNCTIONS["constant"], unit, 0.3)
    assert r.lhs == 0.0 and r.rhs == 0.0 and r.residual == 0.0


def test_identity_square_midpoint(unit):
    r = identity_residual(FUNCTIONS["square"], unit, 0.5)
    assert r.lhs == pytest.approx(-1 / 12, abs=1e-12)
    # kernel integrals by hand: int_0^.5 2t^2 + int_.5^1 2t(t-1) = 1/12 - 1/6
    assert r.rhs == pytest.approx(1 / 12 - 1 / 6, abs=1e-8)
    assert r.residual == abs(r.lhs - r.rhs)


def test_identity_rejects_point_outside(unit):
    with pytest.raises(InvalidInput):
        identity_residual(FUNCTIONS["square"], unit, 1.5)


CONDITION_C_SEGMENTS = [
    ("trivial", 0.0, 1.0), ("trivial", -2.0, 1.5),
    ("nonzero_reals", 1.0, 3.0), ("nonzero_reals", -3.0, -0.5),
]


@pytest.mark.parametrize("label,a,b", CONDITION_C_SEGMENTS)
@given(st.lists(st.floats(-3, 3), min_size=1, max_size=7))
def test_identity_residual_polynomials_up_to_degree_six(label, a, b, c):
    seg = InvexSegment(ETA_MAPS[label], a, b)
    f = polynomial(c)
    for x in seg.grid(33):
        assert identity_residual(f, seg, float(x)).residual <= 1e-8


def test_identity_finite_difference_function(unit):
    f = ScalarFn(np.sin, label="sin")
    # central differences carry ~1e-11 truncation error; the identity still closes well below 1e-8
    assert max(identity_residual(f, unit, float(x)).residual for x in unit.grid(9)) <= 1e-8
