import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ostrowski.invex import (
    EXCLUDED_NUDGE,
    TOL_FD,
    DomainDescriptor,
    EtaMap,
    HypothesisRefuted,
    Interval,
    InvalidInput,
    InvexSegment,
    SamplingPlan,
    ScalarFn,
    check_condition_c,
    check_invex_set,
    check_preinvex,
    derivative_mismatch,
    derivative_power,
    eval_eta,
    require_condition_c,
)
from ostrowski.registry import ETA_MAPS, FUNCTIONS, get_eta, get_function, polynomial


# ---------------------------------------------------------------------------
# eta-map evaluation
# ---------------------------------------------------------------------------


def test_eval_eta_examples():
    assert eval_eta(ETA_MAPS["trivial"], 3.0, 1.0) == 2.0
    # opposite signs: y - x = 3 - (-2)
    assert eval_eta(ETA_MAPS["sign_split"], -2.0, 3.0) == 5.0
    # opposite signs: -y
    assert eval_eta(ETA_MAPS["nonzero_reals"], 2.0, -3.0) == 3.0


def test_eval_eta_same_sign_branches():
    assert eval_eta(ETA_MAPS["sign_split"], 3.0, 1.0) == 2.0
    assert eval_eta(ETA_MAPS["nonzero_reals"], -1.0, -4.0) == 3.0


def test_eval_eta_rejects_excluded_point():
    with pytest.raises(InvalidInput, match="x=0.0"):
        eval_eta(ETA_MAPS["nonzero_reals"], 0.0, 1.0)


def test_eval_eta_rejects_nonfinite_value():
    bad = EtaMap(lambda x, y: np.log(x - y), DomainDescriptor.real_line(), "log")
    with np.errstate(invalid="ignore"), pytest.raises(InvalidInput, match="returned"):
        eval_eta(bad, 1.0, 2.0)


def test_registry_lookup_errors():
    with pytest.raises(InvalidInput, match="unknown eta-map"):
        get_eta("nope")
    with pytest.raises(InvalidInput, match="unknown function"):
        get_function("nope")
    with pytest.raises(InvalidInput):
        polynomial([])


def test_polynomial_from_coefficients():
    p = get_function([1.0, -2.0, 0.5])
    assert p(2.0) == pytest.approx(1 - 4 + 2)
    assert p.deriv(2.0) == pytest.approx(-2 + 2.0)


# ---------------------------------------------------------------------------
# domains and segments
# ---------------------------------------------------------------------------


def test_domain_membership():
    d = DomainDescriptor.union(Interval(-5, 0, True, False), Interval(0, 5, False, True))
    assert list(d.contains([-5.0, 0.0, 5.0, 2.5])) == [True, False, True, True]
    nz = DomainDescriptor.real_line(excluded=(0.0,))
    assert not nz.contains(0.0)
    assert nz.contains(EXCLUDED_NUDGE)
    assert nz.contains_interval(1.0, 3.0)
    assert not nz.contains_interval(-1.0, 1.0)


def test_overlapping_intervals_rejected():
    with pytest.raises(InvalidInput):
        DomainDescriptor.union(Interval(0, 2), Interval(1, 3))


def test_segment_basics(unit):
    assert unit.eta_ab == 1.0
    assert (unit.lo, unit.hi, unit.midpoint) == (0.0, 1.0, 0.5)


def test_segment_under_nonzero_map():
    seg = InvexSegment(ETA_MAPS["nonzero_reals"], 1.0, 3.0)
    assert (seg.lo, seg.hi) == (1.0, 3.0)


@pytest.mark.parametrize("a,b", [(1.0, 1.0), (2.0, 1.0)])
def test_degenerate_or_reversed_segment_rejected(a, b):
    with pytest.raises(InvalidInput, match="need a < a"):
        InvexSegment(ETA_MAPS["trivial"], a, b)


def test_segment_crossing_excluded_point_rejected():
    # opposite signs give eta(1, -2) = -1 under the nonzero map
    with pytest.raises(InvalidInput):
        InvexSegment(ETA_MAPS["nonzero_reals"], -2.0, 1.0)


@given(st.floats(-50, 50), st.floats(-50, 50), st.sampled_from(["trivial", "sign_split", "doubled"]))
def test_segment_accepts_exactly_positive_eta(a, b, label):
    eta = ETA_MAPS[label]
    value = float(eta(b, a))
    if value > 0:
        seg = InvexSegment(eta, a, b)
        assert seg.lo < seg.hi
    else:
        with pytest.raises(InvalidInput):
            InvexSegment(eta, a, b)


# ---------------------------------------------------------------------------
# derivatives
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("name", sorted(FUNCTIONS))
def test_closed_form_derivative_matches_central_difference(name):
    f = FUNCTIONS[name]
    # interior grid points, skipping the kinks of neg_abs and tent at 0
    xs = np.linspace(-3.0, 3.0, 64)
    xs = xs[np.abs(xs) > 1e-3]
    assert derivative_mismatch(f, xs) <= TOL_FD


def test_finite_difference_fallback():
    f = ScalarFn(np.sin, label="sin")
    xs = np.linspace(-2, 2, 9)
    assert np.max(np.abs(f.deriv(xs) - np.cos(xs))) <= TOL_FD


def test_derivative_power_abs_then_power():
    g = derivative_power(FUNCTIONS["square"], 1.5)
    # |f'(-2)| = 4, 4**1.5 = 8
    assert g(-2.0) == pytest.approx(8.0)
    with pytest.raises(InvalidInput):
        derivative_power(FUNCTIONS["square"], 0.5)


def test_nonpositive_step_rejected():
    with pytest.raises(InvalidInput):
        ScalarFn(np.sin, h=0.0)


# ---------------------------------------------------------------------------
# invex-set certification
# ---------------------------------------------------------------------------


def test_trivial_map_on_unit_interval_is_invex():
    eta = ETA_MAPS["trivial"].on(DomainDescriptor.closed(0.0, 1.0))
    assert check_invex_set(eta).certified


def test_nonzero_map_domain_is_invex():
    eta = ETA_MAPS["nonzero_reals"].on(
        DomainDescriptor.union(Interval(-5, 0, False, False), Interval(0, 5, False, False))
    )
    report = check_invex_set(eta)
    assert report.certified
    # images landing on 0 (t = 1 on the opposite-sign branch) are nudged, not dropped
    assert report.flagged > 0


def test_doubled_map_on_open_unit_interval_refuted():
    eta = ETA_MAPS["doubled"].on(DomainDescriptor.open(0.0, 1.0))
    report = check_invex_set(eta)
    assert report.refuted
    x, y, t = report.witness
    image = x + t * 2.0 * (y - x)
    assert not 0.0 < image < 1.0
    # worked sample x=0.9, y=0.1, t=1 leaves (0, 1) whichever argument order eta takes
    assert not 0.0 < 0.9 + float(eta(0.1, 0.9)) < 1.0
    assert not 0.0 < 0.9 + float(eta(0.9, 0.1)) < 1.0


# ---------------------------------------------------------------------------
# condition C
# ---------------------------------------------------------------------------


def test_condition_c_examples():
    assert check_condition_c(ETA_MAPS["trivial"]).certified
    assert check_condition_c(ETA_MAPS["nonzero_reals"]).certified
    assert check_condition_c(ETA_MAPS["sign_split"]).refuted


def test_condition_c_refutes_doubled_map_with_witness():
    report = check_condition_c(ETA_MAPS["doubled"])
    assert report.refuted and report.witness is not None
    # worked sample x=1, y=0, t=0.5: eta(0, 1) = -2 but -t*eta(1, 0) = -1
    eta = ETA_MAPS["doubled"]
    assert float(eta(0.0, 0.0 + 0.5 * eta(1.0, 0.0))) == -2.0
    assert -0.5 * float(eta(1.0, 0.0)) == -1.0


def test_require_condition_c_raises_with_report():
    with pytest.raises(HypothesisRefuted) as info:
        require_condition_c(ETA_MAPS["doubled"])
    assert info.value.report.refuted


@given(st.integers(3, 40), st.integers(3, 20), st.floats(-20, -0.1), st.floats(0.1, 20))
def test_condition_c_never_refutes_trivial(n_space, n_t, lo, hi):
    plan = SamplingPlan(n_space=n_space, n_t=n_t, box=(lo, hi))
    assert not check_condition_c(ETA_MAPS["trivial"], plan).refuted


# ---------------------------------------------------------------------------
# preinvexity
# ---------------------------------------------------------------------------


def test_square_is_preinvex_under_trivial_map(unit):
    assert check_preinvex(FUNCTIONS["square"], ETA_MAPS["trivial"], unit).certified


def test_neg_abs_preinvex_under_sign_split():
    assert check_preinvex(FUNCTIONS["neg_abs"], ETA_MAPS["sign_split"], (-2.0, 2.0)).certified


def test_neg_abs_not_convex():
    assert check_preinvex(FUNCTIONS["neg_abs"], ETA_MAPS["trivial"], (-2.0, 2.0)).refuted


def test_neg_square_refuted_with_witness(unit):
    report = check_preinvex(FUNCTIONS["neg_square"], ETA_MAPS["trivial"], unit)
    assert report.refuted
    x, y, t = report.witness
    g = lambda s: -(s**2)
    assert g(x + t * (y - x)) > (1 - t) * g(x) + t * g(y)
    # worked sample: g(0.5) = -0.25 > -0.5
    assert g(0.5) > 0.5 * g(0.0) + 0.5 * g(1.0)


def test_nonfinite_target_rejected():
    with np.errstate(divide="ignore"), pytest.raises(InvalidInput, match="not finite"):
        check_preinvex(lambda x: 1.0 / x, ETA_MAPS["trivial"], (-1.0, 1.0), SamplingPlan(n_space=5, n_t=3))


def _midpoint_sampler(g, nodes, ts, tol):
    # direct loop over the same samples the vectorised checker uses
    worst = 0.0
    for x in nodes:
        for y in nodes:
            for t in ts:
                worst = max(worst, g(x + t * (y - x)) - ((1 - t) * g(x) + t * g(y)))
    return worst > tol


@pytest.mark.parametrize("name", ["square", "neg_square", "cube", "neg_abs", "exp", "tent"])
def test_checker_agrees_with_direct_sampler(name):
    plan = SamplingPlan(n_space=9, n_t=5)
    f = FUNCTIONS[name]
    report = check_preinvex(f, ETA_MAPS["trivial"], (-1.5, 2.0), plan)
    nodes = np.linspace(-1.5, 2.0, 9)
    direct = _midpoint_sampler(lambda s: float(f(s)), nodes, plan.t_nodes(), plan.tol)
    assert report.refuted == direct


@pytest.mark.parametrize("name", ["neg_square", "cube", "tent"])
def test_worst_violation_monotone_under_refinement(name):
    f = FUNCTIONS[name]
    worst = [
        check_preinvex(f, ETA_MAPS["trivial"], (-1.0, 2.0), SamplingPlan(n_space=n, n_t=m)).worst_violation
        for n, m in [(5, 3), (9, 5), (17, 9), (33, 17)]
    ]
    assert worst == sorted(worst)


@given(st.floats(0.01, 3.0), st.floats(1.0, 4.0))
def test_linear_times_constant_square_power_certified(c, q):
    # |(c x^2)'|^q = (2c|x|)^q is convex for q >= 1
    g = derivative_power(FUNCTIONS["square"].scaled(c), q)
    assert not check_preinvex(g, ETA_MAPS["trivial"], (-1.0, 1.0), SamplingPlan(n_space=11, n_t=6)).refuted


def test_describe_mentions_witness():
    text = check_condition_c(ETA_MAPS["doubled"]).describe()
    assert "refuted" in text and "witness" in text
    assert not math.isnan(check_invex_set(ETA_MAPS["trivial"]).worst_violation)
