import json
import math

import numpy as np
import pytest

import levylim as L


# ---------------------------------------------------------------------------
# schedule growth
# ---------------------------------------------------------------------------


def test_schedule_linear_passes():
    report = L.check_schedule(L.Schedule(beta=1.0, n_max=1000, coeff=1.0, power=1.0))
    assert report.passed and report.first_violation is None


def test_schedule_quadratic_passes():
    report = L.check_schedule(L.Schedule(beta=1.0, n_max=1000, coeff=1.0, power=2.0))
    assert report.passed


def test_schedule_log_table_fails_at_first_drop():
    k = np.arange(1, 1001)
    schedule = L.Schedule(beta=0.5, table=np.log(k + 1.0))
    report = L.check_schedule(schedule)
    assert not report.passed
    # ln(k+1)/sqrt(k) rises to k = 4 and first drops at k = 5
    assert report.first_violation == 5


def test_schedule_scaling_invariance():
    base = L.Schedule(beta=0.7, n_max=500, coeff=1.0, power=0.7)
    scaled = L.Schedule(beta=0.7, n_max=500, coeff=17.3, power=0.7)
    assert L.check_schedule(base).passed == L.check_schedule(scaled).passed


def test_schedule_rejects_nonpositive():
    with pytest.raises(ValueError):
        L.check_schedule(L.Schedule(beta=1.0, table=np.array([1.0, -2.0, 3.0])))
    with pytest.raises(ValueError):
        L.Schedule(beta=0.0, n_max=10)


def test_schedule_values_range():
    schedule = L.default_schedule(100)
    assert np.array_equal(schedule.values(5), [1, 2, 3, 4, 5])
    assert schedule.value(7) == 7.0
    with pytest.raises(ValueError):
        schedule.values(101)


# ---------------------------------------------------------------------------
# time-change growth
# ---------------------------------------------------------------------------


def test_time_change_identity_passes():
    x = np.linspace(0.5, 100.0, 200)
    assert L.check_time_change(L.default_time_change(), x).passed


def test_time_change_quadratic_passes():
    x = np.linspace(0.5, 100.0, 200)
    tc = L.TimeChange(beta=1.0, coeff=2.0, power=2.0)
    assert L.check_time_change(tc, x).passed


def test_time_change_sqrt_fails():
    x = np.linspace(0.5, 100.0, 200)
    tc = L.TimeChange(beta=1.0, coeff=1.0, power=0.5)
    report = L.check_time_change(tc, x)
    assert not report.passed
    assert report.first_violation == pytest.approx(x[1])


def test_time_change_input_validation():
    tc = L.default_time_change()
    with pytest.raises(ValueError):
        L.check_time_change(tc, [3.0, 1.0, 2.0])
    with pytest.raises(ValueError):
        L.check_time_change(tc, [-1.0, 2.0])
    table = (np.array([1.0, 2.0, 3.0]), np.array([1.0, -1.0, 2.0]))
    with pytest.raises(ValueError):
        L.check_time_change(L.TimeChange(beta=1.0, table=table), [1.0, 2.0, 3.0])


# ---------------------------------------------------------------------------
# weight admissibility
# ---------------------------------------------------------------------------


def test_weight_half_log_passes_with_equality():
    report = L.check_weight(L.default_weight(), 200)
    assert report.passed
    assert report.details["divergence"] == "pass"
    margins = np.array(report.details["margins"])
    # d = 1/(2s) meets the interval bound exactly; quadrature error only
    assert np.max(np.abs(margins)) <= 1e-9


def test_weight_full_log_fails_at_one():
    report = L.check_weight(L.WeightFunction(coeff=1.0), 50)
    assert not report.passed
    assert report.first_violation == 1
    assert report.details["shape_ok"] is True  # it fails the integral test, not the shape


def test_weight_quarter_log_passes_with_margin():
    report = L.check_weight(L.WeightFunction(coeff=4.0), 50)
    assert report.passed
    assert min(report.details["margins"]) > 0.0


def test_weight_downscaling_preserves_pass():
    # c * d for c <= 1 means coeff / c >= coeff
    base = L.WeightFunction(coeff=2.0)
    assert L.check_weight(base, 30).passed
    for c in (1.0, 0.5, 0.1):
        assert L.check_weight(L.WeightFunction(coeff=base.coeff / c), 30).passed


def test_weight_shape_violation_reported_distinctly():
    ss = np.array([1.0, 2.0, 3.0, 4.0])
    rising = (ss, np.array([0.1, 0.2, 0.3, 0.4]))
    report = L.check_weight(L.WeightFunction(table=rising), 3)
    assert not report.passed
    assert report.details["shape_ok"] is False
    assert report.details["intervals_ok"] is None  # integral test skipped
    nonpositive = (ss, np.array([0.4, 0.3, 0.0, -0.1]))
    report = L.check_weight(L.WeightFunction(table=nonpositive), 3)
    assert not report.passed and report.details["shape_ok"] is False


def test_weight_table_divergence_unverifiable():
    ss = np.linspace(1.0, 40.0, 400)
    table = (ss, 1.0 / (4.0 * ss))
    report = L.check_weight(L.WeightFunction(table=table), 30)
    assert report.details["divergence"] == "unverifiable"
    assert report.passed  # admissible on the checked range, divergence flagged


def test_weight_big_d_closed_form_and_table():
    assert L.default_weight().big_d(math.e**2) == pytest.approx(1.0, abs=1e-12)
    ss = np.linspace(1.0, 50.0, 5000)
    w = L.WeightFunction(table=(ss, 1.0 / (2.0 * ss)))
    assert w.big_d(40.0) == pytest.approx(math.log(40.0) / 2.0, rel=1e-4)
    with pytest.raises(ValueError):
        L.default_weight().big_d(1.0)


def test_weight_validation():
    with pytest.raises(ValueError):
        L.WeightFunction(coeff=0.0)
    with pytest.raises(ValueError):
        L.WeightFunction(table=(np.array([2.0, 3.0]), np.array([0.1, 0.1])))  # starts after 1
    with pytest.raises(ValueError):
        L.check_weight(L.default_weight(), 0)


# ---------------------------------------------------------------------------
# reports
# ---------------------------------------------------------------------------


def test_condition_report_serializes_to_json():
    report = L.check_weight(L.WeightFunction(coeff=4.0), 10)
    data = json.loads(report.to_json())
    assert data["condition"] == "weight-admissible"
    assert data["passed"] is True
    assert len(data["margins"]) == 10
    data = json.loads(L.check_schedule(L.default_schedule(50)).to_json())
    assert data["checked_range"] == "k in [1, 50]"
