import math

import numpy as np
import pytest
from scipy import stats

import levylim as L
from levylim.simulate import RngProvenance


def make_record(times, sizes, horizon, model=None):
    """Hand-built realization; the model supplies drift and diffusion only."""
    model = model or L.random_sum(L.JumpLaw.uniform(-1.0, 1.0))  # drift 0
    return L.JumpRecord(
        horizon=horizon,
        jump_times=np.asarray(times, dtype=float),
        jump_sizes=np.asarray(sizes, dtype=float),
        model=model,
        provenance=RngProvenance(0, "manual", 0),
    )


# ---------------------------------------------------------------------------
# sampling
# ---------------------------------------------------------------------------


def test_same_seed_same_record():
    model = L.random_sum(L.JumpLaw.gaussian(0.5, 1.0))
    a = L.sample_jumps(model, 50.0, RngProvenance(42, "x", 3))
    b = L.sample_jumps(model, 50.0, RngProvenance(42, "x", 3))
    assert np.array_equal(a.jump_times, b.jump_times)
    assert np.array_equal(a.jump_sizes, b.jump_sizes)
    c = L.sample_jumps(model, 50.0, RngProvenance(42, "x", 4))
    assert not np.array_equal(a.jump_times, c.jump_times)


def test_jump_count_concentration():
    # Poisson(1e4): within 4 standard deviations in at least 99% of seeds
    model = L.centered_poisson()
    counts = np.array(
        [L.sample_jumps(model, 10_000.0, RngProvenance(9000 + s)).jump_count for s in range(100)]
    )
    inside = np.abs(counts - 10_000) <= 400
    assert inside.mean() >= 0.99


def test_degenerate_law_unit_sizes():
    record = L.sample_jumps(L.centered_poisson(), 200.0, 5)
    assert np.all(record.jump_sizes == 1.0)


def test_record_validation_and_immutability():
    with pytest.raises(ValueError):
        L.sample_jumps(L.centered_poisson(), 0.0, 1)
    record = L.sample_jumps(L.centered_poisson(), 10.0, 1)
    assert record.jump_times.size == 0 or record.jump_times[0] > 0
    with pytest.raises(ValueError):
        record.jump_times[0] = 99.0
    with pytest.raises(ValueError):
        make_record([2.0, 1.0], [1.0, 1.0], horizon=3.0)
    with pytest.raises(ValueError):
        make_record([1.0], [1.0], horizon=0.5)


def test_provenance_validation():
    with pytest.raises(ValueError):
        RngProvenance(-1)
    with pytest.raises(ValueError):
        RngProvenance(1, "t", -2)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def test_path_value_examples():
    # V(0) = 0 always
    record = L.sample_jumps(L.centered_poisson(), 5.0, 7)
    assert L.path_value(record, 0.0) == 0.0

    # single jump +2 at 0.5 under unit-jump drift -1: V(1) = 2 - 1
    record = make_record([0.5], [2.0], horizon=2.0, model=L.centered_poisson())
    assert L.path_value(record, 1.0) == pytest.approx(1.0)

    # jump exactly at t is included (right continuity)
    record = make_record([0.3, 0.7], [1.0, 1.0], horizon=1.0, model=L.centered_poisson())
    assert L.path_value(record, 0.7) == pytest.approx(2.0 - 0.7)
    assert L.path_value(record, 0.7 - 1e-12) == pytest.approx(1.0 - 0.7, abs=1e-9)


def test_path_value_domain_errors():
    record = L.sample_jumps(L.centered_poisson(), 5.0, 7)
    with pytest.raises(ValueError):
        L.path_value(record, -0.1)
    with pytest.raises(ValueError):
        L.path_value(record, 5.1)


def test_scale_path_identity_and_example():
    record = L.sample_jumps(L.centered_poisson(), 2.0, 13)
    grid = L.scale_path(record, 1.0, 8)
    xs = np.arange(9) / 8
    assert np.allclose(grid.values, [L.path_value(record, x) for x in xs])

    # single jump +1 at time 2, zero-mean law: V(2) = V(4) = 1, sqrt(4) = 2
    record = make_record([2.0], [1.0], horizon=4.0)
    grid = L.scale_path(record, 4.0, 2)
    assert grid.values == pytest.approx([0.0, 0.5, 0.5])


def test_scale_path_exact_scaling_identity():
    model = L.random_sum(L.JumpLaw.exponential(1.0), rate=2.0)
    for seed in range(5):
        record = L.sample_jumps(model, 30.0, seed)
        t, m = 12.5, 37
        grid = L.scale_path(record, t, m)
        expected = L.path_value(record, t * np.arange(m + 1) / m)
        # divide-then-multiply by sqrt(t) costs a few ulp of roundoff
        np.testing.assert_allclose(grid.values * math.sqrt(t), expected, rtol=1e-14, atol=1e-14)
        assert grid.values[0] == 0.0


def test_scale_path_errors_name_required_horizon():
    record = L.sample_jumps(L.centered_poisson(), 5.0, 7)
    with pytest.raises(ValueError, match="horizon"):
        L.scale_path(record, 6.0, 10)
    with pytest.raises(ValueError):
        L.scale_path(record, 5.0, 0)


# ---------------------------------------------------------------------------
# suprema
# ---------------------------------------------------------------------------


def test_exact_sup_no_jumps_decreasing_path():
    record = make_record([], [], horizon=5.0, model=L.centered_poisson())  # drift -1
    assert L.exact_sup(record, 5.0) == 0.0


def test_exact_sup_single_jump():
    record = make_record([2.0], [1.0], horizon=4.0)  # drift 0
    assert L.exact_sup(record, 4.0) == pytest.approx(1.0 / math.sqrt(4.0))


def test_exact_sup_matches_dense_grid():
    record = L.sample_jumps(L.centered_poisson(), 100.0, 99)
    exact = L.exact_sup(record, 100.0)
    m = 1_000_000
    grid_max = L.scale_path(record, 100.0, m).values.max()
    bound = 1.0 * 100.0 / (m * math.sqrt(100.0))  # |drift| * t / (m sqrt(t))
    assert grid_max <= exact + 1e-12
    assert exact - grid_max <= bound


def test_exact_sup_dominates_any_grid():
    record = L.sample_jumps(L.random_sum(L.JumpLaw.gaussian(0.3, 1.0)), 50.0, 3)
    exact = L.exact_sup(record, 50.0)
    for m in (7, 100, 1234):
        assert exact >= L.scale_path(record, 50.0, m).values.max() - 1e-12


def test_exact_sup_prefix_consistency():
    record = L.sample_jumps(L.centered_poisson(), 40.0, 21)
    ts = np.array([1.0, 3.5, 10.0, 40.0])
    batch = L.exact_sup(record, ts)
    singles = [L.exact_sup(record, float(t)) for t in ts]
    assert np.allclose(batch, singles)
    # running supremum is nondecreasing after undoing the 1/sqrt(t) scale
    assert np.all(np.diff(batch * np.sqrt(ts)) >= -1e-12)


def test_exact_sup_refuses_diffusion():
    model = L.LevyModel(L.JumpLaw.degenerate(0.0), diffusion_sd=1.0)
    record = L.sample_jumps(model, 4.0, 5)
    with pytest.raises(L.UnsupportedForDiffusion):
        L.exact_sup(record, 4.0)


def test_abs_sup_before_left_open():
    # jumps +1 at 1 and -3 at 2, drift 0: |V| on [0, 2) peaks at 1, on [0, 2.01) at 2
    record = make_record([1.0, 2.0], [1.0, -3.0], horizon=3.0)
    from levylim.simulate import abs_sup_before

    assert abs_sup_before(record, 2.0) == pytest.approx(1.0)
    assert abs_sup_before(record, 2.01) == pytest.approx(2.0)


# ---------------------------------------------------------------------------
# coupled path
# ---------------------------------------------------------------------------


def test_coupled_path_piecewise_definition():
    record = L.sample_jumps(L.centered_poisson(), 20.0, 31)
    s_l, s_k, m = 2.0, 20.0, 40
    grid = L.build_coupled_path(record, s_l, s_k, m)
    xs = np.arange(m + 1) / m
    cut = s_l / s_k
    assert np.all(grid.values[xs < cut] == 0.0)
    anchor = L.path_value(record, s_l) / math.sqrt(s_k)
    expected_end = L.path_value(record, s_k) / math.sqrt(s_k) - anchor
    assert grid.values[-1] == pytest.approx(expected_end)
    j = np.argmax(xs >= cut)
    expected_j = L.path_value(record, s_k * xs[j]) / math.sqrt(s_k) - anchor
    assert grid.values[j] == pytest.approx(expected_j)


def test_coupled_path_rejects_bad_times():
    record = L.sample_jumps(L.centered_poisson(), 20.0, 31)
    with pytest.raises(ValueError):
        L.build_coupled_path(record, 5.0, 5.0, 10)
    with pytest.raises(ValueError):
        L.build_coupled_path(record, 6.0, 5.0, 10)


def test_coupled_path_independent_of_prefix():
    # endpoint of the coupled path vs endpoint of the prefix path: correlation ~ 0
    model = L.centered_poisson()
    s_l, s_k = 2.0, 20.0
    coupled_ends, prefix_ends = [], []
    for seed in range(500):
        record = L.sample_jumps(model, s_k, RngProvenance(seed, "indep", 0))
        coupled_ends.append(L.build_coupled_path(record, s_l, s_k, 20).values[-1])
        prefix_ends.append(L.scale_path(record, s_l, 20).values[-1])
    corr = np.corrcoef(coupled_ends, prefix_ends)[0, 1]
    assert abs(corr) < 3.0 / math.sqrt(500)


# ---------------------------------------------------------------------------
# wiener sampler
# ---------------------------------------------------------------------------


def test_wiener_paths_start_at_zero():
    paths = L.simulate_wiener(1.0, 16, 50, 8)
    assert all(p.values[0] == 0.0 for p in paths)


def test_wiener_endpoint_law():
    sigma, n = 1.5, 5000
    paths = L.simulate_wiener(sigma, 64, n, 12)
    ends = np.array([p.values[-1] for p in paths])
    ks = L.weighted_ks(L.WeightedSample.from_values(ends), L.TargetLaw.gaussian(sigma))
    assert ks < 1.63 / math.sqrt(n)  # 1% critical value


def test_wiener_covariance():
    sigma, m, n = 2.0, 64, 5000
    paths = L.simulate_wiener(sigma, m, n, 4)
    mid = np.array([p.values[m // 2] for p in paths])
    end = np.array([p.values[-1] for p in paths])
    prods = (mid - mid.mean()) * (end - end.mean())
    cov = prods.mean() * n / (n - 1)
    se = prods.std(ddof=1) / math.sqrt(n)
    assert abs(cov - 0.5 * sigma**2) <= 4 * se


# ---------------------------------------------------------------------------
# distributional invariants of the jump simulator
# ---------------------------------------------------------------------------


def test_variance_law():
    model = L.random_sum(L.JumpLaw.exponential(1.5), rate=2.0)
    t, n = 5.0, 4000
    samples = L.sample_v_values(model, t, n, 77)
    s2 = samples.var(ddof=1)
    mu4 = ((samples - samples.mean()) ** 4).mean()
    se = math.sqrt(max(mu4 - s2**2, 0.0) / n)
    assert abs(s2 - t * L.variance_rate(model)) <= 5 * se


def test_increment_stationarity():
    # increment over [0, 0.7] vs [2.0, 2.7] across independent records
    model = L.random_sum(L.JumpLaw.gaussian(0.0, 1.0))
    h = 0.7
    a = [
        L.path_value(L.sample_jumps(model, 3.0, RngProvenance(s, "stat", 0)), h)
        for s in range(400)
    ]
    b = []
    for s in range(400, 800):
        record = L.sample_jumps(model, 3.0, RngProvenance(s, "stat", 0))
        b.append(L.path_value(record, 2.0 + h) - L.path_value(record, 2.0))
    assert stats.ks_2samp(a, b).pvalue > 0.01


def test_increment_independence():
    model = L.centered_poisson()
    first, second = [], []
    for s in range(2000):
        record = L.sample_jumps(model, 2.0, RngProvenance(s, "inc", 0))
        v1 = L.path_value(record, 1.0)
        first.append(v1)
        second.append(L.path_value(record, 2.0) - v1)
    corr = np.corrcoef(first, second)[0, 1]
    assert abs(corr) < 4.0 / math.sqrt(2000)


def test_sample_v_values_matches_record_route():
    model = L.random_sum(L.JumpLaw.uniform(0.0, 2.0), rate=1.3)
    t, n = 4.0, 2000
    fast = L.sample_v_values(model, t, n, 31)
    slow = [
        L.path_value(L.sample_jumps(model, t, RngProvenance(s, "slow", 0)), t)
        for s in range(n)
    ]
    assert stats.ks_2samp(fast, slow).pvalue > 0.01


def test_diffusion_component_variance():
    model = L.LevyModel(L.JumpLaw.degenerate(0.0), diffusion_sd=1.5)
    t, n = 2.0, 4000
    samples = L.sample_v_values(model, t, n, 55)
    assert samples.var(ddof=1) == pytest.approx(t * 1.5**2, rel=0.15)
    record = L.sample_jumps(model, 2.0, 3)
    assert record.diffusion_values is not None
    assert record.diffusion_values[0] == 0.0
    assert L.path_value(record, 0.0) == 0.0


# ---------------------------------------------------------------------------
# export
# ---------------------------------------------------------------------------


def test_export_jumps_csv_roundtrip(tmp_path):
    record = L.sample_jumps(L.random_sum(L.JumpLaw.gaussian(0.2, 1.0)), 30.0, 17)
    path = tmp_path / "jumps.csv"
    L.export_jumps_csv(record, path)
    lines = path.read_text().splitlines()
    assert lines[0].startswith("#") and "rate=" in lines[0] and "horizon=" in lines[0]
    assert lines[1] == "time,size"
    data = np.array([[float(f) for f in line.split(",")] for line in lines[2:]])
    assert np.array_equal(data[:, 0], record.jump_times)
    assert np.array_equal(data[:, 1], record.jump_sizes)
