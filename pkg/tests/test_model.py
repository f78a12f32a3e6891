import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import levylim as L


def test_jump_law_validation():
    with pytest.raises(ValueError):
        L.JumpLaw.gaussian(0.0, -1.0)
    with pytest.raises(ValueError):
        L.JumpLaw.exponential(0.0)
    with pytest.raises(ValueError):
        L.JumpLaw.uniform(2.0, 2.0)
    with pytest.raises(ValueError):
        L.JumpLaw("cauchy", (0.0,))


@pytest.mark.parametrize(
    "law, mean, second",
    [
        (L.JumpLaw.degenerate(3.0), 3.0, 9.0),
        (L.JumpLaw.gaussian(1.0, 2.0), 1.0, 5.0),
        (L.JumpLaw.exponential(2.0), 0.5, 0.5),
        (L.JumpLaw.uniform(-1.0, 1.0), 0.0, 1.0 / 3.0),
        (L.JumpLaw.uniform(0.0, 6.0), 3.0, 12.0),
    ],
)
def test_law_moments_closed_form(law, mean, second):
    assert law.mean() == pytest.approx(mean)
    assert law.second_moment() == pytest.approx(second)


def test_law_moments_match_samples():
    rng = np.random.default_rng(11)
    for law in (
        L.JumpLaw.gaussian(1.0, 2.0),
        L.JumpLaw.exponential(0.7),
        L.JumpLaw.uniform(-2.0, 5.0),
    ):
        x = law.sample(200_000, rng)
        assert x.mean() == pytest.approx(law.mean(), abs=5 * x.std() / math.sqrt(x.size))
        m2 = (x**2).mean()
        se2 = (x**2).std() / math.sqrt(x.size)
        assert m2 == pytest.approx(law.second_moment(), abs=5 * se2)


def test_model_centered_by_construction():
    model = L.LevyModel(L.JumpLaw.gaussian(2.0, 1.0), rate=3.0)
    assert model.rate * model.jump_law.mean() + model.drift == 0.0
    with pytest.raises(ValueError):
        L.LevyModel(L.JumpLaw.degenerate(1.0), rate=0.0)
    with pytest.raises(ValueError):
        L.LevyModel(L.JumpLaw.degenerate(1.0), diffusion_sd=-0.5)


def test_variance_rate_examples():
    # unit jumps at rate 1: standard Wiener limit
    assert L.variance_rate(L.centered_poisson()) == pytest.approx(1.0)
    # general jump mean a and sd s: limit scale sqrt(s^2 + a^2)
    a, s = 1.5, 0.5
    model = L.random_sum(L.JumpLaw.gaussian(a, s))
    assert L.variance_rate(model) == pytest.approx(s**2 + a**2)
    # pure diffusion component
    model = L.LevyModel(L.JumpLaw.degenerate(0.0), diffusion_sd=2.0)
    assert L.variance_rate(model) == pytest.approx(4.0)


def test_cf_at_zero_is_one():
    for model in (
        L.centered_poisson(),
        L.random_sum(L.JumpLaw.uniform(-1.0, 3.0), rate=2.0),
        L.LevyModel(L.JumpLaw.gaussian(0.0, 1.0), diffusion_sd=1.0),
    ):
        assert L.theoretical_cf(model, 5.0, 0.0) == pytest.approx(1.0 + 0.0j)


def test_cf_unit_jump_closed_form():
    # rate 1, unit jumps, t = 1, u = pi: exponent is (e^{i pi} - 1) - i pi = -2 - i pi
    got = L.theoretical_cf(L.centered_poisson(), 1.0, math.pi)
    assert got == pytest.approx(cmath.exp(complex(-2.0, -math.pi)), abs=1e-12)
    assert abs(got) == pytest.approx(math.exp(-2.0), abs=1e-12)


def test_cf_time_multiplicativity():
    model = L.random_sum(L.JumpLaw.exponential(1.3), rate=0.8)
    for u in (-2.0, 0.3, 4.0):
        lhs = L.theoretical_cf(model, 3.7, u)
        rhs = L.theoretical_cf(model, 1.2, u) * L.theoretical_cf(model, 2.5, u)
        assert lhs == pytest.approx(rhs, rel=1e-12)


@settings(max_examples=200, deadline=None)
@given(
    kind=st.sampled_from(["degenerate", "gaussian", "exponential", "uniform"]),
    a=st.floats(-5, 5),
    b=st.floats(0.1, 5),
    rate=st.floats(0.1, 5),
    diff=st.floats(0, 2),
    t=st.floats(0, 20),
    u=st.floats(-50, 50),
)
def test_cf_modulus_at_most_one(kind, a, b, rate, diff, t, u):
    law = {
        "degenerate": lambda: L.JumpLaw.degenerate(a),
        "gaussian": lambda: L.JumpLaw.gaussian(a, b),
        "exponential": lambda: L.JumpLaw.exponential(b),
        "uniform": lambda: L.JumpLaw.uniform(a, a + b),
    }[kind]()
    model = L.LevyModel(law, rate=rate, diffusion_sd=diff)
    assert abs(L.theoretical_cf(model, t, u)) <= 1.0 + 1e-12


def test_cf_finite_difference_moments():
    # first derivative at 0 vanishes (centered); second matches t * variance_rate
    model = L.random_sum(L.JumpLaw.gaussian(1.0, 1.0))
    t, h = 2.0, 1e-3
    f = lambda u: L.theoretical_cf(model, t, u)
    d1 = (f(h) - f(-h)) / (2 * h)
    assert abs(d1) < 1e-5
    d2 = -(f(h) - 2 * f(0.0) + f(-h)) / h**2
    assert d2.real == pytest.approx(t * L.variance_rate(model), rel=1e-4)
    assert abs(d2.imag) < 1e-6


def test_empirical_cf_trivial_cases():
    assert L.empirical_cf([0.0, 0.0, 0.0], 1.7) == pytest.approx(1.0 + 0.0j)
    x, u = 2.3, -0.9
    assert L.empirical_cf([x], u) == pytest.approx(cmath.exp(1j * u * x))
    with pytest.raises(ValueError):
        L.empirical_cf([], 1.0)


def test_empirical_cf_modulus_bound():
    rng = np.random.default_rng(3)
    vals = rng.normal(0, 2, 500)
    for u in (-3.0, 0.5, 7.0):
        assert abs(L.empirical_cf(vals, u)) <= 1.0 + 1e-12


@pytest.mark.parametrize(
    "model",
    [
        L.centered_poisson(),
        L.random_sum(L.JumpLaw.gaussian(1.0, 1.0)),
        L.random_sum(L.JumpLaw.exponential(2.0)),
        L.random_sum(L.JumpLaw.uniform(-1.0, 2.0)),
    ],
)
def test_cf_monte_carlo_agreement(model):
    # simulated V(1) against the closed form, CLT error bar 3/sqrt(N) + 0.01
    n = 10_000
    samples = L.sample_v_values(model, 1.0, n, 123)
    for u in np.arange(-3.0, 3.01, 0.5):
        emp = L.empirical_cf(samples, u)
        theo = L.theoretical_cf(model, 1.0, u)
        assert abs(emp - theo) <= 3.0 / math.sqrt(n) + 0.01
