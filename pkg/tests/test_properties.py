"""Property-based checks over randomly drawn parameters."""

import math

import numpy as np
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hypk.exitprob import exit_prob_d2, exit_prob_h2, exit_prob_hn, exit_prob_sphere, hit_prob_hn
from hypk.geometry import PolarPoint, disk_to_h2, h2_to_disk, halfspace_to_polar_h2, polar_to_halfspace_h2, wrap_angle
from hypk.kernels import poisson_h2, poisson_hn, poisson_sphere
from hypk.specialfn import gauss_2f1, gegenbauer
from hypk.stats import binomial_ci

radius = st.floats(0.01, 8.0)
angle = st.floats(-math.pi, math.pi)
settings.register_profile("hypk", max_examples=200, deadline=None)
settings.load_profile("hypk")


@given(st.floats(-1e6, 1e6))
def test_wrap_angle_range(a):
    w = wrap_angle(a)
    assert -math.pi < w <= math.pi
    assert math.isclose(math.cos(w), math.cos(a), abs_tol=1e-9)


@given(st.floats(0.0, 6.0), angle)
def test_polar_halfspace_round_trip(eta, alpha):
    back = halfspace_to_polar_h2(polar_to_halfspace_h2(PolarPoint.h2(eta, alpha)))
    assert math.isclose(back.eta, eta, abs_tol=1e-9)
    if eta > 1e-6:
        assert abs(wrap_angle(back.alpha - alpha)) < 1e-7


@given(st.floats(0.0, 15.0), angle)
def test_disc_round_trip(eta, alpha):
    back = disk_to_h2(h2_to_disk(PolarPoint.h2(eta, alpha)))
    assert math.isclose(back.eta, eta, rel_tol=1e-7, abs_tol=1e-12)


@given(radius, st.floats(0.0, 0.999), angle)
def test_h2_kernel_positive_and_bounded(eb, frac, d):
    v = poisson_h2(frac * eb, d, eb)
    assert v > 0 and math.isfinite(v)
    # never below the density at the antipode, never above the one at dalpha = 0
    assert poisson_h2(frac * eb, math.pi, eb) <= v * (1 + 1e-12)
    assert v <= poisson_h2(frac * eb, 0.0, eb) * (1 + 1e-12)


@given(st.floats(0.05, 3.0), st.floats(0.0, 0.95), angle)
def test_sphere_kernel_positive(tb, frac, d):
    assert poisson_sphere(frac * tb, d, tb) > 0


@given(st.integers(3, 6), st.floats(0.05, 3.0), st.floats(0.0, 0.9), st.floats(0.0, math.pi))
def test_hn_kernel_nonnegative(n, eb, frac, psi):
    ev = poisson_hn(n, frac * eb, eb, psi)
    assert ev.density >= -1e-12
    assert ev.truncation_error_bound >= 0


@given(st.integers(2, 8), st.floats(0.01, 5.0), st.floats(0.01, 5.0), st.floats(0.0, 1.0))
def test_exit_prob_range_and_order(n, e1, width, t):
    e2 = e1 + width
    e = e1 + t * width
    p = exit_prob_hn(n, e, e1, e2)
    assert 0.0 <= p <= 1.0
    # enlarging the outer radius can only make the inner sphere likelier to be hit first
    assert exit_prob_hn(n, e, e1, e2 + 1.0) >= p - 1e-12
    assert hit_prob_hn(n, e, e1) >= p - 1e-12


@given(st.floats(0.01, 5.0), st.floats(0.01, 5.0), st.floats(0.0, 1.0))
def test_h2_disc_consistency(e1, width, t):
    e2 = e1 + width
    e = e1 + t * width
    r = lambda x: math.tanh(x / 2)
    assume(r(e2) < 1.0)
    assert math.isclose(exit_prob_d2(r(e), r(e1), r(e2)), exit_prob_h2(e, e1, e2), abs_tol=1e-11)


@given(st.floats(0.01, 3.0), st.floats(0.01, 3.0), st.floats(0.0, 1.0))
def test_sphere_exit_range(t2, width, t):
    t1 = t2 + width
    assume(t1 < math.pi - 1e-3)
    p = exit_prob_sphere(t2 + t * width, t1, t2)
    assert 0.0 <= p <= 1.0


@given(st.integers(0, 25), st.floats(0.1, 5.0), st.floats(-1.0, 1.0))
def test_gegenbauer_bounded_by_value_at_one(k, lam, x):
    assert abs(gegenbauer(k, lam, x)) <= gegenbauer(k, lam, 1.0) * (1 + 1e-10) + 1e-12


@given(st.integers(1, 12), st.integers(3, 8), st.floats(0.0, 1.0))
def test_kernel_family_2f1_decreasing(k, n, x):
    # F(k, 1 - n/2; k + n/2; x) falls from 1 at x = 0 to its value at x = 1
    f = gauss_2f1(k, 1 - n / 2, k + n / 2, x)
    assert gauss_2f1(k, 1 - n / 2, k + n / 2, 1.0) - 1e-12 <= f <= 1.0 + 1e-12


@given(st.integers(1000, 10 ** 6), st.floats(0.0, 1.0))
def test_binomial_ci_contains_estimate(trials, frac):
    hits = int(frac * trials)
    lo, hi = binomial_ci(hits, trials)
    assert 0.0 <= lo <= hits / trials <= hi <= 1.0
    assert hi > lo
