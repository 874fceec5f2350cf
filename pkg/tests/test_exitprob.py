import math

import numpy as np
import pytest
from scipy import integrate as si

from hypk.errors import DomainError
from hypk.exitprob import (
    AnnulusSpec,
    c_coeff,
    escape_potential_hn,
    exit_prob_d2,
    exit_prob_euclidean,
    exit_prob_h2,
    exit_prob_hn,
    exit_prob_sphere,
    hit_prob_d2,
    hit_prob_euclidean,
    hit_prob_h2,
    hit_prob_hn,
    radial_solution_hn,
    sphere_exit_expression,
)

RNG = np.random.default_rng(5)


def sinh_power(s, n):
    # sinh(s)^(1-n) written without overflow for large s
    return (2.0 * math.exp(-s) / -math.expm1(-2.0 * s)) ** (n - 1)


def quad_exit_oracle(n, eta, eta1, eta2):
    # the exit probability is the normalised integral of the radial Green density sinh^(1-n)
    num = si.quad(sinh_power, eta, eta2, args=(n,), epsabs=0, epsrel=1e-13)[0]
    den = si.quad(sinh_power, eta1, eta2, args=(n,), epsabs=0, epsrel=1e-13)[0]
    return num / den


# --------------------------------------------------------------------------
# H^2


def test_h2_boundary_values():
    assert exit_prob_h2(0.5, 0.5, 2.0) == 1.0
    assert exit_prob_h2(2.0, 0.5, 2.0) == 0.0
    assert exit_prob_h2(0.5 + 1e-13, 0.5, 2.0) == 1.0
    assert 0 < exit_prob_h2(1.0, 0.5, 2.0) < 1


def test_h2_small_radii_euclidean_limit():
    s = 1e-4
    got = exit_prob_h2(1.0 * s, 0.5 * s, 2.0 * s)
    assert got == pytest.approx(exit_prob_euclidean(2, 1.0, 0.5, 2.0), abs=1e-6)


def test_h2_matches_quadrature():
    for _ in range(30):
        e1 = RNG.uniform(0.05, 3)
        e2 = e1 + RNG.uniform(0.1, 4)
        e = RNG.uniform(e1, e2)
        assert exit_prob_h2(e, e1, e2) == pytest.approx(quad_exit_oracle(2, e, e1, e2), abs=1e-11)


def test_h2_hit_prob():
    assert hit_prob_h2(0.7, 0.7) == 1.0
    assert hit_prob_h2(40.0, 0.7) < 1e-15
    for e in (0.8, 1.5, 4.0):
        v = hit_prob_h2(e, 0.7)
        assert 0 < v < 1
        assert v == pytest.approx(exit_prob_h2(e, 0.7, 30.0), abs=1e-8)


def test_h2_domain():
    with pytest.raises(DomainError):
        exit_prob_h2(3.0, 0.5, 2.0)
    with pytest.raises(DomainError):
        exit_prob_h2(1.0, 2.0, 0.5)
    with pytest.raises(DomainError):
        hit_prob_h2(0.3, 0.7)


# --------------------------------------------------------------------------
# coefficients and radial solutions


def test_c_coeff_examples():
    for n in range(3, 12):
        assert c_coeff(n, 0) == 1.0
    assert c_coeff(5, 1) == pytest.approx(2 / 3, rel=1e-15)
    assert c_coeff(4, 0) == 1.0
    assert c_coeff(7, 2) == pytest.approx((4 * 2) / (5 * 3 * 1), rel=1e-15)


def test_c_coeff_domain():
    with pytest.raises(DomainError):
        c_coeff(5, 2)
    with pytest.raises(DomainError):
        c_coeff(6, 2)
    with pytest.raises(DomainError):
        c_coeff(2, 0)
    with pytest.raises(DomainError):
        c_coeff(5, 0.5)


@pytest.mark.parametrize("n", range(3, 9))
def test_radial_solution_antiderivative(n):
    # v_n' sinh^(n-1) is constant (= 1); five-point centred stencil
    h = 1e-3
    v = lambda s: radial_solution_hn(n, s)
    for eta in np.linspace(0.3, 2.5, 12):
        d = (v(eta - 2 * h) - 8 * v(eta - h) + 8 * v(eta + h) - v(eta + 2 * h)) / (12 * h)
        assert d * math.sinh(eta) ** (n - 1) == pytest.approx(1.0, rel=1e-6)


@pytest.mark.parametrize("n", range(2, 9))
def test_radial_solution_harmonic(n):
    h = 1e-4
    for eta in (0.4, 1.0, 2.5):
        v = lambda s: radial_solution_hn(n, s)
        d1 = (v(eta + h) - v(eta - h)) / (2 * h)
        d2 = (v(eta + h) - 2 * v(eta) + v(eta - h)) / (h * h)
        scale = abs(d1) * (n - 1) / math.tanh(eta)
        assert abs(d2 + (n - 1) / math.tanh(eta) * d1) < 1e-6 * max(1.0, scale)


@pytest.mark.parametrize("n", range(2, 11))
def test_escape_potential_matches_quadrature(n):
    for eta in (0.05, 0.3, 0.5, 0.51, 1.0, 3.0, 10.0):
        ref = si.quad(sinh_power, eta, np.inf, args=(n,), epsabs=0, epsrel=1e-13)[0]
        assert escape_potential_hn(n, eta) == pytest.approx(ref, rel=1e-10)


def test_escape_potential_edges():
    assert escape_potential_hn(3, math.inf) == 0.0
    with pytest.raises(DomainError):
        escape_potential_hn(3, 0.0)
    with pytest.raises(DomainError):
        escape_potential_hn(100, 1.0)


# --------------------------------------------------------------------------
# H^n


def test_hn_three_dimensional_closed_form():
    coth = lambda x: 1 / math.tanh(x)
    for e1, e, e2 in [(0.5, 1.0, 2.0), (0.1, 0.2, 5.0), (2.0, 3.0, 3.5)]:
        ref = (coth(e2) - coth(e)) / (coth(e2) - coth(e1))
        assert exit_prob_hn(3, e, e1, e2) == pytest.approx(ref, rel=1e-12)
        assert hit_prob_hn(3, e, e1) == pytest.approx((1 - coth(e)) / (1 - coth(e1)), rel=1e-10)


@pytest.mark.parametrize("n", range(3, 9))
def test_hn_boundary_values(n):
    assert exit_prob_hn(n, 0.5, 0.5, 2.0) == 1.0
    assert exit_prob_hn(n, 2.0, 0.5, 2.0) == 0.0
    assert hit_prob_hn(n, 0.5, 0.5) == 1.0


@pytest.mark.parametrize("n", range(3, 9))
def test_hn_small_radii_euclidean_limit(n):
    s = 1e-3
    got = exit_prob_hn(n, 1.0 * s, 0.5 * s, 2.0 * s)
    assert got == pytest.approx(exit_prob_euclidean(n, 1.0, 0.5, 2.0), abs=1e-3)


@pytest.mark.parametrize("n", range(2, 9))
def test_hn_matches_quadrature(n):
    for _ in range(15):
        e1 = RNG.uniform(0.05, 3)
        e2 = e1 + RNG.uniform(0.1, 4)
        e = RNG.uniform(e1, e2)
        assert exit_prob_hn(n, e, e1, e2) == pytest.approx(quad_exit_oracle(n, e, e1, e2), abs=1e-10)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_hn_escape_limit(n):
    for e in (0.6, 1.0, 3.0):
        v = hit_prob_hn(n, e, 0.5)
        assert 0 < v < 1
        assert v == pytest.approx(exit_prob_hn(n, e, 0.5, 30.0), abs=1e-6)


def test_hn_domain():
    with pytest.raises(DomainError):
        exit_prob_hn(3, 3.0, 0.5, 2.0)
    with pytest.raises(DomainError):
        exit_prob_hn(1, 1.0, 0.5, 2.0)
    with pytest.raises(DomainError):
        hit_prob_hn(4, 0.1, 0.5)


# --------------------------------------------------------------------------
# disc, sphere, Euclidean


def test_disc_matches_h2():
    for _ in range(200):
        e1 = RNG.uniform(0.05, 3)
        e2 = e1 + RNG.uniform(0.1, 4)
        e = RNG.uniform(e1, e2)
        t = lambda x: math.tanh(x / 2)
        assert exit_prob_d2(t(e), t(e1), t(e2)) == pytest.approx(exit_prob_h2(e, e1, e2), abs=1e-12)
        assert hit_prob_d2(t(e), t(e1)) == pytest.approx(hit_prob_h2(e, e1), abs=1e-12)


def test_disc_edges():
    assert exit_prob_d2(0.3, 0.3, 0.8) == 1.0
    assert 0 < hit_prob_d2(0.5, 0.3) < 1
    with pytest.raises(DomainError):
        exit_prob_d2(0.5, 0.3, 1.0)
    with pytest.raises(DomainError):
        hit_prob_d2(0.2, 0.3)


def test_sphere_boundary_values():
    assert exit_prob_sphere(2.0, 2.0, 0.5) == 1.0
    assert exit_prob_sphere(0.5, 2.0, 0.5) == 0.0
    v = exit_prob_sphere(1.0, 2.0, 0.5)
    assert 0 < v < 1


def test_sphere_equator_special_case():
    # theta2 = pi/2 leaves log|tan(theta/2)| / log|tan(theta1/2)|
    for th, th1 in [(2.0, 2.6), (1.6, 3.0)]:
        ref = math.log(math.tan(th / 2)) / math.log(math.tan(th1 / 2))
        assert exit_prob_sphere(th, th1, math.pi / 2) == pytest.approx(ref, rel=1e-12)


def test_sphere_harmonic():
    # f(theta) = log tan(theta/2) satisfies f'' + cot(theta) f' = 0
    h = 1e-4
    f = lambda t: math.log(math.tan(t / 2))
    for t in (0.4, 1.2, 2.2):
        d1 = (f(t + h) - f(t - h)) / (2 * h)
        d2 = (f(t + h) - 2 * f(t) + f(t - h)) / (h * h)
        assert abs(d2 + d1 / math.tan(t)) < 1e-6


def test_sphere_to_hyperbolic_substitution():
    for _ in range(100):
        e1 = RNG.uniform(0.05, 3)
        e2 = e1 + RNG.uniform(0.1, 4)
        e = RNG.uniform(e1, e2)
        v = sphere_exit_expression(1j * e, 1j * e1, 1j * e2)
        assert abs(v.imag) < 1e-12
        assert v.real == pytest.approx(exit_prob_h2(e, e1, e2), abs=1e-12)


def test_sphere_domain():
    with pytest.raises(DomainError):
        exit_prob_sphere(1.0, 0.5, 2.0)
    with pytest.raises(DomainError):
        exit_prob_sphere(1.0, math.pi, 0.5)


def test_euclidean():
    assert exit_prob_euclidean(3, 1.0, 0.5, 2.0) == pytest.approx(1 / 3, rel=1e-14)
    assert exit_prob_euclidean(2, 1.0, 0.5, 2.0) == pytest.approx(0.5, rel=1e-14)
    assert exit_prob_euclidean(4, 0.5, 0.5, 2.0) == 1.0
    assert hit_prob_euclidean(2, 10.0, 0.5) == 1.0
    assert hit_prob_euclidean(3, 2.0, 0.5) == pytest.approx(0.25)
    # planar exit probability tends to 1 as the outer radius grows
    assert exit_prob_euclidean(2, 1.0, 0.5, 1e300) > 0.99


def test_annulus_container():
    AnnulusSpec(0.5, 1.0)
    for bad in [(0.0, 1.0), (1.0, 0.5), (0.5, math.inf)]:
        with pytest.raises(DomainError):
            AnnulusSpec(*bad)


# --------------------------------------------------------------------------
# monotonicity and range


@pytest.mark.parametrize("n", range(2, 9))
def test_monotone_decreasing_in_start(n):
    e1, e2 = 0.4, 2.7
    grid = np.linspace(e1, e2, 1000)
    vals = np.array([exit_prob_hn(n, e, e1, e2) for e in grid])
    assert np.all(np.diff(vals) < 0)
    assert vals[0] == 1.0 and vals[-1] == 0.0
    assert np.all((vals[1:-1] > 0) & (vals[1:-1] < 1))
    hits = np.array([hit_prob_hn(n, e, e1) for e in np.linspace(e1 + 1e-3, 12, 1000)])
    assert np.all(np.diff(hits) < 0)
    assert np.all((hits > 0) & (hits < 1))


def test_monotone_other_geometries():
    r = np.linspace(0.2, 0.9, 1000)
    v = np.array([exit_prob_d2(x, 0.2, 0.9) for x in r])
    assert np.all(np.diff(v) < 0)
    # on the sphere the probability of reaching theta1 grows with theta
    th = np.linspace(0.5, 2.5, 1000)
    s = np.array([exit_prob_sphere(t, 2.5, 0.5) for t in th])
    assert np.all(np.diff(s) > 0)
    for n in (2, 3, 5):
        e = np.linspace(0.5, 2.0, 1000)
        w = np.array([exit_prob_euclidean(n, x, 0.5, 2.0) for x in e])
        assert np.all(np.diff(w) < 0)
