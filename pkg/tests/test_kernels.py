import math

import numpy as np
import pytest
from scipy import integrate as si

from hypk.errors import DomainError
from hypk.geometry import (
    HalfSpacePoint,
    PolarPoint,
    boundary_angle_to_x,
    carnot_hyperbolic,
    carnot_spherical,
    halfspace_to_polar_h2,
    polar_to_halfspace_h2,
)
from hypk.kernels import (
    cauchy_hitting_density,
    cauchy_type_hn,
    euclidean_poisson_nd,
    poisson_d2,
    poisson_d2_boundary,
    poisson_h2,
    poisson_h2_boundary,
    poisson_h2_cartesian,
    poisson_h2_series,
    poisson_hn,
    poisson_hn_infinite,
    poisson_sphere,
    sphere_kernel_expression,
)
from hypk.stats import integrate

INV_2PI = 1.0 / (2.0 * math.pi)
RNG = np.random.default_rng(11)

# (n, eta, eta_bar, psi, density).  Reference values come from summing zonal
# harmonics with explicit Gamma-function sphere areas and radial ratios
# obtained by integrating the radial ODE
#   R'' + (n-1) coth(s) R' - k(k+n-2) R / sinh^2 s = 0
# with scipy's DOP853 at rtol 1e-13 (60 terms).
HN_REFERENCE = [
    (3, 0.5, 1.2, 1.0, 0.5507921551457083),
    (4, 0.3, 1.0, 2.0, 0.23299252795964642),
    (5, 0.7, 1.5, 0.5, 0.9955197500960725),
]


def quad(f, a, b, **kw):
    return si.quad(f, a, b, epsabs=1e-13, epsrel=1e-13, limit=400, **kw)[0]


# --------------------------------------------------------------------------
# H^2


def test_h2_uniform_at_origin():
    d = np.linspace(-math.pi, math.pi, 17)
    assert np.allclose(poisson_h2(0.0, d, 1.3), INV_2PI, rtol=1e-15)


def test_h2_carnot_form():
    for _ in range(200):
        eb = RNG.uniform(0.1, 5)
        e = RNG.uniform(0, eb * 0.95)
        d = RNG.uniform(-math.pi, math.pi)
        eh = carnot_hyperbolic(e, eb, d)
        ref = INV_2PI * (math.cosh(eb) - math.cosh(e)) / (math.cosh(eh) - 1)
        assert poisson_h2(e, d, eb) == pytest.approx(ref, rel=1e-9)


def test_h2_matches_fourier_series():
    ser = poisson_h2_series(0.8, 0.3, 1.5, 60)
    assert abs(poisson_h2(0.8, 0.3, 1.5) - ser.density) < 1e-10
    assert ser.truncation_error_bound < 1e-10


def test_h2_series_trivial_cases():
    assert poisson_h2_series(0.5, 0.7, 1.0, 0).density == pytest.approx(INV_2PI, abs=1e-16)
    assert poisson_h2_series(0.0, 0.7, 1.0, 25).density == INV_2PI


def test_h2_series_geometric_convergence():
    eta, eb, d = 0.8, 1.5, 0.3
    q = math.tanh(eta / 2) / math.tanh(eb / 2)
    exact = poisson_h2(eta, d, eb)
    errs = []
    for m in range(10, 40):
        ev = poisson_h2_series(eta, d, eb, m)
        err = abs(ev.density - exact)
        assert err <= ev.truncation_error_bound * (1 + 1e-9) + 1e-15
        errs.append(max(abs(poisson_h2_series(eta, d, eb, m + k).density - exact) for k in (0, 1)))
    rates = np.array(errs[1:]) / np.array(errs[:-1])
    assert np.exp(np.mean(np.log(rates))) == pytest.approx(q, rel=0.05)


def test_h2_domain():
    with pytest.raises(DomainError):
        poisson_h2(1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        poisson_h2(2.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        poisson_h2_series(0.1, 0.0, 1.0, -1)


@pytest.mark.parametrize("eta,eb", [(0.0, 1.0), (0.4, 0.5), (2.0, 4.0), (1.0, 350.0), (5.0, 5.2)])
def test_h2_normalised(eta, eb):
    res = integrate(lambda d: poisson_h2(eta, d, eb), -math.pi, math.pi, tol=1e-12, max_level=24)
    assert res.value == pytest.approx(1.0, abs=1e-9)


def test_h2_overflow_regime_is_finite():
    d = np.linspace(-math.pi, math.pi, 9)
    v = poisson_h2(500.0, d, 800.0)
    assert np.all(np.isfinite(v)) and np.all(v > 0)


def test_h2_boundary_limit():
    assert poisson_h2_boundary(0.0, 1.2) == pytest.approx(INV_2PI)
    for eta in (0.2, 1.0, 2.0):
        d = np.linspace(-math.pi, math.pi, 41)
        assert np.max(np.abs(poisson_h2(eta, d, 12.0) - poisson_h2_boundary(eta, d))) < 1e-4


@pytest.mark.parametrize("eta", [0.0, 0.5, 2.0, 6.0])
def test_h2_boundary_integral_identity(eta):
    # int_{-pi}^{pi} dx / (a + b cos x) = 2 pi / sqrt(a^2 - b^2) with a = cosh, b = -sinh
    a, b = math.cosh(eta), -math.sinh(eta)
    assert 2 * math.pi / math.sqrt(a * a - b * b) == pytest.approx(2 * math.pi)
    res = integrate(lambda d: poisson_h2_boundary(eta, d), -math.pi, math.pi, tol=1e-12, max_level=24)
    assert res.value == pytest.approx(1.0, abs=1e-9)


# --------------------------------------------------------------------------
# half-plane forms


def test_cauchy_standard():
    xb = np.linspace(-20, 20, 81)
    assert np.allclose(cauchy_hitting_density(0.0, 1.0, xb), 1 / (math.pi * (1 + xb * xb)), rtol=1e-15)


def test_cauchy_change_of_variables():
    for x, y in [(0.0, 1.0), (0.7, 0.4), (-2.0, 3.0), (0.1, 0.05)]:
        p = halfspace_to_polar_h2(HalfSpacePoint((x,), y))
        eta, alpha = p.eta, p.alpha
        for ab in np.linspace(-math.pi + 0.05, math.pi - 0.05, 31):
            if abs(ab - math.pi / 2) < 1e-3:
                continue
            xb = boundary_angle_to_x(ab)
            lhs = cauchy_hitting_density(x, y, xb) * (1 + xb * xb) / 2
            assert lhs == pytest.approx(poisson_h2_boundary(eta, alpha - ab), rel=1e-9)


def test_cauchy_normalised():
    for x, y in [(0.0, 1.0), (1.5, 0.3)]:
        L = 1e4
        body = quad(lambda t: cauchy_hitting_density(x, y, t), x - L, x + L, points=[x])
        tail = 2 * math.atan(y / L) / math.pi  # exact mass beyond |t - x| > L
        assert body + tail == pytest.approx(1.0, abs=1e-9)


def test_cauchy_domain():
    with pytest.raises(DomainError):
        cauchy_hitting_density(0.0, 0.0, 1.0)


def test_cartesian_boundary_reduction():
    xb = np.linspace(-5, 5, 21)
    v = poisson_h2_cartesian(0.0, 1.0, xb, 0.0)
    assert np.allclose(v, INV_2PI, rtol=1e-14)
    for x, y in [(0.3, 0.8), (-1.0, 2.0)]:
        v = poisson_h2_cartesian(x, y, xb, 0.0)
        assert np.allclose(v / (1 + xb * xb) * 2, cauchy_hitting_density(x, y, xb), rtol=1e-13)


def test_cartesian_matches_polar():
    for _ in range(100):
        eb = RNG.uniform(0.2, 4)
        e = RNG.uniform(0, 0.9 * eb)
        a = RNG.uniform(-math.pi, math.pi)
        ab = RNG.uniform(-math.pi, math.pi)
        p = polar_to_halfspace_h2(PolarPoint.h2(e, a))
        pb = polar_to_halfspace_h2(PolarPoint.h2(eb, ab))
        got = poisson_h2_cartesian(p.x[0], p.y, pb.x[0], pb.y)
        assert got == pytest.approx(poisson_h2(e, a - ab, eb), rel=1e-10)


def test_cartesian_domain():
    with pytest.raises(DomainError):
        poisson_h2_cartesian(0.0, 1.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        poisson_h2_cartesian(0.0, -1.0, 0.0, 0.0)


# --------------------------------------------------------------------------
# disc


def test_disc_kernels():
    assert poisson_d2(0.0, 0.4, 0.7) == pytest.approx(INV_2PI)
    assert poisson_d2_boundary(0.0, 0.4) == pytest.approx(INV_2PI)
    for _ in range(100):
        eb = RNG.uniform(0.1, 6)
        e = RNG.uniform(0, 0.95 * eb)
        d = RNG.uniform(-math.pi, math.pi)
        r, rb = math.tanh(e / 2), math.tanh(eb / 2)
        assert poisson_d2(r, d, rb) == pytest.approx(poisson_h2(e, d, eb), rel=1e-9)
        assert poisson_d2_boundary(r, d) == pytest.approx(poisson_h2_boundary(e, d), rel=1e-12)


@pytest.mark.parametrize("r,rb", [(0.0, 0.5), (0.3, 0.6), (0.8, 0.95)])
def test_disc_normalised(r, rb):
    assert quad(lambda d: poisson_d2(r, d, rb), -math.pi, math.pi) == pytest.approx(1.0, abs=1e-10)
    assert quad(lambda d: poisson_d2_boundary(r, d), -math.pi, math.pi) == pytest.approx(1.0, abs=1e-10)


def test_h2_small_radius_limit_is_disc():
    # eta, eta_bar -> 0 at fixed ratio gives the Euclidean disc kernel
    d = np.linspace(-math.pi, math.pi, 25)
    s = 1e-4
    got = poisson_h2(0.4 * s, d, s)
    assert np.allclose(got, poisson_d2(0.4, d, 1.0, _strict=False), rtol=1e-6)


def test_disc_domain():
    with pytest.raises(DomainError):
        poisson_d2(0.5, 0.0, 0.4)
    with pytest.raises(DomainError):
        poisson_d2(0.5, 0.0, 1.0)
    with pytest.raises(DomainError):
        poisson_d2_boundary(1.0, 0.0)


# --------------------------------------------------------------------------
# H^n


@pytest.mark.parametrize("n,eta,eb,psi,ref", HN_REFERENCE)
def test_hn_radial_ode_oracle(n, eta, eb, psi, ref):
    assert poisson_hn(n, eta, eb, psi).density == pytest.approx(ref, abs=1e-9)


@pytest.mark.parametrize("n", [3, 4, 6])
def test_hn_uniform_at_origin(n):
    from hypk.specialfn import surface_ratio

    psi = np.linspace(0, math.pi, 13)
    ev = poisson_hn(n, 0.0, 1.0, psi)
    assert np.allclose(ev.density, surface_ratio(n) * np.sin(psi) ** (n - 2), atol=1e-15)
    ev = poisson_hn_infinite(n, 0.0, psi)
    assert np.allclose(ev.density, surface_ratio(n) * np.sin(psi) ** (n - 2), atol=1e-15)


@pytest.mark.parametrize("n,eta,eb", [(3, 0.5, 1.2), (4, 1.0, 1.5), (5, 0.2, 3.0), (7, 2.0, 2.6)])
def test_hn_normalised(n, eta, eb):
    assert quad(lambda p: poisson_hn(n, eta, eb, p).density, 0, math.pi) == pytest.approx(1.0, abs=1e-8)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_hn_infinite_limit(n):
    psi = np.linspace(0, math.pi, 31)
    for eta in (0.3, 1.0):
        a = poisson_hn(n, eta, 14.0, psi).density
        b = poisson_hn_infinite(n, eta, psi).density
        assert np.max(np.abs(a - b)) < 1e-5
        assert quad(lambda p: poisson_hn_infinite(n, eta, p).density, 0, math.pi) == pytest.approx(1.0, abs=1e-7)


@pytest.mark.parametrize("n", [3, 4, 5])
def test_hn_euclidean_scaling_limit(n):
    psi = np.linspace(0.05, math.pi, 30)
    s = 1e-3
    got = poisson_hn(n, 0.6 * s, s, psi).density
    assert np.max(np.abs(got - euclidean_poisson_nd(n, 0.6, psi))) < 1e-4


def test_hn_reports_truncation():
    ev = poisson_hn(3, 0.5, 1.2, 1.0)
    assert ev.terms_used > 1
    assert 0 <= ev.truncation_error_bound < 1e-12


def test_hn_domain():
    with pytest.raises(DomainError):
        poisson_hn(2, 0.1, 1.0, 0.5)
    with pytest.raises(DomainError):
        poisson_hn(3, 1.0, 1.0, 0.5)
    with pytest.raises(DomainError):
        poisson_hn(3, 0.1, 1.0, 4.0)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_euclidean_nd(n):
    from hypk.specialfn import surface_ratio

    psi = np.linspace(0, math.pi, 11)
    assert np.allclose(euclidean_poisson_nd(n, 0.0, psi), surface_ratio(n) * np.sin(psi) ** (n - 2))
    for rho in (0.3, 0.8):
        assert quad(lambda p: euclidean_poisson_nd(n, rho, p), 0, math.pi, points=[0.0]) == pytest.approx(1.0, abs=1e-10)
    with pytest.raises(DomainError):
        euclidean_poisson_nd(n, 1.0, 0.3)


def test_cauchy_type_hn():
    x = np.linspace(-4, 4, 17)
    assert np.allclose(cauchy_type_hn(2, x, 0.7), 0.7 / (math.pi * (0.49 + x * x)))
    peak = math.gamma(2) / (math.pi * math.gamma(1)) * 0.5 ** (-2)
    assert cauchy_type_hn(3, np.zeros(2), 0.5) == pytest.approx(peak)
    # polar quadrature over R^2 with the exact tail beyond R
    y, R = 0.5, 1e3
    body = quad(lambda r: 2 * math.pi * r * cauchy_type_hn(3, np.array([r, 0.0]), y), 0, R, points=[y, 10 * y])
    tail = y * y / (y * y + R * R)
    assert body + tail == pytest.approx(1.0, abs=1e-6)
    with pytest.raises(DomainError):
        cauchy_type_hn(3, np.zeros(2), 0.0)
    with pytest.raises(DomainError):
        cauchy_type_hn(3, np.zeros(3), 1.0)


# --------------------------------------------------------------------------
# S^2


def test_sphere_uniform_at_pole():
    d = np.linspace(-math.pi, math.pi, 9)
    assert np.allclose(poisson_sphere(0.0, d, 1.0), INV_2PI)


def test_sphere_equator_target():
    for th in (0.2, 0.9, 1.4):
        for d in (-2.0, 0.0, 1.1):
            ref = INV_2PI * math.cos(th) / (1 - math.sin(th) * math.cos(d))
            assert poisson_sphere(th, d, math.pi / 2) == pytest.approx(ref, rel=1e-13)


def test_sphere_carnot_form():
    for _ in range(200):
        tb = RNG.uniform(0.1, 3.0)
        th = RNG.uniform(0, 0.95 * tb)
        d = RNG.uniform(-math.pi, math.pi)
        thh = carnot_spherical(th, tb, d)
        ref = INV_2PI * (math.cos(th) - math.cos(tb)) / (1 - math.cos(thh))
        assert poisson_sphere(th, d, tb) == pytest.approx(ref, rel=1e-8)


@pytest.mark.parametrize("th,tb", [(0.3, 0.9), (1.0, 2.0), (2.5, 3.0)])
def test_sphere_normalised(th, tb):
    a = 1 - math.cos(th) * math.cos(tb)
    b = -math.sin(th) * math.sin(tb)
    # integral of 1 / (a + b cos) over a period is 2 pi / sqrt(a^2 - b^2)
    closed = INV_2PI * (math.cos(th) - math.cos(tb)) * 2 * math.pi / math.sqrt(a * a - b * b)
    assert closed == pytest.approx(1.0, abs=1e-12)
    assert quad(lambda d: poisson_sphere(th, d, tb), -math.pi, math.pi) == pytest.approx(1.0, abs=1e-10)


def test_sphere_domain():
    with pytest.raises(DomainError):
        poisson_sphere(1.0, 0.0, 0.5)
    with pytest.raises(DomainError):
        poisson_sphere(1.0, 0.0, math.pi)


def test_sphere_to_hyperbolic_substitution():
    for _ in range(200):
        eb = RNG.uniform(0.1, 4)
        e = RNG.uniform(0, 0.95 * eb)
        d = RNG.uniform(-math.pi, math.pi)
        v = sphere_kernel_expression(1j * e, d, 1j * eb)
        assert abs(v.imag) < 1e-12
        assert v.real == pytest.approx(poisson_h2(e, d, eb), rel=1e-9)


# --------------------------------------------------------------------------
# positivity on random grids


def test_positivity_random_grid():
    N = 10_000
    eb = RNG.uniform(0.01, 20, N)
    e = eb * RNG.uniform(0, 0.999, N)
    d = RNG.uniform(-math.pi, math.pi, N)
    assert np.all(poisson_h2(e, d, eb) > 0)
    assert np.all(poisson_h2_boundary(e, d) > 0)
    r = RNG.uniform(0, 0.999, N)
    rb = r + (1 - r) * RNG.uniform(0.001, 0.999, N)
    assert np.all(poisson_d2(r, d, rb) > 0)
    assert np.all(poisson_d2_boundary(r, d) > 0)
    tb = RNG.uniform(0.01, math.pi - 0.01, N)
    th = tb * RNG.uniform(0, 0.999, N)
    assert np.all(poisson_sphere(th, d, tb) > 0)
    assert np.all(cauchy_hitting_density(RNG.normal(size=N), RNG.uniform(0.01, 5, N), RNG.normal(size=N) * 10) > 0)
    psi = RNG.uniform(0, math.pi, N)
    for n in (3, 5):
        assert np.all(poisson_hn(n, 0.7, 1.9, psi).density >= -1e-12)
        assert np.all(euclidean_poisson_nd(n, r, psi) >= 0)
