import math

import numpy as np
import pytest

from dsm2d import specfun
from dsm2d.errors import CoincidenceError, DomainError

import oracles

# frozen from the power-series oracle (tests/oracles.py), summed to full precision
J0_AT_1 = 0.76519768655796655
Y0_AT_1 = 0.08825696421567696


def test_j0_y0_at_1_match_series_oracle():
    j, y = specfun.bessel_jy(0, 1.0)
    assert abs(j - oracles.besselj_series(0, 1.0)) < 1e-12
    assert abs(y - oracles.bessely_series(0, 1.0)) < 1e-12
    assert abs(j - J0_AT_1) < 1e-15
    assert abs(y - Y0_AT_1) < 1e-15


def test_wronskian_at_2():
    # J1(2) Y0(2) - J0(2) Y1(2) == 2/(2 pi)
    j0, y0 = specfun.bessel_jy(0, 2.0)
    j1, y1 = specfun.bessel_jy(1, 2.0)
    assert abs(j1 * y0 - j0 * y1 - 1.0 / math.pi) < 1e-12


def test_h0_magnitude_at_100_leading_asymptotics():
    j, y = specfun.bessel_jy(0, 100.0)
    mag = abs(complex(j, y))
    assert abs(mag - oracles.hankel1_leading_magnitude(100.0)) / mag < 1e-2


def test_wronskian_sweep_log_spaced():
    for x in np.logspace(-1, math.log10(200.0), 25):
        js, ys = specfun.bessel_jy_all(61, float(x))
        target = oracles.wronskian_exact(float(x))
        for nu in range(0, 61):
            w = js[nu + 1] * ys[nu] - js[nu] * ys[nu + 1]
            assert abs(w - target) <= 1e-10 * target


def test_three_term_recurrence_residual():
    for x in np.logspace(math.log10(0.5), math.log10(150.0), 20):
        js, _ = specfun.bessel_jy_all(61, float(x))
        for nu in range(1, 61):
            res = js[nu - 1] + js[nu + 1] - (2.0 * nu / x) * js[nu]
            assert abs(res) <= 1e-9 * max(1.0, abs(js[nu]))


def test_h0_radiation_magnitude_beyond_50():
    for x in (50.0, 75.0, 120.0, 300.0, 1e4):
        j, y = specfun.bessel_jy(0, x)
        mag = abs(complex(j, y))
        assert abs(mag - math.sqrt(2.0 / (math.pi * x))) <= 5e-3 * mag


def test_accuracy_against_oracle_random_orders():
    rng = np.random.default_rng(2)
    for _ in range(40):
        n = int(rng.integers(0, 121))
        x = float(10 ** rng.uniform(-1, 2.3))
        j, y = specfun.bessel_jy(n, x)
        jr = oracles.besselj_series(n, x)
        yr = oracles.bessely_series(n, x)
        if not math.isfinite(yr):
            # |Y_n| exceeds the float64 range; the library saturates to inf
            assert math.isinf(y) and math.copysign(1.0, y) == math.copysign(1.0, yr)
            continue
        mod = math.hypot(jr, yr)
        assert abs(j - jr) <= 1e-10 * mod
        assert abs(y - yr) <= 1e-10 * mod


def test_vectorized_matches_scalar():
    xs = np.array([0.3, 1.0, 7.7, 13.2, 90.0])
    j0v, y0v, j1v, y1v = specfun.bessel_j0y0j1y1(xs)
    for i, x in enumerate(xs):
        j0, y0, j1, y1 = specfun.bessel_j0y0j1y1(float(x))
        assert j0 == j0v[i] and y0 == y0v[i] and j1 == j1v[i] and y1 == y1v[i]


def test_cylinder_value_h1_components_exact():
    v = specfun.cylinder_value(3, 2.5)
    assert v.h1.real == v.j
    assert v.h1.imag == v.y


def test_domain_errors():
    with pytest.raises(DomainError):
        specfun.bessel_jy(0, 0.0)
    with pytest.raises(DomainError):
        specfun.bessel_jy(0, -1.0)
    with pytest.raises(DomainError):
        specfun.bessel_jy(-1, 1.0)
    with pytest.raises(DomainError):
        specfun.bessel_jy(121, 1.0)


def test_fundamental_solution_value_at_unit_distance():
    # (i/4) H0(1) = -Y0(1)/4 + i J0(1)/4
    v = specfun.fundamental_solution(1.0, np.array([1.0, 0.0]), np.array([0.0, 0.0]))
    assert abs(v - complex(-Y0_AT_1 / 4.0, J0_AT_1 / 4.0)) < 1e-14


def test_fundamental_solution_symmetry():
    rng = np.random.default_rng(0)
    for _ in range(5):
        x, y = rng.uniform(-3, 3, 2), rng.uniform(-3, 3, 2)
        assert specfun.fundamental_solution(2.0, x, y) == specfun.fundamental_solution(2.0, y, x)


def test_fundamental_solution_coincidence_error():
    with pytest.raises(CoincidenceError):
        specfun.fundamental_solution(1.0, np.zeros(2), np.zeros(2))


def test_fundamental_solution_far_field_consistency():
    # Phi_k(x, z) / (prefactor e^{ik|x|}/sqrt|x|) -> e^{-ik xhat.z} at |x| = 1e4
    k = 5.0
    z = np.array([0.3, -0.7])
    xhat = np.array([math.cos(0.9), math.sin(0.9)])
    x = 1e4 * xhat
    v = specfun.fundamental_solution(k, x, z)
    r = np.linalg.norm(x)
    pref = np.exp(1j * math.pi / 4) / math.sqrt(8 * k * math.pi) * np.exp(1j * k * r) / math.sqrt(r)
    ratio = v / pref
    assert abs(ratio - np.exp(-1j * k * (xhat @ z))) < 1e-3
