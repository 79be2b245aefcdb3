"""Cylinder functions J_n, Y_n, H_n^(1) and the 2D Helmholtz kernel.

Conventions
-----------
Fundamental solution of the 2D Helmholtz equation with wavenumber k > 0:

    Phi_k(x, y) = (i/4) H_0^(1)(k |x - y|),   x != y,

radiating for the e^{-i omega t} time convention.  Its large-|x| behaviour

    Phi_k(x, z) ~ (e^{i pi/4} / sqrt(8 k pi)) (e^{ik|x|}/sqrt(|x|)) e^{-ik xhat.z}

fixes the far-field normalization used throughout the package: the far
field of Phi_k(., z) is exactly e^{-ik xhat.z}.

Evaluation strategy
-------------------
Orders 0 and 1 (the kernel-critical path, fully vectorized):
  * ascending power series for 0 < x <= 12,
  * Hankel asymptotic expansion (P/Q series) for x > 12.
Higher integer orders:
  * J_n by Miller's downward recurrence with the even-order sum
    normalization  J_0 + 2 J_2 + 2 J_4 + ... = 1,
  * Y_n by upward recurrence from Y_0, Y_1 (stable: Y is dominant).

Double precision only.  Relative accuracy is ~1e-11 or better away from
zeros of the individual functions; the absolute error stays at the
1e-12 level of the local modulus sqrt(J_n^2 + Y_n^2).  Y_n overflows to
inf for very high order at very small argument (|Y_n| > 1e308), which is
outside every downstream use.

All functions are pure and safe for concurrent use.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CoincidenceError, DomainError

EULER_GAMMA = 0.5772156649015328606065120900824024

MAX_ORDER = 120

_SERIES_SPLIT = 12.0
_N_SERIES = 40
_N_ASYM = 20


def _series_coefficients():
    """Ascending-series coefficients, built iteratively to avoid factorial overflow."""
    j0 = np.empty(_N_SERIES)
    y0 = np.empty(_N_SERIES)
    j1 = np.empty(_N_SERIES)
    y1 = np.empty(_N_SERIES)
    c = 1.0        # (-1)^m / (m!)^2
    d = 1.0        # (-1)^m / (m! (m+1)!)
    h = 0.0        # harmonic number h_m
    for m in range(_N_SERIES):
        j0[m] = c
        y0[m] = -c * h                    # coefficient of (2/pi)*sum in Y0
        j1[m] = d
        y1[m] = d * (2.0 * h + 1.0 / (m + 1.0))   # h_m + h_{m+1}
        c /= -((m + 1.0) ** 2)
        d /= -((m + 1.0) * (m + 2.0))
        h += 1.0 / (m + 1.0)
    return j0, y0, j1, y1


_J0C, _Y0C, _J1C, _Y1C = _series_coefficients()


def _horner(coeffs: np.ndarray, u: np.ndarray) -> np.ndarray:
    acc = np.full_like(u, coeffs[-1])
    for c in coeffs[-2::-1]:
        acc = acc * u + c
    return acc


def _jy01_series(x: np.ndarray):
    """J0, Y0, J1, Y1 by ascending series, for 0 < x <= 12."""
    u = 0.25 * x * x
    lg = np.log(0.5 * x) + EULER_GAMMA
    j0 = _horner(_J0C, u)
    j1 = 0.5 * x * _horner(_J1C, u)
    y0 = (2.0 / math.pi) * (lg * j0 + _horner(_Y0C, u))
    y1 = (2.0 / math.pi) * (lg * j1 - 1.0 / x) - (x / (2.0 * math.pi)) * _horner(_Y1C, u)
    return j0, y0, j1, y1


def _jy01_asymptotic(x: np.ndarray):
    """J0, Y0, J1, Y1 by the Hankel P/Q expansion, for x > 12.

    P_nu = sum_{m even} (-1)^{m/2} t_m,  Q_nu = sum_{m odd} (-1)^{(m-1)/2} t_m,
    t_m = prod_{l=1..m} (4 nu^2 - (2l-1)^2) / (8 x l);
    J_nu = sqrt(2/(pi x)) (P cos chi - Q sin chi), chi = x - (2 nu + 1) pi/4,
    Y_nu likewise with (P sin chi + Q cos chi).
    """
    amp = np.sqrt(2.0 / (math.pi * x))
    out = []
    for nu in (0, 1):
        mu = 4.0 * nu * nu
        term = np.ones_like(x)
        p = np.ones_like(x)
        q = np.zeros_like(x)
        sign_p, sign_q = -1.0, 1.0
        for m in range(1, _N_ASYM):
            term = term * (mu - (2.0 * m - 1.0) ** 2) / (8.0 * m * x)
            if m % 2 == 1:
                q = q + sign_q * term
                sign_q = -sign_q
            else:
                p = p + sign_p * term
                sign_p = -sign_p
        chi = x - (2.0 * nu + 1.0) * (math.pi / 4.0)
        c, s = np.cos(chi), np.sin(chi)
        out.append((amp * (p * c - q * s), amp * (p * s + q * c)))
    (j0, y0), (j1, y1) = out
    return j0, y0, j1, y1


def bessel_j0y0j1y1(x):
    """Vectorized J0, Y0, J1, Y1 for real x > 0.

    Parameters
    ----------
    x : array_like
        Positive arguments.

    Returns
    -------
    (j0, y0, j1, y1) : ndarrays with the shape of ``x``.
    """
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0.0):
        raise DomainError("bessel functions require x > 0")
    scalar = x.ndim == 0
    x = np.atleast_1d(x)
    j0 = np.empty_like(x)
    y0 = np.empty_like(x)
    j1 = np.empty_like(x)
    y1 = np.empty_like(x)
    lo = x <= _SERIES_SPLIT
    if np.any(lo):
        j0[lo], y0[lo], j1[lo], y1[lo] = _jy01_series(x[lo])
    hi = ~lo
    if np.any(hi):
        j0[hi], y0[hi], j1[hi], y1[hi] = _jy01_asymptotic(x[hi])
    if scalar:
        return j0[0], y0[0], j1[0], y1[0]
    return j0, y0, j1, y1


def hankel1_01(x):
    """H_0^(1)(x) and H_1^(1)(x), vectorized, x > 0."""
    j0, y0, j1, y1 = bessel_j0y0j1y1(x)
    return j0 + 1j * y0, j1 + 1j * y1


def _miller_j_all(nmax: int, x: float) -> list[float]:
    """J_0..J_nmax at scalar x by downward recurrence with sum normalization."""
    # Contamination by the dominant solution decays like
    # exp(-c (start - x)^{3/2} / sqrt(x)) past the turning point, so the
    # start margin must grow like x^{1/3} to keep it below ~1e-13.
    margin = 22 + 2 * int(math.sqrt(max(nmax, x, 1.0))) + int(10.0 * x ** (1.0 / 3.0))
    start = max(nmax, int(x)) + margin
    jp = 0.0          # J_{n+1} carrier (unnormalized)
    jc = 1e-300       # J_n carrier
    out = [0.0] * (nmax + 1)
    norm = 0.0
    for n in range(start, 0, -1):
        jm = (2.0 * n / x) * jc - jp
        jp, jc = jc, jm
        if abs(jc) > 1e250:
            scale = 1e-250
            jp *= scale
            jc *= scale
            norm *= scale
            out = [v * scale for v in out]
        m = n - 1
        if m <= nmax:
            out[m] = jc
        if m > 0 and m % 2 == 0:
            norm += 2.0 * jc
    norm += jc        # + J_0 carrier
    return [v / norm for v in out]


def bessel_jy_all(nmax: int, x: float):
    """J_n and Y_n for n = 0..nmax at scalar x > 0.

    Returns
    -------
    (j, y) : float ndarrays of length nmax + 1.
    """
    if not (x > 0.0):
        raise DomainError("bessel functions require x > 0")
    if nmax < 0 or nmax > max(MAX_ORDER, int(x) + MAX_ORDER):
        raise DomainError(f"order {nmax} outside supported range")
    j0, y0, j1, y1 = (float(v) for v in bessel_j0y0j1y1(np.float64(x)))
    j = np.empty(nmax + 1)
    y = np.empty(nmax + 1)
    j[0], y[0] = j0, y0
    if nmax >= 1:
        j[1], y[1] = j1, y1
        yp, yc = y0, y1
        for n in range(1, nmax):
            yn = (2.0 * n / x) * yc - yp
            if not math.isfinite(yn):
                # |Y_n| beyond float64: saturate with the carried sign
                y[n + 1:] = math.copysign(math.inf, yc)
                break
            yp, yc = yc, yn
            y[n + 1] = yn
    if nmax >= 2:
        j[:] = _miller_j_all(nmax, x)
    return j, y


def bessel_jy(order: int, x):
    """Bessel J and Y of integer order for real x > 0.

    Parameters
    ----------
    order : int
        0 <= order <= 120.
    x : float or array_like
        Positive argument(s).

    Returns
    -------
    (j, y) : scalars or ndarrays matching ``x``.
    """
    if int(order) != order or order < 0 or order > MAX_ORDER:
        raise DomainError(f"order must be an integer in [0, {MAX_ORDER}], got {order!r}")
    order = int(order)
    xa = np.asarray(x, dtype=float)
    if np.any(xa <= 0.0):
        raise DomainError("bessel functions require x > 0")
    if order == 0:
        j0, y0, _, _ = bessel_j0y0j1y1(xa)
        return j0, y0
    if order == 1:
        _, _, j1, y1 = bessel_j0y0j1y1(xa)
        return j1, y1
    if xa.ndim == 0:
        j, y = bessel_jy_all(order, float(xa))
        return j[order], y[order]
    flat = xa.ravel()
    j = np.empty_like(flat)
    y = np.empty_like(flat)
    for i, xi in enumerate(flat):
        ji, yi = bessel_jy_all(order, float(xi))
        j[i], y[i] = ji[order], yi[order]
    return j.reshape(xa.shape), y.reshape(xa.shape)


@dataclass(frozen=True)
class CylinderFunctionValue:
    """J, Y and H^(1) of one integer order at one argument."""

    order: int
    argument: float
    j: float
    y: float

    @property
    def h1(self) -> complex:
        return complex(self.j, self.y)


def cylinder_value(order: int, x: float) -> CylinderFunctionValue:
    j, y = bessel_jy(order, float(x))
    return CylinderFunctionValue(order=int(order), argument=float(x), j=float(j), y=float(y))


def fundamental_solution(k: float, x, y):
    """Phi_k(x, y) = (i/4) H_0^(1)(k |x - y|).

    ``x`` and ``y`` are points of shape (2,) or arrays of shape (..., 2);
    broadcasting follows numpy rules on the leading axes.

    Raises
    ------
    CoincidenceError
        If any |x - y| < 1e-14 (kernel singularity).
    """
    if not k > 0.0:
        raise DomainError("wavenumber k must be positive")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    r = np.sqrt(np.sum(d * d, axis=-1))
    if np.any(r < 1e-14):
        raise CoincidenceError("fundamental solution evaluated at coincident points")
    h0, _ = hankel1_01(k * r)
    return 0.25j * h0
