"""Physical-optics far fields, the generalized Bojarski identity, and the
leading-order specular reflection amplitude.

Kirchhoff far field (package far-field normalization), illuminated-side
trapezoid quadrature:

    K(xhat, theta, k) = gamma_D int_{dD_-(theta)} ik theta.nu(y)
                        e^{ik(theta - xhat).y} ds(y),
    gamma_D = -2 (soft), +2 (hard),  dD_-(theta) = {nu.theta < 0}.

Summing K(xhat, theta, k) + conj(K(-xhat, -theta, k)) turns the illuminated
restriction into the full closed boundary, and the divergence theorem gives
the generalized Bojarski right-hand side

    U_inf = -k^2 theta.(theta - xhat) gamma_D int chi_D(y) e^{ik(theta-xhat).y} dy.

For a strictly convex obstacle the stationary-phase evaluation of K at the
illuminated specular point y* (outward normal nu(y*) = -phi,
phi = (theta - xhat)/|theta - xhat|) gives the geometrical-optics amplitude

    A(xhat, theta) = R^gamma e^{ik y*.(theta - xhat)},
    R^gamma = gamma kappa(y*)^{-1/2} |theta - xhat|^{-1/2} phi.xhat,

with gamma = -1 (Dirichlet) / +1 (Neumann), related to the 2D far field by
u_inf = sqrt(8 pi k) e^{3 i pi / 4} A + O(k^{-1/2}).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import specfun
from .errors import ConfigError, DegeneratePairError, ResolutionError
from .forward_weak import _coverage_fraction_polygon
from .geometry import ParametricBoundary, boundary_sample


@dataclass(frozen=True)
class KirchhoffConfig:
    """Physical-optics setup: boundary, jump factor gamma_D, node count.

    Validity of the approximation is claimed for convex obstacles at high
    frequency only; non-convex boundaries are accepted without complaint.
    """

    boundary: ParametricBoundary
    gamma_d: float
    node_count: int | None = None

    def __post_init__(self):
        if self.gamma_d not in (-2.0, 2.0, -2, 2):
            raise ConfigError("gamma_d must be -2 (soft) or +2 (hard)")


def _guard_nodes(boundary: ParametricBoundary, k: float, n: int | None) -> int:
    n = boundary.node_count if n is None else int(n)
    need = int(math.ceil(10.0 * k * boundary.perimeter() / (2.0 * math.pi)))
    if n < need:
        raise ResolutionError(f"{n} nodes < resolution guard {need} at k={k:g}")
    return n


def kirchhoff_far_field_nodes(points, normals, weights, illuminated, gamma_d,
                              x_hat, theta, k: float) -> complex:
    """Kirchhoff sum over explicitly given nodes (illuminated boolean mask)."""
    x_hat = np.asarray(x_hat, dtype=float)
    theta = np.asarray(theta, dtype=float)
    d = theta - x_hat
    m = np.asarray(illuminated, dtype=bool)
    phase = np.exp(1j * k * (points[m] @ d))
    return complex(gamma_d * np.sum(weights[m] * 1j * k * (normals[m] @ theta) * phase))


def kirchhoff_far_field(config: KirchhoffConfig, x_hat, theta, k: float) -> complex:
    """Physical-optics far field restricted to the illuminated boundary."""
    if not k > 0.0:
        raise ConfigError("wavenumber k must be positive")
    n = _guard_nodes(config.boundary, k, config.node_count)
    nodes = boundary_sample(config.boundary, n)
    theta_v = np.asarray(theta, dtype=float)
    illum = nodes.normals @ theta_v < 0.0
    w = (2.0 * math.pi / nodes.n) * nodes.jacobians
    return kirchhoff_far_field_nodes(nodes.points, nodes.normals, w, illum,
                                     config.gamma_d, x_hat, theta, k)


def _chi_fourier_disk(radius: float, center, d: np.ndarray, k: float) -> complex:
    xi = k * float(np.linalg.norm(d))
    if xi * radius < 1e-12:
        val = math.pi * radius * radius
    else:
        j1 = specfun.bessel_jy(1, xi * radius)[0]
        val = 2.0 * math.pi * radius * j1 / xi
    return val * complex(np.exp(1j * k * (d @ np.asarray(center, dtype=float))))


def _chi_fourier_boundary(boundary: ParametricBoundary, d: np.ndarray, k: float) -> complex:
    """Fourier transform of the characteristic function by raster quadrature."""
    poly = boundary.point(2.0 * np.pi * np.arange(1024) / 1024)
    lo = poly.min(axis=0) - 0.05
    hi = poly.max(axis=0) + 0.05
    extent = float(np.max(hi - lo))
    osc = k * float(np.linalg.norm(d))
    n = int(max(384, math.ceil(extent / ((2.0 * math.pi / max(osc, 1.0)) / 24.0))))
    n = min(n, 2048)
    h = extent / n
    frac = _coverage_fraction_polygon(poly, lo, h, n, supersample=8)
    xs = lo[0] + (np.arange(n) + 0.5) * h
    ys = lo[1] + (np.arange(n) + 0.5) * h
    px = np.exp(1j * k * d[0] * xs)
    py = np.exp(1j * k * d[1] * ys)
    return h * h * complex(px @ frac @ py)


def bojarski_rhs(obstacle: ParametricBoundary, x_hat, theta, k: float, gamma_d: float) -> complex:
    """Generalized Bojarski right-hand side
    -k^2 theta.(theta-xhat) gamma_D * (Fourier transform of chi_D at k(theta-xhat)).

    Circles use the closed-form disk transform; other boundaries a
    supersampled raster quadrature of the characteristic function.
    """
    x_hat = np.asarray(x_hat, dtype=float)
    theta = np.asarray(theta, dtype=float)
    d = theta - x_hat
    if np.linalg.norm(d) < 1e-12:
        raise DegeneratePairError("bojarski_rhs requires x_hat != theta")
    if obstacle.kind == "circle":
        ft = _chi_fourier_disk(obstacle.radius, obstacle.center, d, k)
    else:
        ft = _chi_fourier_boundary(obstacle, d, k)
    return -(k ** 2) * float(theta @ d) * gamma_d * ft


def go_normalization(k: float) -> complex:
    """Factor mapping the GO reflection amplitude to the package far field:
    u_inf ~ go_normalization(k) * (R^gamma e^{ik y*.(theta-xhat)})."""
    return math.sqrt(8.0 * math.pi * k) * complex(np.exp(3j * math.pi / 4.0))


def majda_leading_far_field(radius: float, center, bc_kind: str, x_hat, theta, k: float) -> complex:
    """Leading-order specular reflection amplitude for a circle.

    Returned in GO normalization (O(1) in k); multiply by
    ``go_normalization(k)`` for the package far-field scale.  The phase
    center y* is the illuminated specular point nu(y*) = -phi; the exact
    far field deviates from this leading term by O(1/k) in GO scale.
    """
    if bc_kind not in ("soft", "hard"):
        raise ConfigError("leading-order reflection defined for soft/hard only")
    gamma = -1.0 if bc_kind == "soft" else 1.0
    x_hat = np.asarray(x_hat, dtype=float)
    theta = np.asarray(theta, dtype=float)
    d = theta - x_hat
    nd = float(np.linalg.norm(d))
    if nd < 1e-12:
        raise DegeneratePairError("x_hat == theta")
    phi = d / nd
    y_star = np.asarray(center, dtype=float) - radius * phi
    refl = gamma * math.sqrt(radius) * nd ** (-0.5) * float(phi @ x_hat)
    return refl * complex(np.exp(1j * k * (y_star @ d)))
