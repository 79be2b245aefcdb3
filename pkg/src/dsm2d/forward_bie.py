"""Nystrom boundary-integral solver for exterior obstacle scattering.

Layer operators on a smooth closed curve x(t), t in [0, 2pi), with the node
set t_i = 2 pi i / N and the spectrally accurate product quadrature of
Kress/Martensen for the logarithmic singularity: every kernel is split as

    A(t, tau) = A1(t, tau) ln(4 sin^2((t - tau)/2)) + A2(t, tau)

and integrated with the weights

    R_m = -(2 pi / n) sum_{l=1}^{n-1} cos(l m pi / n) / l - (-1)^m pi / n^2

on the log part (N = 2n) and the trapezoid weight 2 pi / N on the smooth
part.  The hypersingular operator is applied in the Maue-regularized form

    T u = (d/ds) S[du/ds] + k^2 nu . S[u nu],

with tangential derivatives taken by the exact trigonometric differentiation
matrix.

Boundary value problems (exterior, outward normal, radiating scattered
field), all with incident plane wave u_in = e^{ik x.theta}:

  sound-soft   combined-field ansatz u_s = (D - i eta S) psi, eta = k:
                   (I + 2 D - 2 i eta S) psi = -2 u_in
  sound-hard / impedance   direct Green-representation (Burton-Miller)
               system in the total-field trace u with coupling mu = i/k:
                   [(I/2 - D) - i lam S - mu T - i lam mu (I/2 + K')] u
                       = u_in + mu d(u_in)/dnu          (lam = 0: hard)
               and q := du/dnu = -i lam u.

Far fields use the package normalization (far field of Phi_k(., z) equals
e^{-ik xhat.z}) through the representation

    u_inf(xhat) = int { -ik xhat.nu(y) u(y) - q(y) } e^{-ik xhat.y} ds(y).

Mie (separation-of-variables) series for circles are provided as oracles.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import specfun
from .errors import ConfigError, ResolutionError, SolverError
from .geometry import BoundaryNodes, ParametricBoundary, boundary_sample
from .specfun import EULER_GAMMA

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Boundary conditions
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class BoundaryCondition:
    """soft: u = 0;  hard: du/dnu = 0;  impedance: du/dnu + i lam u = 0."""

    kind: str
    lam: float = 0.0

    def __post_init__(self):
        if self.kind not in ("soft", "hard", "impedance"):
            raise ConfigError(f"unknown boundary condition {self.kind!r}")
        if self.kind == "impedance" and not self.lam > 0.0:
            raise ConfigError("impedance boundary condition requires lam > 0")

    @property
    def gamma_d(self) -> float:
        """Physical-optics jump factor: -2 for soft, +2 for hard."""
        if self.kind == "soft":
            return -2.0
        if self.kind == "hard":
            return 2.0
        raise ConfigError("gamma_d is defined for soft/hard conditions only")


# ---------------------------------------------------------------------------
# Quadrature helpers
# ---------------------------------------------------------------------------
def kress_log_weights(n_nodes: int) -> np.ndarray:
    """Matrix R with R[i, j] = R_{|i-j|} for the log-kernel quadrature."""
    n = n_nodes // 2
    m = np.arange(n_nodes)
    ls = np.arange(1, n)
    if len(ls):
        csum = np.cos(np.outer(m, ls) * math.pi / n) @ (1.0 / ls)
    else:
        csum = np.zeros(n_nodes)
    r = -(2.0 * math.pi / n) * csum - ((-1.0) ** m) * math.pi / n ** 2
    idx = np.abs(m[:, None] - m[None, :])
    return r[idx]


def trig_diff_matrix(n_nodes: int) -> np.ndarray:
    """Exact differentiation matrix for trigonometric interpolants (N even)."""
    i = np.arange(n_nodes)
    diff = i[:, None] - i[None, :]
    with np.errstate(divide="ignore"):
        d = 0.5 * ((-1.0) ** diff) / np.tan(diff * math.pi / n_nodes)
    np.fill_diagonal(d, 0.0)
    return d


class _Kernels:
    """Shared tables for one (node set, wavenumber): distances and J/Y at k r."""

    def __init__(self, nodes: BoundaryNodes, k: float):
        self.nodes = nodes
        self.k = k
        pts = nodes.points
        dx = pts[:, None, :] - pts[None, :, :]
        self.dx = dx
        self.r = np.sqrt(dx[..., 0] ** 2 + dx[..., 1] ** 2)
        n = nodes.n
        off = ~np.eye(n, dtype=bool)
        self.off = off
        z = k * self.r[off]
        j0, y0, j1, y1 = specfun.bessel_j0y0j1y1(z)
        self.j0 = np.zeros((n, n)); self.j0[off] = j0
        self.y0 = np.zeros((n, n)); self.y0[off] = y0
        self.j1 = np.zeros((n, n)); self.j1[off] = j1
        self.y1 = np.zeros((n, n)); self.y1[off] = y1
        t = nodes.t
        dt = t[:, None] - t[None, :]
        s2 = 4.0 * np.sin(0.5 * dt) ** 2
        self.log4sin = np.zeros((n, n))
        self.log4sin[off] = np.log(s2[off])
        self.h = 2.0 * math.pi / n
        self.R = kress_log_weights(n)
        # x'' . nu~ = x1'' x2' - x2'' x1'  (diagonal limits of D and K')
        d1, d2 = nodes.d1, nodes.d2
        self.curv_num = d2[:, 0] * d1[:, 1] - d2[:, 1] * d1[:, 0]

    def _assemble(self, a1, a2_off, a1_diag, a2_diag):
        np.fill_diagonal(a1, a1_diag)
        a2 = a2_off - a1 * self.log4sin
        np.fill_diagonal(a2, a2_diag)
        return self.R * a1 + self.h * a2

    def single_layer(self) -> np.ndarray:
        """S: (i/4) H0(k r) |x'(tau)| with log splitting."""
        jac = self.nodes.jacobians
        h0 = self.j0 + 1j * self.y0
        a1 = -(1.0 / (4.0 * math.pi)) * self.j0 * jac[None, :]
        a2_off = 0.25j * h0 * jac[None, :]
        a1_diag = -jac / (4.0 * math.pi)
        a2_diag = (0.25j - EULER_GAMMA / (2.0 * math.pi)
                   - np.log(0.5 * self.k * jac) / (2.0 * math.pi)) * jac
        return self._assemble(a1, a2_off, a1_diag, a2_diag)

    def single_layer_param(self) -> np.ndarray:
        """S-tilde: (i/4) H0(k r) without the jacobian (acts on u'(tau) dtau)."""
        h0 = self.j0 + 1j * self.y0
        a1 = -(1.0 / (4.0 * math.pi)) * self.j0
        a2_off = 0.25j * h0
        a1_diag = np.full(self.nodes.n, -1.0 / (4.0 * math.pi))
        a2_diag = (0.25j - EULER_GAMMA / (2.0 * math.pi)
                   - np.log(0.5 * self.k * self.nodes.jacobians) / (2.0 * math.pi))
        return self._assemble(a1, a2_off, a1_diag, a2_diag)

    def double_layer(self) -> np.ndarray:
        """D: (ik/4) H1(k r) (x(t)-x(tau)).nu~(tau) / r, nu~ = (x2', -x1')."""
        d1 = self.nodes.d1
        g = self.dx[..., 0] * d1[None, :, 1] - self.dx[..., 1] * d1[None, :, 0]
        with np.errstate(invalid="ignore", divide="ignore"):
            gr = np.where(self.off, g / self.r, 0.0)
        h1 = self.j1 + 1j * self.y1
        a1 = -(self.k / (4.0 * math.pi)) * self.j1 * gr
        a2_off = 0.25j * self.k * h1 * gr
        a2_diag = self.curv_num / (4.0 * math.pi * self.nodes.jacobians ** 2)
        return self._assemble(a1, a2_off, np.zeros(self.nodes.n), a2_diag)

    def adjoint_double_layer(self) -> np.ndarray:
        """K': (ik/4) H1(k r) (x(tau)-x(t)).nu~(t) / r * |x'(tau)|/|x'(t)|."""
        d1 = self.nodes.d1
        jac = self.nodes.jacobians
        g = -(self.dx[..., 0] * d1[:, None, 1] - self.dx[..., 1] * d1[:, None, 0])
        g = g * (jac[None, :] / jac[:, None])
        with np.errstate(invalid="ignore", divide="ignore"):
            gr = np.where(self.off, g / self.r, 0.0)
        h1 = self.j1 + 1j * self.y1
        a1 = -(self.k / (4.0 * math.pi)) * self.j1 * gr
        a2_off = 0.25j * self.k * h1 * gr
        a2_diag = self.curv_num / (4.0 * math.pi * self.nodes.jacobians ** 2)
        return self._assemble(a1, a2_off, np.zeros(self.nodes.n), a2_diag)

    def weighted_single_layer(self) -> np.ndarray:
        """nu(t).nu(tau)-weighted single layer (the k^2 block of Maue's identity)."""
        jac = self.nodes.jacobians
        nu = self.nodes.normals
        nunu = nu @ nu.T
        h0 = self.j0 + 1j * self.y0
        a1 = -(1.0 / (4.0 * math.pi)) * self.j0 * nunu * jac[None, :]
        a2_off = 0.25j * h0 * nunu * jac[None, :]
        a1_diag = -jac / (4.0 * math.pi)
        a2_diag = (0.25j - EULER_GAMMA / (2.0 * math.pi)
                   - np.log(0.5 * self.k * jac) / (2.0 * math.pi)) * jac
        return self._assemble(a1, a2_off, a1_diag, a2_diag)

    def hypersingular(self) -> np.ndarray:
        """T by Maue's identity: diag(1/|x'|) Dt S-tilde Dt + k^2 S_nu."""
        dt = trig_diff_matrix(self.nodes.n)
        st = self.single_layer_param()
        return (dt @ st @ dt) / self.nodes.jacobians[:, None] \
            + self.k ** 2 * self.weighted_single_layer()


# ---------------------------------------------------------------------------
# Incident field
# ---------------------------------------------------------------------------
def plane_wave(points: np.ndarray, theta, k: float) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return np.exp(1j * k * (points @ theta))


def plane_wave_normal_derivative(points, normals, theta, k: float) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    return 1j * k * (normals @ theta) * np.exp(1j * k * (points @ theta))


# ---------------------------------------------------------------------------
# Solver
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class BoundarySolution:
    """Cauchy data of the total field at the boundary nodes."""

    boundary: ParametricBoundary
    bc: BoundaryCondition
    k: float
    theta: np.ndarray
    nodes: BoundaryNodes
    u: np.ndarray            # trace of the total field
    q: np.ndarray            # normal-derivative trace of the total field
    density: np.ndarray | None
    residual: float          # boundary-condition / representation residual


def _min_nodes(boundary: ParametricBoundary, k: float) -> int:
    return int(math.ceil(10.0 * k * boundary.perimeter() / (2.0 * math.pi)))


class ObstacleOperator:
    """Factorized boundary operator for one (boundary, bc, k); many incident waves."""

    def __init__(self, boundary: ParametricBoundary, bc: BoundaryCondition, k: float,
                 node_count: int | None = None, enforce_guard: bool = True):
        if not k > 0.0:
            raise ConfigError("wavenumber k must be positive")
        n = boundary.node_count if node_count is None else int(node_count)
        need = _min_nodes(boundary, k)
        if enforce_guard and n < need:
            raise ResolutionError(
                f"{n} nodes < resolution guard {need} (10 per wavelength) at k={k:g}"
            )
        self.boundary = boundary
        self.bc = bc
        self.k = k
        self.nodes = boundary_sample(boundary, n)
        logger.debug("assembling %s %s operator: N=%d, k=%g", boundary.kind, bc.kind, n, k)
        ker = _Kernels(self.nodes, k)
        s = ker.single_layer()
        d = ker.double_layer()
        eye = np.eye(n)
        if bc.kind == "soft":
            self.eta = k
            a = eye + 2.0 * d - 2.0j * self.eta * s
            self._s, self._d = s, d
            self._kp = ker.adjoint_double_layer()
            self._t = ker.hypersingular()
        else:
            mu = 1j / k
            self.mu = mu
            t = ker.hypersingular()
            kp = ker.adjoint_double_layer()
            lam = bc.lam if bc.kind == "impedance" else 0.0
            a = (0.5 * eye - d) - 1j * lam * s - mu * t - 1j * lam * mu * (0.5 * eye + kp)
            self._s, self._d, self._kp, self._t = s, d, kp, t
        self._lu = scipy.linalg.lu_factor(a)
        self._a = a

    def solve(self, theta) -> BoundarySolution:
        theta = np.asarray(theta, dtype=float)
        pts, nus = self.nodes.points, self.nodes.normals
        uin = plane_wave(pts, theta, self.k)
        duin = plane_wave_normal_derivative(pts, nus, theta, self.k)
        if self.bc.kind == "soft":
            rhs = -2.0 * uin
            psi = scipy.linalg.lu_solve(self._lu, rhs)
            u = uin + self._d @ psi + 0.5 * psi - 1j * self.eta * (self._s @ psi)
            q = duin + self._t @ psi - 1j * self.eta * (self._kp @ psi - 0.5 * psi)
            resid = float(np.max(np.abs(u)) / np.max(np.abs(uin)))
            density = psi
        else:
            lam = self.bc.lam if self.bc.kind == "impedance" else 0.0
            rhs = uin + self.mu * duin
            u = scipy.linalg.lu_solve(self._lu, rhs)
            q = -1j * lam * u
            # Green-representation residual of the first Calderon equation
            r1 = 0.5 * u - self._d @ u + self._s @ q - uin
            resid = float(np.max(np.abs(r1)) / np.max(np.abs(uin)))
            density = None
        lin = float(np.linalg.norm(self._a @ (u if density is None else density) - rhs)
                    / np.linalg.norm(rhs))
        if lin > 1e-8:
            cond = float(np.linalg.cond(self._a))
            raise SolverError(
                f"near-singular boundary system: linear residual {lin:.2e}, cond ~ {cond:.2e}"
            )
        return BoundarySolution(
            boundary=self.boundary, bc=self.bc, k=self.k, theta=theta,
            nodes=self.nodes, u=u, q=q, density=density, residual=resid,
        )


def solve_obstacle(boundary: ParametricBoundary, bc: BoundaryCondition, k: float, theta,
                   node_count: int | None = None) -> BoundarySolution:
    """One-shot exterior solve; see ObstacleOperator for multi-incidence reuse."""
    return ObstacleOperator(boundary, bc, k, node_count).solve(theta)


def far_field_from_traces(sol: BoundarySolution, x_hat) -> complex | np.ndarray:
    """Far field from Cauchy data by the boundary representation integral.

    Accepts one direction (2,) or a stack (m, 2); trapezoid quadrature over
    the periodic node set (spectrally accurate).
    """
    xh = np.asarray(x_hat, dtype=float)
    single = xh.ndim == 1
    xh = np.atleast_2d(xh)
    nodes = sol.nodes
    w = (2.0 * math.pi / nodes.n) * nodes.jacobians
    phase = np.exp(-1j * sol.k * (nodes.points @ xh.T))        # (N, m)
    nu_dot = nodes.normals @ xh.T                              # (N, m)
    integrand = (-1j * sol.k * nu_dot * sol.u[:, None] - sol.q[:, None]) * phase
    ff = w @ integrand
    return complex(ff[0]) if single else ff


def far_field_of_point_source(z, nodes: BoundaryNodes, k: float, x_hat) -> complex | np.ndarray:
    """Far field of Phi_k(., z), z strictly inside the curve, via the same
    representation quadrature.  Normalization self-check: equals e^{-ik xhat.z}."""
    z = np.asarray(z, dtype=float)
    pts, nus = nodes.points, nodes.normals
    d = pts - z
    r = np.linalg.norm(d, axis=1)
    h0, h1 = specfun.hankel1_01(k * r)
    u = 0.25j * h0
    q = -0.25j * k * h1 * np.sum(d * nus, axis=1) / r
    sol = BoundarySolution(
        boundary=None, bc=None, k=k, theta=None, nodes=nodes,
        u=u, q=q, density=None, residual=0.0,
    )
    return far_field_from_traces(sol, x_hat)


# ---------------------------------------------------------------------------
# Off-node boundary residual (Dirichlet combined-field ansatz)
# ---------------------------------------------------------------------------
def _log_weights_offnode(t_star: float, t_nodes: np.ndarray) -> np.ndarray:
    n = len(t_nodes) // 2
    dt = t_star - t_nodes
    ls = np.arange(1, n)
    csum = np.cos(np.outer(dt, ls)) @ (1.0 / ls) if len(ls) else 0.0
    return -(2.0 * math.pi / n) * csum - (math.pi / n ** 2) * np.cos(n * dt)


def _trig_interp(values: np.ndarray, t_star: float) -> complex:
    n = len(values)
    c = np.fft.fft(values) / n
    freqs = np.fft.fftfreq(n, d=1.0 / n)
    # split the Nyquist mode symmetrically for a real-valued interpolant basis
    w = np.exp(1j * freqs * t_star)
    nyq = n // 2
    w[nyq] = math.cos(nyq * t_star)
    return complex(np.sum(c * w))


def dirichlet_offnode_residual(op: ObstacleOperator, sol: BoundarySolution,
                               t_star: np.ndarray) -> np.ndarray:
    """|u_in + u_s| at off-node boundary parameters (soft obstacles).

    Uses the Nystrom-natural interpolation: off-node log weights for the
    singular part, trapezoid for the smooth part, and trigonometric
    interpolation of the density for the jump term.
    """
    if op.bc.kind != "soft":
        raise ConfigError("off-node residual implemented for the soft case")
    nodes = op.nodes
    k = op.k
    b = op.boundary
    psi = sol.density
    out = np.empty(len(t_star))
    jac_nodes = nodes.jacobians
    d1n = nodes.d1
    for idx, ts in enumerate(np.asarray(t_star, dtype=float)):
        x = b.point(ts)
        dxv = x[None, :] - nodes.points
        r = np.linalg.norm(dxv, axis=1)
        z = k * r
        j0, y0, j1, y1 = specfun.bessel_j0y0j1y1(z)
        h0 = j0 + 1j * y0
        h1 = j1 + 1j * y1
        lg = np.log(4.0 * np.sin(0.5 * (ts - nodes.t)) ** 2)
        rw = _log_weights_offnode(ts, nodes.t)
        h = 2.0 * math.pi / nodes.n
        # single layer with jacobian
        s1 = -(1.0 / (4.0 * math.pi)) * j0 * jac_nodes
        s2 = 0.25j * h0 * jac_nodes - s1 * lg
        s_row = rw * s1 + h * s2
        # double layer
        g = dxv[:, 0] * d1n[:, 1] - dxv[:, 1] * d1n[:, 0]
        gr = g / r
        l1 = -(k / (4.0 * math.pi)) * j1 * gr
        l2 = 0.25j * k * h1 * gr - l1 * lg
        d_row = rw * l1 + h * l2
        psi_star = _trig_interp(psi, ts)
        us = d_row @ psi + 0.5 * psi_star - 1j * op.eta * (s_row @ psi)
        uin = complex(np.exp(1j * k * (x @ sol.theta)))
        out[idx] = abs(uin + us)
    return out


# ---------------------------------------------------------------------------
# Mie series oracles (circles)
# ---------------------------------------------------------------------------
def _mie_prefactor_sum(coeffs: np.ndarray, phi_hat: float) -> complex:
    ns = np.arange(1, len(coeffs))
    return complex(coeffs[0] + 2.0 * np.sum(coeffs[1:] * np.cos(ns * phi_hat)))


def _translation_phase(center, x_hat, theta, k: float) -> complex:
    c = np.asarray(center, dtype=float)
    d = np.asarray(theta, dtype=float) - np.asarray(x_hat, dtype=float)
    return complex(np.exp(1j * k * (d @ c)))


def _check_truncation(truncation: int | None, k: float, r: float) -> int:
    need = k * r + 20.0
    if truncation is None:
        return int(math.ceil(need)) + 10
    if truncation < need:
        raise ConfigError(f"truncation {truncation} below guard k*r + 20 = {need:.1f}")
    return int(truncation)


def mie_far_field_circle(r: float, center, bc: BoundaryCondition, x_hat, theta, k: float,
                         truncation: int | None = None) -> complex:
    """Separation-of-variables far field for a circle, package normalization.

    u_inf = -4i e^{ik(theta-xhat).center} sum_n a_n e^{i n (ang(xhat)-ang(theta))}
    with a_n = -J_n(kr)/H_n(kr) (soft), -J_n'(kr)/H_n'(kr) (hard), and
    -(k J_n' + i lam J_n)/(k H_n' + i lam H_n) at kr (impedance).
    """
    nmax = _check_truncation(truncation, k, r)
    z = k * r
    jf, yf = specfun.bessel_jy_all(nmax + 1, z)     # orders 0 .. nmax+1
    hf = jf + 1j * yf
    ns = np.arange(nmax + 1)
    jp = np.empty(nmax + 1); hp = np.empty(nmax + 1, dtype=complex)
    jp[0], hp[0] = -jf[1], -hf[1]
    jp[1:] = jf[:nmax] - ns[1:] / z * jf[1:nmax + 1]
    hp[1:] = hf[:nmax] - ns[1:] / z * hf[1:nmax + 1]
    j, h = jf[:nmax + 1], hf[:nmax + 1]
    if bc.kind == "soft":
        a = -j / h
    elif bc.kind == "hard":
        a = -jp / hp
    else:
        a = -(k * jp + 1j * bc.lam * j) / (k * hp + 1j * bc.lam * h)
    x_hat = np.asarray(x_hat, dtype=float)
    theta = np.asarray(theta, dtype=float)
    phi_hat = math.atan2(x_hat[1], x_hat[0]) - math.atan2(theta[1], theta[0])
    return -4.0j * _mie_prefactor_sum(a, phi_hat) * _translation_phase(center, x_hat, theta, k)


def mie_far_field_penetrable_circle(r: float, center, q: float, x_hat, theta, k: float,
                                    truncation: int | None = None) -> complex:
    """Transmission (penetrable-disk) Mie far field, refractive index q > 0.

    Matches interior J_n(k sqrt(q) rho) to exterior J_n + a_n H_n across rho = r
    (continuity of u and du/drho).
    """
    if not q > 0.0:
        raise ConfigError("refractive index q must be positive")
    k1 = k * math.sqrt(q)
    nmax = _check_truncation(truncation, max(k, k1), r)
    z, z1 = k * r, k1 * r
    jf, yf = specfun.bessel_jy_all(nmax + 1, z)
    hf = jf + 1j * yf
    jif, _ = specfun.bessel_jy_all(nmax + 1, z1)
    ns = np.arange(nmax + 1)

    def _deriv(f, zz):
        fp = np.empty(nmax + 1, dtype=f.dtype)
        fp[0] = -f[1]
        fp[1:] = f[:nmax] - ns[1:] / zz * f[1:nmax + 1]
        return fp

    jp = k * _deriv(jf, z)
    hp = k * _deriv(hf, z)
    jip = k1 * _deriv(jif, z1)
    j, h, ji = jf[:nmax + 1], hf[:nmax + 1], jif[:nmax + 1]
    a = (j * jip - jp * ji) / (hp * ji - h * jip)
    x_hat = np.asarray(x_hat, dtype=float)
    theta = np.asarray(theta, dtype=float)
    phi_hat = math.atan2(x_hat[1], x_hat[0]) - math.atan2(theta[1], theta[0])
    return -4.0j * _mie_prefactor_sum(a, phi_hat) * _translation_phase(center, x_hat, theta, k)
