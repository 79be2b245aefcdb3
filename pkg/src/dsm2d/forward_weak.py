"""Weak-scattering forward models: Foldy points, Born media, Lippmann-Schwinger.

Far-field conventions follow the package normalization (far field of
Phi_k(., z) is e^{-ik xhat.z}):

    point scatterers:  u_inf(xhat, theta, k) = sum_m tau_m e^{ik z_m.(theta-xhat)}
    Born medium:       u_inf = k^2 integral e^{ik(theta-xhat).y} (q(y)-1) dy
    full medium:       u = u_in + k^2 integral Phi_k(x,y)(q(y)-1) u(y) dy,
                       u_inf = k^2 integral e^{-ik xhat.y} (q(y)-1) u(y) dy

The Lippmann-Schwinger volume solver collocates on a uniform raster, applies
the convolution kernel by FFT, handles the singular self cell by an
equal-area-disk averaged weight, and iterates with GMRES to a relative
residual below 1e-8.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse.linalg import LinearOperator, gmres

from . import specfun
from .errors import ConfigError, ConvergenceError, ResolutionError, UnresolvedOscillationError
from .geometry import ParametricBoundary


# ---------------------------------------------------------------------------
# Point scatterers (Foldy sum without multiple scattering)
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class PointScattererSet:
    """Point scatterers at z_m with complex strengths tau_m."""

    positions: np.ndarray   # (M, 2)
    strengths: np.ndarray   # (M,) complex

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float).reshape(-1, 2)
        tau = np.asarray(self.strengths, dtype=complex).reshape(-1)
        if len(pos) != len(tau) or len(pos) == 0:
            raise ConfigError("positions and strengths must have equal nonzero length")
        d = np.linalg.norm(pos[:, None, :] - pos[None, :, :], axis=-1)
        np.fill_diagonal(d, np.inf)
        if np.min(d) < 1e-12:
            raise ConfigError("point scatterer positions must be pairwise distinct")
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "strengths", tau)

    @property
    def count(self) -> int:
        return len(self.strengths)


def foldy_far_field(scatterers: PointScattererSet, x_hat, theta, k: float) -> complex:
    """Far field of the multiple-scattering-free point model: an exact finite sum."""
    d = np.asarray(theta, dtype=float) - np.asarray(x_hat, dtype=float)
    phase = scatterers.positions @ d
    return complex(np.sum(scatterers.strengths * np.exp(1j * k * phase)))


# ---------------------------------------------------------------------------
# Medium contrast
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class MediumContrast:
    """Compactly supported contrast q - 1.

    kind "disk":   constant contrast on a disk (center, radius).
    kind "grid":   piecewise-constant values on a uniform cell raster with
                   lower-left corner ``corner`` and cell size ``cell``.
    """

    kind: str
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0
    contrast: float = 1.0
    corner: tuple[float, float] = (0.0, 0.0)
    cell: float = 0.1
    values: np.ndarray | None = None   # (mx, my) contrast per cell

    def __post_init__(self):
        if self.kind not in ("disk", "grid"):
            raise ConfigError(f"unknown medium kind {self.kind!r}")
        if self.kind == "disk":
            if not self.radius > 0.0:
                raise ConfigError("disk radius must be positive")
            if self.contrast + 1.0 <= 0.0:
                raise ConfigError("refractive index q = contrast + 1 must be positive")
        else:
            if self.values is None:
                raise ConfigError("grid medium requires a value array")
            object.__setattr__(self, "values", np.asarray(self.values, dtype=float))
            if not self.cell > 0.0:
                raise ConfigError("grid cell size must be positive")

    def max_refractive_index(self) -> float:
        """max(q, 1): the resolution guard must resolve the shortest wavelength."""
        if self.kind == "disk":
            return max(self.contrast + 1.0, 1.0)
        return float(max(np.max(self.values) + 1.0, 1.0))

    def contrast_at(self, points: np.ndarray) -> np.ndarray:
        """Pointwise contrast q - 1 at (..., 2) points."""
        pts = np.asarray(points, dtype=float)
        if self.kind == "disk":
            r = np.linalg.norm(pts - np.asarray(self.center), axis=-1)
            return np.where(r <= self.radius, self.contrast, 0.0)
        mx, my = self.values.shape
        rel = (pts - np.asarray(self.corner)) / self.cell
        i = np.floor(rel[..., 0]).astype(int)
        j = np.floor(rel[..., 1]).astype(int)
        inside = (i >= 0) & (i < mx) & (j >= 0) & (j < my)
        out = np.zeros(pts.shape[:-1])
        if np.any(inside):
            out[inside] = self.values[i[inside], j[inside]]
        return out

    def support_box(self) -> tuple[float, float, float, float]:
        """(xmin, ymin, xmax, ymax) bounding the support of q - 1."""
        if self.kind == "disk":
            cx, cy = self.center
            return cx - self.radius, cy - self.radius, cx + self.radius, cy + self.radius
        mx, my = self.values.shape
        x0, y0 = self.corner
        return x0, y0, x0 + mx * self.cell, y0 + my * self.cell


def rasterize_boundary_contrast(
    boundary: ParametricBoundary,
    contrast: float,
    corner,
    extent: float,
    n: int,
    supersample: int = 4,
) -> MediumContrast:
    """Grid medium with constant contrast inside a closed boundary.

    Cell values are area fractions (supersampled) times the contrast, so a
    smooth region boundary is represented to O(cell^2) in the weak sense.
    """
    poly = boundary.point(2.0 * np.pi * np.arange(1024) / 1024)
    h = extent / n
    frac = _coverage_fraction_polygon(poly, np.asarray(corner, dtype=float), h, n, supersample)
    return MediumContrast(kind="grid", corner=(float(corner[0]), float(corner[1])), cell=h,
                          values=contrast * frac)


def _coverage_fraction_polygon(poly, corner, h, n, supersample):
    """Cell coverage fractions by even-odd scanline fill over supersampled rows."""
    s = int(supersample)
    m = n * s
    sub = h / s
    xs = corner[0] + (np.arange(m) + 0.5) * sub
    x0, y0 = poly[:, 0], poly[:, 1]
    x1, y1 = np.roll(x0, -1), np.roll(y0, -1)
    acc = np.zeros((n, n))
    for jj in range(m):
        y = corner[1] + (jj + 0.5) * sub
        cond = (y0 > y) != (y1 > y)
        if not np.any(cond):
            continue
        xi = np.sort(x0[cond] + (y - y0[cond]) * (x1[cond] - x0[cond]) / (y1[cond] - y0[cond]))
        diff = np.zeros(m + 1, dtype=np.int64)
        np.add.at(diff, np.searchsorted(xs, xi[0::2]), 1)
        np.add.at(diff, np.searchsorted(xs, xi[1::2]), -1)
        inside = np.cumsum(diff[:-1]) > 0
        acc[:, jj // s] += inside.reshape(n, s).sum(axis=1)
    return acc / (s * s)


# ---------------------------------------------------------------------------
# Born far field
# ---------------------------------------------------------------------------
def _disk_fourier(radius: float, xi_norm: float) -> float:
    """integral over |y| < R of e^{i xi.y} dy = 2 pi R J1(|xi| R)/|xi|."""
    if xi_norm * radius < 1e-12:
        return math.pi * radius * radius
    j1 = specfun.bessel_jy(1, xi_norm * radius)[0]
    return 2.0 * math.pi * radius * j1 / xi_norm


def born_far_field(medium: MediumContrast, x_hat, theta, k: float,
                   rtol: float = 1e-8, max_refine: int = 8) -> complex:
    """Born approximation far field k^2 * Fourier transform of the contrast.

    Disk media use the closed-form disk transform.  Grid media use midpoint
    quadrature with dyadic refinement until successive values agree to
    ``rtol`` relative; raises UnresolvedOscillationError if the oscillation
    k |theta - xhat| * cell stays above 2 after maximal refinement.
    """
    if not k > 0.0:
        raise ConfigError("wavenumber k must be positive")
    x_hat = np.asarray(x_hat, dtype=float)
    theta = np.asarray(theta, dtype=float)
    d = theta - x_hat
    nd = float(np.linalg.norm(d))
    if medium.kind == "disk":
        phase = complex(np.exp(1j * k * (d @ np.asarray(medium.center))))
        return k * k * medium.contrast * _disk_fourier(medium.radius, k * nd) * phase

    vals = medium.values
    cell = medium.cell
    corner = np.asarray(medium.corner)
    mx, my = vals.shape
    prev = None
    for level in range(max_refine + 1):
        # midpoint rule on dyadically refined subcells; the contrast is
        # piecewise constant so only the 1D phase sums refine
        s = 2 ** level
        sub = cell / s
        off = (np.arange(s) + 0.5) * sub
        px = sub * np.exp(1j * k * d[0] * (corner[0] + np.arange(mx)[:, None] * cell
                                           + off[None, :])).sum(axis=1)
        py = sub * np.exp(1j * k * d[1] * (corner[1] + np.arange(my)[:, None] * cell
                                           + off[None, :])).sum(axis=1)
        total = k * k * complex(px @ vals @ py)
        if prev is not None:
            denom = max(abs(total), abs(prev), 1e-300)
            if abs(total - prev) / denom < rtol:
                return total
        prev = total
    if k * nd * cell / 2 ** max_refine > 2.0:
        raise UnresolvedOscillationError(
            f"Born quadrature unresolved: k|theta-xhat|*cell = "
            f"{k * nd * cell / 2 ** max_refine:.3f} > 2 after {max_refine} refinements"
        )
    return prev


# ---------------------------------------------------------------------------
# Lippmann-Schwinger volume solver
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class RasterSpec:
    """Uniform n x n cell raster over the square [corner, corner + extent]^2."""

    corner: tuple[float, float]
    extent: float
    n: int

    def __post_init__(self):
        if not self.extent > 0.0 or self.n < 4:
            raise ConfigError("raster needs positive extent and n >= 4")

    @property
    def cell(self) -> float:
        return self.extent / self.n

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        h = self.cell
        xs = self.corner[0] + (np.arange(self.n) + 0.5) * h
        ys = self.corner[1] + (np.arange(self.n) + 0.5) * h
        return xs, ys


@dataclass(frozen=True)
class LSSolution:
    """Total field on the raster plus the induced far-field map."""

    raster: RasterSpec
    k: float
    theta: np.ndarray
    total_field: np.ndarray     # (n, n) complex
    contrast: np.ndarray        # (n, n) cell-averaged q-1
    residual: float
    iterations: int

    def far_field(self, x_hat) -> complex:
        """u_inf(xhat) = k^2 sum h^2 e^{-ik xhat.y} (q-1) u, same quadrature as the solve."""
        x_hat = np.asarray(x_hat, dtype=float)
        xs, ys = self.raster.centers()
        px = np.exp(-1j * self.k * x_hat[0] * xs)
        py = np.exp(-1j * self.k * x_hat[1] * ys)
        h = self.raster.cell
        return self.k ** 2 * h * h * complex(px @ (self.contrast * self.total_field) @ py)


def _self_cell_weight(k: float, h: float) -> complex:
    """Integral of Phi_k over a square cell, via the equal-area disk.

    With a = h/sqrt(pi):  integral_{|y|<a} (i/4) H0(k|y|) dy
                        = (i pi a / (2 k)) H1(ka) - 1/k^2.
    """
    a = h / math.sqrt(math.pi)
    h0, h1 = specfun.hankel1_01(np.float64(k * a))
    return 1j * math.pi * a / (2.0 * k) * complex(h1) - 1.0 / (k * k)


def _kernel_fft(raster: RasterSpec, k: float) -> np.ndarray:
    """FFT of the Toeplitz kernel block, circulant-embedded to (2n, 2n)."""
    n, h = raster.n, raster.cell
    idx = np.arange(2 * n)
    off = np.where(idx < n, idx, idx - 2 * n)      # offsets 0..n-1, -n..-1
    dx = off[:, None] * h
    dy = off[None, :] * h
    r = np.hypot(dx, dy)
    w = np.zeros((2 * n, 2 * n), dtype=complex)
    mask = r > 0
    h0, _ = specfun.hankel1_01(r[mask] * k)
    w[mask] = 0.25j * h0 * h * h
    w[0, 0] = _self_cell_weight(k, h)
    return np.fft.fft2(w)


def _cell_contrast(medium: MediumContrast, raster: RasterSpec, supersample: int = 8) -> np.ndarray:
    """Cell-averaged contrast on the raster (supersampled for coverage fractions)."""
    s = supersample
    h = raster.cell
    xs, ys = raster.centers()
    off = (np.arange(s) + 0.5) / s * h - 0.5 * h
    out = np.zeros((raster.n, raster.n))
    yy = (ys[:, None] + off[None, :]).ravel()
    for i in range(raster.n):
        xx = xs[i] + off
        px = np.repeat(xx, raster.n * s)
        py = np.tile(yy, s)
        vals = medium.contrast_at(np.stack([px, py], axis=-1)).reshape(s, raster.n, s)
        out[i, :] = vals.mean(axis=(0, 2))
    return out


def lippmann_schwinger_solve(
    medium: MediumContrast,
    k: float,
    theta,
    raster: RasterSpec,
    rtol: float = 1e-8,
    maxiter: int = 2000,
) -> LSSolution:
    """Solve the volume integral equation u = u_in + k^2 K[(q-1) u] on a raster.

    Requires at least 10 raster points per interior wavelength
    2 pi / (k max sqrt(q)); raises ResolutionError otherwise and
    ConvergenceError if GMRES stalls above the residual target.
    """
    if not k > 0.0:
        raise ConfigError("wavenumber k must be positive")
    theta = np.asarray(theta, dtype=float)
    xmin, ymin, xmax, ymax = medium.support_box()
    x0, y0 = raster.corner
    if x0 > xmin + 1e-12 or y0 > ymin + 1e-12 or x0 + raster.extent < xmax - 1e-12 \
            or y0 + raster.extent < ymax - 1e-12:
        raise ConfigError("raster does not cover the contrast support")
    lam_int = 2.0 * math.pi / (k * math.sqrt(medium.max_refractive_index()))
    if raster.cell > lam_int / 10.0:
        raise ResolutionError(
            f"raster cell {raster.cell:.4g} exceeds lambda_int/10 = {lam_int / 10.0:.4g}"
        )

    n = raster.n
    m = _cell_contrast(medium, raster)
    ghat = _kernel_fft(raster, k)
    xs, ys = raster.centers()
    u_in = np.exp(1j * k * theta[0] * xs)[:, None] * np.exp(1j * k * theta[1] * ys)[None, :]

    def convolve(v):
        pad = np.zeros((2 * n, 2 * n), dtype=complex)
        pad[:n, :n] = v
        return np.fft.ifft2(np.fft.fft2(pad) * ghat)[:n, :n]

    def apply_op(vec):
        v = vec.reshape(n, n)
        return (v - k * k * convolve(m * v)).ravel()

    op = LinearOperator((n * n, n * n), matvec=apply_op, dtype=complex)
    b = u_in.ravel()
    iters = 0

    def _count(_):
        nonlocal iters
        iters += 1

    sol, info = gmres(op, b, rtol=rtol / 10.0, atol=0.0, maxiter=maxiter,
                      restart=200, callback=_count, callback_type="pr_norm")
    u = sol.reshape(n, n)
    res = float(np.linalg.norm(apply_op(sol) - b) / np.linalg.norm(b))
    if info != 0 or res > rtol:
        raise ConvergenceError(
            f"Lippmann-Schwinger GMRES did not converge: info={info}, residual={res:.3e}"
        )
    return LSSolution(raster=raster, k=k, theta=theta, total_field=u, contrast=m,
                      residual=res, iterations=iters)


def ls_residual(sol: LSSolution) -> float:
    """Relative discrete residual ||u - u_in - k^2 K[(q-1)u]|| / ||u_in||."""
    n = sol.raster.n
    k = sol.k
    ghat = _kernel_fft(sol.raster, k)
    xs, ys = sol.raster.centers()
    u_in = np.exp(1j * k * sol.theta[0] * xs)[:, None] * np.exp(1j * k * sol.theta[1] * ys)[None, :]
    pad = np.zeros((2 * n, 2 * n), dtype=complex)
    pad[:n, :n] = sol.contrast * sol.total_field
    conv = np.fft.ifft2(np.fft.fft2(pad) * ghat)[:n, :n]
    r = sol.total_field - u_in - k * k * conv
    return float(np.linalg.norm(r) / np.linalg.norm(u_in))
