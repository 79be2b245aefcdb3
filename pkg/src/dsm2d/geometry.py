"""Boundaries, direction-pair sets, sampling grids and strip helpers.

Parametric boundaries are 2pi-periodic, counter-clockwise, with outward
unit normal nu = (x2', -x1') / |x'|:

    kite:   x(t) = (a, b) + (cos t + 0.65 cos 2t - 0.65, 1.5 sin t)
    circle: x(t) = (a, b) + r (cos t, sin t)

Direction-pair sets over Theta_l = {(cos(2 pi m / l), sin(2 pi m / l))}:

    variant 1:  x_hat = -theta            (classical backscattering)
    variant 2:  x_hat = Q theta           (rotated backscattering, Q orthogonal)
    variant 3:  x_hat in Theta_l, theta fixed

Pairs with x_hat == theta (within 1e-12) are dropped as degenerate and the
drop count is reported on the resulting set.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError

_DEGENERATE_TOL = 1e-12


# ---------------------------------------------------------------------------
# Parametric boundaries
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ParametricBoundary:
    """Closed analytic boundary curve (kite or circle)."""

    kind: str                     # "kite" | "circle"
    center: tuple[float, float] = (0.0, 0.0)
    radius: float = 1.0           # circle only
    node_count: int = 64

    def __post_init__(self):
        if self.kind not in ("kite", "circle"):
            raise ConfigError(f"unknown boundary kind {self.kind!r}")
        if self.kind == "circle" and not self.radius > 0.0:
            raise ConfigError("circle radius must be positive")
        if self.node_count < 8 or self.node_count % 2 != 0:
            raise ConfigError("node_count must be even and >= 8")

    def point(self, t):
        t = np.asarray(t, dtype=float)
        a, b = self.center
        if self.kind == "circle":
            return np.stack([a + self.radius * np.cos(t), b + self.radius * np.sin(t)], axis=-1)
        return np.stack(
            [a + np.cos(t) + 0.65 * np.cos(2.0 * t) - 0.65, b + 1.5 * np.sin(t)], axis=-1
        )

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "circle":
            return np.stack([-self.radius * np.sin(t), self.radius * np.cos(t)], axis=-1)
        return np.stack([-np.sin(t) - 1.3 * np.sin(2.0 * t), 1.5 * np.cos(t)], axis=-1)

    def second_derivative(self, t):
        t = np.asarray(t, dtype=float)
        if self.kind == "circle":
            return np.stack([-self.radius * np.cos(t), -self.radius * np.sin(t)], axis=-1)
        return np.stack([-np.cos(t) - 2.6 * np.cos(2.0 * t), -1.5 * np.sin(t)], axis=-1)

    def curvature(self, t):
        """Signed curvature (positive for the CCW circle, 1/r exactly)."""
        d1 = self.derivative(t)
        d2 = self.second_derivative(t)
        num = d1[..., 0] * d2[..., 1] - d1[..., 1] * d2[..., 0]
        return num / np.linalg.norm(d1, axis=-1) ** 3

    def perimeter(self) -> float:
        if self.kind == "circle":
            return 2.0 * np.pi * self.radius
        t = 2.0 * np.pi * np.arange(2048) / 2048
        return float(np.mean(np.linalg.norm(self.derivative(t), axis=-1)) * 2.0 * np.pi)


@dataclass(frozen=True)
class BoundaryNodes:
    """Boundary sampled at N equispaced parameter nodes t_i = 2 pi i / N."""

    t: np.ndarray            # (N,)
    points: np.ndarray       # (N, 2)
    normals: np.ndarray      # (N, 2) outward unit
    jacobians: np.ndarray    # (N,)  |x'(t_i)|
    d1: np.ndarray           # (N, 2) x'(t_i)
    d2: np.ndarray           # (N, 2) x''(t_i)

    @property
    def n(self) -> int:
        return len(self.t)


def boundary_sample(boundary: ParametricBoundary, node_count: int | None = None) -> BoundaryNodes:
    """Sample a boundary at N equispaced parameter nodes.

    Returns points, outward unit normals, jacobians |x'| and the first two
    parameter derivatives needed by the integral-equation kernels.
    """
    n = boundary.node_count if node_count is None else int(node_count)
    if n < 4 or n % 2 != 0:
        raise ConfigError("node count must be even and >= 4")
    t = 2.0 * np.pi * np.arange(n) / n
    d1 = boundary.derivative(t)
    jac = np.linalg.norm(d1, axis=-1)
    normals = np.stack([d1[:, 1], -d1[:, 0]], axis=-1) / jac[:, None]
    return BoundaryNodes(
        t=t,
        points=boundary.point(t),
        normals=normals,
        jacobians=jac,
        d1=d1,
        d2=boundary.second_derivative(t),
    )


def illuminated_partition(nodes: BoundaryNodes, theta) -> tuple[np.ndarray, np.ndarray]:
    """Split node indices into illuminated (nu.theta < 0) and shadow sets."""
    theta = np.asarray(theta, dtype=float)
    side = nodes.normals @ theta
    idx = np.arange(nodes.n)
    return idx[side < 0.0], idx[side >= 0.0]


# ---------------------------------------------------------------------------
# Direction pairs
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class DirectionPairSet:
    """Finite set of (x_hat, theta) observation/incidence pairs."""

    variant: int | str
    x_hats: np.ndarray        # (P, 2)
    thetas: np.ndarray        # (P, 2)
    dropped: int = 0
    q_matrix: np.ndarray | None = None
    theta_fixed: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.thetas)

    def pair(self, i: int) -> tuple[np.ndarray, np.ndarray]:
        return self.x_hats[i], self.thetas[i]

    def mirror_index(self, i: int, candidates: "DirectionPairSet | None" = None) -> int | None:
        """Index of the pair (-x_hat_i, -theta_i) in ``candidates`` (default: self)."""
        cand = self if candidates is None else candidates
        tgt_x, tgt_t = -self.x_hats[i], -self.thetas[i]
        d = np.max(np.abs(cand.x_hats - tgt_x), axis=1) + np.max(np.abs(cand.thetas - tgt_t), axis=1)
        j = int(np.argmin(d))
        return j if d[j] < 1e-9 else None


def unit_directions(l: int, offset: float = 0.0) -> np.ndarray:
    """Theta_l: l equispaced unit vectors starting at angle ``offset``."""
    if l < 1:
        raise ConfigError("direction count l must be >= 1")
    ang = offset + 2.0 * np.pi * np.arange(l) / l
    return np.stack([np.cos(ang), np.sin(ang)], axis=-1)


def make_direction_pairs(
    variant: int,
    l: int | None = None,
    q_matrix=None,
    theta_fixed=None,
    thetas=None,
) -> DirectionPairSet:
    """Build the pair set A_1, A_2 or A_3 over Theta_l.

    Parameters
    ----------
    variant : {1, 2, 3}
    l : int, optional
        Number of equispaced directions; ignored when ``thetas`` is given.
    q_matrix : (2, 2) array_like, required for variant 2
        Orthogonal matrix with Q^T Q = I to 1e-12.
    theta_fixed : unit vector, required for variant 3.
    thetas : (l, 2) array_like, optional
        Explicit direction set overriding the equispaced default.
    """
    if variant not in (1, 2, 3):
        raise ConfigError(f"variant must be 1, 2 or 3, got {variant!r}")
    if thetas is None:
        if l is None:
            raise ConfigError("either l or an explicit direction list is required")
        dirs = unit_directions(l)
    else:
        dirs = np.asarray(thetas, dtype=float).reshape(-1, 2)
        norms = np.linalg.norm(dirs, axis=1)
        if np.any(np.abs(norms - 1.0) > 1e-12):
            raise ConfigError("directions must be unit vectors")

    q = None
    tf = None
    if variant == 1:
        x_hats, th = -dirs, dirs
    elif variant == 2:
        if q_matrix is None:
            raise ConfigError("variant 2 requires the rotation matrix Q")
        q = np.asarray(q_matrix, dtype=float).reshape(2, 2)
        if np.max(np.abs(q.T @ q - np.eye(2))) > 1e-12:
            raise ConfigError("Q must be orthogonal (Q^T Q = I to 1e-12)")
        x_hats, th = dirs @ q.T, dirs
    else:
        if theta_fixed is None:
            raise ConfigError("variant 3 requires theta_fixed")
        tf = np.asarray(theta_fixed, dtype=float).reshape(2)
        if abs(np.linalg.norm(tf) - 1.0) > 1e-12:
            raise ConfigError("theta_fixed must be a unit vector")
        x_hats, th = dirs, np.tile(tf, (len(dirs), 1))

    keep = np.linalg.norm(x_hats - th, axis=1) > _DEGENERATE_TOL
    if not np.any(keep):
        raise ConfigError("direction set is empty (or every pair is degenerate)")
    return DirectionPairSet(
        variant=variant,
        x_hats=x_hats[keep],
        thetas=th[keep],
        dropped=int(np.sum(~keep)),
        q_matrix=q,
        theta_fixed=tf,
    )


def custom_direction_pairs(pairs) -> DirectionPairSet:
    """Pair set from an explicit list of (x_hat, theta); degenerates dropped."""
    arr = np.asarray(pairs, dtype=float)
    if arr.ndim != 3 or arr.shape[1:] != (2, 2):
        raise ConfigError("custom pairs must be a list of ((xhat), (theta)) 2-vectors")
    x_hats, th = arr[:, 0, :], arr[:, 1, :]
    for v in (x_hats, th):
        if np.any(np.abs(np.linalg.norm(v, axis=1) - 1.0) > 1e-9):
            raise ConfigError("pair directions must be unit vectors")
    keep = np.linalg.norm(x_hats - th, axis=1) > _DEGENERATE_TOL
    if not np.any(keep):
        raise ConfigError("custom pair list is empty (or every pair is degenerate)")
    return DirectionPairSet(
        variant="custom", x_hats=x_hats[keep], thetas=th[keep], dropped=int(np.sum(~keep))
    )


# ---------------------------------------------------------------------------
# Sampling grid
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class SamplingGrid:
    """Rectangular grid: point (i, j) = corner + (i h, j h)."""

    corner: tuple[float, float]
    spacing: float
    nx: int
    ny: int

    def __post_init__(self):
        if not self.spacing > 0.0:
            raise ConfigError("grid spacing must be positive")
        if self.nx < 1 or self.ny < 1:
            raise ConfigError("grid must contain at least one point")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.ny)

    def xs(self) -> np.ndarray:
        return self.corner[0] + self.spacing * np.arange(self.nx)

    def ys(self) -> np.ndarray:
        return self.corner[1] + self.spacing * np.arange(self.ny)

    def points(self) -> np.ndarray:
        """All grid points, shape (nx * ny, 2), row-major in (i, j)."""
        xx, yy = np.meshgrid(self.xs(), self.ys(), indexing="ij")
        return np.stack([xx.ravel(), yy.ravel()], axis=-1)

    def linear_index(self, i: int, j: int) -> int:
        return i * self.ny + j

    def from_linear(self, idx: int) -> tuple[int, int]:
        return idx // self.ny, idx % self.ny


# ---------------------------------------------------------------------------
# Strips
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Strip:
    """Region between two parallel lines, alpha_min <= y.phi <= alpha_max.

    Offsets are stored in the unit-normal parameterization y.phi; the
    scaled hyperplane offset for a pair (x_hat, theta) is obtained by
    multiplying with |theta - x_hat|.
    """

    phi: tuple[float, float]
    alpha_min: float
    alpha_max: float

    def __post_init__(self):
        if self.alpha_min > self.alpha_max:
            raise ConfigError("strip requires alpha_min <= alpha_max")

    def contains(self, y) -> np.ndarray:
        s = np.asarray(y, dtype=float) @ np.asarray(self.phi)
        return (s >= self.alpha_min - 1e-12) & (s <= self.alpha_max + 1e-12)

    def distance(self, z) -> np.ndarray:
        """Euclidean distance from z to the strip (0 inside)."""
        s = np.asarray(z, dtype=float) @ np.asarray(self.phi)
        return np.maximum(0.0, np.maximum(s - self.alpha_max, self.alpha_min - s))


def strip_hull(geometry, phi) -> Strip:
    """Smallest strip with unit normal phi containing the geometry.

    ``geometry`` is a ParametricBoundary (sampled densely) or an (M, 2)
    point array.
    """
    phi = np.asarray(phi, dtype=float)
    if abs(np.linalg.norm(phi) - 1.0) > 1e-12:
        raise ConfigError("phi must be a unit vector")
    if isinstance(geometry, ParametricBoundary):
        pts = geometry.point(2.0 * np.pi * np.arange(4096) / 4096)
    else:
        pts = np.asarray(geometry, dtype=float).reshape(-1, 2)
        if len(pts) == 0:
            raise ConfigError("strip_hull of empty geometry")
    s = pts @ phi
    return Strip(phi=(float(phi[0]), float(phi[1])), alpha_min=float(np.min(s)), alpha_max=float(np.max(s)))


def pair_phi(x_hat, theta) -> np.ndarray:
    """phi = (theta - x_hat) / |theta - x_hat| for a non-degenerate pair."""
    d = np.asarray(theta, dtype=float) - np.asarray(x_hat, dtype=float)
    nd = np.linalg.norm(d)
    if nd < _DEGENERATE_TOL:
        from .errors import DegeneratePairError

        raise DegeneratePairError("x_hat == theta")
    return d / nd
