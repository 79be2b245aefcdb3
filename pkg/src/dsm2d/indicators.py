"""Far-field dataset assembly, noise perturbation, and the sampling indicators.

The multi-frequency indicator of a dataset over a sampling grid is

    I1(z) = sum_{pairs (xhat, theta)} | int_{k-}^{k+} u_inf(xhat, theta, k)
                                         e^{-ik z.(theta - xhat)} dk |

with the k-integral realized as a composite trapezoid over the dataset's
own wavenumber nodes, and

    I2(z) = same with the integrand u_inf(xhat, theta, k)
            + conj(u_inf(-xhat, -theta, k)),

the mirrored values taken from a companion dataset (which may be the
dataset itself when the pair set is closed under negation).

Stored indicator values carry no normalization; rendering maps
[min, max] -> [0, 1] separately.  Summation order is fixed (ascending pair
index, ascending wavenumber), so results are deterministic and independent
of the worker count used during assembly.
"""

from __future__ import annotations

import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, MissingMirrorError, SolverError
from .forward_bie import BoundaryCondition, ObstacleOperator, far_field_from_traces
from .forward_kirchhoff import KirchhoffConfig, kirchhoff_far_field
from .forward_weak import (MediumContrast, PointScattererSet, RasterSpec,
                           born_far_field, lippmann_schwinger_solve)
from .geometry import DirectionPairSet, ParametricBoundary, SamplingGrid

logger = logging.getLogger(__name__)


def worker_count(requested: int | None = None) -> int:
    """Worker pool size: explicit argument, else DSM_THREADS, else cpu-based."""
    if requested is not None:
        return max(1, int(requested))
    env = os.environ.get("DSM_THREADS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise ConfigError(f"DSM_THREADS must be an integer, got {env!r}")
    return min(4, os.cpu_count() or 1)


# ---------------------------------------------------------------------------
# Scene components
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class PointsComponent:
    scatterers: PointScattererSet

    tag = "points"

    def far_field_matrix(self, pairs: DirectionPairSet, ks: np.ndarray, workers: int) -> np.ndarray:
        d = pairs.thetas - pairs.x_hats                       # (P, 2)
        phase = self.scatterers.positions @ d.T               # (M, P)
        tau = self.scatterers.strengths
        out = np.empty((len(pairs), len(ks)), dtype=complex)
        for j, k in enumerate(ks):
            out[:, j] = tau @ np.exp(1j * k * phase)
        return out


@dataclass(frozen=True)
class MediumComponent:
    medium: MediumContrast
    model: str = "born"                 # "born" | "ls"
    raster: RasterSpec | None = None

    def __post_init__(self):
        if self.model not in ("born", "ls"):
            raise ConfigError(f"unknown medium model {self.model!r}")
        if self.model == "ls" and self.raster is None:
            raise ConfigError("ls medium model requires a raster spec")

    @property
    def tag(self) -> str:
        return f"medium-{self.model}"

    def far_field_matrix(self, pairs, ks, workers):
        out = np.empty((len(pairs), len(ks)), dtype=complex)
        if self.model == "born":
            for p in range(len(pairs)):
                xh, th = pairs.pair(p)
                for j, k in enumerate(ks):
                    out[p, j] = born_far_field(self.medium, xh, th, k)
            return out

        thetas, inverse = np.unique(np.round(pairs.thetas, 14), axis=0, return_inverse=True)

        def column(j):
            k = ks[j]
            col = np.empty(len(pairs), dtype=complex)
            for ti, th in enumerate(thetas):
                try:
                    sol = lippmann_schwinger_solve(self.medium, k, th, self.raster)
                except SolverError as exc:
                    raise type(exc)(f"medium solve at k={k:g}, theta={th.tolist()}: {exc}")
                for p in np.nonzero(inverse == ti)[0]:
                    col[p] = sol.far_field(pairs.x_hats[p])
            return col

        cols = _map_columns(column, len(ks), workers)
        for j, col in enumerate(cols):
            out[:, j] = col
        return out


@dataclass(frozen=True)
class ObstacleComponent:
    boundary: ParametricBoundary
    bc: BoundaryCondition
    model: str = "bie"                  # "bie" | "kirchhoff"
    node_count: int | None = None

    def __post_init__(self):
        if self.model not in ("bie", "kirchhoff"):
            raise ConfigError(f"unknown obstacle model {self.model!r}")

    @property
    def tag(self) -> str:
        return f"{self.model}-{self.bc.kind}"

    def far_field_matrix(self, pairs, ks, workers):
        out = np.empty((len(pairs), len(ks)), dtype=complex)
        if self.model == "kirchhoff":
            cfg = KirchhoffConfig(boundary=self.boundary, gamma_d=self.bc.gamma_d,
                                  node_count=self.node_count)
            for p in range(len(pairs)):
                xh, th = pairs.pair(p)
                for j, k in enumerate(ks):
                    out[p, j] = kirchhoff_far_field(cfg, xh, th, k)
            return out

        thetas, inverse = np.unique(np.round(pairs.thetas, 14), axis=0, return_inverse=True)

        def column(j):
            k = ks[j]
            try:
                op = ObstacleOperator(self.boundary, self.bc, k, self.node_count)
            except SolverError as exc:
                raise type(exc)(f"obstacle operator at k={k:g}: {exc}")
            col = np.empty(len(pairs), dtype=complex)
            for ti, th in enumerate(thetas):
                try:
                    sol = op.solve(th)
                except SolverError as exc:
                    raise type(exc)(f"obstacle solve at k={k:g}, theta={th.tolist()}: {exc}")
                idx = np.nonzero(inverse == ti)[0]
                ff = far_field_from_traces(sol, pairs.x_hats[idx])
                col[idx] = ff
            return col

        cols = _map_columns(column, len(ks), workers)
        for j, col in enumerate(cols):
            out[:, j] = col
        return out


def _map_columns(fn, n, workers):
    if workers <= 1 or n <= 1:
        return [fn(j) for j in range(n)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n)))


@dataclass(frozen=True)
class Scene:
    """Ground-truth scatterer: one or more independent components.

    Multi-component far fields are superposed without inter-component
    multiple scattering.
    """

    components: tuple

    def __post_init__(self):
        if len(self.components) == 0:
            raise ConfigError("scene needs at least one component")

    @property
    def tag(self) -> str:
        return "+".join(c.tag for c in self.components)

    def far_field_matrix(self, pairs, ks, workers):
        total = np.zeros((len(pairs), len(ks)), dtype=complex)
        for comp in self.components:
            total += comp.far_field_matrix(pairs, ks, workers)
        return total


# ---------------------------------------------------------------------------
# Dataset
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class FarFieldDataset:
    """u_inf values on pairs x wavenumbers, with provenance."""

    pairs: DirectionPairSet
    wavenumbers: np.ndarray          # (K,) strictly increasing
    values: np.ndarray               # (P, K) complex
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        ks = np.asarray(self.wavenumbers, dtype=float)
        vals = np.asarray(self.values, dtype=complex)
        if vals.shape != (len(self.pairs), len(ks)):
            raise ConfigError(
                f"value array {vals.shape} does not match {len(self.pairs)} pairs x {len(ks)} wavenumbers"
            )
        if len(ks) >= 2 and not np.all(np.diff(ks) > 0):
            raise ConfigError("wavenumbers must be strictly increasing")
        object.__setattr__(self, "wavenumbers", ks)
        object.__setattr__(self, "values", vals)

    @property
    def num_wavenumbers(self) -> int:
        return len(self.wavenumbers)


def wavenumber_grid(band: tuple[float, float], count: int) -> np.ndarray:
    """count equispaced wavenumbers including both band endpoints."""
    lo, hi = float(band[0]), float(band[1])
    if not (0.0 < lo < hi):
        raise ConfigError("band must satisfy 0 < k- < k+")
    if count < 2:
        raise ConfigError("need at least 2 wavenumbers")
    return lo + (hi - lo) * np.arange(count) / (count - 1)


def assemble_dataset(
    scene: Scene,
    pairs: DirectionPairSet,
    band: tuple[float, float],
    count: int,
    workers: int | None = None,
    with_mirrors: bool = False,
):
    """Fill the (pair x wavenumber) far-field matrix for a scene.

    Returns the dataset, or (dataset, mirror_dataset) when ``with_mirrors``
    is set; the mirror dataset holds the values at the negated pairs
    (-xhat, -theta) needed by the I2 indicator for asymmetric pair sets.
    """
    ks = wavenumber_grid(band, count)
    w = worker_count(workers)
    t0 = time.time()
    values = scene.far_field_matrix(pairs, ks, w)
    logger.info("assembled %d x %d far fields (%s) in %.2fs",
                len(pairs), len(ks), scene.tag, time.time() - t0)
    prov = {
        "model": scene.tag,
        "variant": str(pairs.variant),
        "band": (float(band[0]), float(band[1])),
        "num_wavenumbers": int(count),
        "noise_level": 0.0,
        "seed": None,
        "role": "primary",
    }
    ds = FarFieldDataset(pairs=pairs, wavenumbers=ks, values=values, provenance=prov)
    if not with_mirrors:
        return ds
    mirror_pairs = DirectionPairSet(
        variant=pairs.variant, x_hats=-pairs.x_hats, thetas=-pairs.thetas,
        dropped=pairs.dropped,
    )
    mvalues = scene.far_field_matrix(mirror_pairs, ks, w)
    mds = FarFieldDataset(pairs=mirror_pairs, wavenumbers=ks, values=mvalues,
                          provenance={**prov, "role": "mirror"})
    return ds, mds


def perturb_noise(dataset: FarFieldDataset, level: float, seed: int) -> FarFieldDataset:
    """Multiplicative complex uniform noise: v -> v (1 + level (z1 + i z2)),
    z1, z2 independent uniform on [-1, 1] from a seeded generator."""
    if not 0.0 <= level < 1.0:
        raise ConfigError("noise level must lie in [0, 1)")
    if level == 0.0:
        return dataset
    rng = np.random.default_rng(seed)
    zeta = rng.uniform(-1.0, 1.0, size=dataset.values.shape + (2,))
    factor = 1.0 + level * (zeta[..., 0] + 1j * zeta[..., 1])
    prov = {**dataset.provenance, "noise_level": float(level), "seed": int(seed)}
    return FarFieldDataset(pairs=dataset.pairs, wavenumbers=dataset.wavenumbers,
                           values=dataset.values * factor, provenance=prov)


def merge_datasets(datasets: list[FarFieldDataset]) -> FarFieldDataset:
    """Concatenate pair sets measured on one common wavenumber grid."""
    if not datasets:
        raise ConfigError("no datasets to merge")
    if len(datasets) == 1:
        return datasets[0]
    ks = datasets[0].wavenumbers
    for d in datasets[1:]:
        if len(d.wavenumbers) != len(ks) or np.max(np.abs(d.wavenumbers - ks)) > 1e-12:
            raise ConfigError("datasets to merge must share the wavenumber grid")
    x_hats = np.concatenate([d.pairs.x_hats for d in datasets])
    thetas = np.concatenate([d.pairs.thetas for d in datasets])
    variants = {str(d.pairs.variant) for d in datasets}
    variant = variants.pop() if len(variants) == 1 else "mixed"
    pairs = DirectionPairSet(variant=variant, x_hats=x_hats, thetas=thetas)
    values = np.concatenate([d.values for d in datasets], axis=0)
    prov = dict(datasets[0].provenance)
    prov["model"] = "+".join(dict.fromkeys(str(d.provenance.get("model")) for d in datasets))
    return FarFieldDataset(pairs=pairs, wavenumbers=ks, values=values, provenance=prov)


# ---------------------------------------------------------------------------
# Indicators
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class IndicatorField:
    """Non-negative indicator values over a sampling grid."""

    grid: SamplingGrid
    values: np.ndarray               # (nx, ny) float, >= 0
    kind: str                        # "i1" | "i2"
    variant: str
    pair_count: int

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float)
        if vals.shape != self.grid.shape:
            raise ConfigError("indicator array does not match the grid")
        if np.any(vals < 0):
            raise ConfigError("indicator values must be non-negative")
        object.__setattr__(self, "values", vals)


def _trapezoid_weights(ks: np.ndarray) -> np.ndarray:
    if len(ks) < 2:
        raise ConfigError("trapezoid rule needs at least 2 wavenumbers")
    w = np.empty_like(ks)
    w[0] = 0.5 * (ks[1] - ks[0])
    w[-1] = 0.5 * (ks[-1] - ks[-2])
    if len(ks) > 2:
        w[1:-1] = 0.5 * (ks[2:] - ks[:-2])
    return w


def single_pair_integral(dataset: FarFieldDataset, pair_index: int, points: np.ndarray,
                         combined_values: np.ndarray | None = None) -> np.ndarray:
    """int_{k-}^{k+} u_inf(k) e^{-ik z.(theta-xhat)} dk at sampling points z.

    ``combined_values`` overrides the dataset row (used by I2 for the
    mirrored combination); trapezoid on the dataset's wavenumber nodes.
    """
    xh, th = dataset.pairs.pair(pair_index)
    d = th - xh
    ks = dataset.wavenumbers
    w = _trapezoid_weights(ks)
    v = dataset.values[pair_index] if combined_values is None else combined_values
    s = np.asarray(points, dtype=float) @ d                  # (M,)
    phases = np.exp(-1j * np.outer(s, ks))                   # (M, K)
    return phases @ (w * v)


def _evaluate_field(dataset: FarFieldDataset, grid: SamplingGrid,
                    rows: np.ndarray, workers: int | None) -> np.ndarray:
    """Sum of |trapezoid k-integral of rows[p]| over pairs, on the grid.

    Grid points are processed in contiguous chunks by a bounded worker
    pool; per-point accumulation order is fixed (ascending pair index), so
    the result does not depend on the worker count.
    """
    pts = grid.points()
    w = _trapezoid_weights(dataset.wavenumbers)
    weighted = rows * w[None, :]
    d_all = dataset.pairs.thetas - dataset.pairs.x_hats

    def chunk(sl):
        s = pts[sl] @ d_all.T                              # (m, P)
        acc = np.zeros(sl.stop - sl.start)
        for p in range(len(dataset.pairs)):
            acc += np.abs(np.exp(-1j * np.outer(s[:, p], dataset.wavenumbers)) @ weighted[p])
        return acc

    # fixed chunk size: the split (and with it every float operation) is
    # independent of the worker count, so results are byte-stable
    n = len(pts)
    step = 4096
    slices = [slice(a, min(a + step, n)) for a in range(0, n, step)]
    nw = worker_count(workers)
    if len(slices) <= 1 or nw <= 1:
        acc = np.concatenate([chunk(sl) for sl in slices])
    else:
        with ThreadPoolExecutor(max_workers=nw) as pool:
            acc = np.concatenate(list(pool.map(chunk, slices)))
    return acc.reshape(grid.shape)


def indicator_i1(dataset: FarFieldDataset, grid: SamplingGrid,
                 workers: int | None = None) -> IndicatorField:
    """I1 over the grid: sum over pairs of |trapezoid k-integral|."""
    vals = _evaluate_field(dataset, grid, dataset.values, workers)
    return IndicatorField(grid=grid, values=vals, kind="i1",
                          variant=str(dataset.pairs.variant), pair_count=len(dataset.pairs))


def resolve_mirror_indices(dataset: FarFieldDataset, mirror: FarFieldDataset) -> np.ndarray:
    """For every pair in ``dataset``, the index of (-xhat, -theta) in ``mirror``."""
    idx = np.empty(len(dataset.pairs), dtype=int)
    for p in range(len(dataset.pairs)):
        j = dataset.pairs.mirror_index(p, mirror.pairs)
        if j is None:
            xh, th = dataset.pairs.pair(p)
            raise MissingMirrorError(
                f"mirror of pair (xhat={xh.tolist()}, theta={th.tolist()}) not found"
            )
        idx[p] = j
    return idx


def indicator_i2(dataset: FarFieldDataset, mirror: FarFieldDataset | None,
                 grid: SamplingGrid, workers: int | None = None) -> IndicatorField:
    """I2 over the grid: integrand u_inf(xhat,theta,k) + conj(u_inf(-xhat,-theta,k)).

    ``mirror`` may be the dataset itself (default) when its pair set is
    closed under negation.
    """
    mirror = dataset if mirror is None else mirror
    if len(mirror.wavenumbers) != len(dataset.wavenumbers) or \
            np.max(np.abs(mirror.wavenumbers - dataset.wavenumbers)) > 1e-12:
        raise ConfigError("mirror dataset must share the wavenumber grid")
    midx = resolve_mirror_indices(dataset, mirror)
    combined = dataset.values + np.conj(mirror.values[midx])
    vals = _evaluate_field(dataset, grid, combined, workers)
    return IndicatorField(grid=grid, values=vals, kind="i2",
                          variant=str(dataset.pairs.variant), pair_count=len(dataset.pairs))


@dataclass(frozen=True)
class IndicatorProfile:
    """Single-pair indicator restricted to a line z = anchor + s * direction."""

    s: np.ndarray
    points: np.ndarray
    values: np.ndarray
    pair_index: int


def indicator_profile(dataset: FarFieldDataset, pair_index: int, anchor, direction,
                      extent: float, step: float) -> IndicatorProfile:
    """Single-pair |k-integral| along a sampled line segment.

    Along the pair direction phi = (theta - xhat)/|theta - xhat| this is the
    full information content of the pair; lines orthogonal to phi give
    constant profiles.
    """
    if not (extent > 0 and step > 0):
        raise ConfigError("extent and step must be positive")
    if pair_index < 0 or pair_index >= len(dataset.pairs):
        raise ConfigError(f"pair index {pair_index} out of range")
    direction = np.asarray(direction, dtype=float)
    nrm = np.linalg.norm(direction)
    if nrm < 1e-15:
        raise ConfigError("line direction must be nonzero")
    direction = direction / nrm
    s = np.arange(0.0, extent + 0.5 * step, step)
    pts = np.asarray(anchor, dtype=float)[None, :] + s[:, None] * direction[None, :]
    vals = np.abs(single_pair_integral(dataset, pair_index, pts))
    return IndicatorProfile(s=s, points=pts, values=vals, pair_index=pair_index)
