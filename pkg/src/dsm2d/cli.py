"""Command-line driver: scene -> far-field dataset -> indicator field -> image.

Commands
--------
forward --config cfg.json --out data.csv [--mirror-out m.csv]
invert  --data d.csv [--data d2.csv ...] [--grid cx,cy,h,nx,ny]
        --indicator {i1,i2} --out field.csv
render  --field field.csv --out out.pgm
repro   --example {1..6} [--variant NAME] --outdir DIR

Exit codes: 0 ok, 2 configuration/usage/format error, 3 solver failure.
DSM_THREADS caps the forward-solve worker pool.

The JSON configuration schema is documented in the README; configs
round-trip exactly through ``config_to_dict`` / ``config_from_dict``.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, Dsm2dError, SolverError
from .forward_bie import BoundaryCondition
from .forward_weak import MediumContrast, PointScattererSet, RasterSpec, rasterize_boundary_contrast
from .geometry import (DirectionPairSet, ParametricBoundary, SamplingGrid,
                       custom_direction_pairs, make_direction_pairs, unit_directions)
from .indicators import (MediumComponent, ObstacleComponent, PointsComponent, Scene,
                         assemble_dataset, indicator_i1, indicator_i2, merge_datasets,
                         perturb_noise)
from . import io as dio

logger = logging.getLogger(__name__)

DEFAULT_GRID = SamplingGrid(corner=(-4.0, -4.0), spacing=0.1, nx=81, ny=81)


# ---------------------------------------------------------------------------
# Configuration schema
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class ExperimentConfig:
    scene: dict
    pairs: dict
    band: tuple[float, float]
    num_wavenumbers: int
    noise_level: float
    seed: int
    grid: SamplingGrid
    indicator: str
    with_mirrors: bool = False


def _require(cond: bool, msg: str):
    if not cond:
        raise ConfigError(msg)


def _boundary_from_dict(d: dict) -> ParametricBoundary:
    kind = d.get("kind")
    _require(kind in ("kite", "circle"), f"shape kind must be kite or circle, got {kind!r}")
    center = d.get("center", [0.0, 0.0])
    _require(isinstance(center, list) and len(center) == 2, "shape center must be [x, y]")
    if kind == "circle":
        _require("radius" in d, "circle shape requires a radius")
        return ParametricBoundary(kind="circle", center=(float(center[0]), float(center[1])),
                                  radius=float(d["radius"]))
    return ParametricBoundary(kind="kite", center=(float(center[0]), float(center[1])))


def auto_node_count(boundary: ParametricBoundary, kmax: float) -> int:
    """Smallest even node count satisfying the 10-per-wavelength guard at kmax."""
    need = int(math.ceil(10.0 * kmax * boundary.perimeter() / (2.0 * math.pi)))
    n = max(64, need + 2)
    return n + (n % 2)


def _bc_from_config(v) -> BoundaryCondition:
    if isinstance(v, str):
        _require(v in ("soft", "hard"), f"bc must be soft, hard or impedance dict, got {v!r}")
        return BoundaryCondition(v)
    if isinstance(v, dict):
        _require(v.get("kind") == "impedance", "bc dict must have kind impedance")
        _require("lambda" in v, "impedance bc requires lambda")
        return BoundaryCondition("impedance", lam=float(v["lambda"]))
    raise ConfigError(f"invalid boundary condition {v!r}")


def _component_from_dict(d: dict, kmax: float):
    ctype = d.get("type")
    if ctype == "points":
        _require("positions" in d, "points component requires positions")
        pos = d["positions"]
        strengths = d.get("strengths", [1.0] * len(pos))
        tau = [complex(s[0], s[1]) if isinstance(s, list) else complex(s) for s in strengths]
        return PointsComponent(PointScattererSet(positions=np.asarray(pos, dtype=float),
                                                 strengths=np.asarray(tau)))
    if ctype == "obstacle":
        _require("shape" in d, "obstacle component requires a shape")
        boundary = _boundary_from_dict(d["shape"])
        bc = _bc_from_config(d.get("bc", "soft"))
        model = d.get("model", "bie")
        nodes = d.get("nodes")
        if nodes is None:
            nodes = auto_node_count(boundary, kmax)
        return ObstacleComponent(boundary=boundary, bc=bc, model=model, node_count=int(nodes))
    if ctype == "medium":
        _require("shape" in d, "medium component requires a shape")
        shape = d["shape"]
        model = d.get("model", "born")
        raster = None
        if "raster" in d and d["raster"] is not None:
            r = d["raster"]
            raster = RasterSpec(corner=(float(r["corner"][0]), float(r["corner"][1])),
                                extent=float(r["extent"]), n=int(r["n"]))
        contrast = float(d.get("contrast", 1.0))
        kind = shape.get("kind")
        if kind == "disk":
            medium = MediumContrast(kind="disk",
                                    center=(float(shape["center"][0]), float(shape["center"][1])),
                                    radius=float(shape["radius"]), contrast=contrast)
        elif kind == "kite":
            _require(raster is not None, "kite medium requires a raster to rasterize on")
            medium = rasterize_boundary_contrast(_boundary_from_dict(shape), contrast,
                                                 raster.corner, raster.extent, raster.n)
        elif kind == "grid":
            medium = MediumContrast(kind="grid",
                                    corner=(float(shape["corner"][0]), float(shape["corner"][1])),
                                    cell=float(shape["cell"]),
                                    values=np.asarray(shape["values"], dtype=float))
        else:
            raise ConfigError(f"unknown medium shape {kind!r}")
        return MediumComponent(medium=medium, model=model, raster=raster)
    raise ConfigError(f"unknown component type {ctype!r}")


def _pairs_from_dict(d: dict) -> DirectionPairSet:
    variant = d.get("variant")
    if variant == "custom":
        _require("pairs" in d, "custom pair set requires explicit pairs")
        arr = [[p["xhat"], p["theta"]] for p in d["pairs"]]
        return custom_direction_pairs(arr)
    _require(variant in (1, 2, 3), f"pairs variant must be 1, 2, 3 or custom, got {variant!r}")
    thetas = d.get("thetas")
    count = d.get("count")
    _require(thetas is not None or count is not None, "pairs need count or thetas")
    return make_direction_pairs(
        variant,
        l=count,
        q_matrix=d.get("q_matrix"),
        theta_fixed=d.get("theta_fixed"),
        thetas=thetas,
    )


def config_from_dict(d: dict) -> ExperimentConfig:
    for key in ("scene", "pairs", "band", "num_wavenumbers"):
        _require(key in d, f"config missing required key {key!r}")
    band = d["band"]
    _require(isinstance(band, list) and len(band) == 2, "band must be [k_min, k_max]")
    _require(0.0 < float(band[0]) < float(band[1]), "band must satisfy 0 < k- < k+")
    count = int(d["num_wavenumbers"])
    _require(count >= 2, "num_wavenumbers must be >= 2")
    g = d.get("grid")
    if g is None:
        grid = DEFAULT_GRID
    else:
        grid = SamplingGrid(corner=(float(g["corner"][0]), float(g["corner"][1])),
                            spacing=float(g["spacing"]), nx=int(g["nx"]), ny=int(g["ny"]))
    indicator = d.get("indicator", "i1")
    _require(indicator in ("i1", "i2"), f"indicator must be i1 or i2, got {indicator!r}")
    noise = float(d.get("noise_level", 0.0))
    _require(0.0 <= noise < 1.0, "noise_level must lie in [0, 1)")
    scene_d = d["scene"]
    _require(isinstance(scene_d, dict) and isinstance(scene_d.get("components"), list)
             and scene_d["components"], "scene must carry a nonempty components list")
    cfg = ExperimentConfig(
        scene=scene_d,
        pairs=d["pairs"],
        band=(float(band[0]), float(band[1])),
        num_wavenumbers=count,
        noise_level=noise,
        seed=int(d.get("seed", 0)),
        grid=grid,
        indicator=indicator,
        with_mirrors=bool(d.get("with_mirrors", False)),
    )
    # validate eagerly so config errors surface before any solve
    build_scene(cfg)
    build_pairs(cfg)
    return cfg


def config_to_dict(cfg: ExperimentConfig) -> dict:
    return {
        "scene": cfg.scene,
        "pairs": cfg.pairs,
        "band": [cfg.band[0], cfg.band[1]],
        "num_wavenumbers": cfg.num_wavenumbers,
        "noise_level": cfg.noise_level,
        "seed": cfg.seed,
        "grid": {
            "corner": [cfg.grid.corner[0], cfg.grid.corner[1]],
            "spacing": cfg.grid.spacing,
            "nx": cfg.grid.nx,
            "ny": cfg.grid.ny,
        },
        "indicator": cfg.indicator,
        "with_mirrors": cfg.with_mirrors,
    }


def load_config(path: str) -> ExperimentConfig:
    try:
        with open(path, "r", encoding="utf-8") as f:
            d = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}")
    return config_from_dict(d)


def build_scene(cfg: ExperimentConfig) -> Scene:
    kmax = cfg.band[1]
    comps = tuple(_component_from_dict(c, kmax) for c in cfg.scene["components"])
    return Scene(components=comps)


def build_pairs(cfg: ExperimentConfig) -> DirectionPairSet:
    return _pairs_from_dict(cfg.pairs)


# ---------------------------------------------------------------------------
# Command implementations (shared by CLI and repro)
# ---------------------------------------------------------------------------
def run_forward(cfg: ExperimentConfig, out: str, mirror_out: str | None = None) -> None:
    scene = build_scene(cfg)
    pairs = build_pairs(cfg)
    t0 = time.time()
    if cfg.with_mirrors:
        ds, mirror = assemble_dataset(scene, pairs, cfg.band, cfg.num_wavenumbers,
                                      with_mirrors=True)
    else:
        ds = assemble_dataset(scene, pairs, cfg.band, cfg.num_wavenumbers)
        mirror = None
    if cfg.noise_level > 0.0:
        ds = perturb_noise(ds, cfg.noise_level, cfg.seed)
        if mirror is not None:
            mirror = perturb_noise(mirror, cfg.noise_level, cfg.seed + 1)
    dio.write_dataset(ds, out)
    if mirror is not None:
        if mirror_out is None:
            mirror_out = out + ".mirror.csv" if not out.endswith(".csv") \
                else out[:-4] + ".mirror.csv"
        dio.write_dataset(mirror, mirror_out)
    dt = time.time() - t0
    print(f"forward: {len(pairs)} pairs ({pairs.dropped} degenerate dropped), "
          f"K={cfg.num_wavenumbers}, model={scene.tag}, {dt:.2f}s -> {out}"
          + (f" + {mirror_out}" if mirror is not None else ""))


def run_invert(data_paths: list[str], grid: SamplingGrid, indicator: str, out: str) -> None:
    datasets = [dio.read_dataset(p) for p in data_paths]
    for p, d in zip(data_paths, datasets):
        if d.num_wavenumbers < 2:
            raise ConfigError(f"{p}: trapezoid quadrature needs at least 2 wavenumbers")
    primaries = [d for d in datasets if d.provenance.get("role") != "mirror"]
    if not primaries:
        raise ConfigError("no primary datasets given (all files are mirror-role)")
    primary = merge_datasets(primaries)
    if indicator == "i1":
        fieldv = indicator_i1(primary, grid)
    else:
        pool = merge_datasets(datasets)
        fieldv = indicator_i2(primary, pool, grid)
    dio.write_field(fieldv, out)
    print(f"invert: {indicator} over {fieldv.pair_count} pairs on "
          f"{grid.nx}x{grid.ny} grid -> {out}")


def run_render(field_path: str, out: str) -> None:
    fieldv = dio.read_field(field_path)
    dio.write_pgm(dio.heatmap_from_field(fieldv), out)
    print(f"render: {fieldv.grid.nx}x{fieldv.grid.ny} {fieldv.kind} -> {out}")


# ---------------------------------------------------------------------------
# Built-in experiment presets
# ---------------------------------------------------------------------------
_KITE_SOFT = {"type": "obstacle", "shape": {"kind": "kite", "center": [0.0, 0.0]},
              "bc": "soft", "model": "bie", "nodes": None}
_Q_ROT90 = [[0.0, 1.0], [1.0, 0.0]]
# true quarter turn; the published reflection Q above fixes diagonal
# directions, so the diagonal-incidence experiment needs the rotation
_Q_ROT90_TRUE = [[0.0, -1.0], [1.0, 0.0]]
_FOUR_POINTS = [[1.0, 1.0], [-1.0, 1.0], [1.0, -1.0], [-1.0, -1.0]]


def _cas_points() -> list[list[float]]:
    rows = {
        "C": ["XXX", "X..", "X..", "X..", "XXX"],
        "A": ["XXX", "X.X", "XXX", "X.X", "X.X"],
        "S": ["XXX", "X..", "XXX", "..X", "XXX"],
    }
    cell = 0.35
    gap = 0.55
    letters = ["C", "A", "S"]
    width = 3 * cell
    total = 3 * width + 2 * gap
    x0 = -0.5 * total + 0.5 * cell
    pts = []
    for li, letter in enumerate(letters):
        lx = x0 + li * (width + gap)
        grid = rows[letter]
        for r, line in enumerate(grid):
            for c, ch in enumerate(line):
                if ch == "X":
                    pts.append([round(lx + c * cell, 10), round((2 - r) * cell, 10)])
    return pts


def _aperture_pairs() -> list[dict]:
    arcs = {
        (1.0, 0.0): (0.75 * math.pi, 1.25 * math.pi),
        (0.0, 1.0): (1.25 * math.pi, 1.75 * math.pi),
        (-1.0, 0.0): (1.75 * math.pi, 2.25 * math.pi),
        (0.0, -1.0): (0.25 * math.pi, 0.75 * math.pi),
    }
    dirs = unit_directions(32)
    angles = np.arctan2(dirs[:, 1], dirs[:, 0]) % (2.0 * math.pi)
    out = []
    for theta, (lo, hi) in arcs.items():
        for ang, xh in zip(angles, dirs):
            a = ang
            if a < lo - 1e-12:
                a += 2.0 * math.pi
            if lo - 1e-12 <= a < hi - 1e-12:          # half-open arc: 8 directions each
                out.append({"xhat": [float(xh[0]), float(xh[1])],
                            "theta": [float(theta[0]), float(theta[1])]})
    return out


def _base_config(scene_components, pairs, band, count, seed, indicator="i1",
                 noise=0.1, grid=None, with_mirrors=False) -> dict:
    d = {
        "scene": {"components": scene_components},
        "pairs": pairs,
        "band": list(band),
        "num_wavenumbers": count,
        "noise_level": noise,
        "seed": seed,
        "indicator": indicator,
        "with_mirrors": with_mirrors,
    }
    g = DEFAULT_GRID if grid is None else grid
    d["grid"] = {"corner": [g.corner[0], g.corner[1]], "spacing": g.spacing,
                 "nx": g.nx, "ny": g.ny}
    return d


def example_jobs(example: int, variant: str | None) -> list[tuple[str, dict]]:
    """Built-in configurations reproducing the six experiments."""
    jobs: list[tuple[str, dict]] = []
    kite = [dict(_KITE_SOFT)]
    if example == 1:
        jobs.append(("ex1-i1-a1", _base_config(
            kite, {"variant": 1, "thetas": [[1.0, 0.0]]}, (10.0, 20.0), 20, 101)))
        jobs.append(("ex1-i1-a2", _base_config(
            kite, {"variant": 2, "thetas": [[1.0, 0.0]], "q_matrix": _Q_ROT90},
            (10.0, 20.0), 20, 102)))
    elif example == 2:
        thetas = [[1.0, 0.0], [-1.0, 0.0]]
        jobs.append(("ex2-i1-a1", _base_config(
            kite, {"variant": 1, "thetas": thetas}, (10.0, 20.0), 20, 201)))
        jobs.append(("ex2-i1-a2", _base_config(
            kite, {"variant": 2, "thetas": thetas, "q_matrix": _Q_ROT90},
            (10.0, 20.0), 20, 202)))
    elif example == 3:
        if variant in (None, "default"):
            jobs.append(("ex3-i1-a1", _base_config(
                kite, {"variant": 1, "count": 32}, (10.0, 20.0), 20, 301)))
            jobs.append(("ex3-i1-a2", _base_config(
                kite, {"variant": 2, "count": 32, "q_matrix": _Q_ROT90},
                (10.0, 20.0), 20, 302)))
            jobs.append(("ex3-i2-a1", _base_config(
                kite, {"variant": 1, "count": 32}, (10.0, 20.0), 20, 303, indicator="i2")))
            jobs.append(("ex3-i2-a2", _base_config(
                kite, {"variant": 2, "count": 32, "q_matrix": _Q_ROT90},
                (10.0, 20.0), 20, 304, indicator="i2")))
        elif variant == "fixed":
            for i, th in enumerate([[1.0, 0.0], [0.0, -1.0], [-1.0, 0.0], [0.0, 1.0]]):
                jobs.append((f"ex3-i1-a3-{i}", _base_config(
                    kite, {"variant": 3, "count": 32, "theta_fixed": th},
                    (10.0, 20.0), 20, 310 + i)))
        elif variant == "aperture":
            jobs.append(("ex3-i1-aperture", _base_config(
                kite, {"variant": "custom", "pairs": _aperture_pairs()},
                (10.0, 20.0), 20, 320)))
        else:
            raise ConfigError(f"example 3 has variants default, fixed, aperture; got {variant!r}")
    elif example == 4:
        if variant in (None, "hard"):
            comp = [{**_KITE_SOFT, "bc": "hard"}]
            jobs.append(("ex4-hard", _base_config(
                comp, {"variant": 1, "count": 32}, (10.0, 20.0), 20, 401)))
        elif variant == "impedance":
            comp = [{**_KITE_SOFT, "bc": {"kind": "impedance", "lambda": 0.5}}]
            jobs.append(("ex4-impedance", _base_config(
                comp, {"variant": 1, "count": 32}, (10.0, 20.0), 20, 402)))
        elif variant == "penetrable":
            comp = [{"type": "medium", "shape": {"kind": "kite", "center": [0.0, 0.0]},
                     "contrast": 1.0, "model": "ls",
                     "raster": {"corner": [-2.0, -2.0], "extent": 4.0, "n": 192}}]
            jobs.append(("ex4-penetrable", _base_config(
                comp, {"variant": 1, "count": 32}, (10.0, 20.0), 20, 403)))
        else:
            raise ConfigError(f"example 4 has variants hard, impedance, penetrable; got {variant!r}")
    elif example == 5:
        points = [{"type": "points", "positions": _FOUR_POINTS}]
        if variant in (None, "a1"):
            jobs.append(("ex5-a1-right", _base_config(
                points, {"variant": 1, "thetas": [[1.0, 0.0]]}, (20.0, 100.0), 160, 501)))
            jobs.append(("ex5-a1-up", _base_config(
                points, {"variant": 1, "thetas": [[0.0, 1.0]]}, (20.0, 100.0), 160, 502)))
            jobs.append(("ex5-a1-both", _base_config(
                points, {"variant": 1, "thetas": [[1.0, 0.0], [-1.0, 0.0]]},
                (20.0, 100.0), 160, 503)))
        elif variant == "a2":
            s = math.sqrt(0.5)
            jobs.append(("ex5-a2-right", _base_config(
                points, {"variant": 2, "thetas": [[1.0, 0.0]], "q_matrix": _Q_ROT90_TRUE},
                (20.0, 100.0), 160, 504)))
            jobs.append(("ex5-a2-diag", _base_config(
                points, {"variant": 2, "thetas": [[s, s]], "q_matrix": _Q_ROT90_TRUE},
                (20.0, 100.0), 160, 505)))
            jobs.append(("ex5-a2-both", _base_config(
                points, {"variant": 2, "thetas": [[1.0, 0.0], [s, s]], "q_matrix": _Q_ROT90_TRUE},
                (20.0, 100.0), 160, 506)))
        elif variant == "cas":
            cas = [{"type": "points", "positions": _cas_points()}]
            jobs.append(("ex5-cas", _base_config(
                cas, {"variant": 1, "count": 32}, (20.0, 100.0), 160, 507)))
        else:
            raise ConfigError(f"example 5 has variants a1, a2, cas; got {variant!r}")
    elif example == 6:
        if variant in (None, "circle"):
            extra = {"type": "obstacle",
                     "shape": {"kind": "circle", "center": [2.5, 2.5], "radius": 0.1},
                     "bc": "soft", "model": "bie", "nodes": None}
            scene = [dict(_KITE_SOFT), extra]
            prefix = "ex6-circle"
            seed0 = 601
        elif variant == "points":
            extra = {"type": "points",
                     "positions": [[2.5, 2.0], [2.5, 0.0], [2.5, -2.0]]}
            scene = [dict(_KITE_SOFT), extra]
            prefix = "ex6-points"
            seed0 = 611
        else:
            raise ConfigError(f"example 6 has variants circle, points; got {variant!r}")
        for i, l in enumerate((1, 4, 32)):
            pairs = {"variant": 1, "thetas": [[1.0, 0.0]]} if l == 1 \
                else {"variant": 1, "count": l}
            jobs.append((f"{prefix}-l{l}", _base_config(
                scene, pairs, (10.0, 20.0), 40, seed0 + i)))
    else:
        raise ConfigError(f"example must be 1..6, got {example}")
    return jobs


def run_repro(example: int, variant: str | None, outdir: str) -> None:
    import os

    jobs = example_jobs(example, variant)
    os.makedirs(outdir, exist_ok=True)
    for name, cfg_dict in jobs:
        cfg = config_from_dict(cfg_dict)
        base = os.path.join(outdir, name)
        cfg_path = base + ".config.json"
        with open(cfg_path, "w", encoding="utf-8") as f:
            json.dump(config_to_dict(cfg), f, indent=2)
            f.write("\n")
        data_path = base + ".data.csv"
        mirror_path = base + ".mirror.csv" if cfg.with_mirrors else None
        run_forward(cfg, data_path, mirror_path)
        field_path = base + ".field.csv"
        data_files = [data_path] + ([mirror_path] if mirror_path else [])
        run_invert(data_files, cfg.grid, cfg.indicator, field_path)
        run_render(field_path, base + ".pgm")
    print(f"repro example {example}: {len(jobs)} job(s) complete under {outdir}")


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------
def _parse_grid(text: str) -> SamplingGrid:
    parts = text.split(",")
    if len(parts) != 5:
        raise ConfigError("grid spec must be cx,cy,h,nx,ny")
    try:
        cx, cy, h = float(parts[0]), float(parts[1]), float(parts[2])
        nx, ny = int(parts[3]), int(parts[4])
    except ValueError as exc:
        raise ConfigError(f"invalid grid spec: {exc}")
    return SamplingGrid(corner=(cx, cy), spacing=h, nx=nx, ny=ny)


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dsm2d",
                                description="Multi-frequency sparse backscattering sampling pipeline")
    sub = p.add_subparsers(dest="command", required=True)

    f = sub.add_parser("forward", help="simulate a far-field dataset")
    f.add_argument("--config", required=True)
    f.add_argument("--out", required=True)
    f.add_argument("--mirror-out", default=None)

    i = sub.add_parser("invert", help="evaluate an indicator over a sampling grid")
    i.add_argument("--data", action="append", required=True)
    i.add_argument("--grid", default=None, help="cx,cy,h,nx,ny (default -4,-4,0.1,81,81)")
    i.add_argument("--indicator", choices=("i1", "i2"), default="i1")
    i.add_argument("--out", required=True)

    r = sub.add_parser("render", help="render an indicator field to PGM")
    r.add_argument("--field", required=True)
    r.add_argument("--out", required=True)

    x = sub.add_parser("repro", help="run a built-in experiment end to end")
    x.add_argument("--example", type=int, required=True, choices=range(1, 7))
    x.add_argument("--variant", default=None)
    x.add_argument("--outdir", required=True)
    return p


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "forward":
            run_forward(load_config(args.config), args.out, args.mirror_out)
        elif args.command == "invert":
            grid = DEFAULT_GRID if args.grid is None else _parse_grid(args.grid)
            run_invert(args.data, grid, args.indicator, args.out)
        elif args.command == "render":
            run_render(args.field, args.out)
        elif args.command == "repro":
            run_repro(args.example, args.variant, args.outdir)
        return 0
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SolverError as exc:
        print(f"solver failure: {exc}", file=sys.stderr)
        return 3
    except Dsm2dError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
