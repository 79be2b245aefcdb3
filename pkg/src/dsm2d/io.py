"""On-disk formats: far-field dataset CSV, indicator-field CSV + sidecar, PGM.

Dataset CSV: a '#'-prefixed provenance header block followed by the exact
column set

    theta_x,theta_y,xhat_x,xhat_y,k,re,im

with rows pair-major, wavenumber-ascending.  Floats are written with 17
significant digits so re-parsing reproduces the in-memory dataset bit
exactly.

Indicator-field CSV: an nx-row by ny-column value matrix, with grid and
indicator metadata in a JSON sidecar at <path>.meta.json.

Images are binary 8-bit PGM (P5), one pixel per grid cell, row ny-1 at the
top so the image matches mathematical orientation.  Values are normalized
min -> 0, max -> 255; constant fields map to all zeros.

All writes go through a temp file and an atomic rename.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .geometry import DirectionPairSet, SamplingGrid
from .indicators import FarFieldDataset, IndicatorField


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _atomic_write(path: str, data: bytes) -> None:
    tmp = f"{path}.tmp.{os.getpid()}"
    with open(tmp, "wb") as f:
        f.write(data)
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# Dataset CSV
# ---------------------------------------------------------------------------
DATASET_COLUMNS = "theta_x,theta_y,xhat_x,xhat_y,k,re,im"


def dataset_to_csv(dataset: FarFieldDataset) -> str:
    prov = dataset.provenance
    band = prov.get("band", (float(dataset.wavenumbers[0]), float(dataset.wavenumbers[-1])))
    lines = [
        "# dsm2d-dataset v1",
        f"# model: {prov.get('model', 'unknown')}",
        f"# variant: {prov.get('variant', str(dataset.pairs.variant))}",
        f"# band: {_fmt(band[0])} {_fmt(band[1])}",
        f"# num_wavenumbers: {dataset.num_wavenumbers}",
        f"# noise_level: {_fmt(prov.get('noise_level', 0.0))}",
        f"# seed: {prov.get('seed') if prov.get('seed') is not None else 'none'}",
        f"# role: {prov.get('role', 'primary')}",
        DATASET_COLUMNS,
    ]
    for p in range(len(dataset.pairs)):
        xh, th = dataset.pairs.pair(p)
        for j, k in enumerate(dataset.wavenumbers):
            v = dataset.values[p, j]
            lines.append(",".join([
                _fmt(th[0]), _fmt(th[1]), _fmt(xh[0]), _fmt(xh[1]),
                _fmt(k), _fmt(v.real), _fmt(v.imag),
            ]))
    return "\n".join(lines) + "\n"


def write_dataset(dataset: FarFieldDataset, path: str) -> None:
    _atomic_write(path, dataset_to_csv(dataset).encode())


def dataset_from_csv(text: str) -> FarFieldDataset:
    prov: dict = {}
    rows = []
    header_seen = False
    for ln, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if ":" in body:
                key, _, val = body.partition(":")
                prov[key.strip()] = val.strip()
            continue
        if not header_seen:
            if line != DATASET_COLUMNS:
                raise ConfigError(f"line {ln}: expected column header {DATASET_COLUMNS!r}")
            header_seen = True
            continue
        parts = line.split(",")
        if len(parts) != 7:
            raise ConfigError(f"line {ln}: expected 7 columns, got {len(parts)}")
        try:
            rows.append([float(v) for v in parts])
        except ValueError as exc:
            raise ConfigError(f"line {ln}: {exc}")
    if not rows:
        raise ConfigError("dataset file contains no data rows")

    arr = np.asarray(rows)
    keys = [tuple(r[:4]) for r in rows]
    order: dict[tuple, int] = {}
    for key in keys:
        if key not in order:
            order[key] = len(order)
    npairs = len(order)
    if len(rows) % npairs != 0:
        raise ConfigError("rows do not form a full pair x wavenumber matrix")
    kcount = len(rows) // npairs
    ks = arr[:kcount, 4]
    values = np.empty((npairs, kcount), dtype=complex)
    counts = np.zeros(npairs, dtype=int)
    for r, key in zip(rows, keys):
        p = order[key]
        j = counts[p]
        if j >= kcount or r[4] != ks[j]:
            raise ConfigError("wavenumber grid differs between pairs")
        values[p, j] = complex(r[5], r[6])
        counts[p] += 1
    if np.any(counts != kcount):
        raise ConfigError("incomplete dataset matrix")

    pair_keys = list(order.keys())
    thetas = np.asarray([[k[0], k[1]] for k in pair_keys])
    x_hats = np.asarray([[k[2], k[3]] for k in pair_keys])
    pairs = DirectionPairSet(variant=prov.get("variant", "custom"), x_hats=x_hats, thetas=thetas)

    provenance = {
        "model": prov.get("model", "unknown"),
        "variant": prov.get("variant", "custom"),
        "noise_level": float(prov.get("noise_level", 0.0)),
        "seed": None if prov.get("seed", "none") == "none" else int(prov["seed"]),
        "num_wavenumbers": kcount,
        "role": prov.get("role", "primary"),
    }
    if "band" in prov:
        lo, hi = prov["band"].split()
        provenance["band"] = (float(lo), float(hi))
    else:
        provenance["band"] = (float(ks[0]), float(ks[-1]))
    return FarFieldDataset(pairs=pairs, wavenumbers=ks, values=values, provenance=provenance)


def read_dataset(path: str) -> FarFieldDataset:
    try:
        with open(path, "r", encoding="utf-8") as f:
            return dataset_from_csv(f.read())
    except OSError as exc:
        raise ConfigError(f"cannot read dataset {path}: {exc}")


# ---------------------------------------------------------------------------
# Indicator-field CSV + sidecar
# ---------------------------------------------------------------------------
def sidecar_path(path: str) -> str:
    return path + ".meta.json"


def write_field(fieldv: IndicatorField, path: str) -> None:
    lines = []
    for i in range(fieldv.grid.nx):
        lines.append(",".join(_fmt(v) for v in fieldv.values[i, :]))
    _atomic_write(path, ("\n".join(lines) + "\n").encode())
    meta = {
        "corner": [fieldv.grid.corner[0], fieldv.grid.corner[1]],
        "spacing": fieldv.grid.spacing,
        "nx": fieldv.grid.nx,
        "ny": fieldv.grid.ny,
        "kind": fieldv.kind,
        "variant": fieldv.variant,
        "pair_count": fieldv.pair_count,
    }
    _atomic_write(sidecar_path(path), (json.dumps(meta, indent=2) + "\n").encode())


def read_field(path: str) -> IndicatorField:
    try:
        with open(sidecar_path(path), "r", encoding="utf-8") as f:
            meta = json.load(f)
    except FileNotFoundError:
        raise ConfigError(f"missing field sidecar {sidecar_path(path)}")
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid field sidecar: {exc}")
    try:
        grid = SamplingGrid(corner=(float(meta["corner"][0]), float(meta["corner"][1])),
                            spacing=float(meta["spacing"]), nx=int(meta["nx"]), ny=int(meta["ny"]))
        kind = meta["kind"]
        variant = str(meta["variant"])
        pair_count = int(meta.get("pair_count", 0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid field sidecar: {exc}")
    rows = []
    try:
        with open(path, "r", encoding="utf-8") as f:
            for line in f:
                line = line.strip()
                if line:
                    rows.append([float(v) for v in line.split(",")])
    except OSError as exc:
        raise ConfigError(f"cannot read field {path}: {exc}")
    except ValueError as exc:
        raise ConfigError(f"invalid field matrix in {path}: {exc}")
    vals = np.asarray(rows)
    if vals.shape != (grid.nx, grid.ny):
        raise ConfigError(f"field matrix {vals.shape} does not match grid {grid.shape}")
    return IndicatorField(grid=grid, values=vals, kind=kind, variant=variant,
                          pair_count=pair_count)


# ---------------------------------------------------------------------------
# Heatmap / PGM
# ---------------------------------------------------------------------------
@dataclass(frozen=True)
class Heatmap:
    """Grayscale image data normalized to [0, 1], min -> 0 and max -> 1."""

    width: int
    height: int
    values01: np.ndarray      # (height, width), row 0 at the top
    colormap: str = "grayscale"


def heatmap_from_field(fieldv: IndicatorField) -> Heatmap:
    vals = fieldv.values
    lo, hi = float(np.min(vals)), float(np.max(vals))
    if hi - lo <= 0.0:
        norm = np.zeros_like(vals)
    else:
        norm = (vals - lo) / (hi - lo)
    # values[i, j] at (x_i, y_j); image rows run from y_max down to y_min
    img = norm.T[::-1, :]
    return Heatmap(width=fieldv.grid.nx, height=fieldv.grid.ny, values01=img)


def pgm_bytes(hm: Heatmap) -> bytes:
    pixels = np.rint(np.clip(hm.values01, 0.0, 1.0) * 255.0).astype(np.uint8)
    header = f"P5\n{hm.width} {hm.height}\n255\n".encode()
    return header + pixels.tobytes()


def write_pgm(hm: Heatmap, path: str) -> None:
    _atomic_write(path, pgm_bytes(hm))
