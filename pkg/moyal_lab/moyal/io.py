"""
Field and GridField file formats.

Field JSON:  {"theta": θ, "dim": D, "trunc": N, "coeffs": [[re, im], ...]}
             with the coefficient matrix flattened row-major.
GridField CSV: header "x1,x2,re,im", one row per grid point, x₁ outer.
"""

from __future__ import annotations

import csv
import json
import logging
from pathlib import Path

import numpy as np

from moyal_lab.errors import DimensionError, DomainError
from moyal_lab.moyal.params import Field, GridField, MoyalParams

logger = logging.getLogger(__name__)

GRID_HEADER = ["x1", "x2", "re", "im"]


def field_to_dict(f: Field) -> dict:
    flat = f.coeffs.reshape(-1)
    return {
        "theta": f.params.theta,
        "dim": f.params.dim,
        "trunc": f.trunc,
        "coeffs": [[float(c.real), float(c.imag)] for c in flat],
    }


def field_from_dict(data: dict) -> Field:
    try:
        params = MoyalParams(theta=float(data["theta"]), dim=int(data["dim"]))
        trunc = int(data["trunc"])
        pairs = np.asarray(data["coeffs"], dtype=float)
    except (KeyError, TypeError, ValueError) as e:
        raise DomainError(f"malformed field document: {e}") from e
    size = trunc ** params.pairs
    if pairs.shape != (size * size, 2):
        raise DimensionError(f"expected {size * size} [re, im] pairs, got shape {pairs.shape}")
    return Field(params, trunc, (pairs[:, 0] + 1j * pairs[:, 1]).reshape(size, size))


def write_field_json(f: Field, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(field_to_dict(f), indent=2))
    logger.info("Wrote field (N=%d, dim=%d) to %s", f.trunc, f.params.dim, path)
    return path


def read_field_json(path: Path) -> Field:
    return field_from_dict(json.loads(Path(path).read_text()))


def write_grid_csv(g: GridField, path: Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    x1, x2 = g.mesh()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(GRID_HEADER)
        for a, b, v in zip(x1.ravel(), x2.ravel(), g.samples.ravel()):
            writer.writerow([f"{a:.17g}", f"{b:.17g}", f"{v.real:.17g}", f"{v.imag:.17g}"])
    logger.info("Wrote grid (%d×%d) to %s", g.resolution, g.resolution, path)
    return path


def read_grid_csv(path: Path, params: MoyalParams) -> GridField:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != GRID_HEADER:
            raise DomainError(f"grid CSV header must be {','.join(GRID_HEADER)}, got {header!r}")
        rows = np.array([[float(c) for c in row] for row in reader if row])
    resolution = int(round(np.sqrt(len(rows))))
    if resolution * resolution != len(rows) or resolution < 2:
        raise DimensionError(f"{len(rows)} rows do not form a square grid")
    extent = float(rows[:, 0].max())
    samples = (rows[:, 2] + 1j * rows[:, 3]).reshape(resolution, resolution)
    return GridField(params, extent, samples)
