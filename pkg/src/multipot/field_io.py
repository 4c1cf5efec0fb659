"""Gridded field sampling, streamline tracing and plain-text export."""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ._parallel import parallel_map
from .errors import ConfigError, OutputError, SeedInvalid
from .potential import EXTERIOR, MASK_LABELS, ComplexPotential

COLUMNS = ("x", "y", "u", "v", "speed", "psi", "mask")
FORMATS = ("csv", "json")


@dataclass(frozen=True)
class GridSpec:
    x_min: float
    x_max: float
    y_min: float
    y_max: float
    nx: int
    ny: int

    def __post_init__(self):
        if not (self.x_min < self.x_max and self.y_min < self.y_max):
            raise ConfigError("grid bounds must satisfy min < max")
        if self.nx < 2 or self.ny < 2:
            raise ConfigError("grid needs at least 2 nodes per direction")

    @classmethod
    def parse(cls, text: str) -> "GridSpec":
        """From ``"xmin,xmax,ymin,ymax,nx,ny"``."""
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 6:
            raise ConfigError(f"grid expects 6 comma-separated values, got {text!r}")
        try:
            x0, x1, y0, y1 = (float(p) for p in parts[:4])
            nx, ny = int(parts[4]), int(parts[5])
        except ValueError as exc:
            raise ConfigError(f"bad grid {text!r}: {exc}") from None
        return cls(x0, x1, y0, y1, nx, ny)

    def nodes(self) -> np.ndarray:
        """Complex node array of shape ``(ny, nx)``; rows run along ``y``."""
        xs = np.linspace(self.x_min, self.x_max, self.nx)
        ys = np.linspace(self.y_min, self.y_max, self.ny)
        return xs[None, :] + 1j * ys[:, None]

    @property
    def box(self) -> tuple[float, float, float, float]:
        return (self.x_min, self.x_max, self.y_min, self.y_max)


@dataclass(frozen=True)
class FieldGrid:
    """Sampled fields; masked nodes hold NaN and are never written as values."""

    spec: GridSpec
    velocity: np.ndarray
    speed: np.ndarray
    psi: np.ndarray
    mask: np.ndarray

    def rows(self):
        z = self.spec.nodes()
        for iy in range(self.spec.ny):
            for ix in range(self.spec.nx):
                code = int(self.mask[iy, ix])
                if code == EXTERIOR:
                    w = self.velocity[iy, ix]
                    vals = (w.real, w.imag, self.speed[iy, ix], self.psi[iy, ix])
                else:
                    vals = (None, None, None, None)
                yield (z[iy, ix].real, z[iy, ix].imag, *vals, MASK_LABELS[code])


def sample_field(pot: ComplexPotential, spec: GridSpec) -> FieldGrid:
    z = spec.nodes()
    mask = pot.classify(z)
    velocity = np.full(z.shape, np.nan, dtype=complex)
    psi = np.full(z.shape, np.nan)

    def row(iy):
        ext = mask[iy] == EXTERIOR
        if not np.any(ext):
            return iy, None, None
        pts = z[iy][ext]
        return iy, np.conj(pot.derivative(pts, check=False)), pot.potential(pts, check=False).imag

    for iy, vel, ps in parallel_map(row, range(spec.ny)):
        if vel is None:
            continue
        ext = mask[iy] == EXTERIOR
        velocity[iy, ext] = vel
        psi[iy, ext] = ps
    speed = np.abs(velocity)
    return FieldGrid(spec, velocity, speed, psi, mask)


def default_box(pot: ComplexPotential, margin: float = 0.5):
    x0, x1, y0, y1 = pot.geom.bounding_box()
    pad = margin * pot.geom.diameter
    return (x0 - pad, x1 + pad, y0 - pad, y1 + pad)


def trace_streamline(pot: ComplexPotential, seed: complex, step: float, max_steps: int,
                     box=None) -> np.ndarray:
    """RK4 integration of the unit-speed direction field from ``seed``.

    Stops on leaving ``box``, approaching a contour, ``|velocity| < 1e-10`` or
    after ``max_steps`` steps.  Returns the complex polyline including the seed.
    """
    seed = complex(seed)
    if pot.classify(seed) != EXTERIOR:
        raise SeedInvalid(f"seed {seed} is not in the resolved flow domain")
    xmin, xmax, ymin, ymax = box if box is not None else default_box(pot)

    def direction(z):
        w = np.conj(pot.derivative(z, check=False))
        mag = abs(w)
        return None if mag < 1e-10 else w / mag

    points = [seed]
    z = seed
    for _ in range(max_steps):
        k1 = direction(z)
        if k1 is None:
            break
        k2 = direction(z + 0.5 * step * k1)
        k3 = direction(z + 0.5 * step * k2) if k2 is not None else None
        k4 = direction(z + step * k3) if k3 is not None else None
        if k4 is None:
            break
        z_new = z + step / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        if not (xmin <= z_new.real <= xmax and ymin <= z_new.imag <= ymax):
            break
        if pot.classify(z_new) != EXTERIOR:
            break
        points.append(z_new)
        z = z_new
    return np.array(points)


def auto_seeds(pot: ComplexPotential, box, count: int) -> list[complex]:
    """``count`` seeds spread over the box edge facing into the far-field velocity."""
    xmin, xmax, ymin, ymax = box
    v = pot.config.velocity
    if v == 0:
        v = 1.0
    inset = 1e-9 * max(xmax - xmin, ymax - ymin)
    frac = (np.arange(count) + 0.5) / count
    # outward normals of the four edges; upstream edge has the most negative v . n
    edges = {
        "left": (-1.0, lambda f: complex(xmin + inset, ymin + f * (ymax - ymin))),
        "right": (1.0, lambda f: complex(xmax - inset, ymin + f * (ymax - ymin))),
        "bottom": (-1.0j, lambda f: complex(xmin + f * (xmax - xmin), ymin + inset)),
        "top": (1.0j, lambda f: complex(xmin + f * (xmax - xmin), ymax - inset)),
    }
    name = min(edges, key=lambda k: (v * np.conj(edges[k][0])).real)
    return [edges[name][1](f) for f in frac]


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def _io_error(path, exc):
    return OutputError(f"cannot write {path}: {exc}")


def write_field(field: FieldGrid, path, fmt: str) -> None:
    if fmt not in FORMATS:
        raise ConfigError(f"unknown format {fmt!r}; choose from {FORMATS}")
    path = Path(path)
    try:
        if fmt == "csv":
            with path.open("w", newline="") as fh:
                writer = csv.writer(fh, lineterminator="\n")
                writer.writerow(COLUMNS)
                for row in field.rows():
                    writer.writerow([_fmt(v) for v in row[:-1]] + [row[-1]])
        else:
            doc = {
                "spec": asdict(field.spec),
                "columns": list(COLUMNS),
                "rows": [list(r) for r in field.rows()],
            }
            path.write_text(json.dumps(doc) + "\n")
    except OSError as exc:
        raise _io_error(path, exc) from exc


def read_field(path, fmt: str) -> list[tuple]:
    """Parse a written field back into ``(x, y, u, v, speed, psi, mask)`` tuples."""
    path = Path(path)
    if fmt == "csv":
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            header = next(reader)
            if tuple(header) != COLUMNS:
                raise ConfigError(f"unexpected CSV header {header}")
            return [tuple(float(v) if v != "" else None for v in r[:-1]) + (r[-1],) for r in reader]
    doc = json.loads(path.read_text())
    return [tuple(r) for r in doc["rows"]]


def write_streamlines(lines, path) -> None:
    """``lines`` is a list of ``(seed, polyline)`` pairs; written as JSON."""
    doc = [
        {
            "seed": [float(np.real(seed)), float(np.imag(seed))],
            "points": [[float(p.real), float(p.imag)] for p in poly],
        }
        for seed, poly in lines
    ]
    path = Path(path)
    try:
        path.write_text(json.dumps(doc) + "\n")
    except OSError as exc:
        raise _io_error(path, exc) from exc
