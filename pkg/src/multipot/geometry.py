"""Boundary contours given as two-sided trigonometric polynomials.

A contour is ``z(t) = sum_k d_k exp(i k t)`` for ``t`` in ``[0, 2*pi)``.
Contours must be simple, traced counterclockwise, and pairwise disjoint;
the flow domain is the unbounded region outside all of them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np
import shapely
from shapely.geometry import LinearRing, Polygon

from .errors import (
    CuspAtParameter,
    GeometryError,
    NoInteriorPoint,
    PointOnBoundary,
)

TWO_PI = 2.0 * np.pi

# Validation sample sizes.
POLYLINE_SAMPLES = 1024
CUSP_SAMPLES = 4096
CUSP_RATIO = 1e-6


def uniform_grid(n: int) -> np.ndarray:
    """Nodes ``2*pi*j/n``, ``j = 0..n-1``."""
    return TWO_PI * np.arange(n) / n


@dataclass(frozen=True)
class TrigCurve:
    """Closed curve ``z(t) = sum_k d_k e^{ikt}``.

    ``coeffs`` maps integer harmonics to complex coefficients. Zero
    coefficients are dropped on construction.
    """

    coeffs: Mapping[int, complex]
    _k: np.ndarray = field(init=False, repr=False, compare=False)
    _d: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        items = sorted((int(k), complex(d)) for k, d in dict(self.coeffs).items() if d != 0)
        if not any(k != 0 for k, _ in items):
            raise GeometryError("curve needs at least one nonzero harmonic with k != 0")
        object.__setattr__(self, "coeffs", dict(items))
        object.__setattr__(self, "_k", np.array([k for k, _ in items], dtype=float))
        object.__setattr__(self, "_d", np.array([d for _, d in items], dtype=complex))

    @classmethod
    def circle(cls, radius: float = 1.0, center: complex = 0.0) -> "TrigCurve":
        return cls({0: center, 1: radius})

    @classmethod
    def ellipse(cls, a: complex, b: complex, center: complex = 0.0) -> "TrigCurve":
        """``center + a e^{it} + b e^{-it}``; counterclockwise when ``|a| > |b|``."""
        return cls({0: center, 1: a, -1: b})

    @property
    def mean(self) -> complex:
        """The constant coefficient ``d_0``."""
        return self.coeffs.get(0, 0j)

    def point(self, t):
        t = np.asarray(t, dtype=float)
        return np.exp(1j * np.multiply.outer(t, self._k)) @ self._d

    def derivative(self, t, order: int = 1):
        t = np.asarray(t, dtype=float)
        weights = (1j * self._k) ** order * self._d
        return np.exp(1j * np.multiply.outer(t, self._k)) @ weights

    def sample(self, n: int = POLYLINE_SAMPLES) -> np.ndarray:
        return self.point(uniform_grid(n))

    def shifted(self, offset: complex) -> "TrigCurve":
        c = dict(self.coeffs)
        c[0] = c.get(0, 0j) + offset
        return TrigCurve(c)

    def scaled(self, factor: complex) -> "TrigCurve":
        """Multiply by ``factor`` about the origin (scaling plus rotation)."""
        return TrigCurve({k: factor * d for k, d in self.coeffs.items()})

    @property
    def max_speed(self) -> float:
        """``max |z'(t)|`` over a dense sample."""
        return float(np.abs(self.derivative(uniform_grid(CUSP_SAMPLES))).max())

    @property
    def min_speed(self) -> float:
        return float(np.abs(self.derivative(uniform_grid(CUSP_SAMPLES))).min())

    @property
    def is_cusped(self) -> bool:
        speed = np.abs(self.derivative(uniform_grid(CUSP_SAMPLES)))
        return bool(speed.min() < CUSP_RATIO * speed.max())

    @property
    def diameter(self) -> float:
        pts = self.sample(512)
        return float(np.abs(pts[:, None] - pts[None, :]).max())

    @property
    def signed_area(self) -> float:
        """Area enclosed, positive for counterclockwise tracing.

        Exact for trigonometric polynomials: ``pi * sum_k k |d_k|^2``.
        """
        return float(np.pi * np.sum(self._k * np.abs(self._d) ** 2))


def curve_point(curve: TrigCurve, t):
    return curve.point(t)


def curve_derivative(curve: TrigCurve, t, order: int = 1):
    if order not in (1, 2, 3):
        raise ValueError("order must be 1, 2 or 3")
    return curve.derivative(t, order)


def boundary_distance(curve: TrigCurve, z, n: int = CUSP_SAMPLES) -> np.ndarray:
    """Distance from points ``z`` to a dense polyline approximation of ``curve``."""
    return polyline_distance(curve.sample(n), z)


def polyline_distance(a: np.ndarray, z) -> np.ndarray:
    """Distance from points ``z`` to the closed polyline with vertices ``a``."""
    z = np.asarray(z, dtype=complex)
    ring = shapely.LinearRing(np.column_stack([a.real, a.imag]))
    flat = np.atleast_1d(z).ravel()
    out = shapely.distance(ring, shapely.points(flat.real, flat.imag))
    return np.asarray(out, dtype=float).reshape(np.atleast_1d(z).shape)


def _boundary_tolerance(curve: TrigCurve) -> float:
    return 1e-9 * curve.diameter


def winding_number(curve: TrigCurve, z: complex) -> int:
    """Winding number of ``curve`` about ``z`` from the argument-principle integral."""
    dist = float(boundary_distance(curve, z)[0])
    if dist < _boundary_tolerance(curve):
        raise PointOnBoundary(f"point {z} lies on the contour (distance {dist:.3e})")
    # trapezoid error ~ exp(-n d / |z'|); ten node spacings inside d is ample
    n = 1024
    needed = 10.0 * TWO_PI * curve.max_speed / dist
    while n < needed and n < 2**22:
        n *= 2
    t = uniform_grid(n)
    integrand = curve.derivative(t) / (curve.point(t) - z)
    value = integrand.sum() * (TWO_PI / n) / (TWO_PI * 1j)
    return int(round(value.real))


def winding_numbers(curve: TrigCurve, z, n: int = 1024) -> np.ndarray:
    """Vectorized winding numbers; only reliable away from the boundary."""
    z = np.asarray(z, dtype=complex)
    t = uniform_grid(n)
    pts = curve.point(t)
    dz = curve.derivative(t)
    flat = z.ravel()
    out = np.empty(flat.shape, dtype=int)
    chunk = max(1, 2**21 // n)
    for start in range(0, flat.size, chunk):
        zz = flat[start:start + chunk, None]
        val = (dz / (pts - zz)).sum(axis=1) / n / 1j
        out[start:start + chunk] = np.rint(val.real).astype(int)
    return out.reshape(z.shape)


def _polygon_centroid(pts: np.ndarray) -> complex:
    x, y = pts.real, pts.imag
    x1, y1 = np.roll(x, -1), np.roll(y, -1)
    cross = x * y1 - x1 * y
    area = cross.sum() / 2.0
    cx = ((x + x1) * cross).sum() / (6.0 * area)
    cy = ((y + y1) * cross).sum() / (6.0 * area)
    return complex(cx, cy)


def interior_point(curve: TrigCurve) -> complex:
    """A point enclosed by ``curve``: ``d_0`` if it qualifies, else the polygon centroid."""
    for candidate in (curve.mean, _polygon_centroid(curve.sample(POLYLINE_SAMPLES))):
        try:
            if winding_number(curve, candidate) == 1:
                return complex(candidate)
        except PointOnBoundary:
            continue
    raise NoInteriorPoint("neither d_0 nor the polygon centroid lies inside the contour")


def curvature(curve: TrigCurve, t):
    """Signed curvature ``Im(conj(z') z'') / |z'|^3``."""
    d1 = curve.derivative(t, 1)
    d2 = curve.derivative(t, 2)
    speed = np.abs(d1)
    if np.any(speed <= CUSP_RATIO * curve.max_speed):
        raise CuspAtParameter(f"|z'| vanishes at t={t}")
    k = (np.conj(d1) * d2).imag / speed**3
    return float(k) if np.ndim(k) == 0 else k


@dataclass(frozen=True)
class Geometry:
    """Contours ``L_1..L_n`` with one interior point per contour."""

    curves: tuple
    interior_points: tuple

    def __len__(self):
        return len(self.curves)

    @property
    def diameter(self) -> float:
        pts = np.concatenate([c.sample(256) for c in self.curves])
        return float(np.abs(pts[:, None] - pts[None, :]).max())

    @property
    def max_speed(self) -> float:
        return max(c.max_speed for c in self.curves)

    def bounding_box(self) -> tuple[float, float, float, float]:
        pts = np.concatenate([c.sample(POLYLINE_SAMPLES) for c in self.curves])
        return (float(pts.real.min()), float(pts.real.max()),
                float(pts.imag.min()), float(pts.imag.max()))


def build_geometry(
    curves: Sequence[TrigCurve],
    interior_points: Sequence[complex] | None = None,
    validate: bool = True,
) -> Geometry:
    """Assemble and (by default) validate a multiply connected geometry.

    Simplicity and disjointness are checked on 1024-point polylines, which is
    a heuristic: features finer than the sample spacing go unnoticed.
    """
    curves = tuple(curves)
    if not curves:
        raise GeometryError("at least one contour is required")
    if validate:
        for s, curve in enumerate(curves):
            _validate_curve(s, curve)
    if interior_points is None:
        interior_points = [interior_point(c) for c in curves]
    points = tuple(complex(z) for z in interior_points)
    if len(points) != len(curves):
        raise GeometryError("need exactly one interior point per contour")
    geom = Geometry(curves, points)
    if validate:
        validate_geometry(geom)
    return geom


def _validate_curve(s: int, curve: TrigCurve) -> LinearRing:
    if curve.signed_area <= 0:
        raise GeometryError(
            f"contour {s} is traced clockwise; the solver expects counterclockwise contours"
        )
    pts = curve.sample(POLYLINE_SAMPLES)
    ring = LinearRing(np.column_stack([pts.real, pts.imag]))
    if not ring.is_simple:
        raise GeometryError(f"contour {s} self-intersects")
    return ring


def validate_geometry(geom: Geometry) -> None:
    rings = [Polygon(_validate_curve(s, curve)) for s, curve in enumerate(geom.curves)]
    for s, curve in enumerate(geom.curves):
        for k, z in enumerate(geom.interior_points):
            expected = 1 if k == s else 0
            try:
                w = winding_number(curve, z)
            except PointOnBoundary:
                raise GeometryError(f"interior point {k} lies on contour {s}") from None
            if w != expected:
                raise GeometryError(
                    f"interior point {k} has winding number {w} about contour {s}, expected {expected}"
                )
    for s in range(len(rings)):
        for k in range(s + 1, len(rings)):
            if rings[s].intersects(rings[k]):
                raise GeometryError(f"contours {s} and {k} intersect or are nested")
