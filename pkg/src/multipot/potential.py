"""Evaluation of the complex potential and derived flow quantities.

The potential is

    phi(z) = CAUCHY_SIGN * sum_s (1/2 pi i) int psi_s(theta) z_s'(theta) / (z_s(theta) - z) dtheta
             + conj(v) z + sum_s c_s log(z - z*_s),

with ``psi_s = p~_s + i q_s + q0_s`` the boundary values of the analytic part.
For counterclockwise contours the Cauchy integral of exterior boundary values
equals ``psi(inf) - psi(z)`` off the boundary, hence the negative sign.
The velocity is ``conj(phi'(z))``.
"""

from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from .errors import NearBoundary, PointInsideObstacle
from .flow import FlowConfig
from .geometry import CUSP_SAMPLES, TWO_PI, Geometry, polyline_distance, uniform_grid
from .kernels import boundary_q
from .solver import BoundaryDensity
from .spectral import synthesize

CAUCHY_SIGN = -1.0

EXTERIOR, OBSTACLE, NEAR_BOUNDARY = 0, 1, 2
MASK_LABELS = {EXTERIOR: "exterior", OBSTACLE: "obstacle", NEAR_BOUNDARY: "near_boundary"}

# Trapezoid error for a pole at distance d decays like exp(-N d / |z'|); five
# node spacings keep it near machine precision.
NEAR_FACTOR = 5.0
MAX_EVAL_N = 2**18
_CHUNK = 2**21


class ComplexPotential:
    """Evaluable potential for a solved geometry.  Treat as immutable."""

    def __init__(self, geom: Geometry, config: FlowConfig, density: BoundaryDensity,
                 eval_n: int | None = None):
        self.geom = geom
        self.config = config
        self.density = density
        self.eval_n = int(eval_n or config.eval_n)
        n = len(geom)
        self.c = config.log_coefficients(n)
        nodes = uniform_grid(self.eval_n)
        self._nodes = nodes
        self._zeta = [curve.point(nodes) for curve in geom.curves]
        self._dzeta = [curve.derivative(nodes) for curve in geom.curves]
        self._psi = [
            density.values(s, nodes, boundary_q(config, geom, s, nodes)) for s in range(n)
        ]
        self._speed = np.array([curve.max_speed for curve in geom.curves])
        self._polylines = [curve.sample(CUSP_SAMPLES) for curve in geom.curves]

    def with_eval_n(self, eval_n: int) -> "ComplexPotential":
        return ComplexPotential(self.geom, self.config, self.density, eval_n)

    @property
    def velocity_scale(self) -> float:
        """Characteristic speed ``|v| + sum |Gamma| / (2 pi diameter)``."""
        gam = np.abs(self.config.circulations_for(len(self.geom))).sum()
        return abs(self.config.velocity) + gam / (TWO_PI * self.geom.diameter)

    def near_threshold(self, eval_n: int | None = None) -> np.ndarray:
        """Per-contour distance below which ``eval_n`` nodes are too coarse."""
        n = eval_n or self.eval_n
        return NEAR_FACTOR * (TWO_PI / n) * self._speed

    def required_eval_n(self, z) -> int:
        """Smallest power-of-two node count (>= current) that resolves all of ``z``."""
        z = np.asarray(z, dtype=complex)
        need = self.eval_n
        for s, poly in enumerate(self._polylines):
            d = polyline_distance(poly, z).min()
            if d <= 0:
                raise NearBoundary("point lies on a contour")
            while NEAR_FACTOR * (TWO_PI / need) * self._speed[s] > d:
                need *= 2
                if need > MAX_EVAL_N:
                    raise NearBoundary(f"point at distance {d:.3e} needs more than {MAX_EVAL_N} nodes")
        return need

    def refined_for(self, z) -> "ComplexPotential":
        need = self.required_eval_n(z)
        return self if need == self.eval_n else self.with_eval_n(need)

    def classify(self, z) -> np.ndarray:
        """Mask codes: EXTERIOR, OBSTACLE or NEAR_BOUNDARY per point."""
        z = np.asarray(z, dtype=complex)
        threshold = self.near_threshold()
        flat = np.atleast_1d(z).ravel()
        out = np.full(flat.shape, EXTERIOR, dtype=int)
        for s, poly in enumerate(self._polylines):
            # only points in the padded bounding box can be near or inside contour s
            pad = threshold[s]
            cand = ((flat.real >= poly.real.min() - pad) & (flat.real <= poly.real.max() + pad)
                    & (flat.imag >= poly.imag.min() - pad) & (flat.imag <= poly.imag.max() + pad))
            idx = np.flatnonzero(cand & (out == EXTERIOR))
            if idx.size == 0:
                continue
            near = polyline_distance(poly, flat[idx]) < pad
            out[idx[near]] = NEAR_BOUNDARY
            far = idx[~near]
            if far.size:
                out[far[self._winding(s, flat[far]) != 0]] = OBSTACLE
        return out.reshape(z.shape)

    def _winding(self, s: int, z) -> np.ndarray:
        """Winding numbers of contour ``s``; accurate beyond the near threshold."""
        flat = np.ravel(z)
        zeta, dzeta = self._zeta[s], self._dzeta[s]
        out = np.empty(flat.shape, dtype=int)
        chunk = max(1, _CHUNK // self.eval_n)
        for start in range(0, flat.size, chunk):
            zz = flat[start:start + chunk, None]
            val = (dzeta / (zeta - zz)).sum(axis=1) / (1j * self.eval_n)
            out[start:start + chunk] = np.rint(val.real).astype(int)
        return out.reshape(np.shape(z))

    def _check(self, z):
        codes = self.classify(z)
        if np.any(codes == OBSTACLE):
            raise PointInsideObstacle("evaluation point lies inside an obstacle")
        if np.any(codes == NEAR_BOUNDARY):
            raise NearBoundary(
                f"evaluation point closer than the quadrature resolves (eval_n={self.eval_n}); "
                "retry with a larger eval_n"
            )

    def _cauchy(self, z, power: int):
        """``sum_s (1/2 pi i) int psi z' / (z_s - z)^power dtheta`` by the trapezoid rule."""
        flat = np.ravel(z)
        out = np.zeros(flat.shape, dtype=complex)
        w = 1.0 / (1j * self.eval_n)
        chunk = max(1, _CHUNK // self.eval_n)
        for zeta, dzeta, psi in zip(self._zeta, self._dzeta, self._psi):
            num = psi * dzeta * w
            for start in range(0, flat.size, chunk):
                zz = flat[start:start + chunk, None]
                out[start:start + chunk] += (num / (zeta - zz) ** power).sum(axis=1)
        return out.reshape(np.shape(z))

    def _closed_form(self, z):
        value = np.conj(self.config.velocity) * z
        for c, zstar in zip(self.c, self.geom.interior_points):
            if c:
                value = value + c * np.log(z - zstar)
        return value

    def _closed_form_derivative(self, z):
        value = np.conj(self.config.velocity) + 0 * z
        for c, zstar in zip(self.c, self.geom.interior_points):
            if c:
                value = value + c / (z - zstar)
        return value

    def potential(self, z, check: bool = True):
        z = np.asarray(z, dtype=complex)
        if check:
            self._check(z)
        value = CAUCHY_SIGN * self._cauchy(z, 1) + self._closed_form(z)
        return complex(value) if value.ndim == 0 else value

    def derivative(self, z, check: bool = True):
        """``dphi/dz``."""
        z = np.asarray(z, dtype=complex)
        if check:
            self._check(z)
        value = CAUCHY_SIGN * self._cauchy(z, 2) + self._closed_form_derivative(z)
        return complex(value) if value.ndim == 0 else value

    def velocity(self, z, check: bool = True):
        return np.conj(self.derivative(z, check=check))

    def tangential_rate(self, s: int, t):
        """``d/dt phi(z_s(t))`` on contour ``s``: real, zero at boundary stagnation points."""
        curve = self.geom.curves[s]
        dz = curve.derivative(t)
        z = curve.point(t)
        value = np.conj(self.config.velocity) * dz
        for c, zstar in zip(self.c, self.geom.interior_points):
            if c:
                value = value + c * dz / (z - zstar)
        return value.real + synthesize(self.density.contours[s].p_prime, t)


def eval_potential(pot: ComplexPotential, z):
    return pot.potential(z)


def eval_velocity(pot: ComplexPotential, z):
    return pot.velocity(z)


def stream_function(pot: ComplexPotential, z):
    return np.imag(pot.potential(z))


def offset_loop(curve, offset: float, n: int):
    """Points and parameter derivatives of ``z(t) + offset * outward_normal(t)``."""
    t = uniform_grid(n)
    d1 = curve.derivative(t)
    d2 = curve.derivative(t, 2)
    unit = d1 / np.abs(d1)
    turn = (d2 / d1).imag  # d/dt arg z'
    points = curve.point(t) - 1j * offset * unit
    dpoints = d1 + offset * turn * unit
    return points, dpoints


def probe_loop_values(pot: ComplexPotential, s: int, rel_offset: float = 1e-3, n: int = 128):
    """Stream function on an outward offset loop around contour ``s``."""
    curve = pot.geom.curves[s]
    pts, _ = offset_loop(curve, rel_offset * curve.diameter, n)
    local = pot.refined_for(pts)
    return np.imag(local.potential(pts))


def loop_integral(pot: ComplexPotential, s: int, rel_offset: float = 0.02, n: int = 2048) -> complex:
    """``oint phi'(z) dz`` on an offset loop: real part circulation, imaginary part flux."""
    curve = pot.geom.curves[s]
    pts, dpts = offset_loop(curve, rel_offset * curve.diameter, n)
    local = pot.refined_for(pts)
    return complex((local.derivative(pts) * dpts).sum() * TWO_PI / n)


def circulation_check(pot: ComplexPotential, s: int, rel_offset: float = 0.02) -> float:
    return loop_integral(pot, s, rel_offset).real


def boundary_stagnation_points(pot: ComplexPotential, s: int, samples: int = 4096) -> list[complex]:
    """Zeros of the tangential velocity on contour ``s``, located by bracketing."""
    if pot.velocity_scale < 1e-12:
        return []
    t = uniform_grid(samples)
    g = pot.tangential_rate(s, t)
    roots = []
    scale = np.abs(g).max()
    for i in range(samples):
        a, b = t[i], t[i] + TWO_PI / samples
        ga, gb = g[i], g[(i + 1) % samples]
        if ga == 0.0:
            roots.append(a)
        elif ga * gb < 0.0:
            roots.append(brentq(lambda x: float(pot.tangential_rate(s, x)), a, b, xtol=1e-15))
    if scale == 0.0:
        return []
    return [complex(pot.geom.curves[s].point(r)) for r in roots]


def _newton(pot: ComplexPotential, z0: complex, tol: float, max_iter: int = 50):
    h = 1e-5 * pot.geom.diameter
    z = z0
    fz = pot.derivative(z, check=False)
    for _ in range(max_iter):
        if abs(fz) < tol:
            return z, abs(fz)
        d2 = (pot.derivative(z + h, check=False) - pot.derivative(z - h, check=False)) / (2 * h)
        if d2 == 0:
            break
        step = fz / d2
        for _ in range(20):
            cand = z - step
            if pot.classify(cand) != EXTERIOR:
                step *= 0.5
                continue
            fc = pot.derivative(cand, check=False)
            if abs(fc) < abs(fz):
                break
            step *= 0.5
        else:
            break
        if pot.classify(cand) != EXTERIOR:
            break
        z, fz = cand, fc
    return z, abs(fz)


def find_stagnation_points(pot: ComplexPotential, box, resolution: int = 40) -> list[complex]:
    """Stagnation points inside ``box = (xmin, xmax, ymin, ymax)``.

    Points on the contours come from the tangential velocity; points in the
    open flow from a grid scan of ``|phi'|`` followed by damped Newton.
    """
    xmin, xmax, ymin, ymax = box
    scale = pot.velocity_scale
    if scale < 1e-12:
        return []
    found = []
    for s in range(len(pot.geom)):
        for z in boundary_stagnation_points(pot, s):
            if xmin <= z.real <= xmax and ymin <= z.imag <= ymax:
                found.append(z)

    xs = np.linspace(xmin, xmax, resolution)
    ys = np.linspace(ymin, ymax, resolution)
    grid = xs[None, :] + 1j * ys[:, None]
    codes = pot.classify(grid)
    speed = np.full(grid.shape, np.inf)
    ext = codes == EXTERIOR
    if np.any(ext):
        speed[ext] = np.abs(pot.derivative(grid[ext], check=False))
    padded = np.pad(speed, 1, constant_values=np.inf)
    minima = []
    for i in range(resolution):
        for j in range(resolution):
            if not ext[i, j]:
                continue
            window = padded[i:i + 3, j:j + 3]
            if speed[i, j] <= window.min():
                minima.append(grid[i, j])
    tol = 1e-10 * max(abs(pot.config.velocity), 1e-12)
    accept = 1e-8 * max(abs(pot.config.velocity), 1e-12)
    merge = 1e-6 * pot.geom.diameter
    for z0 in minima:
        z, res = _newton(pot, complex(z0), tol)
        if res < accept and xmin <= z.real <= xmax and ymin <= z.imag <= ymax:
            found.append(z)
    unique: list[complex] = []
    for z in found:
        if all(abs(z - u) > merge for u in unique):
            unique.append(z)
    return unique
