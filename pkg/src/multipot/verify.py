"""Physical invariants of a computed potential, reported as PASS/FAIL checks."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .potential import ComplexPotential, loop_integral, probe_loop_values

BOUNDARY_OFFSET = 1e-3
BOUNDARY_TOL = 5e-4
CIRCULATION_REL_TOL = 1e-4
CIRCULATION_ABS_TOL = 1e-6
FAR_FIELD_MIN_EXPONENT = 0.9


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    value: float
    limit: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f"  {self.detail}" if self.detail else ""
        return f"{status} {self.name}: value={self.value:.6g} limit={self.limit:.6g}{extra}"


def _speed_scale(pot: ComplexPotential) -> float:
    return abs(pot.config.velocity) or pot.velocity_scale or 1.0


def wall_stream_spread(pot: ComplexPotential, s: int, rel_offset: float = BOUNDARY_OFFSET,
                       n: int = 128) -> tuple[float, float]:
    """Spread of the stream function extrapolated to contour ``s``.

    Two offset loops (``d`` and ``2d``) give ``2 psi(d) - psi(2d)``, which
    removes the ``d * tangential speed`` term a single loop picks up.
    Returns ``(extrapolated spread, single-loop spread)``.
    """
    near = probe_loop_values(pot, s, rel_offset, n)
    far = probe_loop_values(pot, s, 2 * rel_offset, n)
    return float(np.ptp(2 * near - far)), float(np.ptp(near))


def boundary_constancy(pot: ComplexPotential, s: int) -> Check:
    diam = pot.geom.curves[s].diameter
    spread, raw = wall_stream_spread(pot, s)
    rel = spread / (_speed_scale(pot) * diam)
    return Check(f"boundary_constancy[{s}]", rel < BOUNDARY_TOL, rel, BOUNDARY_TOL,
                 f"single_loop={raw / (_speed_scale(pot) * diam):.3e}")


def circulation(pot: ComplexPotential, s: int) -> Check:
    target = pot.config.circulations_for(len(pot.geom))[s]
    got = loop_integral(pot, s).real
    if target == 0:
        limit = CIRCULATION_ABS_TOL * (1 + abs(pot.config.velocity) * pot.geom.curves[s].diameter)
        err = abs(got)
    else:
        limit = CIRCULATION_REL_TOL
        err = abs(got - target) / abs(target)
    return Check(f"circulation[{s}]", err <= limit, err, limit,
                 f"computed={got:.10g} configured={target:.10g}")


def flux(pot: ComplexPotential, s: int) -> Check:
    value = abs(loop_integral(pot, s).imag)
    limit = 1e-6 * (1 + abs(pot.config.velocity) * pot.geom.curves[s].diameter)
    return Check(f"zero_flux[{s}]", value <= limit, value, limit)


def far_field_exponent(pot: ComplexPotential, decades: float = 2.0, samples: int = 9,
                       angles: int = 8) -> tuple[float, np.ndarray, np.ndarray]:
    """Fitted decay exponent of ``max_theta |velocity(R e^{i theta}) - v|``.

    ``R`` runs log-uniformly over ``[10, 10 * 10**decades]`` geometry diameters
    around the bounding-box centre.
    """
    x0, x1, y0, y1 = pot.geom.bounding_box()
    centre = complex(0.5 * (x0 + x1), 0.5 * (y0 + y1))
    diam = pot.geom.diameter
    radii = diam * np.logspace(1, 1 + decades, samples)
    theta = 2 * np.pi * np.arange(angles) / angles
    pts = centre + radii[:, None] * np.exp(1j * theta)[None, :]
    dev = np.abs(pot.velocity(pts, check=False) - pot.config.velocity).max(axis=1)
    floor = 1e-13 * max(_speed_scale(pot), 1e-300)
    if np.all(dev <= floor):
        return np.inf, radii, dev
    use = dev > floor
    slope = np.polyfit(np.log(radii[use]), np.log(dev[use]), 1)[0]
    return -float(slope), radii, dev


def far_field(pot: ComplexPotential) -> Check:
    exponent, _, dev = far_field_exponent(pot)
    return Check("far_field", exponent >= FAR_FIELD_MIN_EXPONENT, exponent, FAR_FIELD_MIN_EXPONENT,
                 f"max_deviation={dev.max():.3e}")


def run_invariants(pot: ComplexPotential) -> list[Check]:
    checks = []
    for s in range(len(pot.geom)):
        checks.append(boundary_constancy(pot, s))
        checks.append(circulation(pot, s))
        checks.append(flux(pot, s))
    checks.append(far_field(pot))
    return checks
