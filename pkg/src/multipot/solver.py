"""Truncated Fourier-Galerkin system for the boundary density.

Unknowns are the cos/sin coefficients of ``p_s'(t)``, the derivative of the
real part of the unknown analytic function on contour ``s``.  Each contour
owns a block ``[alpha_1..alpha_M, beta_1..beta_M]``; blocks follow contour
order.  The arg kernel ``K`` enters the matrix, the log kernel ``L`` only the
right-hand side.
"""

from __future__ import annotations

import logging
import time
import warnings
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ._parallel import parallel_map
from .errors import FlowError, SingularConstantSystem, SingularMatrix, SolverError
from .flow import FlowConfig
from .geometry import TWO_PI, Geometry, uniform_grid
from .kernels import boundary_q, boundary_q_prime, kernel_grid_K, rhs_Q
from .spectral import TrigPoly, analyze, antiderivative, galerkin_block, synthesize

log = logging.getLogger(__name__)

# Sign of the K-projection in the Galerkin matrix.  For counterclockwise
# contours around holes of an exterior domain the boundary relation reads
# p' + (1/pi) int p' K = Q.
KERNEL_SIGN = +1.0


@dataclass(frozen=True)
class GalerkinSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    m: int
    n_contours: int

    def block(self, row_contour: int, col_contour: int) -> np.ndarray:
        w = 2 * self.m
        return self.matrix[row_contour * w:(row_contour + 1) * w, col_contour * w:(col_contour + 1) * w]


@dataclass(frozen=True)
class SolveReport:
    solution: np.ndarray
    residual: float
    condition_estimate: float


@dataclass(frozen=True)
class ContourDensity:
    p_prime: TrigPoly
    p_tilde: TrigPoly
    q_samples: np.ndarray
    q0: complex


@dataclass(frozen=True)
class BoundaryDensity:
    """Boundary values ``psi_s = p~_s + i q_s + q0_s`` for every contour."""

    contours: tuple
    n: int
    diagnostics: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.contours)

    def values(self, s: int, t, q_values) -> np.ndarray:
        c = self.contours[s]
        return synthesize(c.p_tilde, t) + 1j * np.asarray(q_values) + c.q0


def assemble(config: FlowConfig, geom: Geometry) -> GalerkinSystem:
    m, n = config.m, config.quadrature_n
    nc = len(geom)
    nodes = uniform_grid(n)
    q_prime = [boundary_q_prime(config, geom, s, nodes) for s in range(nc)]

    def block(pair):
        sigma, s = pair
        return pair, galerkin_block(kernel_grid_K(geom, sigma, s, n), m)

    w = 2 * m
    matrix = np.eye(nc * w)
    for (sigma, s), b in parallel_map(block, [(sg, s) for s in range(nc) for sg in range(nc)]):
        matrix[s * w:(s + 1) * w, sigma * w:(sigma + 1) * w] += KERNEL_SIGN * b

    rhs = np.empty(nc * w)
    for s in range(nc):
        poly = analyze(rhs_Q(config, geom, s, n, q_prime=q_prime), m)
        rhs[s * w:s * w + m] = poly.cos_coeffs
        rhs[s * w + m:(s + 1) * w] = poly.sin_coeffs
    return GalerkinSystem(matrix, rhs, m, nc)


def solve_dense(system: GalerkinSystem | tuple) -> SolveReport:
    """Pivoted LU solve with residual and one-norm condition estimate."""
    if isinstance(system, GalerkinSystem):
        a, b = system.matrix, system.rhs
    else:
        a, b = system
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or b.shape != (a.shape[0],):
        raise SolverError(f"incompatible system shapes {a.shape} and {b.shape}")
    if not (np.isfinite(a).all() and np.isfinite(b).all()):
        raise SolverError("system contains non-finite entries")
    with warnings.catch_warnings():
        # exact zero pivots are reported below as SingularMatrix
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(a, check_finite=False)
    scale = np.abs(a).max() if a.size else 1.0
    pivots = np.abs(np.diag(lu))
    if pivots.size and pivots.min() < 1e-14 * scale:
        raise SingularMatrix(f"pivot {pivots.min():.3e} below 1e-14 * {scale:.3e}")
    x = scipy.linalg.lu_solve((lu, piv), b, check_finite=False)
    anorm = np.abs(a).sum(axis=0).max()
    rcond, _ = scipy.linalg.lapack.dgecon(lu, anorm, norm="1")
    cond = 1.0 / rcond if rcond > 0 else np.inf
    bnorm = np.linalg.norm(b)
    residual = float(np.linalg.norm(a @ x - b) / bnorm) if bnorm > 0 else float(np.linalg.norm(a @ x))
    log.debug("dense solve: size=%d residual=%.3e cond~%.3e", a.shape[0], residual, cond)
    return SolveReport(x, residual, float(cond))


def _cauchy_moments(geom: Geometry, p_tilde, q_samples, k: int, n: int):
    """``(1/2 pi i) int F_s(tau) [log(z_s(tau) - z*_k)]' dtau`` for density and unit constants."""
    nodes = uniform_grid(n)
    zstar = geom.interior_points[k]
    density_part = 0j
    unit = np.empty(len(geom), dtype=complex)
    for s, curve in enumerate(geom.curves):
        weight = curve.derivative(nodes) / (curve.point(nodes) - zstar) / n / 1j
        f = synthesize(p_tilde[s], nodes) + 1j * np.asarray(q_samples[s])
        density_part += (f * weight).sum()
        unit[s] = weight.sum()
    return density_part, unit


def solve_constants(geom: Geometry, p_tilde, q_samples, reduced: bool = False) -> list:
    """Complex constants ``q0_s`` from vanishing Cauchy integrals at ``z*_k``, ``k >= 2``.

    ``q0_1 = 0``.  The full (n-1)x(n-1) system is solved unless ``reduced``,
    in which case the winding identity (coefficient matrix = identity) is used.
    """
    nc = len(geom)
    if nc == 1:
        return [0j]
    n = len(q_samples[0])
    rows, rhs = [], []
    for k in range(1, nc):
        dens, unit = _cauchy_moments(geom, p_tilde, q_samples, k, n)
        rows.append(unit[1:])
        rhs.append(-dens)
    rhs = np.array(rhs)
    if reduced:
        return [0j] + [complex(v) for v in rhs]
    w = np.array(rows)
    if abs(np.linalg.det(w)) < 1e-8:
        raise SingularConstantSystem("winding matrix of interior points is singular")
    return [0j] + [complex(v) for v in np.linalg.solve(w, rhs)]


def split_solution(x: np.ndarray, m: int, n_contours: int) -> list[TrigPoly]:
    w = 2 * m
    return [TrigPoly(0.0, x[s * w:s * w + m], x[s * w + m:(s + 1) * w]) for s in range(n_contours)]


def density_from_coefficients(config: FlowConfig, geom: Geometry, p_prime, q0=None,
                              diagnostics=None) -> BoundaryDensity:
    n = config.quadrature_n
    nodes = uniform_grid(n)
    p_tilde = [antiderivative(p) for p in p_prime]
    q_samples = [boundary_q(config, geom, s, nodes) for s in range(len(geom))]
    if q0 is None:
        q0 = solve_constants(geom, p_tilde, q_samples)
    contours = tuple(
        ContourDensity(pp, pt, qs, complex(c)) for pp, pt, qs, c in zip(p_prime, p_tilde, q_samples, q0)
    )
    return BoundaryDensity(contours, n, dict(diagnostics or {}))


def solve_flow(config: FlowConfig, geom: Geometry) -> BoundaryDensity:
    """Full pipeline: RHS, assembly, dense solve, antiderivatives, constants."""
    config.circulations_for(len(geom))
    timings = {}
    t0 = time.perf_counter()
    try:
        system = assemble(config, geom)
    except FlowError as exc:
        raise type(exc)(f"assembly failed: {exc}") from exc
    t1 = time.perf_counter()
    report = solve_dense(system)
    t2 = time.perf_counter()
    timings["assemble"] = t1 - t0
    timings["solve"] = t2 - t1
    log.info("solved %d unknowns: residual=%.3e, condition~%.3e",
             system.rhs.size, report.residual, report.condition_estimate)
    p_prime = split_solution(report.solution, config.m, len(geom))
    diagnostics = {
        "residual": report.residual,
        "condition_estimate": report.condition_estimate,
        "unknowns": int(system.rhs.size),
    }
    density = density_from_coefficients(config, geom, p_prime, diagnostics=diagnostics)
    timings["constants"] = time.perf_counter() - t2
    density.diagnostics["timings"] = timings
    return density
