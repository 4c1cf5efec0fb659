"""Integral-equation kernels and the known boundary data.

Derivatives of ``arg`` and ``log|.|`` are always taken from the closed forms

    d/dt arg(z_sigma(tau) - z_s(t))     = Im(-z_s'(t) / (z_sigma(tau) - z_s(t)))
    d/dt log|z_sigma(tau) - z_s(t)|     = Re(-z_s'(t) / (z_sigma(tau) - z_s(t)))

so no branch of a multivalued function is ever tracked.

Kernel grids are indexed ``grid[i, j] = kernel(tau_j, t_i)`` on the uniform
grid ``2 pi i / N``: rows follow the target parameter ``t``.
"""

from __future__ import annotations

import numpy as np

from .errors import CoincidentPoints
from .flow import FlowConfig
from .geometry import TWO_PI, Geometry, uniform_grid
from .spectral import _check_grid

COINCIDENT_TOL = 1e-12
_CUSP_GUARD = 1e-14


def _same_parameter(tau, t):
    d = np.mod(np.asarray(tau) - np.asarray(t), TWO_PI)
    return (d < 1e-13) | (d > TWO_PI - 1e-13)


def _chord(geom: Geometry, sigma: int, s: int, tau, t):
    zs_tau = geom.curves[sigma].point(tau)
    zs_t = geom.curves[s].point(t)
    return zs_tau - zs_t


def _diag_K(curve, t):
    d1 = curve.derivative(t, 1)
    d2 = curve.derivative(t, 2)
    safe = np.abs(d1) > _CUSP_GUARD
    return np.where(safe, -0.5 * (d2 / np.where(safe, d1, 1.0)).imag, 0.0)


def _diag_L_smooth(curve, t):
    d1 = curve.derivative(t, 1)
    d2 = curve.derivative(t, 2)
    safe = np.abs(d1) > _CUSP_GUARD
    return np.where(safe, 0.5 * (d2 / np.where(safe, d1, 1.0)).real, 0.0)


def _check_coincident(geom, sigma, s, chord):
    if sigma != s and np.any(np.abs(chord) < COINCIDENT_TOL * geom.diameter):
        raise CoincidentPoints(f"contours {sigma} and {s} touch")


def kernel_K(geom: Geometry, sigma: int, s: int, tau, t):
    """``K_{sigma s}(tau, t) = -d/dt arg(z_sigma(tau) - z_s(t))``.

    On the diagonal of a single contour the value is the limit
    ``-kappa(t) |z'(t)| / 2``.
    """
    tau, t = np.broadcast_arrays(np.asarray(tau, float), np.asarray(t, float))
    dz_t = geom.curves[s].derivative(t)
    if sigma == s:
        diag = _same_parameter(tau, t)
        chord = np.where(diag, 1.0, _chord(geom, sigma, s, tau, t))
        value = np.where(diag, _diag_K(geom.curves[s], t), (dz_t / chord).imag)
    else:
        chord = _chord(geom, sigma, s, tau, t)
        _check_coincident(geom, sigma, s, chord)
        value = (dz_t / chord).imag
    return float(value) if value.ndim == 0 else value


def kernel_L(geom: Geometry, sigma: int, s: int, tau, t):
    """Full log kernel ``d/dt log|z_sigma(tau) - z_s(t)|`` (singular when ``sigma == s``)."""
    tau, t = np.broadcast_arrays(np.asarray(tau, float), np.asarray(t, float))
    chord = _chord(geom, sigma, s, tau, t)
    value = (-geom.curves[s].derivative(t) / chord).real
    return float(value) if value.ndim == 0 else value


def kernel_L_smooth(geom: Geometry, sigma: int, s: int, tau, t):
    """Log kernel with the ``-(1/2) cot((tau - t)/2)`` singularity removed on the own contour.

    For ``sigma != s`` this is the full kernel.  The diagonal limit is
    ``Re(z''(t) / (2 z'(t)))``.
    """
    tau, t = np.broadcast_arrays(np.asarray(tau, float), np.asarray(t, float))
    dz_t = geom.curves[s].derivative(t)
    if sigma == s:
        diag = _same_parameter(tau, t)
        chord = np.where(diag, 1.0, _chord(geom, sigma, s, tau, t))
        half = np.where(diag, 1.0, 0.5 * (tau - t))
        off = (-dz_t / chord).real + 0.5 / np.tan(half)
        value = np.where(diag, _diag_L_smooth(geom.curves[s], t), off)
    else:
        chord = _chord(geom, sigma, s, tau, t)
        _check_coincident(geom, sigma, s, chord)
        value = (-dz_t / chord).real
    return float(value) if value.ndim == 0 else value


def _grid_pair(n):
    nodes = uniform_grid(n)
    tau, t = np.meshgrid(nodes, nodes)  # tau varies along columns, t along rows
    return tau, t


def kernel_grid_K(geom: Geometry, sigma: int, s: int, n: int) -> np.ndarray:
    tau, t = _grid_pair(n)
    return kernel_K(geom, sigma, s, tau, t)


def kernel_grid_L_smooth(geom: Geometry, sigma: int, s: int, n: int) -> np.ndarray:
    tau, t = _grid_pair(n)
    return kernel_L_smooth(geom, sigma, s, tau, t)


def boundary_q(config: FlowConfig, geom: Geometry, s: int, t):
    """Imaginary part of the unknown analytic part on contour ``s``, with ``C_s = 0``.

    ``-Im(conj(v) z_s) + sum_sigma Gamma_sigma/(2 pi) log|z_s - z*_sigma|``.
    """
    z = geom.curves[s].point(t)
    gammas = config.circulations_for(len(geom))
    value = -(np.conj(config.velocity) * z).imag
    for g, zstar in zip(gammas, geom.interior_points):
        if g:
            value = value + g / TWO_PI * np.log(np.abs(z - zstar))
    return value


def boundary_q_prime(config: FlowConfig, geom: Geometry, s: int, t):
    """``d/dt boundary_q``: ``-Im(conj(v) z' + sum_sigma c_sigma z' / (z - z*_sigma))``."""
    curve = geom.curves[s]
    z = curve.point(t)
    dz = curve.derivative(t)
    inner = np.conj(config.velocity) * dz
    for c, zstar in zip(config.log_coefficients(len(geom)), geom.interior_points):
        if c:
            inner = inner + c * dz / (z - zstar)
    return -np.imag(inner)


def hilbert_transform(samples) -> np.ndarray:
    """Periodic conjugate function ``(1/2pi) p.v. int f(tau) cot((tau - t)/2) dtau``.

    Fourier multiplier ``i sgn(k)``: ``cos -> -sin``, ``sin -> cos``; the mean
    and the Nyquist mode map to zero.
    """
    f = np.asarray(samples, dtype=float)
    n = f.size
    _check_grid(n)
    fourier = np.fft.rfft(f)
    fourier[0] = 0.0
    fourier[1:] *= 1j
    fourier[-1] = 0.0
    return np.fft.irfft(fourier, n)


def rhs_Q(config: FlowConfig, geom: Geometry, s: int, n: int, q_prime=None) -> np.ndarray:
    """``Q_s(t_i) = sum_sigma (1/pi) int q'_sigma(tau) L_{sigma s}(tau, t_i) dtau`` on ``n`` nodes.

    ``q_prime`` optionally supplies pre-sampled ``q'_sigma`` for every contour.
    """
    _check_grid(n)
    nodes = uniform_grid(n)
    if q_prime is None:
        q_prime = [boundary_q_prime(config, geom, sigma, nodes) for sigma in range(len(geom))]
    total = np.zeros(n)
    for sigma in range(len(geom)):
        lgrid = kernel_grid_L_smooth(geom, sigma, s, n)
        # (1/pi) * (2 pi / N)
        total += (2.0 / n) * lgrid @ q_prime[sigma]
    # (1/pi) p.v. int q'(tau) * (-(1/2) cot((tau - t)/2)) dtau
    total -= hilbert_transform(q_prime[s])
    return total
