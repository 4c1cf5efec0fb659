"""Fourier analysis on uniform periodic grids.

Coefficients use the ``(1/pi) * integral f(t) cos(lt) dt`` normalization,
so a sampled function is ``mean + sum_l alpha_l cos(lt) + beta_l sin(lt)``.
All quadrature is the periodic trapezoid rule.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InsufficientSamples, NonzeroMean, OddSampleCount


@dataclass(frozen=True)
class TrigPoly:
    """Real trigonometric polynomial of degree ``M``."""

    mean: float
    cos_coeffs: np.ndarray
    sin_coeffs: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.cos_coeffs, dtype=float)
        b = np.asarray(self.sin_coeffs, dtype=float)
        if a.shape != b.shape or a.ndim != 1:
            raise ValueError("cos and sin coefficient arrays must be 1-D with equal length")
        object.__setattr__(self, "mean", float(self.mean))
        object.__setattr__(self, "cos_coeffs", a)
        object.__setattr__(self, "sin_coeffs", b)

    @property
    def order(self) -> int:
        return self.cos_coeffs.size

    @classmethod
    def zeros(cls, m: int) -> "TrigPoly":
        return cls(0.0, np.zeros(m), np.zeros(m))

    def __call__(self, t):
        return synthesize(self, t)

    def derivative(self) -> "TrigPoly":
        l = np.arange(1, self.order + 1)
        return TrigPoly(0.0, l * self.sin_coeffs, -l * self.cos_coeffs)

    def scaled(self, factor: float) -> "TrigPoly":
        return TrigPoly(factor * self.mean, factor * self.cos_coeffs, factor * self.sin_coeffs)


def _check_grid(n: int, m: int | None = None) -> None:
    if n % 2:
        raise OddSampleCount(f"uniform grids must have an even number of samples, got {n}")
    if m is not None and n < 2 * m + 2:
        raise InsufficientSamples(f"need N >= 2M+2 samples, got N={n}, M={m}")


def analyze(samples, m: int) -> TrigPoly:
    """Trapezoid-rule Fourier coefficients of one period of samples."""
    f = np.asarray(samples, dtype=float)
    n = f.size
    _check_grid(n, m)
    fourier = np.fft.rfft(f)
    return TrigPoly(
        fourier[0].real / n,
        2.0 / n * fourier[1:m + 1].real,
        -2.0 / n * fourier[1:m + 1].imag,
    )


def synthesize(poly: TrigPoly, t):
    t = np.asarray(t, dtype=float)
    l = np.arange(1, poly.order + 1)
    arg = np.multiply.outer(t, l)
    return poly.mean + np.cos(arg) @ poly.cos_coeffs + np.sin(arg) @ poly.sin_coeffs


def antiderivative(poly: TrigPoly) -> TrigPoly:
    """Zero-mean antiderivative: ``cos lt -> sin(lt)/l``, ``sin lt -> -cos(lt)/l``."""
    scale = max(np.abs(poly.cos_coeffs).max(initial=0.0), np.abs(poly.sin_coeffs).max(initial=0.0))
    if abs(poly.mean) > 1e-10 * max(scale, 1e-300) and poly.mean != 0.0:
        raise NonzeroMean(f"antiderivative of a function with mean {poly.mean:.3e} is not periodic")
    l = np.arange(1, poly.order + 1)
    return TrigPoly(0.0, -poly.sin_coeffs / l, poly.cos_coeffs / l)


def galerkin_block(kernel: np.ndarray, m: int) -> np.ndarray:
    """Project a sampled kernel onto cos/sin test and trial functions.

    ``kernel[i, j] = K(tau_j, t_i)``.  Returns the ``2m x 2m`` matrix of
    ``(1/pi^2) int int K(tau, t) trial_k(tau) test_j(t) dtau dt`` with rows
    ordered ``cos 1..m, sin 1..m`` in ``t`` and columns likewise in ``tau``.
    Computed from a single 2-D FFT.
    """
    kernel = np.asarray(kernel, dtype=float)
    n = kernel.shape[0]
    if kernel.shape != (n, n):
        raise ValueError("kernel grid must be square")
    _check_grid(n, m)
    g = np.fft.fft2(kernel)
    idx = np.arange(1, m + 1)
    x = g[np.ix_(idx, idx)]        # G[j, k]
    y = g[np.ix_(idx, (-idx) % n)]  # G[j, -k]
    cc = 0.5 * (x.real + y.real)
    sc = -0.5 * (x.imag + y.imag)
    cs = 0.5 * (y.imag - x.imag)
    ss = 0.5 * (y.real - x.real)
    # (1/pi^2) * (2pi/N)^2 = 4/N^2
    return 4.0 / n**2 * np.block([[cc, cs], [sc, ss]])


def galerkin_entry(kernel: np.ndarray, row: tuple[str, int], col: tuple[str, int]) -> float:
    """One entry of :func:`galerkin_block`; ``row``/``col`` are ``("cos"|"sin", index)``."""
    (rkind, j), (ckind, k) = row, col
    m = max(j, k)
    block = galerkin_block(kernel, m)
    r = (j - 1) + (m if rkind == "sin" else 0)
    c = (k - 1) + (m if ckind == "sin" else 0)
    return float(block[r, c])
