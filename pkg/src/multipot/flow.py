from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ConfigError


def default_quadrature_n(m: int) -> int:
    return max(256, 8 * m)


@dataclass(frozen=True)
class FlowConfig:
    """Far-field velocity, per-contour circulations and discretization sizes.

    ``quadrature_n`` (solver grid) defaults to ``max(256, 8*m)``; ``eval_n``
    is the node count used when evaluating the Cauchy integral.
    """

    velocity: complex
    circulations: tuple = field(default=())
    m: int = 32
    quadrature_n: int | None = None
    eval_n: int = 1024

    def __post_init__(self):
        object.__setattr__(self, "velocity", complex(self.velocity))
        circ = tuple(float(g) for g in self.circulations)
        if not all(np.isfinite(circ)):
            raise ConfigError("circulations must be finite")
        object.__setattr__(self, "circulations", circ)
        if self.m < 1:
            raise ConfigError("truncation order M must be >= 1")
        if self.quadrature_n is None:
            object.__setattr__(self, "quadrature_n", default_quadrature_n(self.m))
        if self.quadrature_n % 2 or self.quadrature_n < 2 * self.m + 2:
            raise ConfigError(f"quadrature_n must be even and >= 2M+2, got {self.quadrature_n}")
        if self.eval_n < 8 or self.eval_n % 2:
            raise ConfigError(f"eval_n must be even and >= 8, got {self.eval_n}")

    def circulations_for(self, n: int) -> np.ndarray:
        if not self.circulations:
            return np.zeros(n)
        if len(self.circulations) != n:
            raise ConfigError(f"expected {n} circulations, got {len(self.circulations)}")
        return np.array(self.circulations, dtype=float)

    def log_coefficients(self, n: int) -> np.ndarray:
        """``c_s = Gamma_s / (2 pi i)``, purely imaginary."""
        return self.circulations_for(n) / (2j * np.pi)


def make_config(velocity: complex, circulations: Sequence[float], **kwargs) -> FlowConfig:
    return FlowConfig(velocity, tuple(circulations), **kwargs)
