"""Problem files, built-in example configurations and solution archives.

Problem file (JSON)::

    {"contours": [{"harmonics": [{"k": 1, "re": 4.0, "im": 0.0}, ...],
                   "circulation": 0.0}, ...],
     "velocity": {"re": 1.0, "im": 0.1},
     "truncation_m": 32, "quadrature_n": null, "eval_n": 1024}
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

from .errors import ConfigError, OutputError
from .flow import FlowConfig
from .geometry import TrigCurve, build_geometry
from .potential import ComplexPotential
from .solver import BoundaryDensity, density_from_coefficients
from .spectral import TrigPoly

ARCHIVE_FORMAT = "multipot-solution"
ARCHIVE_VERSION = 1


@dataclass(frozen=True)
class ContourSpec:
    harmonics: tuple  # ((k, complex d_k), ...)
    circulation: float = 0.0

    def curve(self) -> TrigCurve:
        return TrigCurve(dict(self.harmonics))


@dataclass(frozen=True)
class ProblemConfig:
    contours: tuple
    velocity: complex
    truncation_m: int = 32
    quadrature_n: int | None = None
    eval_n: int = 1024

    def flow_config(self) -> FlowConfig:
        return FlowConfig(
            self.velocity,
            tuple(c.circulation for c in self.contours),
            m=self.truncation_m,
            quadrature_n=self.quadrature_n,
            eval_n=self.eval_n,
        )

    def curves(self) -> list[TrigCurve]:
        return [c.curve() for c in self.contours]

    def geometry(self, interior_points=None):
        return build_geometry(self.curves(), interior_points)

    def with_overrides(self, m: int | None = None, n: int | None = None) -> "ProblemConfig":
        out = self
        if m is not None:
            out = replace(out, truncation_m=m)
        if n is not None:
            out = replace(out, quadrature_n=n)
        return out

    def to_dict(self) -> dict:
        return {
            "contours": [
                {
                    "harmonics": [{"k": k, "re": d.real, "im": d.imag} for k, d in c.harmonics],
                    "circulation": c.circulation,
                }
                for c in self.contours
            ],
            "velocity": {"re": self.velocity.real, "im": self.velocity.imag},
            "truncation_m": self.truncation_m,
            "quadrature_n": self.quadrature_n,
            "eval_n": self.eval_n,
        }

    @classmethod
    def from_dict(cls, doc) -> "ProblemConfig":
        try:
            raw_contours = doc["contours"]
            vel = doc["velocity"]
            velocity = complex(float(vel["re"]), float(vel["im"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"malformed problem file: {exc!r}") from None
        if not isinstance(raw_contours, list) or not raw_contours:
            raise ConfigError("problem needs at least one contour")
        contours = []
        for i, c in enumerate(raw_contours):
            try:
                harmonics = tuple(
                    (int(h["k"]), complex(float(h["re"]), float(h["im"]))) for h in c["harmonics"]
                )
                circulation = float(c.get("circulation", 0.0))
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"contour {i}: malformed entry {exc!r}") from None
            if not any(d != 0 for k, d in harmonics if k != 0):
                raise ConfigError(f"contour {i}: needs a nonzero harmonic with k != 0")
            if not math.isfinite(circulation):
                raise ConfigError(f"contour {i}: circulation must be finite")
            contours.append(ContourSpec(harmonics, circulation))
        try:
            m = int(doc.get("truncation_m", 32))
            qn = doc.get("quadrature_n")
            qn = None if qn is None else int(qn)
            en = int(doc.get("eval_n", 1024))
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed discretization settings: {exc}") from None
        out = cls(tuple(contours), velocity, m, qn, en)
        out.flow_config()  # validates sizes
        return out


def dumps_config(problem: ProblemConfig) -> str:
    return json.dumps(problem.to_dict(), indent=2) + "\n"


def load_config(path) -> ProblemConfig:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return ProblemConfig.from_dict(doc)


def save_config(problem: ProblemConfig, path) -> None:
    try:
        Path(path).write_text(dumps_config(problem))
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def _contour(coeffs: dict, circulation: float = 0.0) -> ContourSpec:
    return ContourSpec(tuple(sorted((k, complex(d)) for k, d in coeffs.items())), circulation)


def _tilted_ellipse():
    r = np.exp(-0.25j * np.pi)
    return {1: 3 * r, -1: -r, 0: 10j}


_LOWER_ELLIPSE = {-1: 2.0, 1: 4.0}
_CUSP = {2: 0.15, 1: 1.6, -1: 0.8 + 0.3j, -2: -0.25j}
_ROTATION = 0.5j + math.sqrt(3) / 2


def _scaled(coeffs, factor, offset=0j):
    out = {k: factor * d for k, d in coeffs.items()}
    out[0] = out.get(0, 0j) + offset
    return out


def _two_ellipses(upper_gamma, lower_gamma):
    return ProblemConfig(
        (_contour(_tilted_ellipse(), upper_gamma), _contour(_LOWER_ELLIPSE, lower_gamma)),
        1 + 0.1j,
    )


def _cusp_pair(factor, offset):
    return ProblemConfig(
        (_contour(_scaled(_CUSP, 2.0)), _contour(_scaled(_CUSP, factor, offset))),
        1 + 0.1j,
    )


# Contour order follows the listing of each example; circulations are
# (first, second).  In examples 1-3 the first contour is the upper ellipse.
EXAMPLES = {
    "example1": _two_ellipses(0.0, 0.0),
    "example2": _two_ellipses(-1.2 * math.pi, -0.4 * math.pi),
    "example3": _two_ellipses(-1.2 * math.pi, 0.4 * math.pi),
    "example4": _cusp_pair(1.0, 10j),
    "example5": _cusp_pair(_ROTATION, 10j),
    "example6": _cusp_pair(_ROTATION, 5j),
}


def example(name: str) -> ProblemConfig:
    try:
        return EXAMPLES[name]
    except KeyError:
        raise ConfigError(f"unknown example {name!r}; available: {', '.join(EXAMPLES)}") from None


# -- solution archives -------------------------------------------------------


def archive_dict(problem: ProblemConfig, geom, density: BoundaryDensity) -> dict:
    diag = dict(density.diagnostics)
    return {
        "format": ARCHIVE_FORMAT,
        "version": ARCHIVE_VERSION,
        "config": problem.to_dict(),
        "interior_points": [[z.real, z.imag] for z in geom.interior_points],
        "contours": [
            {
                "alpha": c.p_prime.cos_coeffs.tolist(),
                "beta": c.p_prime.sin_coeffs.tolist(),
                "q0": [c.q0.real, c.q0.imag],
            }
            for c in density.contours
        ],
        "diagnostics": diag,
    }


def save_archive(path, problem: ProblemConfig, geom, density: BoundaryDensity) -> None:
    try:
        Path(path).write_text(json.dumps(archive_dict(problem, geom, density), indent=2) + "\n")
    except OSError as exc:
        raise OutputError(f"cannot write {path}: {exc}") from exc


def potential_from_archive(doc: dict) -> tuple[ProblemConfig, ComplexPotential]:
    if doc.get("format") != ARCHIVE_FORMAT:
        raise ConfigError("not a multipot solution archive")
    problem = ProblemConfig.from_dict(doc["config"])
    try:
        points = [complex(x, y) for x, y in doc["interior_points"]]
        p_prime = [
            TrigPoly(0.0, np.array(c["alpha"], float), np.array(c["beta"], float)) for c in doc["contours"]
        ]
        q0 = [complex(*c["q0"]) for c in doc["contours"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"malformed archive: {exc!r}") from None
    if len(p_prime) != len(problem.contours):
        raise ConfigError("archive coefficient blocks do not match the contour count")
    geom = problem.geometry(points)
    config = problem.flow_config()
    density = density_from_coefficients(config, geom, p_prime, q0, doc.get("diagnostics"))
    return problem, ComplexPotential(geom, config, density)


def load_archive(path) -> tuple[ProblemConfig, ComplexPotential]:
    try:
        doc = json.loads(Path(path).read_text())
    except OSError as exc:
        raise OutputError(f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from None
    return potential_from_archive(doc)
