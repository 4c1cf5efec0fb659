"""Complex potentials of plane potential flow around several obstacles.

The unknown analytic part of the potential is recovered from a Fredholm
equation of the second kind on the boundary, discretized by a truncated
Fourier-Galerkin system, and evaluated anywhere as a Cauchy integral.
"""

from .errors import FlowError
from .flow import FlowConfig
from .geometry import Geometry, TrigCurve, build_geometry
from .potential import ComplexPotential, find_stagnation_points
from .problem import EXAMPLES, ProblemConfig, example, load_archive, load_config
from .solver import BoundaryDensity, solve_flow


def solve(problem: ProblemConfig) -> ComplexPotential:
    """Solve a problem description and return the evaluable potential."""
    geom = problem.geometry()
    config = problem.flow_config()
    return ComplexPotential(geom, config, solve_flow(config, geom))


__all__ = [
    "BoundaryDensity",
    "ComplexPotential",
    "EXAMPLES",
    "FlowConfig",
    "FlowError",
    "Geometry",
    "ProblemConfig",
    "TrigCurve",
    "build_geometry",
    "example",
    "find_stagnation_points",
    "load_archive",
    "load_config",
    "solve",
    "solve_flow",
]
