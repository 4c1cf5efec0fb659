import functools

import numpy as np
import pytest

from multipot import ComplexPotential, example, solve_flow
from multipot.flow import FlowConfig
from multipot.geometry import TrigCurve, build_geometry


def solve_disk(radius=1.0, velocity=1.0, gamma=0.0, center=0j, m=32, n=256, eval_n=1024):
    curve = TrigCurve.circle(radius, center)
    geom = build_geometry([curve])
    config = FlowConfig(velocity, (gamma,), m=m, quadrature_n=n, eval_n=eval_n)
    return ComplexPotential(geom, config, solve_flow(config, geom))


def disk_exact(z, radius=1.0, velocity=1.0, gamma=0.0, center=0j):
    w = z - center
    return (np.conj(velocity) * z + velocity * radius**2 / w
            + gamma / (2j * np.pi) * np.log(w))


@functools.lru_cache(maxsize=None)
def solved_example(name, m=32):
    problem = example(name).with_overrides(m=m)
    geom = problem.geometry()
    config = problem.flow_config()
    return ComplexPotential(geom, config, solve_flow(config, geom))


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
