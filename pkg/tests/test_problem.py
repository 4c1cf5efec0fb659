import json

import numpy as np
import pytest

from multipot.errors import ConfigError
from multipot.problem import (
    EXAMPLES,
    ProblemConfig,
    archive_dict,
    dumps_config,
    example,
    potential_from_archive,
)

from conftest import solved_example


@pytest.mark.parametrize("name", sorted(EXAMPLES))
def test_examples_are_valid_smooth_geometries(name):
    geom = example(name).geometry()
    assert len(geom) == 2
    assert not any(c.is_cusped for c in geom.curves)


def test_example_circulations():
    assert example("example1").flow_config().circulations == (0.0, 0.0)
    assert example("example2").flow_config().circulations == pytest.approx((-1.2 * np.pi, -0.4 * np.pi))
    assert example("example3").flow_config().circulations == pytest.approx((-1.2 * np.pi, 0.4 * np.pi))
    assert example("example4").velocity == 1 + 0.1j


def test_config_dict_round_trip():
    problem = example("example5")
    assert ProblemConfig.from_dict(json.loads(dumps_config(problem))) == problem


@pytest.mark.parametrize(
    "doc",
    [
        {},
        {"contours": [], "velocity": {"re": 1, "im": 0}},
        {"contours": [{"harmonics": [{"k": 0, "re": 1, "im": 0}]}], "velocity": {"re": 1, "im": 0}},
        {"contours": [{"harmonics": [{"k": 1, "re": "x", "im": 0}]}], "velocity": {"re": 1, "im": 0}},
        {"contours": [{"harmonics": [{"k": 1, "re": 1, "im": 0}], "circulation": "inf"}],
         "velocity": {"re": 1, "im": 0}},
        {"contours": [{"harmonics": [{"k": 1, "re": 1, "im": 0}]}], "velocity": {"re": 1, "im": 0},
         "truncation_m": 20, "quadrature_n": 30},
    ],
)
def test_malformed_configs(doc):
    with pytest.raises(ConfigError):
        ProblemConfig.from_dict(doc)


def test_archive_round_trip_reproduces_potential():
    pot = solved_example("example2", 16)
    problem = example("example2").with_overrides(m=16)
    doc = json.loads(json.dumps(archive_dict(problem, pot.geom, pot.density)))
    loaded_problem, loaded = potential_from_archive(doc)
    assert loaded_problem == problem
    z = np.array([0.5 + 6j, 10 + 0j, -8 - 4j])
    np.testing.assert_allclose(loaded.potential(z), pot.potential(z), atol=1e-13)


def test_archive_rejects_foreign_documents():
    with pytest.raises(ConfigError):
        potential_from_archive({"format": "other"})
