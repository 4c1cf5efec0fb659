import json

import numpy as np
import pytest

from multipot.errors import ConfigError, OutputError, SeedInvalid
from multipot.field_io import (
    COLUMNS,
    GridSpec,
    auto_seeds,
    read_field,
    sample_field,
    trace_streamline,
    write_field,
    write_streamlines,
)
from multipot.potential import EXTERIOR

from conftest import solve_disk


@pytest.fixture(scope="module")
def disk():
    return solve_disk()


def test_grid_spec_parse_and_nodes():
    spec = GridSpec.parse("-2, 2, -1, 1, 5, 3")
    z = spec.nodes()
    assert z.shape == (3, 5)
    assert z[0, 0] == -2 - 1j and z[2, 4] == 2 + 1j
    with pytest.raises(ConfigError):
        GridSpec.parse("0,1,0,1,5")
    with pytest.raises(ConfigError):
        GridSpec.parse("1,0,0,1,5,5")
    with pytest.raises(ConfigError):
        GridSpec.parse("0,1,0,1,a,5")


def test_small_disk_grid(disk):
    field = sample_field(disk, GridSpec(-2, 2, -2, 2, 3, 3))
    assert field.mask[1, 1] != EXTERIOR
    assert np.isnan(field.speed[1, 1])
    assert field.speed[1, 2] == pytest.approx(0.75, abs=1e-12)
    assert field.psi[2, 1] == pytest.approx(1.5, abs=1e-12)
    assert field.velocity[1, 2] == pytest.approx(0.75, abs=1e-12)


def test_csv_output(disk, tmp_path):
    field = sample_field(disk, GridSpec(-2, 2, -2, 2, 3, 3))
    path = tmp_path / "f.csv"
    write_field(field, path, "csv")
    lines = path.read_text().splitlines()
    assert lines[0] == ",".join(COLUMNS)
    assert len(lines) == 10
    centre = lines[1 + 4].split(",")
    assert centre[:2] == ["0.0", "0.0"] and centre[2:6] == ["", "", "", ""] and centre[6] == "obstacle"
    rows = read_field(path, "csv")
    assert rows[5][4] == pytest.approx(0.75, abs=1e-12)


def test_json_round_trip_and_determinism(disk, tmp_path):
    field = sample_field(disk, GridSpec(-3, 3, -3, 3, 7, 5))
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    write_field(field, a, "json")
    write_field(sample_field(disk, GridSpec(-3, 3, -3, 3, 7, 5)), b, "json")
    assert a.read_bytes() == b.read_bytes()
    doc = json.loads(a.read_text())
    assert doc["columns"] == list(COLUMNS)
    assert len(doc["rows"]) == 35
    csv_path = tmp_path / "a.csv"
    write_field(field, csv_path, "csv")
    assert read_field(csv_path, "csv") == read_field(a, "json")


def test_write_errors(disk, tmp_path):
    field = sample_field(disk, GridSpec(-2, 2, -2, 2, 3, 3))
    with pytest.raises(ConfigError):
        write_field(field, tmp_path / "x", "xml")
    with pytest.raises(OutputError):
        write_field(field, tmp_path / "missing" / "x.csv", "csv")


def test_streamline_conserves_stream_function(disk):
    seed = -3 + 0.5j
    line = trace_streamline(disk, seed, 0.01, 2000, box=(-3.5, 3.5, -3, 3))
    psi = line.imag - line.imag / np.abs(line) ** 2
    assert len(line) > 200
    assert np.ptp(psi) < 1e-7
    assert line[-1].real > 3.4  # left through the downstream edge
    assert np.all(disk.classify(line) == EXTERIOR)


def test_streamline_matches_dense_integration(disk):
    from scipy.integrate import solve_ivp

    def rhs(_, y):
        z = complex(y[0], y[1])
        w = np.conj(1 - 1 / z**2)
        w /= abs(w)
        return [w.real, w.imag]

    steps = 300
    line = trace_streamline(disk, -3 + 0.8j, 0.01, steps, box=(-10, 10, -10, 10))
    ref = solve_ivp(rhs, (0, 0.01 * steps), [-3, 0.8], rtol=1e-12, atol=1e-12)
    assert abs(line[-1] - complex(*ref.y[:, -1])) < 1e-8


def test_invalid_seed(disk):
    with pytest.raises(SeedInvalid):
        trace_streamline(disk, 0.2, 0.01, 10)


def test_auto_seeds_on_upstream_edge(disk):
    seeds = auto_seeds(disk, (-3, 3, -2, 2), 4)
    assert len(seeds) == 4
    assert all(abs(s.real + 3) < 1e-6 for s in seeds)


def test_write_streamlines(tmp_path):
    path = tmp_path / "s.json"
    write_streamlines([(1 + 2j, np.array([1 + 2j, 1.5 + 2j]))], path)
    doc = json.loads(path.read_text())
    assert doc == [{"seed": [1.0, 2.0], "points": [[1.0, 2.0], [1.5, 2.0]]}]
