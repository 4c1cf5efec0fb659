import numpy as np
import pytest

from multipot import ComplexPotential, solve_flow
from multipot.errors import NearBoundary, PointInsideObstacle
from multipot.flow import FlowConfig
from multipot.geometry import TrigCurve, build_geometry, winding_number
from multipot.potential import (
    EXTERIOR,
    NEAR_BOUNDARY,
    OBSTACLE,
    boundary_stagnation_points,
    circulation_check,
    eval_potential,
    eval_velocity,
    find_stagnation_points,
    loop_integral,
    offset_loop,
    stream_function,
)
from multipot.verify import wall_stream_spread

from conftest import disk_exact, solve_disk


def ellipse_exact(z, a, b, velocity, gamma=0.0):
    """Flow past z = a e^{it} + b e^{-it} through the circle map z = a w + b / w."""
    root = np.sqrt(z * z - 4 * a * b)
    w = (z + root) / (2 * a)
    w = np.where(np.abs(w) >= 1, w, (z - root) / (2 * a))
    return np.conj(velocity) * a * w + velocity * np.conj(a) / w + gamma / (2j * np.pi) * np.log(w)


def test_disk_values():
    pot = solve_disk()
    assert eval_potential(pot, 2.0) == pytest.approx(2.5, abs=1e-12)
    assert eval_velocity(pot, 2.0) == pytest.approx(0.75, abs=1e-12)
    assert eval_velocity(pot, 2j) == pytest.approx(1.25, abs=1e-12)
    assert stream_function(pot, 2j) == pytest.approx(1.5, abs=1e-12)


@pytest.mark.parametrize("gamma", [0.0, 3.0])
def test_ellipse_matches_conformal_map(gamma):
    a, b, v = 2.0, 0.8, 1 + 0.3j
    geom = build_geometry([TrigCurve.ellipse(a, b)])
    config = FlowConfig(v, (gamma,), m=32)
    pot = ComplexPotential(geom, config, solve_flow(config, geom))
    theta = np.linspace(0, 2 * np.pi, 40, endpoint=False)
    z = 4.0 * np.exp(1j * theta) + 0.5
    diff = pot.potential(z) - ellipse_exact(z, a, b, v, gamma)
    # potentials agree up to one additive constant
    assert np.ptp(diff.real) + np.ptp(diff.imag) < 1e-9
    np.testing.assert_allclose(pot.derivative(z).conj(), np.conj(
        (ellipse_exact(z + 1e-6, a, b, v, gamma) - ellipse_exact(z - 1e-6, a, b, v, gamma)) / 2e-6),
        atol=1e-7)


def test_velocity_is_conjugate_derivative():
    pot = solve_disk(velocity=1 + 0.1j, gamma=2.0)
    z = np.array([1.7 + 0.4j, -2 - 1j])
    h = 1e-6
    fd = (pot.potential(z + h) - pot.potential(z - h)) / (2 * h)
    np.testing.assert_allclose(pot.velocity(z), np.conj(fd), atol=1e-8)


def test_disk_stagnation_points():
    pot = solve_disk()
    found = sorted(find_stagnation_points(pot, (-3, 3, -3, 3)), key=lambda z: z.real)
    assert len(found) == 2
    np.testing.assert_allclose(found, [-1, 1], atol=1e-10)


def test_disk_stagnation_points_with_circulation():
    gamma = 2 * np.pi
    pot = solve_disk(gamma=gamma)
    # conj(v) z^2 + c z - v R^2 = 0 with c = Gamma / (2 pi i)
    expected = np.roots([1.0, gamma / (2j * np.pi), -1.0])
    found = boundary_stagnation_points(pot, 0)
    assert len(found) == 2
    for root in expected:
        assert min(abs(f - root) for f in found) < 1e-10


def test_circulation_and_flux():
    pot = solve_disk(gamma=2 * np.pi)
    assert circulation_check(pot, 0) == pytest.approx(2 * np.pi, rel=1e-10)
    assert abs(loop_integral(pot, 0).imag) < 1e-12


def test_classification_and_errors():
    pot = solve_disk()
    codes = pot.classify(np.array([0.0, 1.0 + 1e-3, 3.0]))
    assert list(codes) == [OBSTACLE, NEAR_BOUNDARY, EXTERIOR]
    with pytest.raises(PointInsideObstacle):
        pot.potential(0.5)
    with pytest.raises(NearBoundary):
        pot.potential(1.001)


def test_refinement_resolves_near_points():
    pot = solve_disk()
    z = 1.001 * np.exp(1j * np.linspace(0, 2 * np.pi, 16, endpoint=False))
    fine = pot.refined_for(z)
    assert fine.eval_n > pot.eval_n
    np.testing.assert_allclose(fine.potential(z) - fine.potential(3.0),
                               disk_exact(z) - disk_exact(3.0), atol=1e-10)


def test_offset_loop_derivative():
    curve = TrigCurve.ellipse(2, 0.5j)
    pts, dpts = offset_loop(curve, 0.1, 64)
    h = 1e-6
    shifted, _ = offset_loop(TrigCurve({k: d * np.exp(1j * k * h) for k, d in curve.coeffs.items()}), 0.1, 64)
    np.testing.assert_allclose((shifted - pts) / h, dpts, atol=1e-4)
    # the offset is outward: every loop point lies outside the contour
    assert all(winding_number(curve, p) == 0 for p in pts)


def test_single_offset_loop_picks_up_tangential_speed():
    # exact ellipse flow: the stream function on a loop at distance d varies by about
    # d * |velocity|, so a wall value needs extrapolation from two loops
    a, b, v = 3.0, 1.0, 1 + 0.1j
    curve = TrigCurve.ellipse(a, b)
    d = 1e-3 * curve.diameter
    near, _ = offset_loop(curve, d, 128)
    far, _ = offset_loop(curve, 2 * d, 128)
    psi_near = ellipse_exact(near, a, b, v).imag
    psi_far = ellipse_exact(far, a, b, v).imag
    scale = abs(v) * curve.diameter
    assert np.ptp(psi_near) / scale > 5e-4
    assert np.ptp(2 * psi_near - psi_far) / scale < 5e-5


def test_wall_stream_spread_on_solution():
    geom = build_geometry([TrigCurve.ellipse(3.0, 1.0)])
    config = FlowConfig(1 + 0.1j, m=32)
    pot = ComplexPotential(geom, config, solve_flow(config, geom))
    extrapolated, raw = wall_stream_spread(pot, 0)
    assert extrapolated / (abs(config.velocity) * 8.0) < 5e-5
    assert raw > extrapolated


def test_zero_velocity_zero_circulation_has_no_stagnation_structure():
    pot = solve_disk(velocity=0.0)
    assert find_stagnation_points(pot, (-3, 3, -3, 3)) == []
    assert abs(pot.derivative(2.0)) < 1e-14


def test_isolated_ellipse_stagnation_shift_matches_circle_map():
    # z = 4 w + 2 / w; on |w| = 1 stagnation needs |v| sin(theta - arg v) = Gamma / (16 pi)
    v = 1 + 0.1j
    curve = TrigCurve.ellipse(4.0, 2.0)
    geom = build_geometry([curve])
    found = {}
    for gamma in (-0.4 * np.pi, 0.4 * np.pi):
        config = FlowConfig(v, (gamma,), m=32)
        pot = ComplexPotential(geom, config, solve_flow(config, geom))
        found[gamma] = boundary_stagnation_points(pot, 0)
        theta = np.angle(v) + np.arcsin(gamma / (16 * np.pi * abs(v)))
        rear = curve.point(theta)
        # log|z - z*| in the data is not a trigonometric polynomial, so M = 32 gives ~1e-7 here
        assert min(abs(z - rear) for z in found[gamma]) < 1e-6
    shifts = [min(abs(a - b) for b in found[0.4 * np.pi]) for a in found[-0.4 * np.pi]]
    np.testing.assert_allclose(shifts, 0.1, rtol=0.05)
