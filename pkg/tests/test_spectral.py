import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from multipot.errors import InsufficientSamples, NonzeroMean, OddSampleCount
from multipot.geometry import uniform_grid
from multipot.spectral import (
    TrigPoly,
    analyze,
    antiderivative,
    galerkin_block,
    galerkin_entry,
    synthesize,
)


def random_poly(rng, m, mean=0.0):
    return TrigPoly(mean, rng.normal(size=m), rng.normal(size=m))


def test_analyze_known_function():
    t = uniform_grid(64)
    poly = analyze(1.5 + 2 * np.cos(t) - 0.5 * np.sin(3 * t), 4)
    assert poly.mean == pytest.approx(1.5)
    np.testing.assert_allclose(poly.cos_coeffs, [2, 0, 0, 0], atol=1e-14)
    np.testing.assert_allclose(poly.sin_coeffs, [0, 0, -0.5, 0], atol=1e-14)


def test_round_trip(rng):
    poly = random_poly(rng, 12, mean=0.7)
    back = analyze(synthesize(poly, uniform_grid(64)), 12)
    assert back.mean == pytest.approx(0.7, abs=1e-13)
    np.testing.assert_allclose(back.cos_coeffs, poly.cos_coeffs, atol=1e-13)
    np.testing.assert_allclose(back.sin_coeffs, poly.sin_coeffs, atol=1e-13)


def test_parseval(rng):
    n, m = 128, 20
    poly = random_poly(rng, m, mean=0.3)
    f = synthesize(poly, uniform_grid(n))
    energy = np.mean(f**2)
    expected = poly.mean**2 + 0.5 * (np.sum(poly.cos_coeffs**2) + np.sum(poly.sin_coeffs**2))
    assert energy == pytest.approx(expected, rel=1e-12)


def test_antiderivative_round_trip(rng):
    poly = random_poly(rng, 10)
    np.testing.assert_allclose(antiderivative(poly).derivative().cos_coeffs, poly.cos_coeffs, atol=1e-14)
    np.testing.assert_allclose(antiderivative(poly).derivative().sin_coeffs, poly.sin_coeffs, atol=1e-14)


def test_antiderivative_is_integral():
    poly = TrigPoly(0.0, np.array([0.0, 1.0]), np.array([2.0, 0.0]))  # cos 2t + 2 sin t
    t = np.linspace(0, 6, 11)
    expected = np.sin(2 * t) / 2 - 2 * np.cos(t)
    np.testing.assert_allclose(synthesize(antiderivative(poly), t), expected, atol=1e-14)


def test_antiderivative_rejects_mean():
    with pytest.raises(NonzeroMean):
        antiderivative(TrigPoly(1.0, np.ones(3), np.zeros(3)))


def test_grid_checks():
    with pytest.raises(OddSampleCount):
        analyze(np.ones(33), 4)
    with pytest.raises(InsufficientSamples):
        analyze(np.ones(16), 8)
    analyze(np.ones(18), 8)


def direct_block(kernel, m):
    """Double trapezoid sum with explicit basis functions."""
    n = kernel.shape[0]
    t = uniform_grid(n)
    basis = np.vstack([np.cos(np.outer(np.arange(1, m + 1), t)), np.sin(np.outer(np.arange(1, m + 1), t))])
    return (2 * np.pi / n) ** 2 / np.pi**2 * basis @ kernel @ basis.T


def test_galerkin_block_matches_direct_sum(rng):
    n, m = 40, 8
    kernel = rng.normal(size=(n, n))
    np.testing.assert_allclose(galerkin_block(kernel, m), direct_block(kernel, m), atol=1e-10)


def test_galerkin_block_separable_kernel():
    n, m = 64, 5
    t = uniform_grid(n)
    # K(tau, t) = cos(2 t) sin(3 tau): only entry (cos 2, sin 3) is nonzero, and equals 1
    kernel = np.outer(np.cos(2 * t), np.sin(3 * t))
    block = galerkin_block(kernel, m)
    expected = np.zeros((2 * m, 2 * m))
    expected[1, m + 2] = 1.0
    np.testing.assert_allclose(block, expected, atol=1e-13)
    assert galerkin_entry(kernel, ("cos", 2), ("sin", 3)) == pytest.approx(1.0)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 12), st.integers(0, 2**31 - 1))
def test_round_trip_property(m, seed):
    rng = np.random.default_rng(seed)
    poly = random_poly(rng, m)
    n = 2 * m + 2
    back = analyze(synthesize(poly, uniform_grid(n)), m)
    np.testing.assert_allclose(back.cos_coeffs, poly.cos_coeffs, atol=1e-11)
    np.testing.assert_allclose(back.sin_coeffs, poly.sin_coeffs, atol=1e-11)
