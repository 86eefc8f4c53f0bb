"""Tests for quadrature, grids and Fourier inversion."""

from __future__ import annotations

import math

import numpy as np
import pytest

from atomdeconv.errors import InvalidParameter, LengthMismatch, NonFiniteIntegrand
from atomdeconv.numerics import (
    QuadratureSpec,
    as_grid,
    gaussian_cutoff,
    half_line_rule,
    integrate_symmetric,
    inversion_panels,
    invert_cf_on_grid,
    round_up_to_multiple,
    simpson_weights,
    trapezoid_mass,
    uniform_grid,
)


def test_quadrature_spec_rejects_odd_and_small_node_counts() -> None:
    """Simpson needs an even panel count above the configured minimum."""

    with pytest.raises(InvalidParameter):
        QuadratureSpec(nodes=17)
    with pytest.raises(InvalidParameter):
        QuadratureSpec(nodes=8)
    with pytest.raises(InvalidParameter):
        QuadratureSpec(nodes=64, tolerance=0.0)
    assert QuadratureSpec(nodes=64).nodes == 64


def test_round_up_to_multiple() -> None:
    """Rounding is a ceiling onto the requested multiple."""

    assert round_up_to_multiple(4096, 4) == 4096
    assert round_up_to_multiple(4097, 4) == 4100
    assert round_up_to_multiple(1, 8) == 8


def test_simpson_weights_sum_to_width() -> None:
    """Weights follow the 1-4-2-...-4-1 pattern scaled by step / 3."""

    weights = simpson_weights(4, 2.0)
    assert weights.tolist() == pytest.approx([1 / 6, 4 / 6, 2 / 6, 4 / 6, 1 / 6])
    assert float(weights.sum()) == pytest.approx(2.0, rel=1e-14)
    with pytest.raises(InvalidParameter):
        simpson_weights(3, 1.0)


def test_half_line_rule_integrates_cubic_exactly() -> None:
    """Simpson is exact for cubics on the half-line."""

    nodes, weights = half_line_rule(2.0, 16)
    assert nodes[0] == 0.0 and nodes[-1] == pytest.approx(2.0)
    assert float(weights @ nodes**3) == pytest.approx(4.0, rel=1e-13)


def test_integrate_symmetric_polynomial() -> None:
    """The integral of t^2 over [-1, 1] is 2/3."""

    value = integrate_symmetric(lambda t: t**2, 1.0)
    assert value.real == pytest.approx(2.0 / 3.0, abs=1e-13)
    assert value.imag == 0.0


def test_integrate_symmetric_complex_integrand() -> None:
    """Odd imaginary parts cancel on the symmetric node set."""

    value = integrate_symmetric(lambda t: np.exp(1j * t), 1.0)
    assert value.real == pytest.approx(2.0 * math.sin(1.0), rel=1e-12)
    assert abs(value.imag) < 1e-14


def test_integrate_symmetric_rejects_non_finite_values() -> None:
    """A NaN anywhere in the integrand is reported instead of propagated."""

    with pytest.raises(NonFiniteIntegrand):
        integrate_symmetric(lambda t: np.where(t > 0.5, np.nan, 1.0), 1.0)


def test_uniform_grid_is_inclusive() -> None:
    """Both endpoints are part of the grid."""

    grid = uniform_grid(-1.0, 1.0, 0.5)
    assert grid.tolist() == [-1.0, -0.5, 0.0, 0.5, 1.0]
    assert uniform_grid(-10.0, 10.0, 0.02).size == 1001
    with pytest.raises(InvalidParameter):
        uniform_grid(1.0, 0.0, 0.1)
    with pytest.raises(InvalidParameter):
        uniform_grid(0.0, 1.0, 0.0)


def test_as_grid_requires_strictly_increasing_values() -> None:
    """Repeated or decreasing points are rejected."""

    assert as_grid([0.0, 1.0]).tolist() == [0.0, 1.0]
    with pytest.raises(InvalidParameter):
        as_grid([0.0, 0.0])
    with pytest.raises(InvalidParameter):
        as_grid([])
    with pytest.raises(InvalidParameter):
        as_grid([0.0, math.inf])


def test_inversion_panels_scale_with_oscillation() -> None:
    """Wider grids need more panels; the floor is the requested node count."""

    narrow = inversion_panels(10.0, np.array([0.0]), 64)
    wide = inversion_panels(10.0, np.array([-100.0, 100.0]), 64)
    assert narrow == 64
    assert wide > narrow
    assert wide % 4 == 0


def test_invert_standard_normal_cf() -> None:
    """Inverting exp(-t^2/2) recovers the standard normal density."""

    grid = np.array([-2.0, 0.0, 1.0])
    values = invert_cf_on_grid(lambda t: np.exp(-0.5 * t**2), grid, gaussian_cutoff(1e-10))
    expected = np.exp(-0.5 * grid**2) / math.sqrt(2.0 * math.pi)
    assert values == pytest.approx(expected, abs=1e-7)
    assert values[1] == pytest.approx(0.3989423, abs=1e-7)


def test_invert_cauchy_cf_at_origin() -> None:
    """The Cauchy density at zero is 1/pi."""

    values = invert_cf_on_grid(lambda t: np.exp(-np.abs(t)), [0.0], 60.0)
    assert values[0] == pytest.approx(1.0 / math.pi, abs=1e-6)


def test_invert_shifted_cf_keeps_imaginary_information() -> None:
    """A translated normal appears at its new centre."""

    values = invert_cf_on_grid(
        lambda t: np.exp(1j * t - 0.5 * t**2), [0.0, 1.0, 2.0], 40.0
    )
    assert values[1] == pytest.approx(1.0 / math.sqrt(2.0 * math.pi), abs=1e-7)
    assert values[0] == pytest.approx(values[2], abs=1e-9)


def test_invert_rejects_bad_cutoff() -> None:
    """The frequency cutoff must be positive."""

    with pytest.raises(InvalidParameter):
        invert_cf_on_grid(lambda t: np.ones_like(t), [0.0], 0.0)


def test_gaussian_cutoff_has_a_floor() -> None:
    """The cutoff never drops below 40."""

    assert gaussian_cutoff(1e-10) == 40.0
    assert gaussian_cutoff(1e-300) == 40.0


def test_trapezoid_mass() -> None:
    """Trapezoid rule on matching arrays."""

    assert trapezoid_mass([0.0, 1.0], [1.0, 1.0]) == pytest.approx(1.0)
    assert trapezoid_mass([0.0, 1.0, 2.0], [0.0, 1.0, 0.0]) == pytest.approx(1.0)
    with pytest.raises(LengthMismatch):
        trapezoid_mass([0.0, 1.0], [1.0])
    with pytest.raises(LengthMismatch):
        trapezoid_mass([0.0], [1.0])


def test_simpson_error_drops_sixteenfold_when_panels_double() -> None:
    """Composite Simpson converges at fourth order on a smooth integrand."""

    exact = 2.0 * math.sin(3.0) / 3.0
    errors = []
    for nodes in (16, 32, 64):
        spec = QuadratureSpec(nodes=nodes)
        value = integrate_symmetric(lambda t: np.cos(3.0 * t), 1.0, spec)
        errors.append(abs(value.real - exact))
    assert errors[0] / errors[1] >= 12.0
    assert errors[1] / errors[2] >= 12.0


def test_inversion_is_linear_in_the_cf() -> None:
    """Inverting a combination of CFs gives the same combination of densities."""

    grid = uniform_grid(-3.0, 3.0, 0.25)

    def normal(t):
        return np.exp(-0.5 * t**2)

    def wide(t):
        return np.exp(-2.0 * t**2)

    combined = invert_cf_on_grid(lambda t: 0.3 * normal(t) + 0.7 * wide(t), grid, 40.0)
    separate = 0.3 * invert_cf_on_grid(normal, grid, 40.0) + 0.7 * invert_cf_on_grid(
        wide, grid, 40.0
    )
    assert np.allclose(combined, separate, rtol=0.0, atol=1e-12)


def test_inversion_commutes_with_translation() -> None:
    """Multiplying the CF by exp(i t mu) shifts the inverted density by mu."""

    shift = 1.5
    grid = uniform_grid(-3.0, 3.0, 0.25)
    shifted = invert_cf_on_grid(lambda t: np.exp(1j * shift * t - 0.5 * t**2), grid, 40.0)
    moved_grid = invert_cf_on_grid(lambda t: np.exp(-0.5 * t**2), grid - shift, 40.0)
    assert np.allclose(shifted, moved_grid, rtol=0.0, atol=1e-10)
