"""Tests for the two-alternative lower-bound constructions."""

from __future__ import annotations

import math

import numpy as np
import pytest
from scipy import integrate

from atomdeconv.errors import InsufficientRows, InvalidParameter
from atomdeconv.lab.lowerbound import (
    Alternative,
    AlternativePair,
    DeltaMode,
    DivergenceRow,
    FlatTop,
    PerturbationBase,
    chi_sq_divergence,
    delta_schedule,
    divergence_slope,
    divergence_table,
    flat_top_H,
    invert_g2,
    phi_f1,
    phi_f2,
    phi_g1,
    phi_g2,
    phi_q,
    phi_q_difference,
    separation,
    tau,
)
from atomdeconv.noise import gaussian_noise, laplace_noise
from atomdeconv.numerics import invert_cf_on_grid, uniform_grid


class TestAlternativePair:
    """Parameters of the two alternatives."""

    def test_masses(self) -> None:
        """p_1 carries the extra delta^(alpha + 1/2) in its exponent."""

        pair = AlternativePair(lambda_=1.0, delta=0.25, alpha=0.5)
        assert pair.shift == pytest.approx(0.25)
        assert pair.p2 == pytest.approx(math.exp(-1.0))
        assert pair.p1 == pytest.approx(math.exp(-1.25))

    def test_validation(self) -> None:
        """lambda > 0, delta in [0, 1) and alpha > 0."""

        with pytest.raises(InvalidParameter):
            AlternativePair(lambda_=0.0, delta=0.1, alpha=0.5)
        with pytest.raises(InvalidParameter):
            AlternativePair(lambda_=1.0, delta=1.0, alpha=0.5)
        with pytest.raises(InvalidParameter):
            AlternativePair(lambda_=1.0, delta=0.1, alpha=0.0)


class TestCharacteristicFunctions:
    """Closed-form pieces of the construction."""

    def test_flat_top(self) -> None:
        """One inside, zero outside, one half at the midpoint of the transition."""

        H = flat_top_H()
        assert H == FlatTop(inner=1.0, outer=2.0)
        assert H(np.array([0.0, 0.7, 1.0])).tolist() == [1.0, 1.0, 1.0]
        assert float(H(1.5)) == pytest.approx(0.5)
        assert float(H(2.0)) == 0.0
        assert float(H(-2.5)) == 0.0
        values = H(np.linspace(1.0, 2.0, 101))
        assert np.all(np.diff(values) <= 0.0)

    def test_phi_f1(self) -> None:
        """With lambda_1 = log 2, phi_f1(log 2) = sqrt(2) - 1."""

        pair = AlternativePair(lambda_=math.log(2.0), delta=0.0, alpha=0.5)
        assert float(phi_f1(math.log(2.0), pair)) == pytest.approx(math.sqrt(2.0) - 1.0)
        assert float(phi_f1(0.0, pair)) == pytest.approx(1.0)

    def test_tau_vanishes_at_origin(self) -> None:
        """The perturbation keeps g_2 a probability transform."""

        pair = AlternativePair(lambda_=1.0, delta=0.25, alpha=0.5)
        H = flat_top_H()
        assert float(tau(0.0, pair, H)) == 0.0
        assert float(phi_g2(0.0, pair, H)) == 1.0
        assert float(phi_f2(0.0, pair, H)) == pytest.approx(1.0)

    def test_tau_values(self) -> None:
        """tau(1) = delta (base(1) - 1) inside the flat top."""

        H = flat_top_H()
        g1_pair = AlternativePair(lambda_=1.0, delta=0.25, alpha=0.5)
        assert float(tau(1.0, g1_pair, H)) == pytest.approx(0.25 * (math.exp(-1.0) - 1.0))
        f1_pair = AlternativePair(
            lambda_=1.0, delta=0.25, alpha=0.5, base=PerturbationBase.F1
        )
        expected = 0.25 * (float(phi_f1(1.0, f1_pair)) - 1.0)
        assert float(tau(1.0, f1_pair, H)) == pytest.approx(expected)

    def test_alternatives_agree_near_the_origin(self) -> None:
        """Inside |t| < 1/delta the perturbation is a scaled copy of phi_g1 - 1."""

        pair = AlternativePair(lambda_=1.0, delta=0.25, alpha=0.5)
        H = flat_top_H()
        t = np.linspace(-3.0, 3.0, 61)
        assert np.allclose(phi_g2(t, pair, H), phi_g1(t) + pair.shift * (phi_g1(t) - 1.0))

    def test_difference_matches_subtraction(self) -> None:
        """The cancellation-free difference equals phi_q2 - phi_q1."""

        pair = AlternativePair(lambda_=1.0, delta=0.3, alpha=0.5)
        H = flat_top_H()
        noise = gaussian_noise(1.0)
        t = np.linspace(-8.0, 8.0, 161)
        direct = phi_q(t, Alternative.Q2, pair, H, noise) - phi_q(
            t, Alternative.Q1, pair, H, noise
        )
        assert np.allclose(phi_q_difference(t, pair, H, noise), direct, rtol=0.0, atol=1e-14)


class TestPerturbedDensity:
    """Non-negativity of the perturbed Cauchy density g_2."""

    def test_smooth_enough_perturbation_is_a_density(self) -> None:
        """For alpha = 2.5 the perturbation stays below the Cauchy tails."""

        grid = uniform_grid(-50.0, 50.0, 0.5)
        for delta in (0.25, 0.1):
            pair = AlternativePair(lambda_=1.0, delta=delta, alpha=2.5)
            assert float(np.min(invert_g2(grid, pair, flat_top_H()))) > 0.0

    def test_rough_perturbation_dips_below_zero(self) -> None:
        """For alpha = 1/2 the window mass 3/delta drives g_2(0) negative."""

        pair = AlternativePair(lambda_=1.0, delta=0.25, alpha=0.5)
        values = invert_g2([0.0], pair, flat_top_H())
        assert values[0] < 0.0


class TestSeparationAndSchedule:
    """Separation of the atom masses and the delta schedules."""

    def test_separation(self) -> None:
        """exp(-lambda) (1 - exp(-delta^(alpha + 1/2)))."""

        pair = AlternativePair(lambda_=1.0, delta=0.25, alpha=0.5)
        expected = math.exp(-1.0) * (1.0 - math.exp(-0.25))
        assert separation(pair) == pytest.approx(expected, rel=1e-12)
        assert separation(pair) == pytest.approx(0.081375, abs=1e-6)
        assert separation(pair) == pytest.approx(abs(pair.p2 - pair.p1), rel=1e-12)

    def test_separation_order(self) -> None:
        """separation / delta^(alpha + 1/2) approaches exp(-lambda)."""

        pair = AlternativePair(lambda_=1.0, delta=0.05, alpha=0.5)
        ratio = separation(pair) / pair.shift
        assert abs(ratio / math.exp(-1.0) - 1.0) < 0.1

    def test_delta_schedules(self) -> None:
        """c (log n)^(-1/2) and c n^(-1/(2 alpha + 2 beta))."""

        assert delta_schedule(math.exp(4.0), DeltaMode.SUPERSMOOTH_LOG, 0.5) == pytest.approx(0.25)
        assert delta_schedule(
            65536, DeltaMode.ORDINARY_POLY, 1.0, alpha=6.0, beta=2.0
        ) == pytest.approx(0.5)

    def test_delta_schedule_validation(self) -> None:
        """c must lie in (0, 1) on the log schedule and beta must exceed 1/2."""

        with pytest.raises(InvalidParameter):
            delta_schedule(100, DeltaMode.SUPERSMOOTH_LOG, 1.5)
        with pytest.raises(InvalidParameter):
            delta_schedule(100, DeltaMode.ORDINARY_POLY, 1.0, alpha=6.0, beta=0.5)
        with pytest.raises(InvalidParameter):
            delta_schedule(1, DeltaMode.SUPERSMOOTH_LOG, 0.5)


class TestChiSquare:
    """Divergence between the observation densities."""

    def test_identical_models(self) -> None:
        """delta = 0 gives identical alternatives."""

        pair = AlternativePair(lambda_=1.0, delta=0.0, alpha=0.5)
        result = chi_sq_divergence(pair, flat_top_H(), gaussian_noise(1.0))
        assert result.chi_sq == pytest.approx(0.0, abs=1e-15)
        assert result.min_q1 > 0.0
        assert result.tail_bound == 0.0

    def test_identical_models_with_ordinary_noise(self) -> None:
        """The atom-split path also sees no difference at delta = 0."""

        pair = AlternativePair(lambda_=1.0, delta=0.0, alpha=0.5)
        result = chi_sq_divergence(pair, flat_top_H(), laplace_noise(1.0))
        assert result.chi_sq == pytest.approx(0.0, abs=1e-15)

    def test_divergence_shrinks_with_delta(self) -> None:
        """Pushing the perturbation further out makes the models closer."""

        rows = divergence_table(
            1.0, 0.5, gaussian_noise(1.0), deltas=[0.4, 0.3, 0.2]
        )
        chi = [row.chi_sq for row in rows]
        assert chi[0] > chi[1] > chi[2] > 0.0
        assert all(row.n is None and row.n_times_chi_sq is None for row in rows)
        assert divergence_slope(rows).slope > 0.0

    def test_table_arguments(self) -> None:
        """Exactly one of ns and deltas is required."""

        with pytest.raises(InvalidParameter):
            divergence_table(1.0, 0.5, gaussian_noise(1.0))
        with pytest.raises(InvalidParameter):
            divergence_table(1.0, 0.5, gaussian_noise(1.0), ns=[1000], deltas=[0.1])
        with pytest.raises(InvalidParameter):
            divergence_table(
                1.0, 0.5, gaussian_noise(1.0), ns=[1000], mode=DeltaMode.ORDINARY_POLY
            )

    def test_slope_needs_three_rows(self) -> None:
        """Two rows cannot be regressed."""

        rows = [
            DivergenceRow(delta=0.1, n=None, chi_sq=1e-3, n_times_chi_sq=None,
                          separation=0.01, tail_bound=0.0),
            DivergenceRow(delta=0.2, n=None, chi_sq=1e-2, n_times_chi_sq=None,
                          separation=0.02, tail_bound=0.0),
        ]
        with pytest.raises(InsufficientRows):
            divergence_slope(rows)


def test_n_chi_square_is_vanishing_along_the_log_schedule() -> None:
    """n chi^2 decreases strictly along c (log n)^(-1/2) and ends below 10% of its start."""

    rows = divergence_table(
        1.0, 0.5, gaussian_noise(1.0), ns=[10**3, 10**4, 10**5, 10**6], c=0.5
    )
    values = [row.n_times_chi_sq for row in rows]
    assert all(a > b for a, b in zip(values, values[1:]))
    assert values[-1] < 0.1 * values[0]


@pytest.mark.parametrize("base", list(PerturbationBase))
@pytest.mark.parametrize(
    "noise", [gaussian_noise(1.0), laplace_noise(1.0)], ids=["gaussian", "laplace"]
)
def test_observation_cfs_stay_in_the_unit_disc(base, noise) -> None:
    """|phi_q| never exceeds one for either alternative."""

    H = flat_top_H()
    t = np.linspace(-200.0, 200.0, 40001)
    for delta in (0.05, 0.25, 0.5):
        pair = AlternativePair(lambda_=1.0, delta=delta, alpha=0.5, base=base)
        for which in Alternative:
            assert float(np.max(np.abs(phi_q(t, which, pair, H, noise)))) <= 1.0 + 1e-12


def test_chi_square_is_unchanged_by_reflecting_the_grid() -> None:
    """Both observation densities are even, so x and -x give the same divergence."""

    pair = AlternativePair(lambda_=1.0, delta=0.3, alpha=0.5)
    H = flat_top_H()
    noise = gaussian_noise(1.0)

    def divergence_on(x: np.ndarray) -> float:
        q1 = invert_cf_on_grid(lambda t: phi_q(t, Alternative.Q1, pair, H, noise), x, 40.0)
        difference = invert_cf_on_grid(lambda t: phi_q_difference(t, pair, H, noise), x, 40.0)
        return float(integrate.trapezoid(difference**2 / q1, x))

    x = uniform_grid(-15.0, 25.0, 0.05)
    assert divergence_on(-x[::-1]) == pytest.approx(divergence_on(x), rel=1e-8)
