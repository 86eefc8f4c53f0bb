"""Two-alternative constructions behind the minimax lower bounds.

Alternative j mixes an atom of mass ``p_j = exp(-lambda_j)`` with the
Poisson-sum density ``f_j`` built from ``g_j``. The first alternative uses the
Cauchy characteristic function ``exp(-|t|)``; the second perturbs it far out in
frequency with a flat-top window, so the observation densities ``q_1`` and
``q_2`` are hard to tell apart while ``|p_2 - p_1|`` stays of order
``delta^(alpha + 1/2)``.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate, stats

from ..config import settings
from ..errors import (
    DensityNonPositive,
    InsufficientRows,
    InvalidParameter,
    NonPositiveRisk,
)
from ..noise import NoiseModel, OrdinarySmooth, satisfies_decay_upper_bound
from ..numerics import QuadratureSpec, gaussian_cutoff, invert_cf_on_grid, uniform_grid
from .simulate import RateFit

logger = logging.getLogger(__name__)


class PerturbationBase(str, Enum):
    """Characteristic function the perturbation is built on."""

    G1 = "g1"
    F1 = "f1"


class Alternative(str, Enum):
    Q1 = "q1"
    Q2 = "q2"


class DeltaMode(str, Enum):
    SUPERSMOOTH_LOG = "supersmooth-log"
    ORDINARY_POLY = "ordinary-poly"


@dataclass(frozen=True)
class AlternativePair:
    """Parameters ``(lambda, delta, alpha)`` of the two alternatives.

    ``delta = 0`` is admitted as the degenerate pair with identical models.
    """

    lambda_: float
    delta: float
    alpha: float
    base: PerturbationBase = PerturbationBase.G1

    def __post_init__(self) -> None:
        if not self.lambda_ > 0:
            raise InvalidParameter(f"lambda must be positive, got {self.lambda_}")
        if not 0.0 <= self.delta < 1.0:
            raise InvalidParameter(f"delta must lie in [0, 1), got {self.delta}")
        if not self.alpha > 0:
            raise InvalidParameter(f"alpha must be positive, got {self.alpha}")

    @property
    def shift(self) -> float:
        """``delta^(alpha + 1/2)``."""
        return self.delta ** (self.alpha + 0.5) if self.delta > 0 else 0.0

    @property
    def lambda1(self) -> float:
        return self.lambda_ + self.shift

    @property
    def lambda2(self) -> float:
        return self.lambda_

    @property
    def p1(self) -> float:
        return math.exp(-self.lambda1)

    @property
    def p2(self) -> float:
        return math.exp(-self.lambda2)


@dataclass(frozen=True)
class FlatTop:
    """Symmetric window equal to one on ``[-inner, inner]`` and zero beyond ``outer``."""

    inner: float = 1.0
    outer: float = 2.0

    def phi_H(self, t: ArrayLike) -> NDArray[np.float64]:
        s = (np.abs(np.asarray(t, dtype=float)) - self.inner) / (self.outer - self.inner)
        inside = (s > 0.0) & (s < 1.0)
        safe = np.where(inside, s, 0.5)
        rising = np.exp(-1.0 / safe)
        falling = np.exp(-1.0 / (1.0 - safe))
        transition = falling / (rising + falling)
        return np.where(s <= 0.0, 1.0, np.where(s >= 1.0, 0.0, transition))

    def __call__(self, t: ArrayLike) -> NDArray[np.float64]:
        return self.phi_H(t)


@dataclass(frozen=True)
class ChiSquareResult:
    """Grid integral of ``(q2 - q1)^2 / q1`` and a bound on the truncated tails."""

    chi_sq: float
    tail_bound: float
    min_q1: float


@dataclass(frozen=True)
class DivergenceRow:
    delta: float
    n: Optional[int]
    chi_sq: float
    n_times_chi_sq: Optional[float]
    separation: float
    tail_bound: float


def flat_top_H() -> FlatTop:
    return FlatTop()


def phi_g1(t: ArrayLike) -> NDArray[np.float64]:
    """Cauchy characteristic function ``exp(-|t|)``."""
    return np.exp(-np.abs(np.asarray(t, dtype=float)))


def _poisson_sum_cf(phi_g: NDArray[np.float64], lam: float) -> NDArray[np.float64]:
    return np.expm1(lam * phi_g) / math.expm1(lam)


def phi_f1(t: ArrayLike, pair: AlternativePair) -> NDArray[np.float64]:
    """``(exp(lambda_1 phi_g1) - 1) / (exp(lambda_1) - 1)``."""
    return _poisson_sum_cf(phi_g1(t), pair.lambda1)


def tau(t: ArrayLike, pair: AlternativePair, H: FlatTop) -> NDArray[np.float64]:
    """Perturbation ``(delta^(alpha+1/2) / lambda_2) (B(t) - 1) phi_H(delta t)``."""

    nodes = np.asarray(t, dtype=float)
    base = phi_g1(nodes) if pair.base is PerturbationBase.G1 else phi_f1(nodes, pair)
    return pair.shift / pair.lambda2 * (base - 1.0) * H(pair.delta * nodes)


def phi_g2(t: ArrayLike, pair: AlternativePair, H: FlatTop) -> NDArray[np.float64]:
    return phi_g1(t) + tau(t, pair, H)


def phi_f2(t: ArrayLike, pair: AlternativePair, H: FlatTop) -> NDArray[np.float64]:
    return _poisson_sum_cf(phi_g2(t, pair, H), pair.lambda2)


def phi_q(
    t: ArrayLike,
    which: Alternative,
    pair: AlternativePair,
    H: FlatTop,
    noise: NoiseModel,
) -> NDArray[np.complex128]:
    """Observation CF ``(p_j + (1 - p_j) phi_fj(t)) cf_Z(t)``.

    With ``f_j`` the Poisson sum of ``g_j`` the mixture factor equals
    ``exp(lambda_j (phi_gj(t) - 1))``, which is the form evaluated here.
    """

    nodes = np.asarray(t, dtype=float)
    if which is Alternative.Q1:
        exponent = pair.lambda1 * (phi_g1(nodes) - 1.0)
    else:
        exponent = pair.lambda2 * (phi_g2(nodes, pair, H) - 1.0)
    return np.exp(exponent) * noise.evaluate(nodes)


def phi_q_difference(
    t: ArrayLike, pair: AlternativePair, H: FlatTop, noise: NoiseModel
) -> NDArray[np.complex128]:
    """``phi_q2 - phi_q1`` evaluated without cancellation."""

    nodes = np.asarray(t, dtype=float)
    g1 = phi_g1(nodes)
    base = g1 if pair.base is PerturbationBase.G1 else phi_f1(nodes, pair)
    window = H(pair.delta * nodes)
    gap = pair.shift * ((base - 1.0) * window - (g1 - 1.0))
    return noise.evaluate(nodes) * np.exp(pair.lambda1 * (g1 - 1.0)) * np.expm1(gap)


def separation(pair: AlternativePair) -> float:
    """``|p_2 - p_1| = exp(-lambda) (1 - exp(-delta^(alpha+1/2)))``."""
    return math.exp(-pair.lambda_) * -math.expm1(-pair.shift)


def delta_schedule(
    n: float,
    mode: DeltaMode,
    c: float,
    alpha: float = 0.5,
    beta: Optional[float] = None,
) -> float:
    """``c (log n)^(-1/2)`` or ``c n^(-1/(2 alpha + 2 beta))``."""

    if n < 2:
        raise InvalidParameter(f"n must be at least 2, got {n}")
    if mode is DeltaMode.SUPERSMOOTH_LOG:
        if not 0 < c < 1:
            raise InvalidParameter(f"The logarithmic schedule needs 0 < c < 1, got {c}")
        return c * math.log(n) ** -0.5
    if not c > 0:
        raise InvalidParameter(f"c must be positive, got {c}")
    if not alpha > 0:
        raise InvalidParameter(f"alpha must be positive, got {alpha}")
    if beta is None or not beta > 0.5:
        raise InvalidParameter(f"The polynomial schedule needs beta > 1/2, got {beta}")
    return c * float(n) ** (-1.0 / (2.0 * alpha + 2.0 * beta))


def invert_g2(
    grid: ArrayLike,
    pair: AlternativePair,
    H: FlatTop,
    cutoff: float = settings.lower_bound.FREQUENCY_CUTOFF,
) -> NDArray[np.float64]:
    """Perturbed density ``g_2`` on ``grid``; negative values mean it is not a density."""

    return invert_cf_on_grid(lambda t: phi_g2(t, pair, H), grid, cutoff)


def _frequency_cutoff() -> float:
    return max(
        settings.lower_bound.FREQUENCY_CUTOFF,
        gaussian_cutoff(settings.lower_bound.TOLERANCE),
    )


def _tail_bound(
    pair: AlternativePair,
    H: FlatTop,
    noise: NoiseModel,
    frequency_cutoff: float,
    minorant: float,
    edge: float,
) -> float:
    """Bound on the chi-square mass beyond ``|x| > edge``.

    Twice integrating by parts gives ``|q2 - q1|(x) <= M / x^2`` with
    ``M = (1/2pi) int |(phi_q2 - phi_q1)''|``, and ``q1`` is bounded below by
    ``minorant / (1 + (|x| + A)^2)``.
    """

    spec = QuadratureSpec()
    panels = 4 * spec.nodes
    t = np.linspace(-frequency_cutoff, frequency_cutoff, panels + 1)
    difference = phi_q_difference(t, pair, H, noise)
    second = np.gradient(np.gradient(difference, t), t)
    m2 = float(integrate.trapezoid(np.abs(second), t)) / (2.0 * math.pi)
    if m2 == 0.0:
        return 0.0
    a = settings.lower_bound.MINORANT_SHIFT
    tail = (1.0 + a**2) / (3.0 * edge**3) + a / edge**2 + 1.0 / edge
    return 2.0 * m2**2 / minorant * tail


def chi_sq_divergence(
    pair: AlternativePair,
    H: FlatTop,
    noise: NoiseModel,
    cutoff: float = settings.lower_bound.CUTOFF,
    grid_step: float = settings.lower_bound.GRID_STEP,
) -> ChiSquareResult:
    """Chi-square divergence of ``q_2`` from ``q_1`` on ``[-cutoff, cutoff]``.

    Both ``q_1`` and ``q_2 - q_1`` are obtained by Fourier inversion. For
    ordinary smooth noise the atom part ``p_j k(x)`` is taken from the noise
    density, so only exponentially decaying transforms are inverted.
    """

    if not cutoff > 0 or not grid_step > 0:
        raise InvalidParameter("cutoff and grid_step must be positive")
    x = uniform_grid(-cutoff, cutoff, grid_step)
    frequency_cutoff = _frequency_cutoff()

    if isinstance(noise.classification, OrdinarySmooth):
        if noise.density is None:
            raise InvalidParameter(
                f"Ordinary smooth noise {noise.name!r} needs a density for the atom part"
            )
        kernel = np.asarray(noise.density(x), dtype=float)
        continuous = invert_cf_on_grid(
            lambda t: noise.evaluate(t)
            * math.exp(-pair.lambda1)
            * np.expm1(pair.lambda1 * phi_g1(t)),
            x,
            frequency_cutoff,
        )
        q1 = pair.p1 * kernel + continuous
        jump = separation(pair)
        difference = jump * kernel + invert_cf_on_grid(
            lambda t: phi_q_difference(t, pair, H, noise) - jump * noise.evaluate(t),
            x,
            frequency_cutoff,
        )
    else:
        q1 = invert_cf_on_grid(
            lambda t: phi_q(t, Alternative.Q1, pair, H, noise), x, frequency_cutoff
        )
        difference = invert_cf_on_grid(
            lambda t: phi_q_difference(t, pair, H, noise), x, frequency_cutoff
        )

    min_q1 = float(np.min(q1))
    if not min_q1 > 0:
        raise DensityNonPositive(
            f"Inverted q1 reaches {min_q1:.3e}; refine the grid or frequency cutoff"
        )

    chi_sq = float(integrate.trapezoid(difference**2 / q1, x))

    a = settings.lower_bound.MINORANT_SHIFT
    if noise.cdf is not None:
        kappa = float(noise.cdf(a) - noise.cdf(-a))
        minorant = kappa * pair.lambda_ * math.exp(-pair.lambda1) / math.pi
    else:
        minorant = float(np.min(q1 * (1.0 + (np.abs(x) + a) ** 2)))
    tail_bound = _tail_bound(pair, H, noise, frequency_cutoff, minorant, cutoff)
    logger.debug(
        f"chi-square at delta={pair.delta!r}: {chi_sq!r} (tail bound {tail_bound:.3e})"
    )
    return ChiSquareResult(chi_sq=max(chi_sq, 0.0), tail_bound=tail_bound, min_q1=min_q1)


def divergence_table(
    lambda_: float,
    alpha: float,
    noise: NoiseModel,
    ns: Optional[Sequence[int]] = None,
    deltas: Optional[Sequence[float]] = None,
    mode: DeltaMode = DeltaMode.SUPERSMOOTH_LOG,
    c: float = 0.5,
    beta: Optional[float] = None,
    d1: float = 4.0,
    cutoff: float = settings.lower_bound.CUTOFF,
    grid_step: float = settings.lower_bound.GRID_STEP,
    base: PerturbationBase = PerturbationBase.G1,
) -> List[DivergenceRow]:
    """Separation and divergence along a delta schedule or an explicit delta list."""

    if (ns is None) == (deltas is None):
        raise InvalidParameter("Provide exactly one of ns or deltas")
    if mode is DeltaMode.ORDINARY_POLY:
        if not isinstance(noise.classification, OrdinarySmooth):
            raise InvalidParameter("The polynomial schedule needs ordinary smooth noise")
        beta = noise.classification.beta if beta is None else beta
        frequencies = np.linspace(-50.0, 50.0, 20001)
        if not satisfies_decay_upper_bound(noise, d1, frequencies):
            raise InvalidParameter(
                f"Noise {noise.name!r} violates the decay upper bound with d1={d1}"
            )

    H = flat_top_H()
    if ns is not None:
        plan = [(int(n), delta_schedule(n, mode, c, alpha, beta)) for n in ns]
    else:
        plan = [(None, float(delta)) for delta in deltas or []]

    rows: List[DivergenceRow] = []
    for n, delta in plan:
        pair = AlternativePair(lambda_=lambda_, delta=delta, alpha=alpha, base=base)
        result = chi_sq_divergence(pair, H, noise, cutoff, grid_step)
        rows.append(
            DivergenceRow(
                delta=delta,
                n=n,
                chi_sq=result.chi_sq,
                n_times_chi_sq=None if n is None else n * result.chi_sq,
                separation=separation(pair),
                tail_bound=result.tail_bound,
            )
        )
    return rows


def divergence_slope(rows: Sequence[DivergenceRow]) -> RateFit:
    """Log-log regression of chi-square on delta."""

    if len(rows) < 3:
        raise InsufficientRows(f"Slope fit needs at least 3 rows, got {len(rows)}")
    chi = np.array([row.chi_sq for row in rows], dtype=float)
    delta = np.array([row.delta for row in rows], dtype=float)
    if np.any(chi <= 0) or np.any(delta <= 0):
        raise NonPositiveRisk("Slope fit needs strictly positive divergences and deltas")
    fit = stats.linregress(np.log(delta), np.log(chi))
    return RateFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
    )
