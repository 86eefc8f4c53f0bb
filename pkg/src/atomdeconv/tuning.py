"""Bandwidth and truncation schedules, and the convergence rates they deliver."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import InvalidParameter
from .noise import OrdinarySmooth, SmoothnessClass, SmoothnessKind, Supersmooth

logger = logging.getLogger(__name__)


class Quantity(str, Enum):
    """Estimated object."""

    ATOM_P = "atom_p"
    DENSITY_F = "density_f"


class RateScale(str, Enum):
    """Whether a rate is a power of ``n`` or of ``log n``."""

    POLY_IN_N = "poly_in_n"
    LOG_IN_N = "log_in_n"


class Preset(str, Enum):
    """Bandwidth schedules proven rate-optimal for each regime."""

    ATOM_ORDINARY = "thm1-ordinary"
    ATOM_SUPERSMOOTH = "thm1-supersmooth"
    DENSITY_ORDINARY = "thm2-ordinary"
    DENSITY_SUPERSMOOTH = "thm2-supersmooth"

    @property
    def quantity(self) -> Quantity:
        if self in {Preset.ATOM_ORDINARY, Preset.ATOM_SUPERSMOOTH}:
            return Quantity.ATOM_P
        return Quantity.DENSITY_F

    @property
    def noise_kind(self) -> SmoothnessKind:
        if self in {Preset.ATOM_ORDINARY, Preset.DENSITY_ORDINARY}:
            return SmoothnessKind.ORDINARY
        return SmoothnessKind.SUPERSMOOTH


@dataclass(frozen=True)
class RateTarget:
    alpha: float
    noise_class: SmoothnessClass
    quantity: Quantity

    def __post_init__(self) -> None:
        if not self.alpha > 0:
            raise InvalidParameter(f"alpha must be positive, got {self.alpha}")


@dataclass(frozen=True)
class RateDescriptor:
    """Risk decays like ``n^exponent`` or ``(log n)^exponent``."""

    scale: RateScale
    exponent: float

    def evaluate(self, n: int) -> float:
        base = float(n) if self.scale is RateScale.POLY_IN_N else math.log(n)
        return base**self.exponent

    def __str__(self) -> str:
        base = "n" if self.scale is RateScale.POLY_IN_N else "(log n)"
        return f"{base}^{self.exponent:.6g}"


@dataclass(frozen=True)
class Schedule:
    """Tuning parameters for one sample size."""

    g: float
    h: float
    epsilon: float
    split: bool


def _require_positive(**values: float) -> None:
    for name, value in values.items():
        if not value > 0:
            raise InvalidParameter(f"{name} must be positive, got {value}")


def g_ordinary(n: int, alpha: float, beta: float, d: float = 1.0) -> float:
    """``d n^(-1/(2 alpha + 2 beta))``."""

    if n < 1:
        raise InvalidParameter(f"n must be at least 1, got {n}")
    _require_positive(alpha=alpha, beta=beta, d=d)
    return d * float(n) ** (-1.0 / (2.0 * alpha + 2.0 * beta))


def g_supersmooth(n: int, beta: float, gamma: float) -> float:
    """``(4/gamma)^(1/beta) (log n)^(-1/beta)``."""

    if n < 2:
        raise InvalidParameter(f"n must be at least 2 for a logarithmic schedule, got {n}")
    _require_positive(beta=beta, gamma=gamma)
    return (4.0 / gamma) ** (1.0 / beta) * math.log(n) ** (-1.0 / beta)


def h_ordinary(n: int, alpha: float, beta: float, d: float = 1.0) -> float:
    """``d (n - floor(n/2))^(-1/(2 alpha + 2 beta + 1))``."""

    if n < 2:
        raise InvalidParameter(f"n must be at least 2 for a split schedule, got {n}")
    _require_positive(alpha=alpha, beta=beta, d=d)
    return d * float(n - n // 2) ** (-1.0 / (2.0 * alpha + 2.0 * beta + 1.0))


def epsilon_schedule(n: int) -> float:
    """``1 / log(3n)``."""

    if n < 1:
        raise InvalidParameter(f"n must be at least 1, got {n}")
    return 1.0 / math.log(3.0 * n)


def theoretical_rate(target: RateTarget) -> RateDescriptor:
    """Upper risk bound attained by the preset schedules."""

    alpha, c = target.alpha, target.noise_class
    if target.quantity is Quantity.ATOM_P:
        if isinstance(c, OrdinarySmooth):
            return RateDescriptor(
                RateScale.POLY_IN_N, -(2 * alpha + 1) / (2 * alpha + 2 * c.beta)
            )
        return RateDescriptor(RateScale.LOG_IN_N, -(2 * alpha + 1) / c.beta)
    if isinstance(c, OrdinarySmooth):
        return RateDescriptor(
            RateScale.POLY_IN_N, -2 * alpha / (2 * alpha + 2 * c.beta + 1)
        )
    return RateDescriptor(RateScale.LOG_IN_N, -2 * alpha / c.beta)


def minimax_lower_rate(target: RateTarget) -> Optional[RateDescriptor]:
    """Rate no estimator can beat uniformly, where one is established.

    Density bounds need ``alpha >= 1/2``; the supersmooth atom bound is known for
    Gaussian noise (``beta = 2``) only. Returns ``None`` otherwise.
    """

    alpha, c = target.alpha, target.noise_class
    if target.quantity is Quantity.DENSITY_F:
        if alpha < 0.5:
            return None
        return theoretical_rate(target)
    if isinstance(c, OrdinarySmooth):
        # beta > 1 always holds here, which covers the beta > 1/2 requirement
        return theoretical_rate(target)
    if c.beta == 2.0:
        return RateDescriptor(RateScale.LOG_IN_N, -(alpha + 0.5))
    return None


def is_rate_optimal(target: RateTarget, tolerance: float = 1e-12) -> bool:
    """True when the upper rate matches an established lower rate."""

    lower = minimax_lower_rate(target)
    if lower is None:
        return False
    upper = theoretical_rate(target)
    if upper.scale is not lower.scale:
        return False
    # the log-scale atom bound is matched only when gamma equals the Gaussian value
    if (
        isinstance(target.noise_class, Supersmooth)
        and target.quantity is Quantity.ATOM_P
        and not math.isclose(target.noise_class.gamma, 2.0)
    ):
        return False
    return abs(upper.exponent - lower.exponent) <= tolerance


def auto_preset(noise_class: SmoothnessClass, quantity: Quantity) -> Preset:
    """Preset implied by the noise regime and the estimated quantity."""

    ordinary = isinstance(noise_class, OrdinarySmooth)
    if quantity is Quantity.ATOM_P:
        return Preset.ATOM_ORDINARY if ordinary else Preset.ATOM_SUPERSMOOTH
    return Preset.DENSITY_ORDINARY if ordinary else Preset.DENSITY_SUPERSMOOTH


def schedule_for(
    preset: Preset,
    n: int,
    alpha: float,
    noise_class: SmoothnessClass,
    d: float = 1.0,
) -> Schedule:
    """Bandwidths, truncation level and split flag for sample size ``n``."""

    if noise_class.kind is not preset.noise_kind:
        raise InvalidParameter(
            f"Preset {preset.value} needs {preset.noise_kind.value} noise, "
            f"got {noise_class.kind.value}"
        )
    epsilon = epsilon_schedule(n)
    if isinstance(noise_class, OrdinarySmooth):
        beta = noise_class.beta
        if preset is Preset.ATOM_ORDINARY:
            g = g_ordinary(n, alpha, beta, d)
            return Schedule(g=g, h=g, epsilon=epsilon, split=False)
        if n < 2:
            raise InvalidParameter(f"Sample splitting needs n >= 2, got {n}")
        return Schedule(
            g=g_ordinary(n // 2, alpha, beta, d),
            h=h_ordinary(n, alpha, beta, d),
            epsilon=epsilon,
            split=True,
        )
    g = g_supersmooth(n, noise_class.beta, noise_class.gamma)
    return Schedule(g=g, h=g, epsilon=epsilon, split=False)
