"""Known error distributions: characteristic functions, smoothness classes and samplers."""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import stats

from .config import settings
from .errors import (
    CfNotHermitian,
    CfNotOneAtZero,
    InvalidParameter,
    InvalidSpecString,
    NoiseCfUnderflow,
)

logger = logging.getLogger(__name__)

CharacteristicFunction = Callable[[NDArray[np.float64]], ArrayLike]
Sampler = Callable[[np.random.Generator, int], ArrayLike]
RealFunction = Callable[[NDArray[np.float64]], ArrayLike]

HERMITIAN_NODES = (0.5, 1.0, 2.0, 5.0)
CF_CHECK_TOLERANCE = 1e-12


class SmoothnessKind(str, Enum):
    """Decay regime of the noise characteristic function."""

    ORDINARY = "ordinary"
    SUPERSMOOTH = "supersmooth"


@dataclass(frozen=True)
class OrdinarySmooth:
    """``d0 |t|^-beta <= |cf(t)|`` for large ``|t|``."""

    d0: float
    beta: float

    def __post_init__(self) -> None:
        if not self.d0 > 0:
            raise InvalidParameter(f"d0 must be positive, got {self.d0}")
        if not self.beta > 1:
            raise InvalidParameter(
                f"Ordinary smooth noise needs beta > 1 for integrability, got {self.beta}"
            )

    @property
    def kind(self) -> SmoothnessKind:
        return SmoothnessKind.ORDINARY


@dataclass(frozen=True)
class Supersmooth:
    """``d0 |t|^beta0 exp(-|t|^beta / gamma) <= |cf(t)|`` for large ``|t|``."""

    d0: float
    beta0: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        for name in ("d0", "beta", "gamma"):
            value = getattr(self, name)
            if not value > 0:
                raise InvalidParameter(f"{name} must be positive, got {value}")
        if not np.isfinite(self.beta0):
            raise InvalidParameter(f"beta0 must be finite, got {self.beta0}")

    @property
    def kind(self) -> SmoothnessKind:
        return SmoothnessKind.SUPERSMOOTH


SmoothnessClass = Union[OrdinarySmooth, Supersmooth]


@dataclass(frozen=True)
class NoiseModel:
    """Distribution of the additive error ``Z``."""

    name: str
    cf: CharacteristicFunction
    classification: SmoothnessClass
    sampler: Sampler = field(repr=False)
    density: Optional[RealFunction] = field(default=None, repr=False)
    cdf: Optional[RealFunction] = field(default=None, repr=False)

    def evaluate(self, t: ArrayLike) -> NDArray[np.complex128]:
        """Characteristic function as a complex array shaped like ``t``."""

        nodes = np.asarray(t, dtype=float)
        values = np.asarray(self.cf(nodes), dtype=complex)
        return np.broadcast_to(values, nodes.shape).astype(complex)

    def evaluate_nonvanishing(self, t: ArrayLike) -> NDArray[np.complex128]:
        """Like :meth:`evaluate` but refuses values below the underflow floor."""

        values = self.evaluate(t)
        smallest = float(np.min(np.abs(values))) if values.size else 1.0
        if smallest < settings.quadrature.CF_FLOOR:
            raise NoiseCfUnderflow(
                f"|cf| of {self.name} drops to {smallest:.3e} on the quadrature range"
            )
        return values


def gaussian_noise(sigma: float) -> NoiseModel:
    """Centered normal noise with standard deviation ``sigma``."""

    if not sigma > 0:
        raise InvalidParameter(f"Gaussian sigma must be positive, got {sigma}")
    law = stats.norm(scale=sigma)
    return NoiseModel(
        name=f"gaussian:{sigma:g}",
        cf=lambda t: np.exp(-0.5 * sigma**2 * np.square(t)),
        classification=Supersmooth(d0=1.0, beta0=0.0, beta=2.0, gamma=2.0 / sigma**2),
        sampler=lambda rng, n: rng.normal(0.0, sigma, size=n),
        density=law.pdf,
        cdf=law.cdf,
    )


def laplace_noise(b: float) -> NoiseModel:
    """Centered Laplace noise with scale ``b``."""

    if not b > 0:
        raise InvalidParameter(f"Laplace scale must be positive, got {b}")
    law = stats.laplace(scale=b)
    return NoiseModel(
        name=f"laplace:{b:g}",
        cf=lambda t: 1.0 / (1.0 + b**2 * np.square(t)),
        classification=OrdinarySmooth(d0=min(1.0, 1.0 / (2.0 * b**2)), beta=2.0),
        sampler=lambda rng, n: rng.laplace(0.0, b, size=n),
        density=law.pdf,
        cdf=law.cdf,
    )


def point_mass_noise() -> NoiseModel:
    """Degenerate ``Z = 0``; its characteristic function is identically one."""

    return NoiseModel(
        name="point-mass",
        cf=lambda t: np.ones_like(t, dtype=complex),
        classification=Supersmooth(d0=1.0, beta0=0.0, beta=2.0, gamma=2.0),
        sampler=lambda rng, n: np.zeros(n),
        cdf=lambda x: np.where(np.asarray(x) >= 0.0, 1.0, 0.0),
    )


def custom_noise(
    cf: CharacteristicFunction,
    classification: SmoothnessClass,
    sampler: Sampler,
    name: str = "custom",
    density: Optional[RealFunction] = None,
    cdf: Optional[RealFunction] = None,
) -> NoiseModel:
    """Wrap a user-supplied characteristic function after basic sanity checks.

    Only ``cf(0) = 1`` and Hermitian symmetry at a few nodes are checked;
    the decay bounds implied by ``classification`` are taken on trust.
    """

    model = NoiseModel(
        name=name,
        cf=cf,
        classification=classification,
        sampler=sampler,
        density=density,
        cdf=cdf,
    )
    at_zero = complex(model.evaluate(np.zeros(1))[0])
    if abs(at_zero - 1.0) > CF_CHECK_TOLERANCE:
        raise CfNotOneAtZero(f"cf(0) = {at_zero!r} for noise {name!r}")

    nodes = np.array(HERMITIAN_NODES)
    forward = model.evaluate(nodes)
    backward = model.evaluate(-nodes)
    if np.max(np.abs(backward - np.conj(forward))) > CF_CHECK_TOLERANCE:
        raise CfNotHermitian(f"cf(-t) differs from conj(cf(t)) for noise {name!r}")
    return model


def sample_noise(model: NoiseModel, n: int, seed: int) -> NDArray[np.float64]:
    """Draw ``n`` values of ``Z``; identical for identical seeds."""

    if n < 1:
        raise InvalidParameter(f"Sample size must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    return np.asarray(model.sampler(rng, n), dtype=float)


def parse_noise(spec: str) -> NoiseModel:
    """Build a noise model from ``gaussian:<sigma>``, ``laplace:<b>`` or ``point-mass``."""

    text = spec.strip().lower()
    if text in {"point-mass", "none"}:
        return point_mass_noise()
    family, separator, raw = text.partition(":")
    if not separator:
        raise InvalidSpecString(
            f"Invalid noise {spec!r}; expected gaussian:<sigma> or laplace:<b>"
        )
    try:
        scale = float(raw)
    except ValueError:
        raise InvalidSpecString(f"Invalid noise scale in {spec!r}")
    if family == "gaussian":
        return gaussian_noise(scale)
    if family == "laplace":
        return laplace_noise(scale)
    raise InvalidSpecString(f"Unknown noise family {family!r} in {spec!r}")


def _decay_envelope(classification: SmoothnessClass, t: NDArray[np.float64]) -> NDArray[np.float64]:
    magnitude = np.abs(t)
    if isinstance(classification, OrdinarySmooth):
        return 1.0 / (1.0 + magnitude**classification.beta)
    return np.exp(-(magnitude**classification.beta) / classification.gamma)


def satisfies_decay_lower_bound(model: NoiseModel, t_grid: ArrayLike) -> bool:
    """Check the classification's lower bound on ``|cf|`` for grid points with |t| >= 1."""

    t = np.asarray(t_grid, dtype=float)
    t = t[np.abs(t) >= 1.0]
    if t.size == 0:
        return True
    magnitude = np.abs(model.evaluate(t))
    c = model.classification
    if isinstance(c, OrdinarySmooth):
        bound = c.d0 * np.abs(t) ** (-c.beta)
    else:
        bound = c.d0 * np.abs(t) ** c.beta0 * np.exp(-(np.abs(t) ** c.beta) / c.gamma)
    return bool(np.all(magnitude >= bound * (1.0 - CF_CHECK_TOLERANCE)))


def satisfies_decay_upper_bound(model: NoiseModel, d1: float, t_grid: ArrayLike) -> bool:
    """Check ``|cf|`` and ``|cf'|`` against ``d1`` times the decay envelope.

    The derivative is taken by finite differences on ``t_grid``, which must be
    strictly increasing and reasonably fine.
    """

    if not d1 > 0:
        raise InvalidParameter(f"d1 must be positive, got {d1}")
    t = np.asarray(t_grid, dtype=float)
    if t.size < 3 or not np.all(np.diff(t) > 0):
        raise InvalidParameter("Decay check needs a strictly increasing grid of 3+ points")
    values = model.evaluate(t)
    derivative = np.gradient(values, t)
    bound = d1 * _decay_envelope(model.classification, t) * (1.0 + 1e-9) + 1e-12
    return bool(np.all(np.abs(values) <= bound) and np.all(np.abs(derivative) <= bound))
