"""Fourier-domain kernels and numerical checks of their validity conditions."""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .config import settings
from .errors import (
    IntegralNotTwo,
    InvalidParameter,
    InvalidSpecString,
    KernelKindMismatch,
    NotOneAtZero,
    RatioUnbounded,
)
from .numerics import QuadratureSpec, integrate_symmetric

logger = logging.getLogger(__name__)

RealOrArray = Union[float, NDArray[np.float64]]

PAPER_U_SCALE = 693.0 / 8.0


class KernelKind(str, Enum):
    """Role a kernel plays inside the estimators."""

    ATOM_U = "atom_u"
    DENSITY_W = "density_w"


def _shaped(t: ArrayLike, values: NDArray[np.float64]) -> RealOrArray:
    if np.ndim(t) == 0:
        return float(values)
    return values


def phi_u_paper(t: ArrayLike) -> RealOrArray:
    """(693/8) t^6 (1 - t^2)^2 on [-1, 1], zero elsewhere."""

    x = np.asarray(t, dtype=float)
    values = np.where(
        np.abs(x) <= 1.0, PAPER_U_SCALE * x**6 * (1.0 - x**2) ** 2, 0.0
    )
    return _shaped(t, values)


def phi_sinc(t: ArrayLike) -> RealOrArray:
    """Indicator of the closed interval [-1, 1]."""

    x = np.asarray(t, dtype=float)
    return _shaped(t, np.where(np.abs(x) <= 1.0, 1.0, 0.0))


def phi_w_default(t: ArrayLike, alpha: float) -> RealOrArray:
    """(1 - |t|^alpha) on [-1, 1], zero elsewhere."""

    if not alpha > 0:
        raise InvalidParameter(f"Kernel exponent alpha must be positive, got {alpha}")
    x = np.asarray(t, dtype=float)
    values = np.where(np.abs(x) <= 1.0, 1.0 - np.abs(x) ** alpha, 0.0)
    return _shaped(t, values)


@dataclass(frozen=True)
class FourierKernel:
    """A real, symmetric Fourier transform supported on [-1, 1]."""

    name: str
    phi: Callable[[ArrayLike], RealOrArray]
    kind: KernelKind
    support_halfwidth: float = 1.0

    def __call__(self, t: ArrayLike) -> RealOrArray:
        return self.phi(t)


@dataclass(frozen=True)
class UValidity:
    """Tightest constant U with |phi_u(t)| <= U |t|^alpha on the grid."""

    alpha: float
    u_bound: float
    integral: float


@dataclass(frozen=True)
class WValidity:
    """Tightest constant W with |phi_w(t) - 1| <= W |t|^alpha on the grid."""

    alpha: float
    w_bound: float
    square_integral: float


def paper_u_kernel() -> FourierKernel:
    return FourierKernel("paper-u", phi_u_paper, KernelKind.ATOM_U)


def sinc_kernel(kind: KernelKind) -> FourierKernel:
    return FourierKernel("sinc", phi_sinc, kind)


def poly_w_kernel(alpha: float) -> FourierKernel:
    if not alpha > 0:
        raise InvalidParameter(f"Kernel exponent alpha must be positive, got {alpha}")
    return FourierKernel(
        f"poly-w:{alpha:g}",
        lambda t: phi_w_default(t, alpha),
        KernelKind.DENSITY_W,
    )


def parse_kernel(identifier: str, kind: KernelKind) -> FourierKernel:
    """Build a kernel from ``paper-u``, ``sinc`` or ``poly-w:<alpha>``."""

    text = identifier.strip().lower()
    if text == "sinc":
        return sinc_kernel(kind)
    if text == "paper-u":
        if kind is not KernelKind.ATOM_U:
            raise KernelKindMismatch("Kernel 'paper-u' can only be used for the atom")
        return paper_u_kernel()
    if text.startswith("poly-w:"):
        if kind is not KernelKind.DENSITY_W:
            raise KernelKindMismatch("Kernel 'poly-w' can only be used for the density")
        try:
            alpha = float(text.split(":", 1)[1])
        except ValueError:
            raise InvalidSpecString(f"Invalid kernel exponent in {identifier!r}")
        return poly_w_kernel(alpha)
    raise InvalidSpecString(
        f"Unknown kernel {identifier!r}; expected paper-u, sinc or poly-w:<alpha>"
    )


def _positive_half_grid(grid_size: int) -> Tuple[NDArray[np.float64], float]:
    if grid_size < 5:
        raise InvalidParameter(f"Validation grid needs at least 5 points, got {grid_size}")
    spacing = 1.0 / (grid_size - 1)
    return spacing * np.arange(1, grid_size, dtype=float), spacing


def _bounded_ratio(
    numerator: Callable[[NDArray[np.float64]], NDArray[np.float64]],
    alpha: float,
    grid_size: int,
    label: str,
    floor: float = 0.0,
) -> float:
    """Supremum of ``numerator(t) / t^alpha`` on (0, 1] including its limit at zero.

    Nonzero numerators at or below ``floor`` carry no significant digits and
    are skipped; the limit is extrapolated from the innermost resolvable pair
    ``(t, 2t)``.
    """

    def resolvable(values: NDArray[np.float64]) -> NDArray[np.bool_]:
        return (values == 0.0) | (values > floor)

    t, _ = _positive_half_grid(grid_size)
    numerators = np.asarray(numerator(t), dtype=float)
    usable = resolvable(numerators)
    if not np.any(usable):
        return 0.0
    ratios = np.where(usable, numerators / t**alpha, np.nan)

    first = int(np.argmax(usable))
    partner = 2 * first + 1
    inner = float(ratios[first])
    limit = inner
    if partner < t.size and usable[partner]:
        second = float(ratios[partner])
        half_t = t[first] / 2.0
        half = np.asarray(numerator(np.array([half_t])), dtype=float)
        if resolvable(half)[0]:
            half_ratio = float(half[0]) / half_t**alpha
            if half_ratio > 2.0 * inner and inner > second:
                raise RatioUnbounded(f"{label} ratio grows without bound near t = 0")
        # Richardson extrapolation in t^2 towards the origin
        limit = (4.0 * inner - second) / 3.0

    bound = max(float(np.nanmax(ratios)), limit)
    if not np.isfinite(bound):
        raise RatioUnbounded(f"{label} ratio is not finite on the validation grid")
    logger.debug(f"{label} ratio limit at zero {limit!r}, supremum {bound!r}")
    return bound


def _validation_spec(grid_size: int) -> QuadratureSpec:
    panels = 2 * (grid_size - 1)
    return QuadratureSpec(nodes=panels + panels % 2)


def validate_u_kernel(
    kernel: FourierKernel,
    alpha: float,
    grid_size: int = settings.kernels.GRID_SIZE,
) -> UValidity:
    """Check the atom-kernel conditions and return the tightest constant U."""

    if kernel.kind is not KernelKind.ATOM_U:
        raise KernelKindMismatch(f"Kernel {kernel.name!r} is not an atom kernel")
    if not alpha > 0:
        raise InvalidParameter(f"alpha must be positive, got {alpha}")

    integral = integrate_symmetric(kernel, 1.0, _validation_spec(grid_size)).real
    if abs(integral - 2.0) > settings.kernels.INTEGRAL_TOLERANCE:
        raise IntegralNotTwo(
            f"Kernel {kernel.name!r} integrates to {integral!r} instead of 2"
        )

    bound = _bounded_ratio(
        lambda t: np.abs(np.asarray(kernel(t), dtype=float)),
        alpha,
        grid_size,
        kernel.name,
    )
    return UValidity(alpha=alpha, u_bound=bound, integral=integral)


def validate_w_kernel(
    kernel: FourierKernel,
    alpha: float,
    grid_size: int = settings.kernels.GRID_SIZE,
) -> WValidity:
    """Check the density-kernel conditions and return the tightest constant W."""

    if kernel.kind is not KernelKind.DENSITY_W:
        raise KernelKindMismatch(f"Kernel {kernel.name!r} is not a density kernel")
    if not alpha > 0:
        raise InvalidParameter(f"alpha must be positive, got {alpha}")

    at_zero = float(kernel(0.0))
    if abs(at_zero - 1.0) > settings.kernels.ONE_AT_ZERO_TOLERANCE:
        raise NotOneAtZero(f"Kernel {kernel.name!r} equals {at_zero!r} at t = 0")

    bound = _bounded_ratio(
        lambda t: np.abs(np.asarray(kernel(t), dtype=float) - 1.0),
        alpha,
        grid_size,
        kernel.name,
        floor=settings.kernels.ROUNDOFF_FLOOR,
    )
    square = integrate_symmetric(
        lambda t: np.asarray(kernel(t), dtype=float) ** 2,
        1.0,
        _validation_spec(grid_size),
    ).real
    return WValidity(alpha=alpha, w_bound=bound, square_integral=square)
