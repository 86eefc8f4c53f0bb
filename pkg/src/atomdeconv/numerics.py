"""Symmetric composite quadrature and Fourier inversion onto grids."""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Tuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate

from .config import settings
from .errors import InvalidParameter, LengthMismatch, NonFiniteIntegrand

logger = logging.getLogger(__name__)

ComplexFunction = Callable[[NDArray[np.float64]], ArrayLike]


@dataclass(frozen=True)
class QuadratureSpec:
    """Resolution and tolerance of a composite Simpson rule."""

    nodes: int = settings.quadrature.NODES
    tolerance: float = settings.quadrature.RICHARDSON_TOLERANCE

    def __post_init__(self) -> None:
        if self.nodes < settings.quadrature.MIN_NODES or self.nodes % 2:
            raise InvalidParameter(
                f"Quadrature nodes must be even and at least "
                f"{settings.quadrature.MIN_NODES}, got {self.nodes}"
            )
        if not self.tolerance > 0:
            raise InvalidParameter(
                f"Quadrature tolerance must be positive, got {self.tolerance}"
            )


def round_up_to_multiple(value: int, multiple: int) -> int:
    """Smallest multiple of ``multiple`` that is >= ``value``."""
    return -(-value // multiple) * multiple


def simpson_weights(panels: int, width: float) -> NDArray[np.float64]:
    """Composite Simpson weights for ``panels`` equal panels spanning ``width``."""

    if panels < 2 or panels % 2:
        raise InvalidParameter(f"Simpson needs an even panel count, got {panels}")
    step = width / panels
    weights = np.full(panels + 1, 2.0)
    weights[1::2] = 4.0
    weights[0] = weights[-1] = 1.0
    return weights * (step / 3.0)


def half_line_rule(
    halfwidth: float, panels: int
) -> Tuple[NDArray[np.float64], NDArray[np.float64]]:
    """Nodes and Simpson weights on ``[0, halfwidth]``."""

    if not halfwidth > 0:
        raise InvalidParameter(f"Half-width must be positive, got {halfwidth}")
    nodes = np.linspace(0.0, halfwidth, panels + 1)
    return nodes, simpson_weights(panels, halfwidth)


def chunk_slices(rows: int, row_length: int) -> Iterator[slice]:
    """Split ``rows`` into slices whose outer products stay within budget."""

    budget = settings.quadrature.ECF_CHUNK_ELEMENTS
    step = max(1, budget // max(1, row_length))
    for start in range(0, rows, step):
        yield slice(start, min(rows, start + step))


def as_grid(grid: ArrayLike) -> NDArray[np.float64]:
    """Return ``grid`` as a float array after checking it strictly increases."""

    values = np.asarray(grid, dtype=float).ravel()
    if values.size == 0:
        raise InvalidParameter("Grid must contain at least one point")
    if not np.all(np.isfinite(values)):
        raise InvalidParameter("Grid values must be finite")
    if values.size > 1 and not np.all(np.diff(values) > 0):
        raise InvalidParameter("Grid must be strictly increasing")
    return values


def uniform_grid(start: float, stop: float, step: float) -> NDArray[np.float64]:
    """Uniform grid from ``start`` to ``stop`` inclusive (within half a step)."""

    if not step > 0:
        raise InvalidParameter(f"Grid step must be positive, got {step}")
    if not stop > start:
        raise InvalidParameter(f"Grid stop {stop} must exceed start {start}")
    count = int(math.floor((stop - start) / step + 0.5))
    return start + step * np.arange(count + 1, dtype=float)


def gaussian_cutoff(tolerance: float) -> float:
    """Frequency cutoff for CFs carrying a standard Gaussian factor."""

    return max(40.0, math.sqrt(2.0 * math.log(1.0 / tolerance)))


def _evaluate(f: ComplexFunction, t: NDArray[np.float64]) -> NDArray[np.complex128]:
    values = np.asarray(f(t), dtype=complex)
    values = np.broadcast_to(values, t.shape).astype(complex)
    if not np.all(np.isfinite(values)):
        raise NonFiniteIntegrand("Integrand produced non-finite values")
    return values


def integrate_symmetric(
    f: ComplexFunction, halfwidth: float, spec: Optional[QuadratureSpec] = None
) -> complex:
    """Composite Simpson integral of ``f`` over ``[-halfwidth, halfwidth]``.

    ``f`` must accept a numpy array of nodes. The panel count is rounded up to a
    multiple of four so that ``t = 0`` is a panel boundary.
    """

    spec = spec or QuadratureSpec()
    if not halfwidth > 0:
        raise InvalidParameter(f"Half-width must be positive, got {halfwidth}")
    panels = round_up_to_multiple(spec.nodes, 4)
    t = np.linspace(-halfwidth, halfwidth, panels + 1)
    values = _evaluate(f, t)
    step = 2.0 * halfwidth / panels
    real = integrate.simpson(values.real, dx=step)
    imag = integrate.simpson(values.imag, dx=step)
    return complex(real, imag)


def inversion_panels(cutoff: float, grid: NDArray[np.float64], nodes: int) -> int:
    """Panel count keeping at least eight nodes per oscillation period."""

    max_abs_x = float(np.max(np.abs(grid))) if grid.size else 0.0
    periods = 2.0 * cutoff * max_abs_x / (2.0 * math.pi)
    required = int(math.ceil(periods * settings.quadrature.NODES_PER_PERIOD))
    return round_up_to_multiple(max(nodes, required), 4)


def invert_cf_on_grid(
    cf: ComplexFunction,
    grid: ArrayLike,
    cutoff: float,
    spec: Optional[QuadratureSpec] = None,
) -> NDArray[np.float64]:
    """Evaluate ``(1/2pi) * int_{-cutoff}^{cutoff} exp(-itx) cf(t) dt`` on a grid.

    Returns the real parts. When ``cf`` is Hermitian on the nodes the discarded
    imaginary residue is checked against the configured tolerance.
    """

    spec = spec or QuadratureSpec()
    x = as_grid(grid)
    if not cutoff > 0:
        raise InvalidParameter(f"Inversion cutoff must be positive, got {cutoff}")

    panels = inversion_panels(cutoff, x, spec.nodes)
    t = np.linspace(-cutoff, cutoff, panels + 1)
    values = _evaluate(cf, t)
    weighted = values * simpson_weights(panels, 2.0 * cutoff)
    logger.debug(f"Inverting CF on {x.size} points with {panels} panels")

    real = np.empty(x.size)
    imag = np.empty(x.size)
    for rows in chunk_slices(x.size, t.size):
        phase = np.outer(x[rows], t)
        cos, sin = np.cos(phase), np.sin(phase)
        real[rows] = cos @ weighted.real + sin @ weighted.imag
        imag[rows] = cos @ weighted.imag - sin @ weighted.real
    real /= 2.0 * math.pi
    imag /= 2.0 * math.pi

    scale = float(np.max(np.abs(values)))
    if np.allclose(values[::-1], np.conj(values), rtol=0.0, atol=1e-12 * scale):
        residue = float(np.max(np.abs(imag)))
        limit = settings.quadrature.IMAG_TOLERANCE * max(1.0, float(np.max(np.abs(real))))
        if residue > limit:
            logger.warning(
                f"Imaginary residue {residue:.3e} exceeds {limit:.1e} for a Hermitian CF"
            )
    return real


def trapezoid_mass(grid: ArrayLike, values: ArrayLike) -> float:
    """Trapezoid-rule integral of ``values`` sampled on ``grid``."""

    x = np.asarray(grid, dtype=float).ravel()
    y = np.asarray(values, dtype=float).ravel()
    if x.size != y.size:
        raise LengthMismatch(
            f"Grid has {x.size} points but {y.size} values were given"
        )
    if x.size < 2:
        raise LengthMismatch("Trapezoid rule needs at least two points")
    as_grid(x)
    return float(integrate.trapezoid(y, x=x))
