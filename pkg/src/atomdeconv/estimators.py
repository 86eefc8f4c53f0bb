"""Atom-mass and density estimators built on the empirical characteristic function."""

import logging
import math
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy import signal

from .config import settings
from .errors import (
    DegenerateSplit,
    InvalidParameter,
    InvalidSample,
    QuadratureNotConverged,
    ZeroMass,
)
from .kernels import FourierKernel
from .noise import NoiseModel
from .numerics import (
    QuadratureSpec,
    as_grid,
    chunk_slices,
    integrate_symmetric,
    inversion_panels,
    half_line_rule,
    simpson_weights,
    trapezoid_mass,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Sample:
    """Observations ``X_1, ..., X_n``."""

    values: NDArray[np.float64]

    def __post_init__(self) -> None:
        values = np.asarray(self.values, dtype=float).ravel()
        if values.size == 0:
            raise InvalidSample("Sample must contain at least one observation")
        if not np.all(np.isfinite(values)):
            raise InvalidSample("Sample contains non-finite observations")
        object.__setattr__(self, "values", values)

    @classmethod
    def of(cls, values: Union["Sample", ArrayLike]) -> "Sample":
        return values if isinstance(values, Sample) else cls(np.asarray(values))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def halves(self) -> Tuple["Sample", "Sample"]:
        """First ``n // 2`` observations and the remainder."""

        if self.n < 2:
            raise DegenerateSplit(f"Sample splitting needs n >= 2, got n = {self.n}")
        cut = self.n // 2
        return Sample(self.values[:cut]), Sample(self.values[cut:])


class EstimationConfig(BaseModel):
    """Bandwidths, truncation level and quadrature resolution for one estimate."""

    model_config = ConfigDict(frozen=True)

    g: float = Field(gt=0, description="Bandwidth of the atom estimator")
    h: float = Field(gt=0, description="Bandwidth of the density estimator")
    epsilon: float = Field(gt=0, lt=1, description="Truncation level for p")
    split: bool = Field(default=False, description="Estimate p and the ECF on disjoint halves")
    quad_nodes: int = Field(
        default=settings.quadrature.NODES,
        ge=settings.quadrature.MIN_NODES,
        description="Simpson panels on the half-line",
    )

    @field_validator("quad_nodes")
    @classmethod
    def _even_nodes(cls, value: int) -> int:
        if value % 2:
            raise ValueError("quad_nodes must be even")
        return value


@dataclass(frozen=True)
class PEstimate:
    """Raw and truncated atom-mass estimates from one sample."""

    p_raw: float
    p_clamped: float
    p_plus: float
    g: float
    epsilon: float
    n: int


@dataclass(frozen=True)
class DensityEstimate:
    """Density estimate evaluated on a grid."""

    grid: NDArray[np.float64]
    values: NDArray[np.float64]
    config: EstimationConfig
    p_hat_used: float


def ecf(sample: Sample, t: ArrayLike) -> Union[complex, NDArray[np.complex128]]:
    """Empirical characteristic function ``n^-1 sum exp(i t X_j)``."""

    nodes = np.asarray(t, dtype=float)
    flat = nodes.ravel()
    result = np.empty(flat.size, dtype=complex)
    for rows in chunk_slices(flat.size, sample.n):
        result[rows] = np.exp(1j * np.outer(flat[rows], sample.values)).mean(axis=1)
    if nodes.ndim == 0:
        return complex(result[0])
    return result.reshape(nodes.shape)


def uniform_ecf(values: NDArray[np.float64], step: float, count: int) -> NDArray[np.complex128]:
    """ECF at ``t_k = k * step`` for ``k = 0, ..., count - 1``.

    Uses ``exp(i(a + b)x) = exp(iax) exp(ibx)`` on a coarse-by-fine split of the
    nodes, so only about ``2 sqrt(count)`` exponentials per observation are
    needed and the remaining work is a matrix product.
    """

    block = max(1, int(math.ceil(math.sqrt(count))))
    rows = -(-count // block)
    coarse = step * block * np.arange(rows, dtype=float)
    fine = step * np.arange(block, dtype=float)
    total = np.zeros((rows, block), dtype=complex)
    for cols in chunk_slices(values.size, rows + block):
        x = values[cols]
        total += np.exp(1j * np.outer(coarse, x)) @ np.exp(1j * np.outer(fine, x)).T
    return total.ravel()[:count] / values.size


def p_integral(
    sample: Sample,
    g: float,
    u: FourierKernel,
    noise: NoiseModel,
    quad_nodes: int = settings.quadrature.NODES,
) -> complex:
    """``(g/2) int_{-1/g}^{1/g} ecf(t) phi_u(gt) / cf(t) dt`` without symmetrisation."""

    if not g > 0:
        raise InvalidParameter(f"Bandwidth g must be positive, got {g}")

    def integrand(t: NDArray[np.float64]) -> NDArray[np.complex128]:
        return ecf(sample, t) * np.asarray(u(g * t)) / noise.evaluate_nonvanishing(t)

    return (g / 2.0) * integrate_symmetric(integrand, 1.0 / g, QuadratureSpec(nodes=quad_nodes))


def estimate_p_raw(
    sample: Union[Sample, ArrayLike],
    g: float,
    u: FourierKernel,
    noise: NoiseModel,
    quad_nodes: int = settings.quadrature.NODES,
    tolerance: float = settings.quadrature.RICHARDSON_TOLERANCE,
) -> float:
    """Atom-mass estimate before truncation; may fall outside [0, 1].

    The Hermitian integrand is integrated on ``[0, 1/g]`` with ``quad_nodes``
    Simpson panels and checked against twice as many panels.
    """

    sample = Sample.of(sample)
    spec = QuadratureSpec(nodes=quad_nodes, tolerance=tolerance)
    if not g > 0:
        raise InvalidParameter(f"Bandwidth g must be positive, got {g}")

    t, fine_weights = half_line_rule(1.0 / g, 2 * spec.nodes)
    _, coarse_weights = half_line_rule(1.0 / g, spec.nodes)
    ecf_values = uniform_ecf(sample.values, t[1], t.size)
    kernel = np.asarray(u(g * t), dtype=float)
    ratio = ecf_values / noise.evaluate_nonvanishing(t)
    mirrored = np.conj(ecf_values) / noise.evaluate_nonvanishing(-t)

    # the t < 0 half enters through the mirrored nodes; its imaginary part must cancel
    residue = (g / 2.0) * abs(float(fine_weights @ ((ratio.imag + mirrored.imag) * kernel)))
    fine = (g / 2.0) * float(fine_weights @ ((ratio.real + mirrored.real) * kernel))
    coarse = (g / 2.0) * float(
        coarse_weights @ ((ratio.real + mirrored.real)[::2] * kernel[::2])
    )
    if residue > settings.quadrature.ATOM_IMAG_TOLERANCE * max(1.0, abs(fine)):
        logger.warning(f"Atom estimate carries imaginary residue {residue:.3e} at g={g!r}")

    gap = abs(fine - coarse)
    logger.debug(f"p estimate at g={g!r}: {spec.nodes} panels {coarse!r}, gap {gap:.3e}")
    if gap > spec.tolerance * max(1.0, abs(fine)):
        raise QuadratureNotConverged(
            f"Atom estimate changed by {gap:.3e} when doubling {spec.nodes} panels"
        )
    return coarse


def clamp_p(p_raw: float, epsilon: float) -> float:
    """Truncate into ``[-1 + epsilon, 1 - epsilon]``."""

    if not 0 < epsilon < 1:
        raise InvalidParameter(f"epsilon must lie in (0, 1), got {epsilon}")
    return max(-1.0 + epsilon, min(p_raw, 1.0 - epsilon))


def positive_part_p(p_raw: float) -> float:
    return max(0.0, p_raw)


def estimate_p(
    sample: Union[Sample, ArrayLike],
    g: float,
    epsilon: float,
    u: FourierKernel,
    noise: NoiseModel,
    quad_nodes: int = settings.quadrature.NODES,
) -> PEstimate:
    """Raw, clamped and positive-part atom estimates in one bundle."""

    sample = Sample.of(sample)
    p_raw = estimate_p_raw(sample, g, u, noise, quad_nodes)
    return PEstimate(
        p_raw=p_raw,
        p_clamped=clamp_p(p_raw, epsilon),
        p_plus=positive_part_p(p_raw),
        g=g,
        epsilon=epsilon,
        n=sample.n,
    )


def _is_uniform(grid: NDArray[np.float64]) -> bool:
    if grid.size < 2:
        return False
    gaps = np.diff(grid)
    return bool(np.allclose(gaps, gaps[0], rtol=1e-9, atol=0.0))


def density_transform(
    ecf_values: NDArray[np.complex128],
    cf_values: NDArray[np.complex128],
    w_values: NDArray[np.float64],
    p_hat: float,
) -> NDArray[np.complex128]:
    """Fourier transform of the density estimate at the quadrature nodes."""

    return (ecf_values / cf_values - p_hat) / (1.0 - p_hat) * w_values


def _invert_half_line(
    transform: NDArray[np.complex128],
    weights: NDArray[np.float64],
    step: float,
    grid: NDArray[np.float64],
) -> NDArray[np.float64]:
    weighted = weights * transform
    t = step * np.arange(transform.size, dtype=float)
    values = np.empty(grid.size)
    for rows in chunk_slices(grid.size, t.size):
        phase = np.outer(grid[rows], t)
        values[rows] = np.cos(phase) @ weighted.real + np.sin(phase) @ weighted.imag
    return values / math.pi


def _invert_half_line_czt(
    transform: NDArray[np.complex128],
    weights: NDArray[np.float64],
    step: float,
    grid: NDArray[np.float64],
) -> NDArray[np.float64]:
    spacing = float(grid[1] - grid[0])
    k = np.arange(transform.size, dtype=float)
    coefficients = weights * transform * np.exp(-1j * k * step * grid[0])
    sums = signal.czt(coefficients, m=grid.size, w=np.exp(-1j * step * spacing), a=1.0)
    return np.real(sums) / math.pi


def estimate_f(
    sample: Union[Sample, ArrayLike],
    config: EstimationConfig,
    w: FourierKernel,
    u: FourierKernel,
    noise: NoiseModel,
    grid: Union[Sequence[float], NDArray[np.float64]],
    p_hat: Optional[float] = None,
    fast: bool = False,
) -> DensityEstimate:
    """Density estimate of the continuous part on ``grid``.

    With ``config.split`` the atom estimate uses the first ``n // 2``
    observations and the ECF the rest. ``p_hat`` overrides the atom estimate
    (it is still clamped). ``fast`` evaluates a uniform grid by chirp-z
    transform instead of direct summation.
    """

    sample = Sample.of(sample)
    x = as_grid(grid)
    if config.split:
        first, second = sample.halves()
    else:
        first = second = sample

    if p_hat is None:
        p_hat = estimate_p_raw(first, config.g, u, noise, config.quad_nodes)
    p_used = clamp_p(p_hat, config.epsilon)

    cutoff = 1.0 / config.h
    panels = max(config.quad_nodes, inversion_panels(cutoff, x, config.quad_nodes) // 2)
    panels += panels % 2
    step = cutoff / panels
    t = step * np.arange(panels + 1, dtype=float)
    transform = density_transform(
        uniform_ecf(second.values, step, t.size),
        noise.evaluate_nonvanishing(t),
        np.asarray(w(config.h * t), dtype=float),
        p_used,
    )
    weights = simpson_weights(panels, cutoff)

    if fast:
        if not _is_uniform(x):
            raise InvalidParameter("The fast density path needs a uniform grid")
        values = _invert_half_line_czt(transform, weights, step, x)
    else:
        values = _invert_half_line(transform, weights, step, x)
    logger.debug(f"Density estimate with p_hat={p_used!r} on {x.size} points, {panels} panels")
    return DensityEstimate(grid=x, values=values, config=config, p_hat_used=p_used)


def positive_part_density(estimate: DensityEstimate, renormalize: bool = False) -> DensityEstimate:
    """Clip negative values at zero, optionally rescaling to unit grid mass."""

    values = np.maximum(estimate.values, 0.0)
    if renormalize:
        mass = trapezoid_mass(estimate.grid, values)
        if not mass > 0:
            raise ZeroMass("Clipped density estimate has no mass to renormalize")
        values = values / mass
    return replace(estimate, values=values)
