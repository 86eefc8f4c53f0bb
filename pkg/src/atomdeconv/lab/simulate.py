"""Monte-Carlo risk estimation for the atom and density estimators, and rate fitting."""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import special, stats

from ..config import settings
from ..errors import (
    AtomDeconvError,
    GridTooNarrow,
    InsufficientRows,
    InvalidParameter,
    InvalidSpecString,
    NonPositiveRisk,
)
from ..estimators import (
    EstimationConfig,
    Sample,
    clamp_p,
    estimate_f,
    estimate_p_raw,
    positive_part_p,
)
from ..kernels import FourierKernel, paper_u_kernel, poly_w_kernel
from ..noise import NoiseModel
from ..numerics import QuadratureSpec, integrate_symmetric, trapezoid_mass, uniform_grid
from ..tuning import Preset, Quantity, RateScale, schedule_for

logger = logging.getLogger(__name__)

Seed = Union[int, np.random.SeedSequence]


class EstimatorVariant(str, Enum):
    """Which atom estimate a Monte-Carlo run scores."""

    RAW = "raw"
    CLAMPED = "clamped"
    POSITIVE = "positive"


@dataclass(frozen=True)
class SobolevCertificate:
    """``int |cf_f(t)|^2 (1 + |t|^(2 alpha)) dt <= k_sigma``."""

    alpha: float
    k_sigma: float
    quadrature_value: float


@dataclass(frozen=True)
class TargetDensity:
    """Density ``f`` of the continuous component ``V``."""

    name: str
    density: Callable[[NDArray[np.float64]], NDArray[np.float64]]
    cf: Callable[[NDArray[np.float64]], NDArray[np.complex128]]
    sampler: Callable[[np.random.Generator, int], NDArray[np.float64]] = field(repr=False)
    sobolev: SobolevCertificate


@dataclass(frozen=True)
class ModelSpec:
    """``X = A V + Z`` with ``P(A = 0) = p``."""

    p: float
    target: TargetDensity
    noise: NoiseModel

    def __post_init__(self) -> None:
        if not 0.0 <= self.p <= 1.0:
            raise InvalidParameter(f"Atom mass p must lie in [0, 1], got {self.p}")

    def describe(self) -> Dict[str, Any]:
        return {"p": self.p, "target": self.target.name, "noise": self.noise.name}


@dataclass(frozen=True)
class LatentDraws:
    """One simulated sample together with its unobserved components."""

    atoms: NDArray[np.bool_]
    continuous: NDArray[np.float64]
    noise: NDArray[np.float64]
    observations: NDArray[np.float64]


@dataclass
class RiskRow:
    """Monte-Carlo risk at one sample size."""

    n: int
    risk_mean: float
    risk_se: float
    replicates: int
    losses: NDArray[np.float64] = field(repr=False)
    estimates: Optional[NDArray[np.float64]] = field(default=None, repr=False)
    raw_estimates: Optional[NDArray[np.float64]] = field(default=None, repr=False)


@dataclass
class RiskReport:
    """Risk rows sorted by ``n`` plus run metadata."""

    rows: List[RiskRow]
    quantity: Quantity
    seed: int
    preset: Preset
    variant: Optional[EstimatorVariant] = None
    model: Dict[str, Any] = field(default_factory=dict)
    diagnostics: List[str] = field(default_factory=list)
    dominance_violations: int = 0


@dataclass(frozen=True)
class RateFit:
    slope: float
    intercept: float
    r_squared: float


def _sobolev_value(cf: Callable[[NDArray[np.float64]], ArrayLike], alpha: float) -> float:
    spec = QuadratureSpec(nodes=settings.simulation.SOBOLEV_NODES)

    def integrand(t: NDArray[np.float64]) -> NDArray[np.float64]:
        return np.abs(np.asarray(cf(t))) ** 2 * (1.0 + np.abs(t) ** (2.0 * alpha))

    return integrate_symmetric(integrand, settings.simulation.SOBOLEV_CUTOFF, spec).real


def _certify(name: str, cf: Callable, alpha: float, closed_form: float) -> SobolevCertificate:
    value = _sobolev_value(cf, alpha)
    if value > closed_form * (1.0 + 1e-8):
        raise InvalidParameter(
            f"Target {name!r} fails its Sobolev certificate: {value!r} > {closed_form!r}"
        )
    logger.debug(f"Sobolev certificate for {name} at alpha={alpha}: {closed_form!r}")
    return SobolevCertificate(alpha=alpha, k_sigma=closed_form, quadrature_value=value)


def _std_normal(alpha: float) -> TargetDensity:
    def cf(t: NDArray[np.float64]) -> NDArray[np.complex128]:
        return np.exp(-0.5 * np.square(t)).astype(complex)

    # int exp(-t^2) dt + int exp(-t^2) t^(2 alpha) dt
    k_sigma = math.sqrt(math.pi) + float(special.gamma(alpha + 0.5))
    return TargetDensity(
        name="std-normal",
        density=stats.norm.pdf,
        cf=cf,
        sampler=lambda rng, n: rng.standard_normal(n),
        sobolev=_certify("std-normal", cf, alpha, k_sigma),
    )


def _cauchy(alpha: float) -> TargetDensity:
    def cf(t: NDArray[np.float64]) -> NDArray[np.complex128]:
        return np.exp(-np.abs(t)).astype(complex)

    # int exp(-2|t|) dt + 2 int_0^inf exp(-2t) t^(2 alpha) dt
    k_sigma = 1.0 + float(special.gamma(2.0 * alpha + 1.0)) / 2.0 ** (2.0 * alpha)
    return TargetDensity(
        name="cauchy",
        density=stats.cauchy.pdf,
        cf=cf,
        sampler=lambda rng, n: rng.standard_cauchy(n),
        sobolev=_certify("cauchy", cf, alpha, k_sigma),
    )


def builtin_targets(alpha: float = 6.0) -> List[TargetDensity]:
    """Shipped targets with Sobolev certificates verified at ``alpha``."""

    if not alpha > 0:
        raise InvalidParameter(f"alpha must be positive, got {alpha}")
    return [_std_normal(alpha), _cauchy(alpha)]


def get_target(name: str, alpha: float = 6.0) -> TargetDensity:
    for target in builtin_targets(alpha):
        if target.name == name.strip().lower():
            return target
    raise InvalidSpecString(f"Unknown target {name!r}; expected std-normal or cauchy")


def replicate_seed(master: int, n: int, replicate: int) -> np.random.SeedSequence:
    """Independent seed for one replicate, fixed by (master seed, n, index)."""

    return np.random.SeedSequence([master, n, replicate])


def sample_model_latent(spec: ModelSpec, n: int, seed: Seed) -> LatentDraws:
    """Draw ``n`` observations and keep the atom indicators and noise draws."""

    if n < 1:
        raise InvalidParameter(f"Sample size must be at least 1, got {n}")
    rng = np.random.default_rng(seed)
    atoms = rng.random(n) < spec.p
    continuous = np.asarray(spec.target.sampler(rng, n), dtype=float)
    noise = np.asarray(spec.noise.sampler(rng, n), dtype=float)
    observations = np.where(atoms, 0.0, continuous) + noise
    return LatentDraws(atoms=atoms, continuous=continuous, noise=noise, observations=observations)


def sample_model(spec: ModelSpec, n: int, seed: Seed) -> Sample:
    return Sample(sample_model_latent(spec, n, seed).observations)


def _validate_run(ns: Sequence[int], replicates: int, preset: Preset, quantity: Quantity) -> List[int]:
    if replicates < 2:
        raise InvalidParameter(f"Need at least 2 replicates, got {replicates}")
    if not ns:
        raise InvalidParameter("At least one sample size is required")
    if any(n < 1 for n in ns):
        raise InvalidParameter(f"Sample sizes must be positive, got {list(ns)}")
    if preset.quantity is not quantity:
        raise InvalidParameter(
            f"Preset {preset.value} tunes {preset.quantity.value}, not {quantity.value}"
        )
    return sorted(set(int(n) for n in ns))


def _summarize(n: int, losses: NDArray[np.float64]) -> RiskRow:
    return RiskRow(
        n=n,
        risk_mean=float(np.mean(losses)),
        risk_se=float(np.std(losses, ddof=1) / math.sqrt(losses.size)),
        replicates=int(losses.size),
        losses=losses,
    )


def _run_replicates(
    work: Callable[[int], float], replicates: int, threads: Optional[int]
) -> NDArray[np.float64]:
    # map keeps replicate order, so the reduction is independent of scheduling
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return np.fromiter(pool.map(work, range(replicates)), dtype=float, count=replicates)


def _abort_row(report: RiskReport, n: int, exc: AtomDeconvError) -> None:
    message = f"n={n}: {type(exc).__name__}: {exc}"
    logger.error(f"Row aborted, {message}")
    report.diagnostics.append(message)


def mc_risk_p(
    spec: ModelSpec,
    ns: Sequence[int],
    replicates: int,
    preset: Preset,
    variant: EstimatorVariant = EstimatorVariant.CLAMPED,
    seed: int = 0,
    alpha: float = 6.0,
    d: float = 1.0,
    u: Optional[FourierKernel] = None,
    quad_nodes: int = settings.quadrature.NODES,
    threads: Optional[int] = None,
) -> RiskReport:
    """Mean squared error of the atom estimate at each sample size."""

    sizes = _validate_run(ns, replicates, preset, Quantity.ATOM_P)
    u = u or paper_u_kernel()
    report = RiskReport(
        rows=[],
        quantity=Quantity.ATOM_P,
        seed=seed,
        preset=preset,
        variant=variant,
        model=spec.describe(),
    )

    for n in sizes:
        try:
            schedule = schedule_for(preset, n, alpha, spec.noise.classification, d)

            def work(replicate: int) -> float:
                sample = sample_model(spec, n, replicate_seed(seed, n, replicate))
                return estimate_p_raw(sample, schedule.g, u, spec.noise, quad_nodes)

            raw = _run_replicates(work, replicates, threads)
        except AtomDeconvError as exc:
            _abort_row(report, n, exc)
            continue

        if variant is EstimatorVariant.RAW:
            estimates = raw
        elif variant is EstimatorVariant.CLAMPED:
            estimates = np.array([clamp_p(value, schedule.epsilon) for value in raw])
        else:
            estimates = np.array([positive_part_p(value) for value in raw])

        plus = np.maximum(raw, 0.0)
        report.dominance_violations += int(
            np.count_nonzero((plus - spec.p) ** 2 > (raw - spec.p) ** 2)
        )
        row = _summarize(n, (estimates - spec.p) ** 2)
        row.estimates = estimates
        row.raw_estimates = raw
        report.rows.append(row)
        logger.info(f"n={n}: MSE {row.risk_mean:.6g} (se {row.risk_se:.3g}, g={schedule.g:.6g})")
    return report


def mc_risk_f(
    spec: ModelSpec,
    ns: Sequence[int],
    replicates: int,
    preset: Preset,
    grid: Optional[ArrayLike] = None,
    seed: int = 0,
    alpha: float = 6.0,
    d: float = 1.0,
    u: Optional[FourierKernel] = None,
    w: Optional[FourierKernel] = None,
    quad_nodes: int = settings.quadrature.NODES,
    threads: Optional[int] = None,
    fast: bool = False,
) -> RiskReport:
    """Mean integrated squared error of the density estimate on ``grid``."""

    sizes = _validate_run(ns, replicates, preset, Quantity.DENSITY_F)
    if grid is None:
        grid = uniform_grid(
            settings.simulation.GRID_START,
            settings.simulation.GRID_STOP,
            settings.simulation.GRID_STEP,
        )
    x = np.asarray(grid, dtype=float)
    truth = np.asarray(spec.target.density(x), dtype=float)
    mass = trapezoid_mass(x, truth)
    if mass < settings.simulation.MIN_GRID_MASS:
        raise GridTooNarrow(
            f"Grid holds only {mass:.6f} of the {spec.target.name} mass "
            f"(need {settings.simulation.MIN_GRID_MASS})"
        )

    u = u or paper_u_kernel()
    w = w or poly_w_kernel(alpha)
    report = RiskReport(
        rows=[],
        quantity=Quantity.DENSITY_F,
        seed=seed,
        preset=preset,
        model=spec.describe(),
    )

    for n in sizes:
        try:
            schedule = schedule_for(preset, n, alpha, spec.noise.classification, d)
            config = EstimationConfig(
                g=schedule.g,
                h=schedule.h,
                epsilon=schedule.epsilon,
                split=schedule.split,
                quad_nodes=quad_nodes,
            )

            def work(replicate: int) -> float:
                sample = sample_model(spec, n, replicate_seed(seed, n, replicate))
                estimate = estimate_f(sample, config, w, u, spec.noise, x, fast=fast)
                return trapezoid_mass(x, (estimate.values - truth) ** 2)

            losses = _run_replicates(work, replicates, threads)
        except AtomDeconvError as exc:
            _abort_row(report, n, exc)
            continue

        row = _summarize(n, losses)
        report.rows.append(row)
        logger.info(f"n={n}: MISE {row.risk_mean:.6g} (se {row.risk_se:.3g}, h={schedule.h:.6g})")
    return report


def fit_rate(report: RiskReport, scale: RateScale = RateScale.POLY_IN_N) -> RateFit:
    """Least-squares slope of log risk against log n (or log log n)."""

    if len(report.rows) < 3:
        raise InsufficientRows(f"Rate fit needs at least 3 rows, got {len(report.rows)}")
    n = np.array([row.n for row in report.rows], dtype=float)
    risk = np.array([row.risk_mean for row in report.rows], dtype=float)
    if np.any(risk <= 0):
        raise NonPositiveRisk("Rate fit needs strictly positive risks")
    if scale is RateScale.POLY_IN_N:
        abscissa = np.log(n)
    else:
        if np.any(n <= math.e):
            raise InvalidParameter("log log n needs every n above e")
        abscissa = np.log(np.log(n))
    fit = stats.linregress(abscissa, np.log(risk))
    return RateFit(
        slope=float(fit.slope),
        intercept=float(fit.intercept),
        r_squared=float(fit.rvalue**2),
    )


def is_non_increasing(report: RiskReport, standard_errors: float = 2.0) -> bool:
    """True when no row exceeds its predecessor by more than the combined SE band."""

    for previous, current in zip(report.rows, report.rows[1:]):
        band = standard_errors * math.hypot(previous.risk_se, current.risk_se)
        if current.risk_mean > previous.risk_mean + band:
            return False
    return True


def variance_is_nonnegative(row: RiskRow, p: float) -> bool:
    """``mean((est - p)^2) >= (mean(est) - p)^2`` for an atom row."""

    if row.estimates is None:
        raise InvalidParameter("Row carries no per-replicate estimates")
    bias_squared = (float(np.mean(row.estimates)) - p) ** 2
    return row.risk_mean >= bias_squared * (1.0 - 1e-12)
