"""Main CLI interface for atom-deconv."""

import contextlib
import json
import logging
from enum import Enum
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Type, TypeVar

import typer
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich.console import Console
from rich.logging import RichHandler

from .config import settings
from .data_utils import load_sample, parse_float_list, parse_grid, parse_int_list, to_json
from .errors import AtomDeconvError, InvalidParameter, InvalidSpecString, ParameterError
from .estimators import (
    EstimationConfig,
    estimate_f,
    estimate_p,
    positive_part_density,
)
from .kernels import KernelKind, parse_kernel, validate_u_kernel, validate_w_kernel
from .lab.lowerbound import DeltaMode, PerturbationBase, divergence_slope, divergence_table
from .lab.simulate import (
    EstimatorVariant,
    ModelSpec,
    fit_rate,
    get_target,
    is_non_increasing,
    mc_risk_f,
    mc_risk_p,
)
from .noise import OrdinarySmooth, parse_noise
from .reports import (
    ReportFormatter,
    density_csv,
    divergence_csv,
    emit,
    p_estimate_payload,
    risk_csv,
    risk_metadata,
    sidecar_path,
)
from .tuning import (
    Preset,
    Quantity,
    RateScale,
    RateTarget,
    auto_preset,
    epsilon_schedule,
    schedule_for,
    theoretical_rate,
)

console = Console()
app = typer.Typer(
    name="atomdeconv",
    help="🎯 Deconvolution estimators for atomic distributions, with rate and lower-bound experiments",
)

logger = logging.getLogger(__name__)

# typer may bundle its own click; resolve the usage error class through its namespace
UsageError = next(
    cls for cls in typer.BadParameter.__mro__ if cls.__name__ == "UsageError"
)

ConfigModel = TypeVar("ConfigModel", bound=BaseModel)


class OutputFormat(str, Enum):
    table = "table"
    json = "json"


class KernelRole(str, Enum):
    u = "u"
    w = "w"


def _quad_nodes_field() -> Any:
    return Field(
        default=settings.quadrature.NODES,
        ge=settings.quadrature.MIN_NODES,
        multiple_of=2,
    )


class EstimatePConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    input: Path
    noise: str
    kernel: str = "paper-u"
    alpha: float = Field(default=6.0, gt=0)
    bandwidth: str = "auto"
    g: Optional[float] = Field(default=None, gt=0)
    epsilon: Optional[float] = Field(default=None, gt=0, lt=1)
    d: float = Field(default=1.0, gt=0)
    quad_nodes: int = _quad_nodes_field()
    output: Optional[Path] = None


class EstimateFConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    input: Path
    noise: str
    alpha: float = Field(default=6.0, gt=0)
    u_kernel: str = "paper-u"
    w_kernel: Optional[str] = None
    bandwidth: str = "auto"
    g: Optional[float] = Field(default=None, gt=0)
    h: Optional[float] = Field(default=None, gt=0)
    epsilon: Optional[float] = Field(default=None, gt=0, lt=1)
    split: Optional[bool] = None
    grid: str = (
        f"{settings.simulation.GRID_START:g}:{settings.simulation.GRID_STOP:g}"
        f":{settings.simulation.GRID_STEP:g}"
    )
    positive: bool = False
    renormalize: bool = False
    fast: bool = False
    d: float = Field(default=1.0, gt=0)
    quad_nodes: int = _quad_nodes_field()
    output: Optional[Path] = None


class RatesConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    preset: Preset
    noise: str
    target: str
    p: float = Field(ge=0, le=1)
    ns: str
    replicates: int = Field(ge=2)
    seed: int = Field(ge=0)
    alpha: float = Field(default=6.0, gt=0)
    d: float = Field(default=1.0, gt=0)
    variant: EstimatorVariant = EstimatorVariant.CLAMPED
    grid: Optional[str] = None
    fast: bool = False
    quad_nodes: int = _quad_nodes_field()
    threads: Optional[int] = Field(default=None, ge=1)
    output: Optional[Path] = None


class LowerBoundConfig(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    lambda_: float = Field(default=1.0, gt=0, alias="lambda")
    alpha: float = Field(default=0.5, gt=0)
    c: float = Field(default=0.5, gt=0)
    ns: Optional[str] = None
    deltas: Optional[str] = None
    mode: DeltaMode = DeltaMode.SUPERSMOOTH_LOG
    noise: str = "gaussian:1"
    beta: Optional[float] = Field(default=None, gt=0)
    d1: float = Field(default=4.0, gt=0)
    base: PerturbationBase = PerturbationBase.G1
    cutoff: float = Field(default=settings.lower_bound.CUTOFF, gt=0)
    grid_step: float = Field(default=settings.lower_bound.GRID_STEP, gt=0)
    output: Optional[Path] = None


class ValidateKernelConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kernel: str
    alpha: float = Field(gt=0)
    kind: KernelRole = KernelRole.u
    grid_size: int = Field(default=settings.kernels.GRID_SIZE, ge=5)
    output_format: OutputFormat = OutputFormat.table


def _load_config_file(path: Path) -> Dict[str, str]:
    """Parse ``key = value`` lines into a dictionary keyed by field name."""

    if not path.exists():
        raise InvalidParameter(f"Config file not found: {path}")

    entries: Dict[str, str] = {}
    for index, raw_line in enumerate(
        path.read_text(encoding="utf-8").splitlines(), start=1
    ):
        line = raw_line.strip()

        if not line or line.startswith("#"):
            continue

        if line.startswith("export "):
            line = line[len("export ") :].strip()

        if "=" not in line:
            raise InvalidSpecString(f"Invalid config entry on line {index}: {raw_line!r}")

        key, value = line.split("=", 1)
        key = key.strip().lstrip("-").replace("-", "_")
        value = value.strip()

        if value and value[0] == value[-1] and value[0] in {'"', "'"}:
            value = value[1:-1]

        entries[key] = value

    return entries


def _build_config(
    model: Type[ConfigModel], config_file: Optional[Path], **flags: Any
) -> ConfigModel:
    """Defaults, then the config file, then explicit flags."""

    values: Dict[str, Any] = {}
    if config_file is not None:
        values.update(_load_config_file(config_file))
    values.update({key: value for key, value in flags.items() if value is not None})
    return model.model_validate(values)


def _configure_logging(verbose: bool) -> None:
    """Route package logs to stderr through rich, replacing a previous handler."""

    package_logger = logging.getLogger("atomdeconv")
    for handler in list(package_logger.handlers):
        if isinstance(handler, RichHandler):
            package_logger.removeHandler(handler)
    package_logger.addHandler(RichHandler(console=Console(stderr=True), show_path=False))
    package_logger.setLevel(logging.DEBUG if verbose else logging.INFO)


def _report_error(name: str, exit_code: int, message: str) -> None:
    payload = {"error": name, "exit_code": exit_code, "message": message}
    typer.echo(json.dumps(payload), err=True)


@contextlib.contextmanager
def _exit_on_error() -> Iterator[None]:
    """Turn library and validation errors into a JSON line and an exit code."""

    try:
        yield
    except AtomDeconvError as exc:
        _report_error(type(exc).__name__, exc.exit_code, str(exc))
        raise typer.Exit(exc.exit_code)
    except ValidationError as exc:
        message = "; ".join(
            f"{'.'.join(str(part) for part in error['loc'])}: {error['msg']}"
            for error in exc.errors()
        )
        _report_error("ValidationError", ParameterError.exit_code, message)
        raise typer.Exit(ParameterError.exit_code)


def _status(message: str, output: Optional[Path]) -> Any:
    """Spinner only when stdout is not carrying the payload."""

    if output is None:
        return contextlib.nullcontext()
    return console.status(message)


def _numeric_bandwidth(bandwidth: str) -> Optional[float]:
    text = bandwidth.strip().lower()
    if text == "auto":
        return None
    try:
        value = float(text)
    except ValueError:
        raise InvalidSpecString(f"Bandwidth must be 'auto' or a number, got {bandwidth!r}")
    if not value > 0:
        raise InvalidParameter(f"Bandwidth must be positive, got {value}")
    return value


CONFIG_OPTION = typer.Option(
    None, "--config", help="File of 'key = value' lines; flags override its values"
)
VERBOSE_OPTION = typer.Option(False, "--verbose", "-v", help="Show debug logging on stderr")


@app.command("estimate-p")
def estimate_p_command(
    input: Optional[Path] = typer.Option(None, "--input", help="Sample file, one value per line"),
    noise: Optional[str] = typer.Option(
        None, "--noise", help="Noise model: gaussian:<sigma>, laplace:<b> or point-mass"
    ),
    kernel: Optional[str] = typer.Option(None, "--kernel", help="Atom kernel: paper-u or sinc"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Smoothness of the target class"),
    bandwidth: Optional[str] = typer.Option(
        None, "--bandwidth", help="'auto' for the rate-optimal schedule, or a value for g"
    ),
    g: Optional[float] = typer.Option(None, "--g", help="Bandwidth g (overrides --bandwidth)"),
    epsilon: Optional[float] = typer.Option(None, "--epsilon", help="Truncation level"),
    d: Optional[float] = typer.Option(None, "--d", help="Constant of the ordinary smooth schedule"),
    quad_nodes: Optional[int] = typer.Option(None, "--quad-nodes", help="Simpson panels"),
    output: Optional[Path] = typer.Option(None, "--output", help="JSON output path"),
    config: Optional[Path] = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """
    Estimate the atom mass p from a noisy sample.

    Examples:

      atomdeconv estimate-p --input sample.csv --noise gaussian:1 --bandwidth auto
    """
    _configure_logging(verbose)
    with _exit_on_error():
        cfg = _build_config(
            EstimatePConfig,
            config,
            input=input,
            noise=noise,
            kernel=kernel,
            alpha=alpha,
            bandwidth=bandwidth,
            g=g,
            epsilon=epsilon,
            d=d,
            quad_nodes=quad_nodes,
            output=output,
        )
        noise_model = parse_noise(cfg.noise)
        u = parse_kernel(cfg.kernel, KernelKind.ATOM_U)
        sample = load_sample(cfg.input)

        chosen_g = cfg.g if cfg.g is not None else _numeric_bandwidth(cfg.bandwidth)
        if chosen_g is None:
            preset = auto_preset(noise_model.classification, Quantity.ATOM_P)
            chosen_g = schedule_for(
                preset, sample.n, cfg.alpha, noise_model.classification, cfg.d
            ).g
            logger.debug(f"Preset {preset.value} chose g={chosen_g!r}")
        chosen_epsilon = cfg.epsilon if cfg.epsilon is not None else epsilon_schedule(sample.n)

        with _status("[bold green]Estimating atom mass...", cfg.output):
            estimate = estimate_p(
                sample, chosen_g, chosen_epsilon, u, noise_model, cfg.quad_nodes
            )
        emit(to_json(p_estimate_payload(estimate)), cfg.output)
        if cfg.output is not None:
            console.print(f"✅ Wrote atom estimate to [cyan]{cfg.output}[/cyan]")


@app.command("estimate-f")
def estimate_f_command(
    input: Optional[Path] = typer.Option(None, "--input", help="Sample file, one value per line"),
    noise: Optional[str] = typer.Option(None, "--noise", help="Noise model spec"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Smoothness of the target class"),
    u_kernel: Optional[str] = typer.Option(None, "--u-kernel", help="Atom kernel"),
    w_kernel: Optional[str] = typer.Option(
        None, "--w-kernel", help="Density kernel (default poly-w:<alpha>)"
    ),
    bandwidth: Optional[str] = typer.Option(
        None, "--bandwidth", help="'auto' for the rate-optimal schedule, or a value for h"
    ),
    g: Optional[float] = typer.Option(None, "--g", help="Atom bandwidth"),
    h: Optional[float] = typer.Option(None, "--h", help="Density bandwidth (overrides --bandwidth)"),
    epsilon: Optional[float] = typer.Option(None, "--epsilon", help="Truncation level"),
    split: Optional[bool] = typer.Option(
        None, "--split/--no-split", help="Estimate p and the ECF on disjoint halves"
    ),
    grid: Optional[str] = typer.Option(None, "--grid", help="start:stop:step or a grid file"),
    positive: Optional[bool] = typer.Option(
        None, "--positive/--no-positive", help="Clip negative density values"
    ),
    renormalize: Optional[bool] = typer.Option(
        None, "--renormalize/--no-renormalize", help="Rescale clipped values to unit mass"
    ),
    fast: Optional[bool] = typer.Option(
        None, "--fast/--no-fast", help="Chirp-z evaluation on uniform grids"
    ),
    d: Optional[float] = typer.Option(None, "--d", help="Constant of the ordinary smooth schedule"),
    quad_nodes: Optional[int] = typer.Option(None, "--quad-nodes", help="Simpson panels"),
    output: Optional[Path] = typer.Option(None, "--output", help="CSV output path"),
    config: Optional[Path] = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Estimate the density of the continuous component on a grid."""
    _configure_logging(verbose)
    with _exit_on_error():
        cfg = _build_config(
            EstimateFConfig,
            config,
            input=input,
            noise=noise,
            alpha=alpha,
            u_kernel=u_kernel,
            w_kernel=w_kernel,
            bandwidth=bandwidth,
            g=g,
            h=h,
            epsilon=epsilon,
            split=split,
            grid=grid,
            positive=positive,
            renormalize=renormalize,
            fast=fast,
            d=d,
            quad_nodes=quad_nodes,
            output=output,
        )
        noise_model = parse_noise(cfg.noise)
        u = parse_kernel(cfg.u_kernel, KernelKind.ATOM_U)
        w = parse_kernel(cfg.w_kernel or f"poly-w:{cfg.alpha:g}", KernelKind.DENSITY_W)
        x = parse_grid(cfg.grid)
        sample = load_sample(cfg.input)

        h_value = cfg.h if cfg.h is not None else _numeric_bandwidth(cfg.bandwidth)
        needs_schedule = (
            cfg.g is None or h_value is None or cfg.epsilon is None or cfg.split is None
        )
        if needs_schedule:
            preset = auto_preset(noise_model.classification, Quantity.DENSITY_F)
            schedule = schedule_for(
                preset, sample.n, cfg.alpha, noise_model.classification, cfg.d
            )
            logger.debug(f"Preset {preset.value} chose {schedule}")
        estimation = EstimationConfig(
            g=cfg.g if cfg.g is not None else schedule.g,
            h=h_value if h_value is not None else schedule.h,
            epsilon=cfg.epsilon if cfg.epsilon is not None else schedule.epsilon,
            split=cfg.split if cfg.split is not None else schedule.split,
            quad_nodes=cfg.quad_nodes,
        )

        with _status("[bold green]Estimating density...", cfg.output):
            estimate = estimate_f(sample, estimation, w, u, noise_model, x, fast=cfg.fast)
            if cfg.positive or cfg.renormalize:
                estimate = positive_part_density(estimate, renormalize=cfg.renormalize)
        emit(density_csv(estimate), cfg.output)
        if cfg.output is not None:
            console.print(
                f"✅ Wrote density on [bold]{x.size}[/bold] points to [cyan]{cfg.output}[/cyan]"
            )


@app.command()
def rates(
    preset: Optional[Preset] = typer.Option(None, "--preset", help="Bandwidth schedule"),
    noise: Optional[str] = typer.Option(None, "--noise", help="Noise model spec"),
    target: Optional[str] = typer.Option(None, "--target", help="std-normal or cauchy"),
    p: Optional[float] = typer.Option(None, "--p", help="True atom mass"),
    ns: Optional[str] = typer.Option(None, "--ns", help="Comma-separated sample sizes"),
    replicates: Optional[int] = typer.Option(None, "--replicates", help="Replicates per n"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Master seed"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Smoothness of the target class"),
    d: Optional[float] = typer.Option(None, "--d", help="Constant of the ordinary smooth schedule"),
    variant: Optional[EstimatorVariant] = typer.Option(
        None, "--variant", help="Atom estimate to score"
    ),
    grid: Optional[str] = typer.Option(None, "--grid", help="Density grid for MISE"),
    fast: Optional[bool] = typer.Option(
        None, "--fast/--no-fast", help="Chirp-z evaluation of density replicates"
    ),
    quad_nodes: Optional[int] = typer.Option(None, "--quad-nodes", help="Simpson panels"),
    threads: Optional[int] = typer.Option(
        None, "--threads", envvar="ATOMDECONV_THREADS", help="Worker threads for replicates"
    ),
    output: Optional[Path] = typer.Option(
        None, "--output", help="CSV output path; metadata goes to <stem>.json"
    ),
    config: Optional[Path] = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """
    Monte-Carlo risk of an estimator across sample sizes, with a fitted rate.

    Examples:

      atomdeconv rates --preset thm1-ordinary --noise laplace:1 --target std-normal --p 0.3 --ns 1024,4096,16384,65536 --replicates 500 --seed 7 --output risk.csv
    """
    _configure_logging(verbose)
    with _exit_on_error():
        cfg = _build_config(
            RatesConfig,
            config,
            preset=preset,
            noise=noise,
            target=target,
            p=p,
            ns=ns,
            replicates=replicates,
            seed=seed,
            alpha=alpha,
            d=d,
            variant=variant,
            grid=grid,
            fast=fast,
            quad_nodes=quad_nodes,
            threads=threads,
            output=output,
        )
        noise_model = parse_noise(cfg.noise)
        spec = ModelSpec(p=cfg.p, target=get_target(cfg.target, cfg.alpha), noise=noise_model)
        sizes = parse_int_list(cfg.ns, "ns")

        with _status("[bold green]Running Monte-Carlo replicates...", cfg.output):
            if cfg.preset.quantity is Quantity.ATOM_P:
                report = mc_risk_p(
                    spec,
                    sizes,
                    cfg.replicates,
                    cfg.preset,
                    variant=cfg.variant,
                    seed=cfg.seed,
                    alpha=cfg.alpha,
                    d=cfg.d,
                    quad_nodes=cfg.quad_nodes,
                    threads=cfg.threads,
                )
            else:
                report = mc_risk_f(
                    spec,
                    sizes,
                    cfg.replicates,
                    cfg.preset,
                    grid=parse_grid(cfg.grid) if cfg.grid else None,
                    seed=cfg.seed,
                    alpha=cfg.alpha,
                    d=cfg.d,
                    quad_nodes=cfg.quad_nodes,
                    threads=cfg.threads,
                    fast=cfg.fast,
                )

        theoretical = theoretical_rate(
            RateTarget(cfg.alpha, noise_model.classification, cfg.preset.quantity)
        )
        fit = None
        # log-scale rates are too flat to fit over a feasible range of n
        if isinstance(noise_model.classification, OrdinarySmooth) and len(report.rows) >= 3:
            fit = fit_rate(report, RateScale.POLY_IN_N)
        metadata = risk_metadata(report, fit, theoretical, is_non_increasing(report))

        emit(risk_csv(report), cfg.output)
        if cfg.output is not None:
            emit(to_json(metadata), sidecar_path(cfg.output))
            ReportFormatter("table").display_results(
                {"kind": "rates", "report": report, "metadata": metadata}, verbose
            )


@app.command()
def lowerbound(
    lambda_: Optional[float] = typer.Option(None, "--lambda", help="Poisson intensity"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Smoothness of the target class"),
    c: Optional[float] = typer.Option(None, "--c", help="Constant of the delta schedule"),
    ns: Optional[str] = typer.Option(None, "--ns", help="Sample sizes driving delta"),
    deltas: Optional[str] = typer.Option(None, "--deltas", help="Explicit delta values"),
    mode: Optional[DeltaMode] = typer.Option(None, "--mode", help="Delta schedule"),
    noise: Optional[str] = typer.Option(None, "--noise", help="Noise model spec"),
    beta: Optional[float] = typer.Option(None, "--beta", help="Ordinary smooth decay exponent"),
    d1: Optional[float] = typer.Option(None, "--d1", help="Constant of the decay upper bound"),
    base: Optional[PerturbationBase] = typer.Option(
        None, "--base", help="Characteristic function the perturbation is built on"
    ),
    cutoff: Optional[float] = typer.Option(None, "--cutoff", help="Half-width of the x grid"),
    grid_step: Optional[float] = typer.Option(None, "--grid-step", help="Spacing of the x grid"),
    output: Optional[Path] = typer.Option(None, "--output", help="CSV output path"),
    config: Optional[Path] = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Separation and chi-square divergence of the two lower-bound alternatives."""
    _configure_logging(verbose)
    with _exit_on_error():
        cfg = _build_config(
            LowerBoundConfig,
            config,
            lambda_=lambda_,
            alpha=alpha,
            c=c,
            ns=ns,
            deltas=deltas,
            mode=mode,
            noise=noise,
            beta=beta,
            d1=d1,
            base=base,
            cutoff=cutoff,
            grid_step=grid_step,
            output=output,
        )
        if cfg.ns is None and cfg.deltas is None:
            raise InvalidParameter("Provide --ns or --deltas")
        if cfg.ns is not None and cfg.deltas is not None:
            raise InvalidParameter("Provide only one of --ns and --deltas")

        with _status("[bold green]Computing divergences...", cfg.output):
            rows = divergence_table(
                cfg.lambda_,
                cfg.alpha,
                parse_noise(cfg.noise),
                ns=parse_int_list(cfg.ns, "ns") if cfg.ns else None,
                deltas=parse_float_list(cfg.deltas, "deltas") if cfg.deltas else None,
                mode=cfg.mode,
                c=cfg.c,
                beta=cfg.beta,
                d1=cfg.d1,
                cutoff=cfg.cutoff,
                grid_step=cfg.grid_step,
                base=cfg.base,
            )

        emit(divergence_csv(rows), cfg.output)
        if cfg.output is not None:
            slope = None
            if len(rows) >= 3 and all(row.chi_sq > 0 and row.delta > 0 for row in rows):
                slope = divergence_slope(rows).slope
            ReportFormatter("table").display_results(
                {"kind": "lowerbound", "rows": rows, "slope": slope}, verbose
            )


@app.command("validate-kernel")
def validate_kernel(
    kernel: Optional[str] = typer.Option(None, "--kernel", help="paper-u, sinc or poly-w:<alpha>"),
    alpha: Optional[float] = typer.Option(None, "--alpha", help="Exponent of the ratio bound"),
    kind: Optional[KernelRole] = typer.Option(
        None, "--kind", help="u for the atom kernel, w for the density kernel"
    ),
    grid_size: Optional[int] = typer.Option(None, "--grid-size", help="Validation grid points"),
    output_format: Optional[OutputFormat] = typer.Option(
        None, "--output-format", help="Output format for results"
    ),
    config: Optional[Path] = CONFIG_OPTION,
    verbose: bool = VERBOSE_OPTION,
) -> None:
    """Check a kernel's validity conditions and print its constants."""
    _configure_logging(verbose)
    with _exit_on_error():
        cfg = _build_config(
            ValidateKernelConfig,
            config,
            kernel=kernel,
            alpha=alpha,
            kind=kind,
            grid_size=grid_size,
            output_format=output_format,
        )
        role = KernelKind.ATOM_U if cfg.kind is KernelRole.u else KernelKind.DENSITY_W
        fourier_kernel = parse_kernel(cfg.kernel, role)

        constants: Dict[str, float]
        if role is KernelKind.ATOM_U:
            u_validity = validate_u_kernel(fourier_kernel, cfg.alpha, cfg.grid_size)
            constants = {"U": u_validity.u_bound, "integral": u_validity.integral}
        else:
            w_validity = validate_w_kernel(fourier_kernel, cfg.alpha, cfg.grid_size)
            constants = {
                "W": w_validity.w_bound,
                "square_integral": w_validity.square_integral,
            }

        results = {
            "kind": "kernel",
            "kernel": fourier_kernel.name,
            "kind_label": role.value,
            "alpha": cfg.alpha,
            "constants": constants,
        }
        ReportFormatter(cfg.output_format.value).display_results(results, verbose)


@app.command()
def version() -> None:
    """Show version and capabilities."""
    from . import __description__, __version__

    console.print(f"[bold]🎯 atom-deconv[/bold] v{__version__}")
    console.print(__description__)
    console.print("\n[bold green]Available Commands:[/bold green]")
    console.print("• ⚛️  estimate-p: atom mass from a noisy sample")
    console.print("• 📈 estimate-f: density of the continuous component")
    console.print("• 🎲 rates: Monte-Carlo risk and fitted convergence rate")
    console.print("• 🔬 lowerbound: two-alternative divergence table")
    console.print("• 🧮 validate-kernel: kernel validity constants")


def run(argv: Optional[List[str]] = None) -> int:
    """Invoke the CLI and return its exit code: 0, 2 for bad input, 3 for numerical failure."""

    try:
        result = app(args=argv, prog_name="atomdeconv", standalone_mode=False)
    except UsageError as exc:
        _report_error(type(exc).__name__, ParameterError.exit_code, exc.format_message())
        return ParameterError.exit_code
    except typer.Abort:
        return 1
    return result if isinstance(result, int) else 0


if __name__ == "__main__":
    app()
