"""Configuration constants for numerics, simulations and report display."""

from dataclasses import dataclass, field


@dataclass
class QuadratureDefaults:
    """Composite Simpson settings shared by the estimators and inversions."""

    NODES: int = 4096
    MIN_NODES: int = 16
    RICHARDSON_TOLERANCE: float = 1e-7
    CF_FLOOR: float = 1e-300
    IMAG_TOLERANCE: float = 1e-8
    ATOM_IMAG_TOLERANCE: float = 1e-10
    NODES_PER_PERIOD: int = 8
    ECF_CHUNK_ELEMENTS: int = 2**22


@dataclass
class KernelDefaults:
    """Grid and tolerances used when validating Fourier kernels."""

    GRID_SIZE: int = 4097
    INTEGRAL_TOLERANCE: float = 1e-9
    ONE_AT_ZERO_TOLERANCE: float = 1e-12
    ROUNDOFF_FLOOR: float = 1e-9


@dataclass
class SimulationDefaults:
    """Monte-Carlo harness defaults."""

    GRID_START: float = -10.0
    GRID_STOP: float = 10.0
    GRID_STEP: float = 0.02
    MIN_GRID_MASS: float = 0.999
    SOBOLEV_CUTOFF: float = 40.0
    SOBOLEV_NODES: int = 8192


@dataclass
class LowerBoundDefaults:
    """Settings for the two-alternative divergence computations."""

    CUTOFF: float = 50.0
    GRID_STEP: float = 0.05
    MINORANT_SHIFT: float = 5.0
    FREQUENCY_CUTOFF: float = 40.0
    TOLERANCE: float = 1e-10


@dataclass
class TableColumnWidths:
    """Minimum column widths for console tables."""

    N: int = 10
    RISK: int = 24
    REPLICATES: int = 10
    DELTA: int = 12
    CHI_SQ: int = 24
    CONSTANT: int = 20


@dataclass
class DisplayConfig:
    """General display configuration."""

    FLOAT_DIGITS: int = 17
    JSON_INDENT: int = 2
    TABLE_DIGITS: int = 6


@dataclass
class AtomDeconvConfig:
    """Main configuration class combining all settings."""

    quadrature: QuadratureDefaults = field(default_factory=QuadratureDefaults)
    kernels: KernelDefaults = field(default_factory=KernelDefaults)
    simulation: SimulationDefaults = field(default_factory=SimulationDefaults)
    lower_bound: LowerBoundDefaults = field(default_factory=LowerBoundDefaults)
    table_widths: TableColumnWidths = field(default_factory=TableColumnWidths)
    display: DisplayConfig = field(default_factory=DisplayConfig)


# Global configuration instance
settings = AtomDeconvConfig()
