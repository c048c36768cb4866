"""Uniformly accurate splitting schemes for semiclassical wave propagation.

The package evolves the phase/amplitude (S, A) form of the oscillatory wave
function on a 2*pi-periodic grid with pseudospectral sub-flows, provides a
direct wave-equation splitting solver for cross-validation, and ships a
convergence-sweep harness plus command-line drivers around both.
"""

from .diagnostics import (
    ConservedReport,
    DiagnosticsConfig,
    ErrorTriple,
    commutator_bracket,
    conserved_quantities,
    error_metrics,
    frechet_apply,
    generator_apply,
    sigma_s_norm,
)
from .errors import (
    CacheError,
    CharacteristicsDiverged,
    ConfigError,
    DegenerateReference,
    InvalidInput,
    IoError,
    LogDomainError,
    OverflowRisk,
    SolverError,
)
from .flows import (
    EikonalSettings,
    Potential,
    WkbState,
    flow1,
    flow2,
    flow3,
    flow4,
    solve_eikonal_characteristics,
)
from .grid import (
    ComplexField,
    PeriodicGrid,
    RealField,
    SpectralCoefficients,
    evaluate_off_grid,
    restrict_to_grid,
    sobolev_norm,
    spectral_derivative,
)
from .harness import (
    CSV_HEADER,
    ErrorRecord,
    SweepConfig,
    load_config,
    prepare_references,
    run_convergence_sweep,
    write_records,
)
from .problems import ProblemData, build_problem, evaluate_expression
from .schemes import (
    SchemeSpec,
    TimeMarch,
    evolve,
    lie_step,
    strang_step,
    yoshida4_compose,
)
from .wave import WaveState, cole_hopf_eikonal_oracle, reconstruct_wave, tssp_step

__all__ = [
    "CSV_HEADER",
    "CacheError",
    "CharacteristicsDiverged",
    "ComplexField",
    "ConfigError",
    "ConservedReport",
    "DegenerateReference",
    "DiagnosticsConfig",
    "EikonalSettings",
    "ErrorRecord",
    "ErrorTriple",
    "InvalidInput",
    "IoError",
    "LogDomainError",
    "OverflowRisk",
    "PeriodicGrid",
    "Potential",
    "ProblemData",
    "RealField",
    "SchemeSpec",
    "SolverError",
    "SpectralCoefficients",
    "SweepConfig",
    "TimeMarch",
    "WaveState",
    "WkbState",
    "build_problem",
    "cole_hopf_eikonal_oracle",
    "commutator_bracket",
    "conserved_quantities",
    "error_metrics",
    "evaluate_expression",
    "evaluate_off_grid",
    "evolve",
    "flow1",
    "flow2",
    "flow3",
    "flow4",
    "frechet_apply",
    "generator_apply",
    "lie_step",
    "load_config",
    "prepare_references",
    "reconstruct_wave",
    "restrict_to_grid",
    "run_convergence_sweep",
    "sigma_s_norm",
    "sobolev_norm",
    "solve_eikonal_characteristics",
    "spectral_derivative",
    "strang_step",
    "tssp_step",
    "write_records",
    "yoshida4_compose",
]
