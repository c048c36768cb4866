"""Convergence-sweep driver: config parsing, reference caching, CSV output.

A sweep crosses schemes x eps x nx x nt, marches each cell from the configured
initial data, and measures it against per-eps reference solutions (a fine
phase/amplitude march and a fine wave-function march) spectrally restricted
onto the cell's grid. References are cached on disk as plain-text tables so
repeated studies and test runs pay for them once.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .diagnostics import error_metrics
from .errors import (
    CacheError,
    CharacteristicsDiverged,
    ConfigError,
    IoError,
)
from .flows import WkbState
from .grid import ComplexField, PeriodicGrid, RealField, restrict_to_grid
from .problems import ProblemData, build_problem, parse_expression
from .schemes import SchemeSpec, TimeMarch, evolve
from .wave import WaveState, reconstruct_wave

CSV_HEADER = (
    "scheme,eps,nx,nt,h,dx,t_final,err_rho,err_psi,err_sa,"
    "mass_drift_rel,wallclock_seconds,status,reference_id"
)

_SCHEME_KINDS = {"lie": "lie_1234", "strang": "strang_palindromic"}
_REFERENCE_REFINE_TOL = 1e-9
_REFERENCE_REFINE_MAX_DOUBLINGS = 3


def _is_power_of_two(n) -> bool:
    return isinstance(n, (int, np.integer)) and n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class SweepConfig:
    """Fully validated sweep description; defaults reproduce the pre-caustic
    first-order study (final time 0.2, builtin data, eps from 1 down to 2^-10
    in factor-4 steps)."""

    schemes: tuple = ("lie",)
    eps_values: tuple = (1.0, 2.0**-2, 2.0**-4, 2.0**-6, 2.0**-8, 2.0**-10)
    nx_values: tuple = (128,)
    nt_values: tuple = (32, 64, 128, 256, 512, 1024, 2048)
    t_final: float = 0.2
    initial_data: str = "paper41"
    s0_expression: Optional[str] = None
    a0_expression: Optional[str] = None
    v_expression: Optional[str] = None
    nx_ref: int = 256
    nt_ref: int = 8192
    nx_ref_wave: int = 4096
    refine_reference: bool = False
    sobolev_index: float = 2.0
    output_path: str = "sweep.csv"
    cache_dir: str = "reference_cache"

    def __post_init__(self):
        if not self.schemes:
            raise ConfigError("scheme list must be nonempty")
        for scheme in self.schemes:
            if scheme not in _SCHEME_KINDS:
                raise ConfigError(
                    f"unknown scheme {scheme!r}; expected one of {sorted(_SCHEME_KINDS)}"
                )
        if not self.eps_values:
            raise ConfigError("eps list must be nonempty")
        for eps in self.eps_values:
            if not np.isfinite(eps) or eps <= 0.0:
                raise ConfigError(f"eps values must be finite and > 0, got {eps}")
        if not self.nx_values:
            raise ConfigError("nx list must be nonempty")
        for nx in self.nx_values:
            if not _is_power_of_two(nx) or nx < 4:
                raise ConfigError(f"nx values must be powers of two >= 4, got {nx}")
        if not self.nt_values:
            raise ConfigError("nt list must be nonempty")
        for nt in self.nt_values:
            if not _is_power_of_two(nt):
                raise ConfigError(f"nt values must be powers of two, got {nt}")
        if not np.isfinite(self.t_final) or self.t_final <= 0.0:
            raise ConfigError(f"t_final must be positive, got {self.t_final}")
        if self.initial_data not in ("paper41", "expressions"):
            raise ConfigError(
                f"initial_data must be 'paper41' or 'expressions', got {self.initial_data!r}"
            )
        expressions = {
            "s0": self.s0_expression,
            "a0": self.a0_expression,
            "v": self.v_expression,
        }
        if self.initial_data == "paper41":
            given = [name for name, expr in expressions.items() if expr is not None]
            if given:
                raise ConfigError(
                    f"{', '.join(given)} only apply when initial_data = expressions"
                )
        else:
            missing = [name for name, expr in expressions.items() if expr is None]
            if missing:
                raise ConfigError(
                    f"initial_data = expressions requires {', '.join(missing)}"
                )
            for expr in expressions.values():
                parse_expression(expr)
        for name, value in (
            ("nx_ref", self.nx_ref),
            ("nx_ref_wave", self.nx_ref_wave),
            ("nt_ref", self.nt_ref),
        ):
            if not _is_power_of_two(value) or value < 4:
                raise ConfigError(f"{name} must be a power of two >= 4, got {value}")
        if max(self.nx_values) > self.nx_ref:
            raise ConfigError(
                f"nx values must not exceed nx_ref = {self.nx_ref}"
            )
        if max(self.nx_values) > self.nx_ref_wave:
            raise ConfigError(
                f"nx values must not exceed nx_ref_wave = {self.nx_ref_wave}"
            )
        if max(self.nt_values) > self.nt_ref:
            raise ConfigError(
                f"nt values must divide nt_ref = {self.nt_ref}; got {max(self.nt_values)}"
            )
        if not np.isfinite(self.sobolev_index) or self.sobolev_index < 0.0:
            raise ConfigError(f"s must be finite and >= 0, got {self.sobolev_index}")
        if not self.output_path:
            raise ConfigError("output path must be nonempty")
        if not self.cache_dir:
            raise ConfigError("cache directory must be nonempty")


def _parse_string_list(value):
    items = tuple(token.strip() for token in value.split(","))
    if any(not token for token in items):
        raise ValueError("empty list entry")
    return items


def _parse_float_list(value):
    return tuple(_parse_float(token) for token in _parse_string_list(value))


def _parse_int_list(value):
    return tuple(_parse_int(token) for token in _parse_string_list(value))


def _parse_float(value):
    try:
        return float(value)
    except ValueError:
        raise ValueError(f"expected a number, got {value!r}") from None


def _parse_int(value):
    try:
        return int(value)
    except ValueError:
        raise ValueError(f"expected an integer, got {value!r}") from None


def _parse_bool(value):
    lowered = value.lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    raise ValueError(f"expected true or false, got {value!r}")


def _parse_text(value):
    if not value:
        raise ValueError("expected a nonempty value")
    return value


_CONFIG_KEYS = {
    "scheme": ("schemes", _parse_string_list),
    "eps": ("eps_values", _parse_float_list),
    "nx": ("nx_values", _parse_int_list),
    "nt": ("nt_values", _parse_int_list),
    "t_final": ("t_final", _parse_float),
    "initial_data": ("initial_data", _parse_text),
    "s0": ("s0_expression", _parse_text),
    "a0": ("a0_expression", _parse_text),
    "v": ("v_expression", _parse_text),
    "nx_ref": ("nx_ref", _parse_int),
    "nt_ref": ("nt_ref", _parse_int),
    "nx_ref_wave": ("nx_ref_wave", _parse_int),
    "refine_reference": ("refine_reference", _parse_bool),
    "s": ("sobolev_index", _parse_float),
    "output": ("output_path", _parse_text),
    "cache_dir": ("cache_dir", _parse_text),
}


def load_config(source=None) -> SweepConfig:
    """Parse key = value text (inline, or a path to a file) into a SweepConfig.

    Lines are `key = value` with '#' comments and comma-separated lists;
    omitted keys take the documented defaults. A string is treated as inline
    text when it contains '=' or a newline, as a path otherwise.
    """
    if source is None:
        text = ""
    elif isinstance(source, Path):
        text = _read_config_file(source)
    elif isinstance(source, str):
        if "=" in source or "\n" in source:
            text = source
        else:
            text = _read_config_file(Path(source))
    else:
        raise ConfigError(f"config source must be text or a path, got {type(source).__name__}")

    overrides = {}
    seen_lines = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected key = value", line=lineno)
        key, _, value = line.partition("=")
        key = key.strip()
        value = value.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"unknown key {key!r}", line=lineno)
        if key in seen_lines:
            raise ConfigError(
                f"duplicate key {key!r} (first set on line {seen_lines[key]})",
                line=lineno,
            )
        seen_lines[key] = lineno
        field_name, parser = _CONFIG_KEYS[key]
        try:
            overrides[field_name] = parser(value)
        except ValueError as exc:
            raise ConfigError(f"{key}: {exc}", line=lineno) from None
    return SweepConfig(**overrides)


def _read_config_file(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from None


@dataclass(frozen=True)
class ErrorRecord:
    """One sweep cell: settings, the three errors, drift, timing, provenance."""

    scheme: str
    eps: float
    nx: int
    nt: int
    h: float
    dx: float
    t_final: float
    err_rho: float
    err_psi: float
    err_sa: float
    mass_drift_rel: float
    wallclock_seconds: float
    status: str
    reference_id: str

    def __post_init__(self):
        if self.status not in ("ok", "diverged"):
            raise ConfigError(f"status must be 'ok' or 'diverged', got {self.status!r}")
        if abs(self.h * self.nt - self.t_final) > 1e-12 * max(1.0, self.t_final):
            raise ConfigError("h must equal t_final / nt")
        if abs(self.dx * self.nx - 2.0 * np.pi) > 1e-12:
            raise ConfigError("dx must equal 2*pi / nx")
        if self.status == "ok":
            for name in ("err_rho", "err_psi", "err_sa", "mass_drift_rel"):
                value = getattr(self, name)
                if not np.isfinite(value) or value < 0.0:
                    raise ConfigError(
                        f"{name} must be finite and >= 0 in an ok record, got {value}"
                    )


@dataclass(frozen=True)
class ReferenceBundle:
    """Per-eps reference pair plus the provenance token recorded in the CSV."""

    wkb: WkbState
    wave: WaveState
    reference_id: str


def _cache_path(cache_dir, kind, tag, t_final, eps, nx, nt) -> Path:
    name = "{}_{}_tf{}_eps{}_nx{}_nt{}.txt".format(
        kind, tag, "%.17g" % t_final, "%.17g" % eps, nx, nt
    )
    return Path(cache_dir) / name


def _save_columns(path: Path, columns) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        np.savetxt(path, np.column_stack(columns), fmt="%.17g")
    except OSError as exc:
        raise IoError(f"cannot write reference cache file {path}: {exc}") from None


def _load_columns(path: Path, grid: PeriodicGrid, width: int) -> np.ndarray:
    try:
        data = np.loadtxt(path, ndmin=2)
    except Exception as exc:
        raise CacheError(f"unreadable reference cache file {path}: {exc}") from None
    if data.shape != (grid.n, width):
        raise CacheError(
            f"reference cache file {path} has shape {data.shape}, "
            f"expected {(grid.n, width)}"
        )
    if not np.all(np.isfinite(data)):
        raise CacheError(f"reference cache file {path} contains non-finite values")
    if np.max(np.abs(data[:, 0] - grid.nodes)) > 1e-12:
        raise CacheError(f"reference cache file {path} was written for different nodes")
    return data


def _wkb_reference(cfg: SweepConfig, problem: ProblemData, eps: float, nt: int) -> WkbState:
    path = _cache_path(
        cfg.cache_dir, "wkb", problem.tag, cfg.t_final, eps, problem.grid.n, nt
    )
    if path.exists():
        data = _load_columns(path, problem.grid, 4)
        return WkbState(
            RealField(problem.grid, data[:, 3]),
            ComplexField(problem.grid, data[:, 1] + 1j * data[:, 2]),
        )
    spec = SchemeSpec("strang_palindromic", eps, problem.potential)
    final, _ = evolve(problem.initial, spec, TimeMarch(cfg.t_final / nt, nt))
    _save_columns(
        path,
        (
            problem.grid.nodes,
            final.A.values.real,
            final.A.values.imag,
            final.S.values,
        ),
    )
    return final


def _wave_reference(cfg: SweepConfig, problem: ProblemData, eps: float, nt: int) -> WaveState:
    path = _cache_path(
        cfg.cache_dir, "wave", problem.tag, cfg.t_final, eps, problem.grid.n, nt
    )
    if path.exists():
        data = _load_columns(path, problem.grid, 3)
        return WaveState(
            ComplexField(problem.grid, data[:, 1] + 1j * data[:, 2]), eps
        )
    spec = SchemeSpec("tssp_yoshida4", eps, problem.potential)
    start = reconstruct_wave(problem.initial, eps)
    final, _ = evolve(start, spec, TimeMarch(cfg.t_final / nt, nt))
    _save_columns(
        path, (problem.grid.nodes, final.psi.values.real, final.psi.values.imag)
    )
    return final


def _wkb_difference(a: WkbState, b: WkbState) -> float:
    top = np.sum(np.abs(a.S.values - b.S.values) ** 2) + np.sum(
        np.abs(a.A.values - b.A.values) ** 2
    )
    bottom = np.sum(np.abs(b.S.values) ** 2) + np.sum(np.abs(b.A.values) ** 2)
    return float(np.sqrt(top / bottom))


def _wave_difference(a: WaveState, b: WaveState) -> float:
    top = np.sum(np.abs(a.psi.values - b.psi.values) ** 2)
    bottom = np.sum(np.abs(b.psi.values) ** 2)
    return float(np.sqrt(top / bottom))


def prepare_references(cfg: SweepConfig, eps: float) -> ReferenceBundle:
    """Load or compute the reference pair for one eps, refining if configured."""
    wkb_problem = _build_config_problem(cfg, cfg.nx_ref)
    wave_problem = _build_config_problem(cfg, cfg.nx_ref_wave)

    nt_wkb = cfg.nt_ref
    wkb = _wkb_reference(cfg, wkb_problem, eps, nt_wkb)
    nt_wave = cfg.nt_ref
    wave = _wave_reference(cfg, wave_problem, eps, nt_wave)

    if cfg.refine_reference:
        for _ in range(_REFERENCE_REFINE_MAX_DOUBLINGS):
            finer = _wkb_reference(cfg, wkb_problem, eps, 2 * nt_wkb)
            if _wkb_difference(finer, wkb) < _REFERENCE_REFINE_TOL:
                wkb = finer
                nt_wkb *= 2
                break
            wkb, nt_wkb = finer, 2 * nt_wkb
        for _ in range(_REFERENCE_REFINE_MAX_DOUBLINGS):
            finer = _wave_reference(cfg, wave_problem, eps, 2 * nt_wave)
            if _wave_difference(finer, wave) < _REFERENCE_REFINE_TOL:
                wave = finer
                nt_wave *= 2
                break
            wave, nt_wave = finer, 2 * nt_wave

    reference_id = "{}-tf{}-eps{}-wkb{}x{}-wave{}x{}".format(
        wkb_problem.tag,
        "%.17g" % cfg.t_final,
        "%.17g" % eps,
        cfg.nx_ref,
        nt_wkb,
        cfg.nx_ref_wave,
        nt_wave,
    )
    return ReferenceBundle(wkb, wave, reference_id)


def _build_config_problem(cfg: SweepConfig, nx: int) -> ProblemData:
    return build_problem(
        PeriodicGrid(nx),
        cfg.initial_data,
        cfg.s0_expression,
        cfg.a0_expression,
        cfg.v_expression,
    )


def run_convergence_sweep(cfg: SweepConfig) -> list:
    """Run every (scheme, eps, nx, nt) cell; divergence marks the row, not the run."""
    records = []
    for eps in cfg.eps_values:
        bundle = prepare_references(cfg, eps)
        for nx in cfg.nx_values:
            grid = PeriodicGrid(nx)
            problem = _build_config_problem(cfg, nx)
            reference_wkb = WkbState(
                restrict_to_grid(bundle.wkb.S, grid),
                restrict_to_grid(bundle.wkb.A, grid),
            )
            # The phase/amplitude fields are smooth uniformly in eps, so spectral
            # truncation brings them onto the comparison grid without loss.  The
            # wave field carries an O(1/eps) carrier frequency that truncation to
            # a coarse grid would annihilate, so it is instead evaluated at the
            # comparison nodes: the grids nest (both powers of two), making node
            # evaluation of the fine interpolant an exact subsampling.
            stride = bundle.wave.grid.n // nx
            reference_wave = WaveState(
                ComplexField(grid, bundle.wave.psi.values[::stride]), eps
            )
            mass0 = float(grid.dx * np.sum(np.abs(problem.initial.A.values) ** 2))
            for scheme in cfg.schemes:
                spec = SchemeSpec(_SCHEME_KINDS[scheme], eps, problem.potential)
                for nt in cfg.nt_values:
                    started = time.perf_counter()
                    try:
                        final, _ = evolve(
                            problem.initial, spec, TimeMarch(cfg.t_final / nt, nt)
                        )
                        triple = error_metrics(reference_wave, reference_wkb, final, eps)
                        mass1 = float(
                            grid.dx * np.sum(np.abs(final.A.values) ** 2)
                        )
                        row = dict(
                            err_rho=triple.err_rho,
                            err_psi=triple.err_psi,
                            err_sa=triple.err_sa,
                            mass_drift_rel=abs(mass1 - mass0) / mass0,
                            status="ok",
                        )
                    except CharacteristicsDiverged:
                        row = dict(
                            err_rho=np.nan,
                            err_psi=np.nan,
                            err_sa=np.nan,
                            mass_drift_rel=np.nan,
                            status="diverged",
                        )
                    records.append(
                        ErrorRecord(
                            scheme=scheme,
                            eps=eps,
                            nx=nx,
                            nt=nt,
                            h=cfg.t_final / nt,
                            dx=grid.dx,
                            t_final=cfg.t_final,
                            wallclock_seconds=time.perf_counter() - started,
                            reference_id=bundle.reference_id,
                            **row,
                        )
                    )
    records.sort(key=lambda r: (r.scheme, r.eps, r.nx, r.nt))
    return records


def _csv_number(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % value


def write_records(records, path) -> None:
    """Persist records as CSV under the fixed header, LF endings, UTF-8."""
    lines = [CSV_HEADER]
    for r in records:
        lines.append(
            ",".join(
                (
                    r.scheme,
                    _csv_number(r.eps),
                    _csv_number(r.nx),
                    _csv_number(r.nt),
                    _csv_number(r.h),
                    _csv_number(r.dx),
                    _csv_number(r.t_final),
                    _csv_number(r.err_rho),
                    _csv_number(r.err_psi),
                    _csv_number(r.err_sa),
                    _csv_number(r.mass_drift_rel),
                    _csv_number(r.wallclock_seconds),
                    r.status,
                    r.reference_id,
                )
            )
        )
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise IoError(f"cannot write records to {path}: {exc}") from None
