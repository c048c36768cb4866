"""Conserved quantities, error metrics, composite norms, and generator algebra.

Everything here is measurement: nothing mutates states or advances time. The
generator/bracket section evaluates the right-hand sides of the four split
sub-equations and their directional derivatives in closed form (spectral
derivatives throughout), so commutators come out of exact formula composition
rather than finite differencing.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateReference, InvalidInput
from .flows import Potential, WkbState
from .grid import (
    ComplexField,
    RealField,
    sobolev_norm,
    spectral_derivative,
)
from .wave import WaveState, reconstruct_wave


@dataclass(frozen=True)
class ConservedReport:
    """Mass, momentum, and energy of one state, tagged by formulation."""

    mass: float
    momentum: float
    energy: float
    formulation: str

    def __post_init__(self):
        if self.formulation not in ("wave", "wkb"):
            raise InvalidInput(f"formulation must be 'wave' or 'wkb', got {self.formulation!r}")
        if not np.isfinite(self.mass) or self.mass < 0.0:
            raise InvalidInput(f"mass must be finite and >= 0, got {self.mass}")


@dataclass(frozen=True)
class ErrorTriple:
    """The three relative errors reported by convergence studies."""

    err_rho: float
    err_psi: float
    err_sa: float

    def __post_init__(self):
        for name in ("err_rho", "err_psi", "err_sa"):
            value = getattr(self, name)
            if not np.isfinite(value) or value < 0.0:
                raise InvalidInput(f"{name} must be finite and >= 0, got {value}")


@dataclass(frozen=True)
class DiagnosticsConfig:
    """Knobs for the composite phase/amplitude norm.

    The index weights the phase two Sobolev orders above the amplitude. The
    regularity theory behind the schemes wants s > 1.5 in one dimension; the
    formula itself is fine down to s = 0 (where it reduces to a plain combined
    L^2 norm), so only negativity is rejected here.
    """

    s: float = 2.0

    def __post_init__(self):
        if not np.isfinite(self.s) or self.s < 0.0:
            raise InvalidInput(f"Sobolev index must be finite and >= 0, got {self.s}")


def _quadrature(grid, values):
    return float(grid.dx * np.sum(values))


def conserved_quantities(state, potential: Potential, eps=None) -> ConservedReport:
    """Mass, momentum, and energy of a wave or phase/amplitude state.

    Wave states carry their own eps; phase/amplitude states do not, so eps is
    required for them (and, when passed alongside a wave state, must agree
    with the one stored there).
    """
    if isinstance(state, WaveState):
        if eps is not None and eps != state.eps:
            raise InvalidInput(f"eps = {eps} disagrees with the state's eps = {state.eps}")
        if potential.grid != state.grid:
            raise InvalidInput("potential lives on a different grid than the state")
        grid = state.grid
        psi = state.psi.values
        dpsi = spectral_derivative(state.psi, 1).values
        eps = state.eps
        density = np.abs(psi) ** 2
        mass = _quadrature(grid, density)
        momentum = eps * _quadrature(grid, np.imag(np.conj(psi) * dpsi))
        energy = _quadrature(
            grid, eps * eps * np.abs(dpsi) ** 2 + potential.values.values * density
        )
        return ConservedReport(mass, momentum, energy, "wave")

    if isinstance(state, WkbState):
        if eps is None:
            raise InvalidInput("eps is required for a phase/amplitude state")
        if not np.isfinite(eps) or eps < 0.0:
            raise InvalidInput(f"eps must be finite and >= 0, got {eps}")
        if potential.grid != state.grid:
            raise InvalidInput("potential lives on a different grid than the state")
        grid = state.grid
        a = state.A.values
        da = spectral_derivative(state.A, 1).values
        ds = spectral_derivative(state.S, 1).values
        flux = eps * da + 1j * a * ds
        density = np.abs(a) ** 2
        mass = _quadrature(grid, density)
        momentum = _quadrature(grid, np.imag(np.conj(a) * flux))
        energy = _quadrature(
            grid, np.abs(flux) ** 2 + potential.values.values * density
        )
        return ConservedReport(mass, momentum, energy, "wkb")

    raise InvalidInput(
        f"state must be a WaveState or WkbState, got {type(state).__name__}"
    )


def _l2(grid, values):
    return float(np.sqrt(grid.dx * np.sum(np.abs(values) ** 2)))


def error_metrics(
    reference_wave: WaveState,
    reference_wkb: WkbState,
    test: WkbState,
    eps: float,
) -> ErrorTriple:
    """Relative density, wave-function, and phase/amplitude errors.

    All three states must already live on one grid (callers restrict finer
    references first). The density error is measured in L1, the other two in
    L2, each normalized by the reference size.
    """
    grid = test.grid
    if reference_wave.grid != grid or reference_wkb.grid != grid:
        raise InvalidInput("references and test state must share one grid")
    if eps != reference_wave.eps:
        raise InvalidInput(
            f"eps = {eps} disagrees with the wave reference's eps = {reference_wave.eps}"
        )

    rho_ref = np.abs(reference_wave.psi.values) ** 2
    rho_test = np.abs(test.A.values) ** 2
    rho_norm = _quadrature(grid, np.abs(rho_ref))
    psi_norm = _l2(grid, reference_wave.psi.values)
    sa_norm_sq = (
        _l2(grid, reference_wkb.S.values) ** 2 + _l2(grid, reference_wkb.A.values) ** 2
    )
    if rho_norm == 0.0 or psi_norm == 0.0 or sa_norm_sq == 0.0:
        raise DegenerateReference("reference norms must be nonzero for relative errors")

    err_rho = _quadrature(grid, np.abs(rho_ref - rho_test)) / rho_norm
    err_psi = (
        _l2(grid, reference_wave.psi.values - reconstruct_wave(test, eps).psi.values)
        / psi_norm
    )
    err_sa = float(
        np.sqrt(
            (
                _l2(grid, reference_wkb.S.values - test.S.values) ** 2
                + _l2(grid, reference_wkb.A.values - test.A.values) ** 2
            )
            / sa_norm_sq
        )
    )
    return ErrorTriple(err_rho, err_psi, err_sa)


def sigma_s_norm(u: WkbState, cfg: DiagnosticsConfig = DiagnosticsConfig()) -> float:
    """Composite norm: phase in H^{s+2} and amplitude in H^s, combined in rms."""
    return float(
        np.sqrt(
            sobolev_norm(u.S, cfg.s + 2.0) ** 2 + sobolev_norm(u.A, cfg.s) ** 2
        )
    )


# -- generator algebra --------------------------------------------------------


def _check_generator_args(index, u, eps):
    if isinstance(index, bool) or not isinstance(index, (int, np.integer)):
        raise InvalidInput(f"generator index must be an integer, got {index!r}")
    if index not in (1, 2, 3, 4):
        raise InvalidInput(f"generator index must be 1..4, got {index}")
    if not np.isfinite(eps) or eps < 0.0:
        raise InvalidInput(f"eps must be finite and >= 0, got {eps}")


def _pack(grid, s_values, a_values) -> WkbState:
    return WkbState(RealField(grid, s_values), ComplexField(grid, a_values))


def generator_apply(index: int, u: WkbState, eps: float, potential: Potential) -> WkbState:
    """Right-hand side of sub-equation `index` at u, as a state-shaped tangent."""
    _check_generator_args(index, u, eps)
    if potential.grid != u.grid:
        raise InvalidInput("potential lives on a different grid than the state")
    grid = u.grid
    n = grid.n
    if index == 3:
        return _pack(grid, -potential.values.values, np.zeros(n, dtype=np.complex128))

    a = u.A.values
    da = spectral_derivative(u.A, 1).values
    lap_a = spectral_derivative(u.A, 2).values
    if index == 2:
        return _pack(grid, np.zeros(n), 0.5j * (eps - 1.0) * lap_a)

    ds = spectral_derivative(u.S, 1).values
    lap_s = spectral_derivative(u.S, 2).values
    if index == 1:
        return _pack(grid, -0.5 * ds * ds, -ds * da - 0.5 * a * lap_s + 0.5j * lap_a)
    return _pack(grid, eps * eps * lap_s, -1j * eps * a * lap_s)


def frechet_apply(index: int, u: WkbState, direction: WkbState, eps: float) -> WkbState:
    """Directional derivative of generator `index` at u along `direction`."""
    _check_generator_args(index, u, eps)
    if direction.grid != u.grid:
        raise InvalidInput("direction lives on a different grid than the state")
    grid = u.grid
    n = grid.n
    if index == 3:
        return _pack(grid, np.zeros(n), np.zeros(n, dtype=np.complex128))

    lap_b = spectral_derivative(direction.A, 2).values
    if index == 2:
        return _pack(grid, np.zeros(n), 0.5j * (eps - 1.0) * lap_b)

    a = u.A.values
    ds = spectral_derivative(u.S, 1).values
    lap_s = spectral_derivative(u.S, 2).values
    b = direction.A.values
    dsig = spectral_derivative(direction.S, 1).values
    lap_sig = spectral_derivative(direction.S, 2).values
    if index == 1:
        da = spectral_derivative(u.A, 1).values
        db = spectral_derivative(direction.A, 1).values
        return _pack(
            grid,
            -ds * dsig,
            -dsig * da - ds * db - 0.5 * b * lap_s - 0.5 * a * lap_sig + 0.5j * lap_b,
        )
    return _pack(grid, eps * eps * lap_sig, -1j * eps * (b * lap_s + a * lap_sig))


def commutator_bracket(
    i: int, j: int, u: WkbState, eps: float, potential: Potential
) -> WkbState:
    """Bracket of two generators at u: DN_i(u).N_j(u) - DN_j(u).N_i(u)."""
    forward = frechet_apply(i, u, generator_apply(j, u, eps, potential), eps)
    backward = frechet_apply(j, u, generator_apply(i, u, eps, potential), eps)
    return WkbState(
        RealField(u.grid, forward.S.values - backward.S.values),
        ComplexField(u.grid, forward.A.values - backward.A.values),
    )
