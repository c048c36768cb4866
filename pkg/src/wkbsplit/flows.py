"""Phase/amplitude state and the four exactly-solvable sub-flows.

The evolved system is the viscous phase-amplitude form of the semiclassical
Schrodinger equation on the torus, split into four pieces that each admit an
exact update:

1. quadratic-transport phase equation plus its amplitude coupling, solved by
   backward characteristics for the phase and a free-Schrodinger multiplier
   on ``w = A * exp(i*S)`` for the amplitude;
2. an amplitude-only Fourier multiplier ``exp(-i*(eps-1)*h*k^2/2)``;
3. a pointwise potential shift ``S -> S - h*V``;
4. a heat multiplier ``exp(-eps^2*h*k^2)`` on the phase, with the matching
   amplitude phase correction ``A -> A * exp(-i*(S_new - S_old)/eps)`` whose
   division by eps is carried out symbolically so eps = 0 is exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CharacteristicsDiverged, InvalidInput
from .grid import ComplexField, PeriodicGrid, RealField


@dataclass(frozen=True)
class EikonalSettings:
    """Knobs for the backward-characteristic fixed point.

    gamma bounds h * max|S''| so the iteration stays a contraction, fp_tol is
    the stopping threshold on successive foot-point updates, and fp_max_iter
    caps the iteration count.
    """

    gamma: float = 0.9
    fp_tol: float = 1e-12
    fp_max_iter: int = 50

    def __post_init__(self):
        if not (0.0 < self.gamma < 1.0):
            raise InvalidInput(f"gamma must lie in (0, 1), got {self.gamma}")
        if not (self.fp_tol > 0.0):
            raise InvalidInput(f"fp_tol must be positive, got {self.fp_tol}")
        if self.fp_max_iter < 1:
            raise InvalidInput(f"fp_max_iter must be >= 1, got {self.fp_max_iter}")


@dataclass(frozen=True)
class Potential:
    """Real potential samples, optionally tagged with the defining expression."""

    values: RealField
    expression: Optional[str] = None

    @property
    def grid(self) -> PeriodicGrid:
        return self.values.grid


@dataclass(frozen=True)
class WkbState:
    """Phase S (real) and amplitude A (complex) sampled on one grid."""

    S: RealField
    A: ComplexField

    def __post_init__(self):
        if self.S.grid != self.A.grid:
            raise InvalidInput(
                f"phase grid (n={self.S.grid.n}) and amplitude grid "
                f"(n={self.A.grid.n}) differ"
            )

    @property
    def grid(self) -> PeriodicGrid:
        return self.S.grid


def _check_step_inputs(h, eps=None):
    if not np.isfinite(h):
        raise InvalidInput(f"step size must be finite, got {h}")
    if eps is not None:
        if not np.isfinite(eps) or eps < 0.0:
            raise InvalidInput(f"eps must be finite and >= 0, got {eps}")


# ---------------------------------------------------------------------------
# array-level kernels (shared with the composition module's steppers)
# ---------------------------------------------------------------------------


def _eikonal_phase_update(s, x, h, gamma, fp_tol, fp_max_iter):
    """Advance the phase under dS/dt + (S')^2/2 = 0 by backward characteristics.

    For each node x_j the foot point solves y = x_j - h * S0'(y) by fixed-point
    iteration, with S0' the spectral interpolant; the updated phase is then
    S0(y) + (h/2) * S0'(y)^2, exact along characteristics.
    """
    n = s.shape[0]
    half = n // 2
    spectrum = np.fft.rfft(s)
    k = np.arange(half + 1, dtype=np.float64)

    curvature = np.fft.irfft(spectrum * (-(k**2)), n)
    steep = abs(h) * np.max(np.abs(curvature))
    if steep > gamma:
        raise CharacteristicsDiverged(
            f"contraction bound violated: |h|*max|S''| = {steep:.6g} > gamma = {gamma}"
        )

    # interpolation coefficients: velocity S0' drops the Nyquist mode (odd
    # derivative); the phase itself keeps it as a real cosine.
    c = spectrum / n
    c0 = c[0].real
    c_pos = c[1:half]
    c_nyq = c[half].real
    v_pos = 1j * k[1:half] * c_pos

    y = x
    converged = False
    for _ in range(fp_max_iter):
        z = np.exp(1j * y)
        powers = np.cumprod(np.broadcast_to(z[:, None], (n, half - 1)), axis=1)
        v = 2.0 * (powers @ v_pos).real
        y_new = x - h * v
        delta = np.max(np.abs(y_new - y))
        y = y_new
        if delta < fp_tol:
            converged = True
            break
    if not converged:
        raise CharacteristicsDiverged(
            f"foot-point iteration did not reach {fp_tol:g} in {fp_max_iter} steps"
        )

    z = np.exp(1j * y)
    powers = np.cumprod(np.broadcast_to(z[:, None], (n, half - 1)), axis=1)
    v = 2.0 * (powers @ v_pos).real
    s_feet = c0 + 2.0 * (powers @ c_pos).real + c_nyq * np.cos(half * y)
    return s_feet + 0.5 * h * v * v


def _flow1_arrays(s, a, h, free_multiplier, x, settings):
    s_new = _eikonal_phase_update(
        s, x, h, settings.gamma, settings.fp_tol, settings.fp_max_iter
    )
    w = a * np.exp(1j * s)
    w = np.fft.ifft(np.fft.fft(w) * free_multiplier)
    return s_new, w * np.exp(-1j * s_new)


def _flow2_arrays(a, amp_multiplier):
    return np.fft.ifft(np.fft.fft(a) * amp_multiplier)


def _flow4_arrays(s, a, heat_multiplier, phase_over_eps, n):
    spectrum = np.fft.rfft(s)
    s_new = np.fft.irfft(spectrum * heat_multiplier, n)
    phi = np.fft.irfft(spectrum * phase_over_eps, n)
    return s_new, a * np.exp(-1j * phi)


def _free_multiplier(grid, h):
    return np.exp(-0.5j * h * grid.wavenumbers.astype(np.float64) ** 2)


def _amp_multiplier(grid, h, eps):
    return np.exp(-0.5j * (eps - 1.0) * h * grid.wavenumbers.astype(np.float64) ** 2)


def _heat_multipliers(grid, h, eps):
    """Heat decay on rfft modes plus the symbolic (decay - 1)/eps phase factor."""
    k = np.arange(grid.n // 2 + 1, dtype=np.float64)
    decay_exponent = -(eps**2) * h * k**2
    heat = np.exp(decay_exponent)
    if eps == 0.0:
        phase = np.zeros_like(k)
    else:
        phase = np.expm1(decay_exponent) / eps
    return heat, phase


# ---------------------------------------------------------------------------
# public flow maps
# ---------------------------------------------------------------------------


def solve_eikonal_characteristics(
    s0: RealField, h: float, settings: EikonalSettings = EikonalSettings()
) -> RealField:
    """Exact-in-time step of dS/dt + (S')^2/2 = 0 on the grid nodes."""
    _check_step_inputs(h)
    if h == 0.0:
        return s0
    out = _eikonal_phase_update(
        s0.values,
        s0.grid.nodes,
        h,
        settings.gamma,
        settings.fp_tol,
        settings.fp_max_iter,
    )
    return RealField(s0.grid, out)


def flow1(u: WkbState, h: float, settings: EikonalSettings = EikonalSettings()) -> WkbState:
    """Transport flow: eikonal phase step plus the free-Schrodinger trick on
    w = A*exp(i*S), which keeps the discrete L2 norm of A exactly."""
    _check_step_inputs(h)
    if h == 0.0:
        return u
    s_new, a_new = _flow1_arrays(
        u.S.values, u.A.values, h, _free_multiplier(u.grid, h), u.grid.nodes, settings
    )
    return WkbState(RealField(u.grid, s_new), ComplexField(u.grid, a_new))


def flow2(u: WkbState, h: float, eps: float) -> WkbState:
    """Amplitude dispersion correction exp(-i*(eps-1)*h*k^2/2); identity at eps = 1."""
    _check_step_inputs(h, eps)
    if h == 0.0 or eps == 1.0:
        return u
    a_new = _flow2_arrays(u.A.values, _amp_multiplier(u.grid, h, eps))
    return WkbState(u.S, ComplexField(u.grid, a_new))


def flow3(u: WkbState, h: float, potential: Potential) -> WkbState:
    """Potential shift S -> S - h*V; the amplitude is untouched."""
    _check_step_inputs(h)
    if potential.grid != u.grid:
        raise InvalidInput("potential lives on a different grid than the state")
    if h == 0.0:
        return u
    return WkbState(RealField(u.grid, u.S.values - h * potential.values.values), u.A)


def flow4(u: WkbState, h: float, eps: float) -> WkbState:
    """Phase diffusion exp(-eps^2*h*k^2) with the matching unimodular amplitude
    rotation exp(-i*(S_new - S_old)/eps); identity at eps = 0."""
    _check_step_inputs(h, eps)
    if h == 0.0 or eps == 0.0:
        return u
    heat, phase = _heat_multipliers(u.grid, h, eps)
    s_new, a_new = _flow4_arrays(u.S.values, u.A.values, heat, phase, u.grid.n)
    return WkbState(RealField(u.grid, s_new), ComplexField(u.grid, a_new))
