"""Splitting compositions and the time-marching driver.

The two phase/amplitude schemes are expressed as data — a tuple of
``(sub-flow id, fraction of the step)`` pairs executed left to right — so the
palindromic structure of the second-order composition is checkable directly.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import InvalidInput, SolverError
from .flows import (
    EikonalSettings,
    Potential,
    WkbState,
    _amp_multiplier,
    _flow1_arrays,
    _flow2_arrays,
    _flow4_arrays,
    _free_multiplier,
    _heat_multipliers,
)
from .grid import ComplexField, RealField

WKB_SCHEME_KINDS = ("lie_1234", "strang_palindromic")
WAVE_SCHEME_KINDS = ("tssp_strang", "tssp_yoshida4")
SCHEME_KINDS = WKB_SCHEME_KINDS + WAVE_SCHEME_KINDS

# execution order of the sub-flows within one step
LIE_SEQUENCE = ((4, 1.0), (3, 1.0), (2, 1.0), (1, 1.0))
STRANG_SEQUENCE = (
    (1, 0.5),
    (2, 0.5),
    (3, 0.5),
    (4, 1.0),
    (3, 0.5),
    (2, 0.5),
    (1, 0.5),
)

# Triple-jump coefficients, solved at import time from the order conditions
# 2*g1 + g2 = 1 and 2*g1**3 + g2**3 = 0.
YOSHIDA_GAMMA1 = 1.0 / (2.0 - 2.0 ** (1.0 / 3.0))
YOSHIDA_GAMMA2 = 1.0 - 2.0 * YOSHIDA_GAMMA1


@dataclass(frozen=True)
class SchemeSpec:
    """Which composition to run, at which eps, under which potential."""

    kind: str
    eps: float
    potential: Potential
    eikonal: EikonalSettings = field(default_factory=EikonalSettings)
    dealias: bool = False

    def __post_init__(self):
        if self.kind not in SCHEME_KINDS:
            raise InvalidInput(
                f"unknown scheme kind {self.kind!r}; expected one of {SCHEME_KINDS}"
            )
        if not np.isfinite(self.eps) or self.eps < 0.0:
            raise InvalidInput(f"eps must be finite and >= 0, got {self.eps}")
        if self.kind in WAVE_SCHEME_KINDS and self.eps == 0.0:
            raise InvalidInput("wave-space schemes need eps > 0")


@dataclass(frozen=True)
class TimeMarch:
    """Fixed-step march: n_steps steps of size h."""

    h: float
    n_steps: int

    def __post_init__(self):
        if not np.isfinite(self.h) or self.h <= 0.0:
            raise InvalidInput(f"step size must be positive, got {self.h}")
        if isinstance(self.n_steps, bool) or not isinstance(self.n_steps, (int, np.integer)):
            raise InvalidInput(f"n_steps must be an integer, got {self.n_steps!r}")
        if self.n_steps < 1:
            raise InvalidInput(f"n_steps must be >= 1, got {self.n_steps}")

    @property
    def t_final(self) -> float:
        return self.h * self.n_steps

    @classmethod
    def from_final_time(cls, t_final: float, n_steps: int) -> "TimeMarch":
        if not np.isfinite(t_final) or t_final <= 0.0:
            raise InvalidInput(f"t_final must be positive, got {t_final}")
        if isinstance(n_steps, bool) or not isinstance(n_steps, (int, np.integer)):
            raise InvalidInput(f"step count must be an integer, got {n_steps!r}")
        if n_steps < 1:
            raise InvalidInput(f"step count must be >= 1, got {n_steps}")
        return cls(t_final / n_steps, n_steps)


class _WkbStepper:
    """One-step map over raw (S, A) arrays with multipliers cached per sub-step."""

    def __init__(self, spec: SchemeSpec, grid, sequence):
        if spec.potential.grid != grid:
            raise InvalidInput("potential lives on a different grid than the state")
        self.spec = spec
        self.grid = grid
        self.sequence = sequence
        self.nodes = grid.nodes
        self.v = spec.potential.values.values
        self._mult_cache = {}
        if spec.dealias:
            mask = (np.abs(grid.wavenumbers) <= grid.n / 3.0).astype(np.float64)
        else:
            mask = None
        self._alias_mask = mask

    def _multipliers(self, tau):
        mults = self._mult_cache.get(tau)
        if mults is None:
            mults = (
                _free_multiplier(self.grid, tau),
                _amp_multiplier(self.grid, tau, self.spec.eps),
                _heat_multipliers(self.grid, tau, self.spec.eps),
            )
            self._mult_cache[tau] = mults
        return mults

    def step(self, s, a, h):
        eps = self.spec.eps
        eikonal = self.spec.eikonal
        for flow_id, fraction in self.sequence:
            tau = fraction * h
            free, amp, (heat, phase) = self._multipliers(tau)
            if flow_id == 1:
                s, a = _flow1_arrays(s, a, tau, free, self.nodes, eikonal)
            elif flow_id == 2:
                if eps != 1.0:
                    a = _flow2_arrays(a, amp)
            elif flow_id == 3:
                s = s - tau * self.v
            elif flow_id == 4:
                if eps != 0.0:
                    s, a = _flow4_arrays(s, a, heat, phase, self.grid.n)
        if self._alias_mask is not None:
            s = np.fft.irfft(
                np.fft.rfft(s) * self._alias_mask[: self.grid.n // 2 + 1], self.grid.n
            )
            a = np.fft.ifft(np.fft.fft(a) * self._alias_mask)
        return s, a


def _wkb_sequence(kind: str):
    return LIE_SEQUENCE if kind == "lie_1234" else STRANG_SEQUENCE


def _run_wkb_sequence(u: WkbState, h: float, spec: SchemeSpec, sequence) -> WkbState:
    stepper = _WkbStepper(spec, u.grid, sequence)
    s, a = stepper.step(u.S.values, u.A.values, h)
    return WkbState(RealField(u.grid, s), ComplexField(u.grid, a))


def lie_step(u: WkbState, h: float, spec: SchemeSpec) -> WkbState:
    """First-order composition: flow4, flow3, flow2, flow1, each over h."""
    if not np.isfinite(h):
        raise InvalidInput(f"step size must be finite, got {h}")
    return _run_wkb_sequence(u, h, spec, LIE_SEQUENCE)


def strang_step(u: WkbState, h: float, spec: SchemeSpec) -> WkbState:
    """Palindromic second-order composition with flow4 at the centre."""
    if not np.isfinite(h):
        raise InvalidInput(f"step size must be finite, got {h}")
    return _run_wkb_sequence(u, h, spec, STRANG_SEQUENCE)


def yoshida4_compose(base_step: Callable) -> Callable:
    """Lift a symmetric second-order one-step map to fourth order.

    The returned map applies base_step with sub-steps gamma1*h, gamma2*h,
    gamma1*h (the middle one runs backwards in time).
    """

    def composed(u, h):
        u = base_step(u, YOSHIDA_GAMMA1 * h)
        u = base_step(u, YOSHIDA_GAMMA2 * h)
        return base_step(u, YOSHIDA_GAMMA1 * h)

    return composed


def evolve(u0, spec: SchemeSpec, march: TimeMarch, observer: Optional[Callable] = None):
    """March n_steps steps of the chosen scheme from u0.

    The observer, when given, is called as observer(step, t, state) after every
    step (step counts completed steps); its return values are collected and
    returned alongside the final state. Failures inside a step are re-raised
    with the step index and simulation time prepended.
    """
    if spec.kind in WKB_SCHEME_KINDS:
        if not isinstance(u0, WkbState):
            raise InvalidInput(f"{spec.kind} expects a WkbState, got {type(u0).__name__}")
        stepper = _WkbStepper(spec, u0.grid, _wkb_sequence(spec.kind))
        s, a = u0.S.values, u0.A.values
        outputs = []
        for i in range(march.n_steps):
            try:
                s, a = stepper.step(s, a, march.h)
            except SolverError as exc:
                raise type(exc)(
                    f"step {i + 1}/{march.n_steps} (t = {(i + 1) * march.h:.6g}): {exc}"
                ) from exc
            if observer is not None:
                state = WkbState(RealField(u0.grid, s), ComplexField(u0.grid, a))
                outputs.append(observer(i + 1, (i + 1) * march.h, state))
        return WkbState(RealField(u0.grid, s), ComplexField(u0.grid, a)), outputs

    from .wave import WaveState, _TsspStepper  # deferred to avoid an import cycle

    if not isinstance(u0, WaveState):
        raise InvalidInput(f"{spec.kind} expects a WaveState, got {type(u0).__name__}")
    if u0.eps != spec.eps:
        raise InvalidInput(
            f"state eps = {u0.eps} disagrees with scheme eps = {spec.eps}"
        )
    order = 2 if spec.kind == "tssp_strang" else 4
    stepper = _TsspStepper(u0.psi.grid, spec.eps, spec.potential, order)
    psi = u0.psi.values
    outputs = []
    for i in range(march.n_steps):
        psi = stepper.step(psi, march.h)
        if observer is not None:
            state = WaveState(ComplexField(u0.psi.grid, psi), spec.eps)
            outputs.append(observer(i + 1, (i + 1) * march.h, state))
    return WaveState(ComplexField(u0.psi.grid, psi), spec.eps), outputs
