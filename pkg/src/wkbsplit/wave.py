"""Direct wave-function integration and cross-checks against the WKB side.

The stepper here advances the oscillatory wave function itself (kinetic part
diagonal in Fourier space, potential part diagonal in physical space), which
makes it a trustworthy but eps-constrained reference for the splitting
schemes. `cole_hopf_eikonal_oracle` provides an independent route to the
viscous phase equation through an exponential substitution that turns it into
a linear heat/reaction problem.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput, LogDomainError, OverflowRisk
from .flows import Potential, WkbState
from .grid import ComplexField, RealField

# exponents beyond this are pointless in float64 (exp(710) overflows)
_EXP_GUARD = 500.0


@dataclass(frozen=True)
class WaveState:
    """Wave function sampled on a periodic grid, tagged with its eps."""

    psi: ComplexField
    eps: float

    def __post_init__(self):
        if not isinstance(self.psi, ComplexField):
            raise InvalidInput(f"psi must be a ComplexField, got {type(self.psi).__name__}")
        if not np.isfinite(self.eps) or self.eps <= 0.0:
            raise InvalidInput(f"eps must be finite and > 0, got {self.eps}")

    @property
    def grid(self):
        return self.psi.grid


class _TsspStepper:
    """Strang kinetic/potential stepper over the raw wave-function array.

    order=2 is a single potential-kinetic-potential sandwich; order=4 chains
    three of them with the triple-jump sub-step sizes.
    """

    def __init__(self, grid, eps: float, potential: Potential, order: int):
        from .schemes import YOSHIDA_GAMMA1, YOSHIDA_GAMMA2

        if order not in (2, 4):
            raise InvalidInput(f"order must be 2 or 4, got {order}")
        if not np.isfinite(eps) or eps <= 0.0:
            raise InvalidInput(f"eps must be finite and > 0, got {eps}")
        if potential.grid != grid:
            raise InvalidInput("potential lives on a different grid than the state")
        self.eps = eps
        self.v = potential.values.values
        self.ksq = grid.wavenumbers.astype(np.float64) ** 2
        self.gammas = (1.0,) if order == 2 else (YOSHIDA_GAMMA1, YOSHIDA_GAMMA2, YOSHIDA_GAMMA1)
        self._mult_cache = {}

    def _multipliers(self, tau):
        mults = self._mult_cache.get(tau)
        if mults is None:
            mults = (
                np.exp(-0.5j * tau * self.v / self.eps),
                np.exp(-0.5j * self.eps * tau * self.ksq),
            )
            self._mult_cache[tau] = mults
        return mults

    def step(self, psi, h):
        for gamma in self.gammas:
            pot_half, kin = self._multipliers(gamma * h)
            psi = pot_half * psi
            psi = np.fft.ifft(np.fft.fft(psi) * kin)
            psi = pot_half * psi
        return psi


def tssp_step(w: WaveState, h: float, potential: Potential, order: int = 2) -> WaveState:
    """Advance the wave function by one step of the splitting reference.

    Negative h is allowed: the map is a group, and the order-4 composition
    leans on that for its backward middle sub-step.
    """
    if not np.isfinite(h):
        raise InvalidInput(f"step size must be finite, got {h}")
    stepper = _TsspStepper(w.grid, w.eps, potential, order)
    return WaveState(ComplexField(w.grid, stepper.step(w.psi.values, h)), w.eps)


def reconstruct_wave(u: WkbState, eps: float) -> WaveState:
    """Assemble amplitude * exp(i * phase / eps) on the grid."""
    if not np.isfinite(eps) or eps <= 0.0:
        raise InvalidInput(f"eps must be finite and > 0, got {eps}")
    psi = u.A.values * np.exp(1j * u.S.values / eps)
    return WaveState(ComplexField(u.grid, psi), eps)


def cole_hopf_eikonal_oracle(
    s0: RealField,
    potential: Potential,
    eps: float,
    h: float,
    substeps: int = 1024,
) -> RealField:
    """Advance the viscous phase equation via the exponential substitution.

    Setting w = exp(-S / (2 eps^2)) - 1 turns the phase equation with the
    quadratic gradient term and eps^2 diffusion into a linear heat equation
    with a potential-driven reaction, which is integrated here by a symmetric
    heat/reaction/heat split over many uniform substeps. The phase is
    recovered through the logarithm at the end. Independent of the sub-flow
    machinery, so it serves as a cross-check on compositions that include the
    diffusion piece.
    """
    if not np.isfinite(eps) or eps <= 0.0:
        raise InvalidInput(f"eps must be finite and > 0, got {eps}")
    if not np.isfinite(h) or h <= 0.0:
        raise InvalidInput(f"step size must be positive, got {h}")
    if isinstance(substeps, bool) or not isinstance(substeps, (int, np.integer)):
        raise InvalidInput(f"substeps must be an integer, got {substeps!r}")
    if substeps < 1:
        raise InvalidInput(f"substeps must be >= 1, got {substeps}")
    if potential.grid != s0.grid:
        raise InvalidInput("potential lives on a different grid than the phase")

    scale = 2.0 * eps * eps
    peak = float(np.max(np.abs(s0.values))) / scale
    if peak > _EXP_GUARD:
        raise OverflowRisk(
            f"phase/eps^2 ratio too large for the exponential substitution "
            f"(|S|/(2 eps^2) reaches {peak:.3g}, limit {_EXP_GUARD:g})"
        )

    grid = s0.grid
    n = grid.n
    tau = h / substeps
    k = np.arange(n // 2 + 1, dtype=np.float64)
    heat_half = np.exp(-eps * eps * (0.5 * tau) * k * k)
    reaction = np.exp(potential.values.values * (tau / scale))

    w = np.expm1(-s0.values / scale)
    for _ in range(substeps):
        w = np.fft.irfft(np.fft.rfft(w) * heat_half, n)
        w = (w + 1.0) * reaction - 1.0
        w = np.fft.irfft(np.fft.rfft(w) * heat_half, n)

    shifted = w + 1.0
    if np.any(shifted <= 0.0):
        raise LogDomainError(
            "exponential substitution left the positive cone; the phase cannot "
            "be recovered by the logarithm"
        )
    return RealField(grid, -scale * np.log1p(w))
