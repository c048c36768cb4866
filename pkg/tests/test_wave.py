"""Tests for the wave-function integrator and the exponential-substitution oracle.

Reference values come from closed forms: a single Fourier mode under a
constant potential evolves by a pure phase (both split pieces are diagonal on
it, so the integrator must reproduce it to rounding), and with zero potential
the substitution route reduces to one exact heat multiplier.
"""

import numpy as np
import pytest

from wkbsplit.errors import InvalidInput, LogDomainError, OverflowRisk
from wkbsplit.flows import Potential, WkbState
from wkbsplit.grid import ComplexField, PeriodicGrid, RealField
from wkbsplit.schemes import SchemeSpec, TimeMarch, evolve, yoshida4_compose
from wkbsplit.wave import (
    WaveState,
    cole_hopf_eikonal_oracle,
    reconstruct_wave,
    tssp_step,
)

# exp(-1j * 0.17): phase picked up by the k = 1 mode over h = 0.2 with
# eps = 0.5 and V = 0.3 (eps * k^2 / 2 + V / eps = 0.85)
PLANE_WAVE_FACTOR = 0.9855847669095608 - 0.16918234906699603j


@pytest.fixture
def grid():
    return PeriodicGrid(64)


@pytest.fixture
def potential(grid):
    return Potential(RealField(grid, np.sin(grid.nodes)))


def l2_distance(grid, a, b):
    return float(np.sqrt(grid.dx * np.sum(np.abs(a - b) ** 2)))


class TestWaveState:
    def test_carries_grid(self, grid):
        w = WaveState(ComplexField(grid, np.ones(grid.n, dtype=complex)), 0.5)
        assert w.grid is grid

    @pytest.mark.parametrize("eps", [0.0, -1.0, np.nan, np.inf])
    def test_rejects_bad_eps(self, grid, eps):
        with pytest.raises(InvalidInput):
            WaveState(ComplexField(grid, np.ones(grid.n, dtype=complex)), eps)

    def test_rejects_real_field(self, grid):
        with pytest.raises(InvalidInput):
            WaveState(RealField(grid, np.ones(grid.n)), 0.5)


class TestTsspStep:
    def test_single_mode_constant_potential_is_exact(self, grid):
        constant = Potential(RealField(grid, np.full(grid.n, 0.3)))
        w0 = WaveState(ComplexField(grid, np.exp(1j * grid.nodes)), 0.5)
        for order in (2, 4):
            w1 = tssp_step(w0, 0.2, constant, order=order)
            expected = PLANE_WAVE_FACTOR * np.exp(1j * grid.nodes)
            assert np.max(np.abs(w1.psi.values - expected)) < 1e-14

    def test_order4_is_the_triple_jump_of_order2(self, grid, potential):
        w0 = WaveState(ComplexField(grid, np.exp(1j * np.sin(grid.nodes))), 0.5)
        direct = tssp_step(w0, 0.2, potential, order=4)
        composed = yoshida4_compose(lambda w, h: tssp_step(w, h, potential, order=2))(
            w0, 0.2
        )
        assert np.array_equal(direct.psi.values, composed.psi.values)

    def test_rejects_bad_order(self, grid, potential):
        w0 = WaveState(ComplexField(grid, np.ones(grid.n, dtype=complex)), 0.5)
        with pytest.raises(InvalidInput, match="order"):
            tssp_step(w0, 0.1, potential, order=3)

    def test_rejects_grid_mismatch(self, grid):
        other = Potential(RealField(PeriodicGrid(32), np.zeros(32)))
        w0 = WaveState(ComplexField(grid, np.ones(grid.n, dtype=complex)), 0.5)
        with pytest.raises(InvalidInput, match="grid"):
            tssp_step(w0, 0.1, other)

    def test_mass_is_conserved_over_many_steps(self, grid, potential):
        x = grid.nodes
        psi0 = (1.0 + 0.3 * np.cos(x)) * np.exp(1j * np.sin(x))
        w0 = WaveState(ComplexField(grid, psi0), 0.5)
        spec = SchemeSpec("tssp_strang", 0.5, potential)
        final, _ = evolve(w0, spec, TimeMarch(0.005, 200))
        mass0 = grid.dx * np.sum(np.abs(psi0) ** 2)
        mass1 = grid.dx * np.sum(np.abs(final.psi.values) ** 2)
        assert abs(mass1 - mass0) / mass0 < 1e-13


class TestTsspConvergence:
    """Self-convergence against the same scheme on a 2048-step march."""

    def run(self, grid, potential, kind, n_steps):
        x = grid.nodes
        psi0 = (1.0 + 0.3 * np.cos(x)) * np.exp(1j * np.sin(x))
        w0 = WaveState(ComplexField(grid, psi0), 0.5)
        spec = SchemeSpec(kind, 0.5, potential)
        final, _ = evolve(w0, spec, TimeMarch.from_final_time(0.5, n_steps))
        return final.psi.values

    @pytest.mark.parametrize(
        "kind, counts, expected_order, slack",
        [
            ("tssp_strang", (16, 32, 64), 2.0, 0.2),
            ("tssp_yoshida4", (8, 16, 32), 4.0, 0.3),
        ],
    )
    def test_observed_order(self, grid, potential, kind, counts, expected_order, slack):
        reference = self.run(grid, potential, kind, 2048)
        errors = [
            l2_distance(grid, self.run(grid, potential, kind, nt), reference)
            for nt in counts
        ]
        slopes = np.log2(np.array(errors[:-1]) / np.array(errors[1:]))
        assert np.all(np.abs(slopes - expected_order) < slack)


class TestReconstructWave:
    def test_frozen_pointwise_value(self):
        grid = PeriodicGrid(16)
        x = grid.nodes
        u = WkbState(RealField(grid, np.sin(x)), ComplexField(grid, np.cos(x) + 0j))
        w = reconstruct_wave(u, 0.25)
        assert w.eps == 0.25
        # node 5 sits at 5 * pi / 8; amplitude cos(x5), phase 4 sin(x5)
        assert w.psi.values[5] == pytest.approx(
            0.32545931017425805 + 0.20130287337150024j, abs=1e-15
        )

    def test_modulus_is_the_amplitude_modulus(self, grid):
        x = grid.nodes
        u = WkbState(
            RealField(grid, 0.3 * np.cos(x)),
            ComplexField(grid, (0.5 + 0.2 * np.sin(x)) * np.exp(0.1j * x * 0)),
        )
        w = reconstruct_wave(u, 0.1)
        assert np.allclose(np.abs(w.psi.values), np.abs(u.A.values), atol=1e-15)

    @pytest.mark.parametrize("eps", [0.0, -0.5, np.nan])
    def test_rejects_bad_eps(self, grid, eps):
        u = WkbState(
            RealField(grid, np.zeros(grid.n)),
            ComplexField(grid, np.ones(grid.n, dtype=complex)),
        )
        with pytest.raises(InvalidInput):
            reconstruct_wave(u, eps)


class TestColeHopfOracle:
    def setup_phase(self, grid):
        x = grid.nodes
        return RealField(grid, 0.4 * np.sin(x) + 0.1 * np.cos(2.0 * x))

    def test_zero_potential_reduces_to_one_heat_multiplier(self, grid):
        eps, h = 0.7, 0.3
        s0 = self.setup_phase(grid)
        flat = Potential(RealField(grid, np.zeros(grid.n)))
        out = cole_hopf_eikonal_oracle(s0, flat, eps, h, substeps=8)

        k = np.arange(grid.n // 2 + 1, dtype=np.float64)
        smoothed = np.fft.irfft(
            np.fft.rfft(np.exp(-s0.values / (2.0 * eps**2)))
            * np.exp(-(eps**2) * h * k**2),
            grid.n,
        )
        expected = -2.0 * eps**2 * np.log(smoothed)
        assert np.max(np.abs(out.values - expected)) < 1e-13

    def test_constant_potential_shifts_the_phase_linearly(self, grid):
        eps, h, c = 0.7, 0.3, 0.8
        s0 = self.setup_phase(grid)
        flat = Potential(RealField(grid, np.zeros(grid.n)))
        lifted = Potential(RealField(grid, np.full(grid.n, c)))
        base = cole_hopf_eikonal_oracle(s0, flat, eps, h, substeps=8)
        out = cole_hopf_eikonal_oracle(s0, lifted, eps, h, substeps=8)
        assert np.max(np.abs(out.values - (base.values - c * h))) < 1e-13

    def test_two_legs_agree_with_one(self, grid, potential):
        eps, h = 0.7, 0.3
        s0 = self.setup_phase(grid)
        whole = cole_hopf_eikonal_oracle(s0, potential, eps, h, substeps=16)
        half = cole_hopf_eikonal_oracle(s0, potential, eps, h / 2.0, substeps=8)
        two = cole_hopf_eikonal_oracle(half, potential, eps, h / 2.0, substeps=8)
        assert np.max(np.abs(whole.values - two.values)) < 1e-12

    def test_large_phase_ratio_is_refused(self, grid):
        flat = Potential(RealField(grid, np.zeros(grid.n)))
        tall = RealField(grid, 11.0 * np.sin(grid.nodes))
        with pytest.raises(OverflowRisk, match="ratio"):
            cole_hopf_eikonal_oracle(tall, flat, 0.1, 0.01, substeps=4)

    def test_positivity_loss_is_reported(self, grid):
        # |S| / (2 eps^2) = 100 passes the guard but spans e^{200} in w + 1;
        # the spectral heat step then rings below zero near the minimum
        flat = Potential(RealField(grid, np.zeros(grid.n)))
        s0 = RealField(grid, np.sin(grid.nodes))
        with pytest.raises(LogDomainError):
            cole_hopf_eikonal_oracle(s0, flat, np.sqrt(0.005), 0.01, substeps=4)

    @pytest.mark.parametrize("substeps", [0, -1, 2.5, True])
    def test_rejects_bad_substeps(self, grid, potential, substeps):
        s0 = self.setup_phase(grid)
        with pytest.raises(InvalidInput, match="substeps"):
            cole_hopf_eikonal_oracle(s0, potential, 0.5, 0.1, substeps=substeps)

    def test_rejects_grid_mismatch(self, grid):
        s0 = self.setup_phase(grid)
        other = Potential(RealField(PeriodicGrid(32), np.zeros(32)))
        with pytest.raises(InvalidInput, match="grid"):
            cole_hopf_eikonal_oracle(s0, other, 0.5, 0.1, substeps=4)
