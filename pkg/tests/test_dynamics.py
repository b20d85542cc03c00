"""Pulse fields, weak-field drive structure, TDSE propagation and the
autocorrelation cross-check. Short horizons keep individual runs around
a second; the full 200 fs paper-style traces run in the acceptance
suite."""

import numpy as np
import pytest

from jtcavity import (CavityParams, ModelParams, PulseSpec,
                      assemble_hamiltonian, brightest_transition_energy,
                      bright_state, build_pulse_space, diagonalize_molecule,
                      drive_operator, enumerate_sector_basis, eig_dense,
                      field_component, krylov_step, propagate_pulse,
                      stick_spectrum, vector_potential, HBAR_EV_FS)
from jtcavity.collective import required_v_list
from jtcavity.dynamics import (autocorrelation_spectrum, drive_amplitude,
                               normalized_polarization,
                               normalized_polarization_full, propagate_free,
                               spectrum_peaks, transform_resolution)


@pytest.fixture(scope="module")
def setup18():
    params = ModelParams()
    v_need = sorted(set(required_v_list(1, 1, -1, 18))
                    | set(required_v_list(1, 1, +1, 18))
                    | set(required_v_list(1, 0, 0, 18)))
    levels, table = diagonalize_molecule(params, v_need)
    wc = brightest_transition_energy(levels)
    cav = CavityParams(omega_c=wc, Omega=0.1 * wc, N=1)
    return params, levels, table, cav


@pytest.fixture(scope="module")
def space_rcp(setup18):
    params, levels, table, cav = setup18
    return build_pulse_space(params, cav, levels, table, "RCP")


SPEC = PulseSpec(e0_mu=1e-3, omega_l=7.24, tau=20.0, polarization="RCP")


class TestField:
    def test_zero_outside_window(self):
        for u in ("x", "y"):
            assert field_component(-0.5, SPEC, u) == 0.0
            assert field_component(20.0001, SPEC, u) == 0.0
            assert field_component(350.0, SPEC, u) == 0.0

    def test_zero_at_start(self):
        # sin^2 envelope vanishes and the derivative term carries sin(0)
        assert abs(field_component(0.0, SPEC, "x")) <= 1e-15
        assert abs(field_component(0.0, SPEC, "y")) <= 1e-15

    def test_finite_difference_oracle(self):
        # E_u = -dA_u/dt on a fine grid, central differences
        t = np.linspace(0.3, 19.7, 1777)
        h = 1e-5
        for u in ("x", "y"):
            dA = (vector_potential(t + h, SPEC, u)
                  - vector_potential(t - h, SPEC, u)) / (2 * h)
            want = -dA
            got = field_component(t, SPEC, u)
            scale = np.abs(want).max()
            assert np.abs(got - want).max() <= 1e-8 * scale

    def test_phase_convention(self):
        # RCP: phi_x = pi/2, phi_y = 0; LCP: phi_x = 0, phi_y = pi/2
        rcp = PulseSpec(polarization="RCP")
        lcp = PulseSpec(polarization="LCP")
        assert rcp.phases == (np.pi / 2, 0.0)
        assert lcp.phases == (0.0, np.pi / 2)
        assert rcp.target_photon == -1
        assert lcp.target_photon == +1

    def test_rwa_selectivity(self):
        # the RCP drive amplitude rotates against the p=-1 photon phase;
        # its overlap with the counter-rotating channel is tiny
        t = np.arange(0.0, SPEC.tau, 1e-3)
        w_res = drive_amplitude(t, SPEC)  # creates the p = -1 photon
        w_counter = -(field_component(t, SPEC, "x")
                      - 1j * (+1) * field_component(t, SPEC, "y")) / np.sqrt(2)
        carrier = np.exp(1j * SPEC.omega_l * t / HBAR_EV_FS)
        res = abs(np.sum(w_res * carrier))
        cnt = abs(np.sum(w_counter * carrier))
        assert res > 100 * cnt


class TestDriveOperator:
    def test_couples_only_photon_partners(self, space_rcp):
        op = drive_operator(7.3, SPEC, space_rcp)
        assert op.nnz == len(space_rcp.drive_ground)
        ng = space_rcp.dim_ground
        for r, c in zip(op.rows, op.cols):
            assert r < ng <= c
            st = space_rcp.excited.states[c - ng]
            assert st.photon == -1
            assert st.occ == space_rcp.ground.states[r].occ

    def test_zero_field_zero_operator(self, space_rcp):
        op = drive_operator(25.0, SPEC, space_rcp)
        assert op.nnz == 0

    def test_hermitian_at_sampled_times(self, space_rcp):
        for t in (0.7, 5.0, 13.3):
            dense = drive_operator(t, SPEC, space_rcp).to_dense()
            assert np.abs(dense - dense.conj().T).max() == 0.0


class TestPropagation:
    def test_zero_amplitude_stays_ground(self, space_rcp):
        spec = PulseSpec(e0_mu=0.0, omega_l=7.24, tau=20.0,
                         polarization="RCP")
        traj = propagate_pulse(space_rcp, spec, dt=0.02, t_end=5.0)
        assert np.abs(traj.polarization).max() == 0.0
        assert np.abs(traj.excited_population).max() <= 1e-28
        assert np.abs(np.abs(traj.autocorrelation) - 1.0).max() <= 1e-10

    def test_population_constant_after_pulse(self, space_rcp):
        traj = propagate_pulse(space_rcp, SPEC, dt=0.01, t_end=40.0)
        after = traj.excited_population[traj.times >= SPEC.tau]
        assert after[0] > 1e-6  # resonant pulse actually excited
        assert np.abs(after - after[0]).max() <= 1e-8
        assert traj.polarization[np.searchsorted(traj.times, 5.0)] < 0.0

    def test_norm_conservation(self, space_rcp):
        traj = propagate_pulse(space_rcp, SPEC, dt=0.01, t_end=40.0)
        assert traj.norm_drift() <= 1e-7

    def test_dt_convergence(self, space_rcp):
        a = propagate_pulse(space_rcp, SPEC, dt=0.01, t_end=25.0)
        b = propagate_pulse(space_rcp, SPEC, dt=0.005, t_end=25.0)
        assert np.abs(a.polarization - b.polarization).max() < 1e-6

    def test_no_sector_leak_without_drive(self, space_rcp):
        # start from a mixed ground/excited superposition, drive off
        psi = np.zeros(space_rcp.dim, dtype=complex)
        psi[0] = 1 / np.sqrt(2)
        psi[space_rcp.dim_ground + 5] = 1 / np.sqrt(2)
        pops = []
        op = lambda t: space_rcp.h0
        for k in range(200):
            psi = krylov_step(op, psi, k * 0.02, 0.02, 8)
            pops.append(np.abs(psi[space_rcp.excited_mask]) ** 2)
        drift = np.abs(np.array([p.sum() for p in pops]) - 0.5).max()
        assert drift <= 1e-12

    def test_stride_divisibility_enforced(self, space_rcp):
        with pytest.raises(ValueError, match="stride"):
            propagate_pulse(space_rcp, SPEC, dt=0.03, t_end=1.0, stride=0.1)


class TestNormalizedPolarization:
    def test_mirror_traces(self, setup18):
        params, levels, table, cav = setup18
        traces = {}
        for pol in ("RCP", "LCP"):
            spec = PulseSpec(e0_mu=1e-3, omega_l=7.24, tau=20.0,
                             polarization=pol)
            space = build_pulse_space(params, cav, levels, table, pol)
            traj = propagate_pulse(space, spec, dt=0.01, t_end=40.0)
            traces[pol] = normalized_polarization_full(traj)
        assert np.abs(traces["RCP"] + traces["LCP"]).max() <= 1e-8

    def test_intensity_independence(self, space_rcp):
        a = propagate_pulse(space_rcp, SPEC, dt=0.01, t_end=40.0)
        double = PulseSpec(e0_mu=2e-3, omega_l=7.24, tau=20.0,
                           polarization="RCP")
        b = propagate_pulse(space_rcp, double, dt=0.01, t_end=40.0)
        na, nb = (normalized_polarization_full(t) for t in (a, b))
        assert np.abs(na - nb).max() < 0.01 * np.abs(na).max()

    def test_reported_window(self, space_rcp):
        traj = propagate_pulse(space_rcp, SPEC, dt=0.01, t_end=40.0)
        times, trace = normalized_polarization(traj)
        assert times[0] >= SPEC.tau - 1e-9
        assert len(times) == len(trace)

    def test_vanishing_excitation_error(self, space_rcp):
        detuned = PulseSpec(e0_mu=1e-12, omega_l=7.24, tau=20.0,
                            polarization="RCP")
        traj = propagate_pulse(space_rcp, detuned, dt=0.02, t_end=25.0)
        with pytest.raises(ValueError, match="e0_mu|resonance"):
            normalized_polarization(traj)


class TestAutocorrelationSpectrum:
    def test_eigenstate_single_peak(self, setup18):
        params, levels, table, cav = setup18
        basis = enumerate_sector_basis(1, 1, -1, levels)
        h = assemble_hamiltonian(basis, levels, table, cav)
        res = eig_dense(h)
        k = 5
        traj = propagate_free(basis, h, res.vectors[:, k].astype(complex),
                              dt=0.02, t_end=100.0)
        grid = np.arange(res.values[k] - 0.6, res.values[k] + 0.6, 0.002)
        sigma = autocorrelation_spectrum(traj, damping_time=20.0, grid=grid)
        peaks = spectrum_peaks(grid, sigma, 0.05)
        assert len(peaks) == 1
        assert abs(peaks[0] - res.values[k]) <= 2 * transform_resolution(traj)

    def test_kappa_zero_doublet(self):
        params = ModelParams(kappa=0.0, n_max=6)
        levels, table = diagonalize_molecule(
            params, required_v_list(1, 1, -1, 6))
        cav = CavityParams(omega_c=params.epsilon,
                           Omega=0.1 * params.epsilon, N=1)
        basis = enumerate_sector_basis(1, 1, -1, levels)
        h = assemble_hamiltonian(basis, levels, table, cav)
        traj = propagate_free(basis, h, bright_state(basis),
                              dt=0.01, t_end=120.0)
        grid = np.arange(6.0, 8.0, 0.001)
        sigma = autocorrelation_spectrum(traj, damping_time=25.0, grid=grid)
        peaks = spectrum_peaks(grid, sigma, 0.2)
        assert len(peaks) == 2
        assert abs((peaks[1] - peaks[0]) - cav.Omega) \
            <= 2 * transform_resolution(traj)

    def test_peaks_align_with_sticks(self, setup18):
        params, levels, table, cav = setup18
        basis = enumerate_sector_basis(1, 1, -1, levels)
        h = assemble_hamiltonian(basis, levels, table, cav)
        res = eig_dense(h)
        e_sticks, inten = stick_spectrum(res, bright_state(basis))
        traj = propagate_free(basis, h, bright_state(basis),
                              dt=0.01, t_end=150.0, stride=0.05)
        grid = np.arange(6.0, 8.2, 0.002)
        sigma = autocorrelation_spectrum(traj, damping_time=30.0, grid=grid)
        tol = 2 * transform_resolution(traj)
        visible = e_sticks[inten > 1e-3]
        for p in spectrum_peaks(grid, sigma, 0.05):
            assert np.abs(visible - p).min() <= tol
