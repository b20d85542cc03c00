"""Spectral observables: sticks, participation ratios, polarization,
broadening, heatmaps. N=2 qualitative cascade signatures are exercised
at n_max = 6 where the 432-dimensional sector solves instantly; the
full-cutoff quantitative claims live in the acceptance suite."""

import numpy as np
import pytest

from jtcavity import (CavityParams, ModelParams, assemble_hamiltonian,
                      bright_index, bright_state, broaden,
                      diagonalize_molecule, eig_dense, enumerate_sector_basis,
                      heatmap_table, lanczos_spectral_measure,
                      participation_ratio, photon_polarization,
                      polariton_records, stick_spectrum)
from jtcavity.collective import occupation_from_levels, required_v_list
from jtcavity.spectra import (envelope_fwhm, ground_level_index,
                              lorentzian_window_mass)

from conftest import random_state


@pytest.fixture(scope="module")
def n2_small():
    params = ModelParams(n_max=6)
    levels, table = diagonalize_molecule(
        params, required_v_list(2, 1, -1, params.n_max))
    from jtcavity import brightest_transition_energy
    wc = brightest_transition_energy(levels)
    out = {}
    for N in (1, 2):
        cav = CavityParams(omega_c=wc, Omega=0.1 * wc, N=N)
        basis = enumerate_sector_basis(N, 1, -1, levels)
        h = assemble_hamiltonian(basis, levels, table, cav)
        out[N] = (basis, h, eig_dense(h))
    out["omega_c"] = wc
    return out


class TestBrightState:
    def test_single_entry_n1(self, basis1):
        vec = bright_state(basis1)
        assert np.count_nonzero(vec) == 1
        st = basis1.states[bright_index(basis1)]
        assert st.photon == -1
        assert st.occ == ((ground_level_index(basis1), 1),)

    def test_occupation_n2(self, basis2):
        st = basis2.states[bright_index(basis2)]
        g0 = ground_level_index(basis2)
        assert st.photon == -1
        assert st.occ == ((g0, 2),)

    def test_bright_expectation_value(self, basis1, h1, omega_c):
        # <bright|H|bright> = omega_c: the true ground level costs nothing
        vec = bright_state(basis1)
        val = np.vdot(vec, h1.matvec(vec)).real
        assert abs(val - omega_c) <= 1e-12

    def test_wrong_sector_raises(self, levels18):
        basis = enumerate_sector_basis(1, 0, 0, levels18)
        with pytest.raises(ValueError, match="sector"):
            bright_index(basis)


class TestStickSpectrum:
    def test_completeness(self, eig1, basis1):
        _, inten = stick_spectrum(eig1, bright_state(basis1))
        assert abs(inten.sum() - 1.0) <= 1e-10

    def test_branch_structure_n1(self, eig1, basis1, omega_c):
        # LP and UP branches with 4 dominant states each; the top 8
        # sticks carry more than 0.9 of the total intensity
        e, inten = stick_spectrum(eig1, bright_state(basis1))
        order = np.argsort(inten)[::-1]
        assert inten[order[:8]].sum() > 0.9
        top = order[:8]
        assert (e[top] < omega_c).sum() == 4
        assert (e[top] > omega_c).sum() == 4

    def test_lanczos_path_matches(self, h1, eig1, basis1):
        from jtcavity.validate import _measure_distance
        bright = bright_state(basis1)
        e_d, w_d = stick_spectrum(eig1, bright)
        meas = lanczos_spectral_measure(h1, bright, h1.dim)
        assert _measure_distance(e_d, w_d, meas.energies, meas.weights) <= 1e-8


def expanded_sector_probability(psi, basis, v0):
    """Independent N=2 oracle: expand occupation states into ordered
    two-molecule amplitudes and read off the probability for molecule 1
    to sit in sector v0."""
    v_of = [lv.v for lv in basis.levels]
    total = 0.0
    for q, st in enumerate(basis.states):
        amp = psi[q]
        if amp == 0:
            continue
        occ = st.occ
        if len(occ) == 1:
            (l, c), = occ
            assert c == 2
            pairs = [((l, l), amp)]
        else:
            (l1, _), (l2, _) = occ
            pairs = [((l1, l2), amp / np.sqrt(2)), ((l2, l1), amp / np.sqrt(2))]
        for (m1, _m2), a in pairs:
            if v_of[m1] == v0:
                total += abs(a) ** 2
    return total


class TestParticipationRatio:
    def test_single_sector_state(self, basis1):
        vec = bright_state(basis1)
        pr, pops = participation_ratio(vec, basis1)
        assert abs(pr - 1.0) <= 1e-12
        assert abs(pops[0] - 1.0) <= 1e-12

    def test_two_sector_superposition(self, basis1):
        # equal mix of a v=0 photon state and a v=-1 excited state
        sizes = basis1.photon_block_sizes()
        vec = np.zeros(basis1.dim, dtype=complex)
        vec[0] = 1 / np.sqrt(2)             # p=-1 block: v=0 molecule
        vec[sizes[-1]] = 1 / np.sqrt(2)     # p=0 block: v=-1 molecule
        pr, _ = participation_ratio(vec, basis1)
        assert abs(pr - 2.0) <= 1e-12

    def test_populations_sum_to_one(self, eig1, basis1):
        for k in (0, 13, 42):
            _, pops = participation_ratio(eig1.vectors[:, k], basis1)
            assert abs(sum(pops.values()) - 1.0) <= 1e-10

    def test_n1_bound_three_sectors(self, eig1, basis1):
        for k in range(basis1.dim):
            pr, pops = participation_ratio(eig1.vectors[:, k], basis1)
            assert pr <= 3.0 + 1e-9
            assert set(pops) <= {0, -1, -2}

    def test_n2_against_expansion_oracle(self):
        params = ModelParams(n_max=3)
        levels, table = diagonalize_molecule(
            params, required_v_list(2, 1, -1, 3))
        basis = enumerate_sector_basis(2, 1, -1, levels)
        psi = random_state(basis.dim, seed=21)
        _, pops = participation_ratio(psi, basis)
        for v0, p in pops.items():
            want = expanded_sector_probability(psi, basis, v0)
            assert abs(p - want) <= 1e-12

    def test_n2_cascade_exceeds_n1(self, n2_small):
        basis1s, _, res1 = n2_small[1]
        basis2s, _, res2 = n2_small[2]
        pr1 = max(participation_ratio(res1.vectors[:, k], basis1s)[0]
                  for k in range(basis1s.dim))
        pr2 = max(participation_ratio(res2.vectors[:, k], basis2s)[0]
                  for k in range(basis2s.dim))
        assert pr1 <= 3.0 + 1e-9
        assert pr2 > pr1 + 1.0


class TestPolarization:
    def test_bright_is_pure_rcp(self, basis1):
        assert abs(photon_polarization(bright_state(basis1), basis1) + 1.0) \
            <= 1e-12

    def test_photonless_state(self, basis1):
        sizes = basis1.photon_block_sizes()
        vec = np.zeros(basis1.dim, dtype=complex)
        vec[sizes[-1] + 3] = 1.0  # inside the p=0 block
        assert photon_polarization(vec, basis1) == 0.0

    def test_n1_suppression(self, eig1, basis1):
        worst = max(abs(photon_polarization(eig1.vectors[:, k], basis1))
                    for k in range(basis1.dim))
        assert worst < 0.5  # an order of magnitude below the +-1 extremes

    def test_mirror_sector_negates(self, levels18, couplings18, cavity1,
                                   h1, eig1, basis1):
        basis_p = enumerate_sector_basis(1, 1, +1, levels18)
        h_p = assemble_hamiltonian(basis_p, levels18, couplings18, cavity1)
        res_p = eig_dense(h_p)
        assert np.abs(res_p.values - eig1.values).max() <= 1e-10
        for k in range(0, basis1.dim, 7):
            pm = photon_polarization(eig1.vectors[:, k], basis1)
            pp = photon_polarization(res_p.vectors[:, k], basis_p)
            assert abs(pm + pp) <= 1e-8


class TestBroaden:
    def test_single_stick_peak_position(self):
        grid = np.linspace(-1, 3, 4001)
        curve = broaden([(1.0, 1.0)], 0.02, grid)
        assert abs(grid[np.argmax(curve)] - 1.0) <= 1e-3

    def test_area_matches_analytic_window_mass(self):
        rng = np.random.default_rng(4)
        sticks = [(float(e), float(w)) for e, w in
                  zip(rng.uniform(0, 2, 12), rng.uniform(0, 1, 12))]
        fwhm = 0.05
        grid = np.linspace(-2, 4, 60_001)
        curve = broaden(sticks, fwhm, grid)
        from scipy.integrate import trapezoid
        got = trapezoid(curve, grid)
        want = lorentzian_window_mass(sticks, fwhm, grid[0], grid[-1])
        assert abs(got - want) <= 1e-6

    def test_up_branch_broader_for_n2(self, n2_small):
        wc = n2_small["omega_c"]
        widths = {}
        for N in (1, 2):
            basis, _, res = n2_small[N]
            e, i = stick_spectrum(res, bright_state(basis))
            grid = np.arange(e.min() - 0.3, e.max() + 0.3, 0.001)
            curve = broaden(list(zip(e, i)), 0.01, grid)
            widths[N] = envelope_fwhm(grid, curve, lo=wc)
        assert widths[2] > widths[1]


class TestRecordsAndHeatmap:
    def test_n1_records_complete(self, eig1, basis1):
        recs = polariton_records(eig1, basis1)
        assert len(recs) == basis1.dim
        assert abs(sum(r.intensity for r in recs) - 1.0) <= 1e-10
        for r in recs:
            assert 0.0 <= r.intensity <= 1.0
            assert r.pr >= 1.0
            assert abs(r.polarization) <= 1.0

    def test_window_filter(self, eig1, basis1):
        recs = polariton_records(eig1, basis1, window=(6.2, 7.6))
        assert 0 < len(recs) < basis1.dim
        assert all(6.2 <= r.energy <= 7.6 for r in recs)

    def test_heatmap_rows_stochastic(self, eig1, basis1):
        recs = polariton_records(eig1, basis1)
        M, v_list = heatmap_table(recs)
        assert np.abs(M.sum(axis=1) - 1.0).max() <= 1e-10
        assert v_list == [-2, -1, 0]

    def test_n2_heatmap_spreads_beyond_n1_sectors(self, n2_small):
        basis, _, res = n2_small[2]
        wc = n2_small["omega_c"]
        recs = polariton_records(res, basis)
        up = [r for r in recs if r.energy > wc]
        assert any(p > 1e-10
                   for r in up for v, p in r.sector_populations.items()
                   if v <= -5 or v >= 4)
