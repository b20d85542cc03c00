"""Invariant suite behind the ``validate`` subcommand.

Structural checks run at the configured parameters; brute-force oracle
comparisons are capped at small cutoffs (documented per check) so the
default suite stays under a minute and the n_max = 4 quick mode under
ten seconds. Every check returns (name, passed, detail).
"""

import time
from typing import Callable, List, Tuple

import numpy as np
from scipy.linalg import eigh as dense_eigh

from .collective import (CavityParams, FULL_RETENTION, assemble_hamiltonian,
                         enumerate_sector_basis, required_v_list)
from .config import AUTO, RunConfig
from .molecule import (CouplingTable, ModelParams, VibronicLevel,
                       brightest_transition_energy, diagonalize_molecule)
from .numerics import eig_dense, krylov_step, lanczos_spectral_measure
from .reference import (cavity_hamiltonian_dense, j_operator_dense,
                        molecular_hamiltonian_dense, n_ex_operator_dense,
                        product_states, sector_dimension_formula)
from .spectra import bright_state, photon_polarization, stick_spectrum

CheckResult = Tuple[str, bool, str]


def selection_rule_violations(levels: List[VibronicLevel],
                              table: CouplingTable,
                              tol: float = 1e-14) -> int:
    """Count coupling entries that break the angular momentum selection
    rules (alpha: v_i = v_j - 1, beta: v_i = v_j + 1, ground i, odd j)."""
    bad = 0
    for (i, j), c in table.alpha.items():
        if abs(c) <= tol:
            continue
        if levels[i].v % 2 or levels[j].v % 2 == 0 \
                or levels[i].v != levels[j].v - 1:
            bad += 1
    for (i, j), c in table.beta.items():
        if abs(c) <= tol:
            continue
        if levels[i].v % 2 or levels[j].v % 2 == 0 \
                or levels[i].v != levels[j].v + 1:
            bad += 1
    return bad


def _resolved_cavity(cfg: RunConfig, levels, n_molecules=None) -> CavityParams:
    wc = cfg.omega_c_eV
    if wc == AUTO:
        wc = brightest_transition_energy(levels)
    om = cfg.Omega_eV
    if om == AUTO:
        om = 0.1 * wc
    return CavityParams(omega_c=wc, Omega=om,
                        N=n_molecules if n_molecules else cfg.n_molecules)


def run_checks(cfg: RunConfig) -> List[CheckResult]:
    params = cfg.model_params()
    n_max = params.n_max
    results: List[CheckResult] = []

    def record(name: str, fn: Callable[[], Tuple[bool, str]]):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"exception: {exc}"
        dt = time.perf_counter() - t0
        results.append((name, ok, f"{detail} [{dt:.2f}s]"))

    full_v = required_v_list(2, 1, -1, n_max)
    levels, table = diagonalize_molecule(params, full_v)

    def check_dimensions():
        msgs = []
        ok = True
        for N in (1, 2):
            want = sector_dimension_formula(n_max, N, -1)
            basis = enumerate_sector_basis(N, 1, -1, levels)
            got = basis.photon_block_sizes()
            if got != want:
                ok = False
            msgs.append(f"N={N}: {got} vs formula {want}")
        return ok, "; ".join(msgs)

    record("sector-dimensions", check_dimensions)

    def check_selection_rules():
        bad = selection_rule_violations(levels, table)
        return bad == 0, f"{bad} violating entries"

    record("selection-rules", check_selection_rules)

    basis1 = enumerate_sector_basis(1, 1, -1, levels)
    cav1 = _resolved_cavity(cfg, levels, n_molecules=1)
    h1 = assemble_hamiltonian(basis1, levels, table, cav1)

    def check_hermiticity():
        rng = np.random.default_rng(7)
        worst = 0.0
        bound = h1.norm_bound()
        for _ in range(5):
            x = rng.standard_normal(h1.dim) + 1j * rng.standard_normal(h1.dim)
            y = rng.standard_normal(h1.dim) + 1j * rng.standard_normal(h1.dim)
            lhs = np.vdot(y, h1.matvec(x))
            rhs = np.conj(np.vdot(x, h1.matvec(y)))
            worst = max(worst, abs(lhs - rhs)
                        / (bound * np.linalg.norm(x) * np.linalg.norm(y)))
        return worst <= 1e-10, f"max scaled defect {worst:.2e}"

    record("hermiticity", check_hermiticity)

    def check_commutators():
        small = ModelParams(omega=params.omega, epsilon=params.epsilon,
                            kappa=params.kappa, n_max=min(n_max, 6))
        states = product_states(small, 1)
        hp, _ = cavity_hamiltonian_dense(small, cav1, 1)
        for name, q in (("N_ex", n_ex_operator_dense(small, 1, states)),
                        ("J", j_operator_dense(small, 1, states))):
            comm = hp @ q - q @ hp
            scale = np.linalg.norm(hp) * np.linalg.norm(q)
            if np.linalg.norm(comm) > 1e-10 * scale:
                return False, f"[H, {name}] = {np.linalg.norm(comm):.2e}"
        return True, "[H, N_ex] and [H, J] vanish"

    record("conservation-commutators", check_commutators)

    def check_primitive_n1():
        w_occ = eig_dense(h1, want_vectors=False,
                          dense_limit=cfg.dense_limit).values
        hp, keep = cavity_hamiltonian_dense(params, cav1, 1, sector=(1, -1))
        w_prim = dense_eigh(hp, eigvals_only=True)
        if len(keep) != h1.dim:
            return False, f"dims {h1.dim} vs {len(keep)}"
        diff = float(np.abs(w_occ - w_prim).max())
        return diff <= 1e-9, f"max eigenvalue diff {diff:.2e}"

    record("occupation-vs-primitive-N1", check_primitive_n1)

    def check_subset_n2():
        small_nmax = min(n_max, 4)
        small = ModelParams(omega=params.omega, epsilon=params.epsilon,
                            kappa=params.kappa, n_max=small_nmax)
        v_small = required_v_list(2, 1, -1, small_nmax)
        lv2, tb2 = diagonalize_molecule(small, v_small)
        cav2 = _resolved_cavity(cfg, levels, n_molecules=2)
        b2 = enumerate_sector_basis(2, 1, -1, lv2)
        h2 = assemble_hamiltonian(b2, lv2, tb2, cav2)
        w_occ = eig_dense(h2, want_vectors=False).values
        hp, keep = cavity_hamiltonian_dense(small, cav2, 2, sector=(1, -1))
        w_prim = dense_eigh(hp, eigvals_only=True)
        # every symmetric-subspace eigenvalue must appear in the product
        # spectrum; match greedily in sorted order
        diff = _subset_distance(w_occ, w_prim)
        return diff <= 1e-9, (f"dims {h2.dim} within {len(keep)}; "
                              f"max match distance {diff:.2e}")

    record("occupation-subset-N2", check_subset_n2)

    def check_mirror():
        basis_p = enumerate_sector_basis(1, 1, +1, levels)
        h_p = assemble_hamiltonian(basis_p, levels, table, cav1)
        r_m = eig_dense(h1)
        r_p = eig_dense(h_p)
        dE = float(np.abs(r_m.values - r_p.values).max())
        pol_m = np.array([photon_polarization(r_m.vectors[:, k], basis1)
                          for k in range(basis1.dim)])
        pol_p = np.array([photon_polarization(r_p.vectors[:, k], basis_p)
                          for k in range(basis_p.dim)])
        dP = float(np.abs(pol_m + pol_p).max())
        ok = dE <= 1e-10 and dP <= 1e-8
        return ok, f"spectrum diff {dE:.2e}, polarization mirror {dP:.2e}"

    record("mirror-sectors", check_mirror)

    def check_lanczos_vs_dense():
        res = eig_dense(h1)
        e_d, w_d = stick_spectrum(res, bright_state(basis1))
        meas = lanczos_spectral_measure(h1, bright_state(basis1), h1.dim)
        diff = _measure_distance(e_d, w_d, meas.energies, meas.weights)
        return diff <= 1e-8, f"stick distance {diff:.2e}"

    record("lanczos-vs-dense", check_lanczos_vs_dense)

    def check_krylov_norm():
        rng = np.random.default_rng(3)
        psi = rng.standard_normal(h1.dim) + 1j * rng.standard_normal(h1.dim)
        psi /= np.linalg.norm(psi)
        for k in range(200):
            psi = krylov_step(lambda t: h1, psi, k * 0.05, 0.05, 8)
        drift = abs(np.linalg.norm(psi) - 1.0)
        return drift <= 1e-9, f"norm drift {drift:.2e} over 200 steps"

    record("krylov-norm-conservation", check_krylov_norm)

    def check_tc_limit():
        flat = ModelParams(omega=params.omega, epsilon=params.epsilon,
                           kappa=0.0, n_max=n_max)
        v_flat = required_v_list(2, 1, -1, n_max)
        lv0, tb0 = diagonalize_molecule(flat, v_flat)
        worst = 0.0
        for N in (1, 2):
            cav = CavityParams(omega_c=params.epsilon,
                               Omega=0.1 * params.epsilon, N=N)
            b = enumerate_sector_basis(N, 1, -1, lv0)
            h = assemble_hamiltonian(b, lv0, tb0, cav)
            meas = lanczos_spectral_measure(h, bright_state(b), min(8, h.dim))
            big = meas.weights > 1e-12
            e = meas.energies[big]
            w = meas.weights[big]
            if len(e) != 2:
                return False, f"N={N}: {len(e)} bright sticks"
            worst = max(worst, abs((e[1] - e[0]) - cav.Omega),
                        abs(w[0] - 0.5), abs(w[1] - 0.5))
        return worst <= 1e-9, f"max splitting/weight defect {worst:.2e}"

    record("tavis-cummings-limit", check_tc_limit)

    def check_determinism():
        basis_b = enumerate_sector_basis(1, 1, -1, levels)
        h_b = assemble_hamiltonian(basis_b, levels, table, cav1)
        same = (basis_b.states == basis1.states
                and np.array_equal(h_b.rows, h1.rows)
                and np.array_equal(h_b.cols, h1.cols)
                and np.array_equal(h_b.vals, h1.vals))
        return bool(same), "re-enumeration and re-assembly are bit-identical"

    record("determinism", check_determinism)

    return results


def _subset_distance(sub: np.ndarray, full: np.ndarray) -> float:
    """Max distance from each value in ``sub`` to its greedy match in
    ``full`` (both sorted); values may repeat."""
    full = np.sort(full)
    worst = 0.0
    used = 0
    for x in np.sort(sub):
        k = np.searchsorted(full, x)
        best = np.inf
        for cand in (k - 1, k, k + 1):
            if 0 <= cand < len(full):
                best = min(best, abs(full[cand] - x))
        worst = max(worst, best)
        used += 1
    return float(worst)


def _measure_distance(e_ref: np.ndarray, w_ref: np.ndarray,
                      e_test: np.ndarray, w_test: np.ndarray,
                      cluster_tol: float = 1e-9) -> float:
    """Compare two spectral measures after clustering degenerate sticks.

    Returns the max over matched clusters of (position diff + weight
    diff); unmatched weight counts directly.
    """
    def cluster(e, w):
        out = []
        for x, y in sorted(zip(e, w)):
            if out and x - out[-1][0] <= cluster_tol:
                e0, w0 = out[-1]
                out[-1] = ((e0 * w0 + x * y) / (w0 + y) if w0 + y > 0 else e0,
                           w0 + y)
            else:
                out.append((x, y))
        return out

    ref = cluster(e_ref, w_ref)
    test = cluster(e_test, w_test)
    worst = 0.0
    for e0, w0 in ref:
        if w0 <= 1e-12:
            continue
        best = min(test, key=lambda t: abs(t[0] - e0))
        worst = max(worst, abs(best[0] - e0), abs(best[1] - w0))
    matched_weight = sum(w for _, w in test)
    worst = max(worst, abs(matched_weight - sum(w for _, w in ref)))
    return float(worst)


def report_lines(results: List[CheckResult]) -> List[str]:
    lines = []
    for name, ok, detail in results:
        lines.append(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    n_bad = sum(1 for _, ok, _ in results if not ok)
    lines.append(f"{len(results) - n_bad}/{len(results)} checks passed")
    return lines
