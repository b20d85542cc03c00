"""Brute-force reference constructions in the primitive product basis.

These builders ignore every symmetry reduction on purpose: they spell
out molecular (s, n_+, n_-) strings times photon Fock states
(n_+^ph, n_-^ph) in {0, 1}^2 per mode, for one or two molecules, and
filter by the conserved quantum numbers afterwards. They exist solely to
cross-check the symmetry-adapted machinery and stay independent of it.
"""

from typing import List, Optional, Tuple

import numpy as np

from .collective import CavityParams
from .molecule import (LABEL_A, LABEL_EM, LABEL_EP, ModelParams,
                       MolecularBasisState, sector_states, vibronic_number)

PHOTON_FOCK = ((0, 0), (1, 0), (0, 1), (1, 1))  # (n_+^ph, n_-^ph)


def molecular_states(params: ModelParams) -> List[MolecularBasisState]:
    out = []
    for s in (LABEL_A, LABEL_EP, LABEL_EM):
        for a in range(params.n_max):
            for b in range(params.n_max):
                out.append(MolecularBasisState(s, a, b))
    return out


def molecular_hamiltonian_dense(params: ModelParams) -> np.ndarray:
    """Full single-molecule H on the primitive 3 n_max^2 basis."""
    states = molecular_states(params)
    index = {st: i for i, st in enumerate(states)}
    n = len(states)
    H = np.zeros((n, n))
    for st, i in index.items():
        H[i, i] = params.omega * (st.n_plus + st.n_minus) \
            + (params.epsilon if st.s != LABEL_A else 0.0)
        if st.s == LABEL_EP:
            tgt = MolecularBasisState(LABEL_EM, st.n_plus + 1, st.n_minus)
            if tgt in index:
                H[index[tgt], i] += params.kappa * np.sqrt(st.n_plus + 1)
            tgt = MolecularBasisState(LABEL_EM, st.n_plus, st.n_minus - 1)
            if tgt in index:
                H[index[tgt], i] += params.kappa * np.sqrt(st.n_minus)
    return H + H.T - np.diag(np.diag(H))


def _mol_exc(st: MolecularBasisState) -> int:
    return 0 if st.s == LABEL_A else 1


def product_states(params: ModelParams, n_molecules: int) -> List[tuple]:
    """(mol_1, ..., mol_N, photon) labels of the naive product basis."""
    mols = molecular_states(params)
    if n_molecules == 1:
        return [(m, ph) for m in mols for ph in PHOTON_FOCK]
    if n_molecules == 2:
        return [(m1, m2, ph) for m1 in mols for m2 in mols
                for ph in PHOTON_FOCK]
    raise ValueError("primitive oracle supports N = 1 or 2 only")


def state_quantum_numbers(state: tuple) -> Tuple[int, int]:
    """(n_ex, j) of a primitive product state."""
    *mols, ph = state
    n_ex = sum(_mol_exc(m) for m in mols) + ph[0] + ph[1]
    j = sum(vibronic_number(m) for m in mols) + ph[0] - ph[1]
    return n_ex, j


def cavity_hamiltonian_dense(params: ModelParams, cavity: CavityParams,
                             n_molecules: int,
                             sector: Optional[Tuple[int, int]] = None
                             ) -> Tuple[np.ndarray, List[tuple]]:
    """Total cavity-molecule H on the primitive product basis.

    With ``sector`` given, rows and columns are restricted to product
    states with those (n_ex, j); the restriction is exact because H
    commutes with both operators.
    """
    omega_c = cavity.numeric_omega_c()
    pref = cavity.Omega / (2.0 * np.sqrt(n_molecules))
    full = product_states(params, n_molecules)
    if sector is not None:
        keep = [st for st in full if state_quantum_numbers(st) == sector]
    else:
        keep = full
    index = {st: i for i, st in enumerate(keep)}
    n = len(keep)
    H = np.zeros((n, n))
    for st, i in index.items():
        *mols, ph = st
        diag = omega_c * (ph[0] + ph[1])
        for m in mols:
            diag += params.omega * (m.n_plus + m.n_minus) \
                + (params.epsilon if m.s != LABEL_A else 0.0)
        H[i, i] = diag
        for k, m in enumerate(mols):
            # molecular Jahn-Teller term, E+ column side
            if m.s == LABEL_EP:
                for tgt, val in (
                        (MolecularBasisState(LABEL_EM, m.n_plus + 1, m.n_minus),
                         params.kappa * np.sqrt(m.n_plus + 1)),
                        (MolecularBasisState(LABEL_EM, m.n_plus, m.n_minus - 1),
                         params.kappa * np.sqrt(m.n_minus))):
                    if 0 <= tgt.n_plus < params.n_max \
                            and 0 <= tgt.n_minus < params.n_max:
                        st2 = _replace(st, k, tgt)
                        j = index.get(st2)
                        if j is not None:
                            H[j, i] += val
            # photon emission: |A><E+| a_+^dag and |A><E-| a_-^dag
            if m.s == LABEL_EP and ph[0] < 1:
                st2 = _replace(st, k, MolecularBasisState(LABEL_A, m.n_plus,
                                                          m.n_minus),
                               photon=(ph[0] + 1, ph[1]))
                j = index.get(st2)
                if j is not None:
                    H[j, i] += pref
            if m.s == LABEL_EM and ph[1] < 1:
                st2 = _replace(st, k, MolecularBasisState(LABEL_A, m.n_plus,
                                                          m.n_minus),
                               photon=(ph[0], ph[1] + 1))
                j = index.get(st2)
                if j is not None:
                    H[j, i] += pref
    return H + H.T - np.diag(np.diag(H)), keep


def _replace(state: tuple, k: int, mol: MolecularBasisState,
             photon: Optional[tuple] = None) -> tuple:
    *mols, ph = state
    mols = list(mols)
    mols[k] = mol
    return tuple(mols) + ((photon if photon is not None else ph),)


def n_ex_operator_dense(params: ModelParams, n_molecules: int,
                        states: Optional[List[tuple]] = None) -> np.ndarray:
    if states is None:
        states = product_states(params, n_molecules)
    return np.diag([float(state_quantum_numbers(st)[0]) for st in states])


def j_operator_dense(params: ModelParams, n_molecules: int,
                     states: Optional[List[tuple]] = None) -> np.ndarray:
    if states is None:
        states = product_states(params, n_molecules)
    return np.diag([float(state_quantum_numbers(st)[1]) for st in states])


def sector_dimension_formula(n_max: int, N: int, j: int = -1) -> dict:
    """Closed-form (n_ex=1, j) dimensions from c(d) = max(0, n_max - |d|).

    Returns per-photon-block counts; implemented independently of the
    enumeration code (pure combinatorics) for N = 1 and 2.
    """

    def c(d):
        return max(0, n_max - abs(d))

    if N == 1:
        out = {}
        for p in (-1, +1):
            v = j - p
            out[p] = c(v // 2) if v % 2 == 0 else 0
        out[0] = (c((j - 1) // 2) + c((j + 1) // 2)) if j % 2 else 0
        return out
    if N == 2:
        rng = range(-n_max, n_max + 1)
        out = {}
        for p in (-1, +1):
            vsum = j - p
            if vsum % 2:
                out[p] = 0
                continue
            half = vsum // 2
            ordered = sum(c(d) * c(half - d) for d in rng)
            # a level pairs with itself only when v_l = vsum / 2 is even
            diag = c(vsum // 4) if vsum % 4 == 0 else 0
            out[p] = (ordered + diag) // 2
        # p = 0: one odd-v excited level times one even-v ground level
        tot = 0
        for ve in range(-(2 * n_max - 1), 2 * n_max, 2):
            exc = c((ve - 1) // 2) + c((ve + 1) // 2)
            vg = j - ve
            if vg % 2 == 0:
                tot += exc * c(vg // 2)
        out[0] = tot
        return out
    raise ValueError("formula implemented for N = 1 or 2 only")
