"""Single-molecule E x e Jahn-Teller problem in vibronic angular momentum blocks.

The molecular Hamiltonian

    H_m = sum_r [omega b_r^dag b_r + epsilon |E_r><E_r|]
          + kappa [(b_+^dag + b_-) |E_-><E_+| + h.c.],   r = +, -

conserves the vibronic angular momentum v = 2(n_+ - n_-) + sigma with
sigma = 0, +1, -1 for the electronic labels A, E+, E-. This module
enumerates the (s, n_+, n_-) basis of each v sector, diagonalizes the
sector blocks, and derives the two coupling tables through which the
circular cavity modes talk to the molecule:

    alpha[i, j] = <level_i| (|A><E+| x 1_vib) |level_j>   (v_i = v_j - 1)
    beta[i, j]  = <level_i| (|A><E-| x 1_vib) |level_j>   (v_i = v_j + 1)

Ground-manifold (A-type, even v) levels are trivial Fock states; excited
(odd v) levels are Jahn-Teller mixtures of E+ and E- strings.
"""

from dataclasses import dataclass, field
from typing import Dict, Iterable, List, NamedTuple, Tuple

import numpy as np

from .numerics import SparseHermitian, eig_dense

LABEL_A = "A"
LABEL_EP = "E+"
LABEL_EM = "E-"
_SIGMA = {LABEL_A: 0, LABEL_EP: +1, LABEL_EM: -1}

DEGENERACY_TOL = 1e-9  # eV, eigenvalue clustering for the ordering tie-break


class MolecularBasisState(NamedTuple):
    s: str
    n_plus: int
    n_minus: int


@dataclass(frozen=True)
class ModelParams:
    """Molecular constants: energies in eV, Fock cutoff per vibrational mode."""

    omega: float = 0.08196
    epsilon: float = 7.0
    kappa: float = 2.2 * 0.08196
    n_max: int = 18

    def __post_init__(self):
        if self.omega <= 0:
            raise ValueError("omega must be > 0")
        if self.epsilon <= 0:
            raise ValueError("epsilon must be > 0")
        if self.kappa < 0:
            raise ValueError("kappa must be >= 0")
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")


def vibronic_number(state: MolecularBasisState) -> int:
    """v = 2(n_+ - n_-) + sigma, sigma = 0, +1, -1 for A, E+, E-."""
    return 2 * (state.n_plus - state.n_minus) + _SIGMA[state.s]


def sector_states(v: int, n_max: int) -> List[MolecularBasisState]:
    """All primitive basis states with vibronic number v under the cutoff.

    Even v: A strings with n_+ - n_- = v/2. Odd v: E+ strings with
    n_+ - n_- = (v-1)/2 and E- strings with n_+ - n_- = (v+1)/2.
    Occupations run over 0 .. n_max-1 per mode.
    """
    out = []
    for s, sigma in ((LABEL_A, 0), (LABEL_EP, 1), (LABEL_EM, -1)):
        if (v - sigma) % 2:
            continue
        d = (v - sigma) // 2
        for nm in range(n_max):
            npl = nm + d
            if 0 <= npl < n_max:
                out.append(MolecularBasisState(s, npl, nm))
    return out


def representable_sectors(n_max: int) -> List[int]:
    """All v with a nonempty sector: |v| <= 2 n_max - 1, skipping the
    odd extremes that only one E component could reach."""
    return [v for v in range(-(2 * n_max - 1), 2 * n_max)
            if sector_states(v, n_max)]


def build_sector_block(v: int, params: ModelParams
                       ) -> Tuple[SparseHermitian, List[MolecularBasisState]]:
    """Molecular Hamiltonian restricted to one vibronic sector.

    Diagonal omega (n_+ + n_-), plus epsilon on E states; off-diagonal
    kappa ladder elements of (b_+^dag + b_-)|E-><E+| + h.c. The Jahn-
    Teller term conserves v, so the block closes on the sector basis.
    An empty sector yields (None, []).
    """
    states = sector_states(v, params.n_max)
    if not states:
        return None, []
    index = {st: i for i, st in enumerate(states)}
    rows, cols, vals = [], [], []
    for st, i in index.items():
        diag = params.omega * (st.n_plus + st.n_minus)
        if st.s != LABEL_A:
            diag += params.epsilon
        rows.append(i)
        cols.append(i)
        vals.append(diag)
        if st.s == LABEL_EP:
            # b_+^dag : (E+, n+, n-) -> (E-, n+ + 1, n-), factor sqrt(n+ + 1)
            tgt = MolecularBasisState(LABEL_EM, st.n_plus + 1, st.n_minus)
            if tgt in index:
                rows.append(index[tgt])
                cols.append(i)
                vals.append(params.kappa * np.sqrt(st.n_plus + 1))
            # b_- : (E+, n+, n-) -> (E-, n+, n- - 1), factor sqrt(n-)
            tgt = MolecularBasisState(LABEL_EM, st.n_plus, st.n_minus - 1)
            if tgt in index:
                rows.append(index[tgt])
                cols.append(i)
                vals.append(params.kappa * np.sqrt(st.n_minus))
    return SparseHermitian(len(states), rows, cols, vals), states


@dataclass
class VibronicLevel:
    """One molecular eigenstate: sector v, in-sector index i, energy,
    and its amplitude vector over sector_states(v, n_max)."""

    v: int
    i: int
    energy: float
    coeffs: np.ndarray
    basis: List[MolecularBasisState]
    bright_amplitude_rcp: complex = 0.0  # coefficient of |E-, 0, 0>
    bright_amplitude_lcp: complex = 0.0  # coefficient of |E+, 0, 0>

    @property
    def is_ground_manifold(self) -> bool:
        return self.v % 2 == 0


@dataclass
class CouplingTable:
    """Sparse cavity-transition amplitudes between global level indices.

    alpha entries connect ground level i to excited level j with
    v_i = v_j - 1 (LCP-mode channel); beta entries likewise with
    v_i = v_j + 1 (RCP-mode channel).
    """

    alpha: Dict[Tuple[int, int], complex] = field(default_factory=dict)
    beta: Dict[Tuple[int, int], complex] = field(default_factory=dict)

    def by_ground(self) -> Tuple[Dict[int, list], Dict[int, list]]:
        """Adjacency views: ground index -> [(excited index, amplitude)]."""
        a_adj: Dict[int, list] = {}
        b_adj: Dict[int, list] = {}
        for (i, j), c in self.alpha.items():
            a_adj.setdefault(i, []).append((j, c))
        for (i, j), c in self.beta.items():
            b_adj.setdefault(i, []).append((j, c))
        return a_adj, b_adj


def _fix_phase(c: np.ndarray) -> np.ndarray:
    """Rotate so the largest-magnitude coefficient is real positive."""
    k = int(np.argmax(np.abs(c)))
    ph = c[k]
    if ph == 0:
        return c
    return c * (np.conj(ph) / np.abs(ph))


def _mean_occupation(c: np.ndarray, states: List[MolecularBasisState]) -> float:
    occ = np.array([st.n_plus + st.n_minus for st in states], dtype=float)
    return float(np.abs(c) ** 2 @ occ)


def diagonalize_sector(v: int, params: ModelParams) -> List[VibronicLevel]:
    """Energy-ordered eigenstates of one sector, with the frozen phase
    convention and the mean-occupation tie-break inside degenerate
    clusters."""
    block, states = build_sector_block(v, params)
    if not states:
        return []
    res = eig_dense(block, want_vectors=True)
    w, V = res.values, res.vectors
    order = list(range(len(w)))
    # stable tie-break: ascending <n_+ + n_-> within degenerate clusters
    order.sort(key=lambda k: (round(w[k] / DEGENERACY_TOL),
                              _mean_occupation(V[:, k], states)))
    levels = []
    try:
        ib_rcp = states.index(MolecularBasisState(LABEL_EM, 0, 0))
    except ValueError:
        ib_rcp = None
    try:
        ib_lcp = states.index(MolecularBasisState(LABEL_EP, 0, 0))
    except ValueError:
        ib_lcp = None
    for rank, k in enumerate(order):
        c = _fix_phase(V[:, k])
        levels.append(VibronicLevel(
            v=v, i=rank, energy=float(w[k]), coeffs=c, basis=states,
            bright_amplitude_rcp=complex(c[ib_rcp]) if ib_rcp is not None else 0.0,
            bright_amplitude_lcp=complex(c[ib_lcp]) if ib_lcp is not None else 0.0,
        ))
    return levels


def _transition_amplitude(ground: VibronicLevel, excited: VibronicLevel,
                          exc_label: str) -> complex:
    """<ground| (|A><exc_label| x 1_vib) |excited> by vibrational overlap."""
    amap = {(st.n_plus, st.n_minus): ground.coeffs[q]
            for q, st in enumerate(ground.basis) if st.s == LABEL_A}
    tot = 0.0 + 0.0j
    for q, st in enumerate(excited.basis):
        if st.s == exc_label:
            a = amap.get((st.n_plus, st.n_minus))
            if a is not None:
                tot += np.conj(a) * excited.coeffs[q]
    return tot


def diagonalize_molecule(params: ModelParams, v_range: Iterable[int]
                         ) -> Tuple[List[VibronicLevel], CouplingTable]:
    """Level table over the requested sectors plus the coupling tables.

    Levels are globally ordered by (v, i); coupling-table indices refer
    to positions in the returned list. Sectors outside the cutoff are
    silently empty.
    """
    sectors = sorted(set(int(v) for v in v_range))
    levels: List[VibronicLevel] = []
    for v in sectors:
        levels.extend(diagonalize_sector(v, params))
    by_v: Dict[int, List[int]] = {}
    for g, lv in enumerate(levels):
        by_v.setdefault(lv.v, []).append(g)
    table = CouplingTable()
    for g_exc, lv in enumerate(levels):
        if lv.is_ground_manifold:
            continue
        for g_gnd in by_v.get(lv.v - 1, []):
            c = _transition_amplitude(levels[g_gnd], lv, LABEL_EP)
            if abs(c) > 1e-14:
                table.alpha[(g_gnd, g_exc)] = complex(c)
        for g_gnd in by_v.get(lv.v + 1, []):
            c = _transition_amplitude(levels[g_gnd], lv, LABEL_EM)
            if abs(c) > 1e-14:
                table.beta[(g_gnd, g_exc)] = complex(c)
    return levels, table


def bare_absorption_sticks(levels: List[VibronicLevel], sector: int = -1
                           ) -> List[Tuple[float, float]]:
    """Cavity-free absorption sticks of the target odd sector.

    Intensity of level (sector, i) is the squared amplitude of the
    dipole-reachable basis state (|E-,0,0> for sector -1, |E+,0,0> for
    +1), normalized to unit total over the sector.
    """
    if sector not in (-1, +1):
        raise ValueError("absorption target sector must be -1 or +1")
    picked = [lv for lv in levels if lv.v == sector]
    if not picked:
        raise ValueError(f"sector v={sector} missing from the level table")
    amps = [lv.bright_amplitude_rcp if sector == -1 else lv.bright_amplitude_lcp
            for lv in picked]
    inten = np.abs(np.array(amps)) ** 2
    total = inten.sum()
    if total > 0:
        inten = inten / total
    return [(lv.energy, float(w)) for lv, w in zip(picked, inten)]


def brightest_transition_energy(levels: List[VibronicLevel]) -> float:
    """Energy of the most intense bare-molecule absorption stick; the
    auto-resonant cavity frequency."""
    sticks = bare_absorption_sticks(levels, sector=-1)
    return max(sticks, key=lambda ei: ei[1])[0]


def bright_intensity(level: VibronicLevel) -> float:
    return float(abs(level.bright_amplitude_rcp) ** 2
                 + abs(level.bright_amplitude_lcp) ** 2)


def levels_csv_rows(levels: List[VibronicLevel]) -> List[str]:
    """CSV lines (v, i, energy_eV, bright_intensity) for the level table."""
    rows = ["v,i,energy_eV,bright_intensity"]
    for lv in levels:
        rows.append(f"{lv.v},{lv.i},{lv.energy:.12g},{bright_intensity(lv):.12g}")
    return rows
