"""Permutation-symmetric occupation basis and collective Hamiltonian assembly.

N identical molecules coupled to two circularly polarized cavity modes
conserve the excitation count n_ex and the total angular momentum
j = sum_k v_k + p, so the problem block-diagonalizes into (n_ex, j)
sectors. Identical coupling makes the Hamiltonian permutation symmetric,
and the symmetric subspace is spanned by occupation states |N_0, N_1,
...> counting molecules per vibronic level, times a photon label
p in {-1, 0, +1} (one RCP photon, none, one LCP photon).

Collective operators on occupation states:

    D_l |..N_l..>            = N_l |..N_l..>
    T-_{j,k} |..N_j..N_k..>  = sqrt(N_k (N_j + 1)) |..N_j+1..N_k-1..>
    T+_{j,k}                 = (T-_{j,k})^dag

and the sector Hamiltonian reads

    H = sum_i lambda_i D_i + omega_c (photon number)
        + Omega/(2 sqrt(N)) sum_{i,j} (alpha_ij T-_{ij} a_+^dag
                                       + beta_ij T-_{ij} a_-^dag + h.c.)
"""

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from .molecule import CouplingTable, VibronicLevel
from .numerics import SparseHermitian

PHOTON_LABELS = (-1, 0, +1)  # one RCP photon, vacuum, one LCP photon


class SectorError(ValueError):
    """Requested sector cannot be built from the given level table."""


class AssemblyError(RuntimeError):
    """A generated matrix element left the sector basis: conservation bug."""


@dataclass(frozen=True)
class CavityParams:
    """Cavity frequency and collective coupling, both in eV.

    omega_c may be the symbolic string "resonant-with-brightest" until
    resolved against a level table (see config.resolve_cavity).
    """

    omega_c: float | str
    Omega: float
    N: int = 1

    def __post_init__(self):
        if isinstance(self.omega_c, str):
            if self.omega_c != "resonant-with-brightest":
                raise ValueError(f"unknown symbolic omega_c: {self.omega_c!r}")
        elif self.omega_c <= 0:
            raise ValueError("omega_c must be > 0")
        if self.Omega < 0:
            raise ValueError("Omega must be >= 0")
        if self.N < 1:
            raise ValueError("N must be >= 1")

    def numeric_omega_c(self) -> float:
        if isinstance(self.omega_c, str):
            raise ValueError("omega_c is symbolic; resolve it against a "
                             "level table before assembly")
        return float(self.omega_c)


@dataclass(frozen=True)
class Retention:
    """Level filter for large-N truncation: keep at most
    max_levels_per_sector lowest levels per vibronic sector and only
    sectors with |v| <= v_cap. None means no limit."""

    max_levels_per_sector: Optional[int] = None
    v_cap: Optional[int] = None

    @property
    def is_full(self) -> bool:
        return self.max_levels_per_sector is None and self.v_cap is None

    def keeps(self, level: VibronicLevel) -> bool:
        if self.v_cap is not None and abs(level.v) > self.v_cap:
            return False
        if (self.max_levels_per_sector is not None
                and level.i >= self.max_levels_per_sector):
            return False
        return True


FULL_RETENTION = Retention()
DEFAULT_TRUNCATION = Retention(max_levels_per_sector=10, v_cap=9)


class OccupationState(NamedTuple):
    """photon label plus a sorted ((level index, count), ...) multiset."""

    photon: int
    occ: Tuple[Tuple[int, int], ...]

    def count(self, level: int) -> int:
        for l, c in self.occ:
            if l == level:
                return c
        return 0

    def total(self) -> int:
        return sum(c for _, c in self.occ)


def occupation_from_levels(photon: int, level_indices: Sequence[int]) -> OccupationState:
    counts: Dict[int, int] = {}
    for l in level_indices:
        counts[l] = counts.get(l, 0) + 1
    return OccupationState(photon, tuple(sorted(counts.items())))


@dataclass
class SectorBasis:
    """Ordered basis of one (n_ex, j) sector for N molecules.

    Canonical order: photon label -1, then 0, then +1; inside each
    photon block states sort by their occupation key, i.e. the sorted
    (level, count) pair sequence. The order is frozen so emitted files
    are bit-for-bit reproducible.
    """

    n_ex: int
    j: int
    n_molecules: int
    states: List[OccupationState]
    levels: List[VibronicLevel]
    retained: frozenset = field(default_factory=frozenset)
    index: Dict[OccupationState, int] = field(default_factory=dict)

    def __post_init__(self):
        if not self.index:
            self.index = {st: q for q, st in enumerate(self.states)}

    @property
    def dim(self) -> int:
        return len(self.states)

    def photon_block_sizes(self) -> Dict[int, int]:
        sizes = {p: 0 for p in PHOTON_LABELS}
        for st in self.states:
            sizes[st.photon] += 1
        return sizes


def required_sectors(N: int, n_ex: int, j: int
                     ) -> Tuple[Optional[set], Optional[set]]:
    """(even, odd) vibronic sectors a level table must cover for the basis.

    None means "every representable sector of that parity": for N >= 2
    any even/odd split between molecules can occur, so the full range is
    required (the Retention filter may then cut it down). For one
    molecule only the directly reachable sectors are needed.
    """
    if n_ex == 0:
        if N == 1:
            return ({j} if j % 2 == 0 else set()), set()
        return None, set()
    if N == 1:
        even = {j - p for p in (-1, +1) if (j - p) % 2 == 0}
        odd = {j} if j % 2 else set()
        return even, odd
    return None, None


def _levels_by_sector(levels: List[VibronicLevel], retention: Retention
                      ) -> Tuple[Dict[int, List[int]], Dict[int, List[int]]]:
    ground: Dict[int, List[int]] = {}
    excited: Dict[int, List[int]] = {}
    for g, lv in enumerate(levels):
        if not retention.keeps(lv):
            continue
        (ground if lv.is_ground_manifold else excited).setdefault(lv.v, []).append(g)
    return ground, excited


def _ground_multisets(ground: Dict[int, List[int]], n: int, vsum: int
                      ) -> Iterator[Tuple[int, ...]]:
    """All multisets of n ground-level indices whose sector values sum
    to vsum; recursion over sectors in ascending v with reachability
    pruning."""
    sectors = sorted(ground)
    if not sectors:
        if n == 0 and vsum == 0:
            yield ()
        return

    def rec(si: int, remaining: int, target: int):
        if remaining == 0:
            if target == 0:
                yield ()
            return
        if si == len(sectors):
            return
        v = sectors[si]
        lo = remaining * v                  # all remaining in this sector
        hi = remaining * sectors[-1]        # all remaining in the last one
        if not lo <= target <= hi:
            return
        for k in range(remaining + 1):
            rest_target = target - k * v
            rest_n = remaining - k
            if rest_n == 0 and rest_target != 0:
                continue
            if rest_n > 0 and si + 1 == len(sectors):
                continue
            for combo in combinations_with_replacement(ground[v], k):
                for rest in rec(si + 1, rest_n, rest_target):
                    yield combo + rest

    yield from rec(0, n, vsum)


def enumerate_sector_basis(N: int, n_ex: int, j: int,
                           levels: List[VibronicLevel],
                           retention: Retention = FULL_RETENTION) -> SectorBasis:
    """Complete occupation basis of the (n_ex, j) sector.

    For n_ex = 1 the admissible patterns are (all molecules in even-v
    ground levels, one photon with p = j - sum v_k = +-1) and (exactly
    one molecule in an odd-v excited level, the rest in ground levels,
    p = 0). For n_ex = 0 only the photonless all-ground pattern exists.

    Raises SectorError when the level table lacks a sector that the
    retention filter would otherwise admit.
    """
    if n_ex not in (0, 1):
        raise SectorError("only n_ex in {0, 1} sectors are supported")
    if N < 1:
        raise SectorError("N must be >= 1")
    ground, excited = _levels_by_sector(levels, retention)
    _check_coverage(levels, retention, N, n_ex, j)
    states: List[OccupationState] = []
    if n_ex == 1:
        for p in (-1, 0, +1):
            block: List[OccupationState] = []
            if p == 0:
                for v_e in sorted(excited):
                    for e in excited[v_e]:
                        for rest in _ground_multisets(ground, N - 1, j - v_e):
                            block.append(occupation_from_levels(0, (e,) + rest))
            else:
                for combo in _ground_multisets(ground, N, j - p):
                    block.append(occupation_from_levels(p, combo))
            block.sort(key=lambda st: st.occ)
            states.extend(block)
    else:
        block = [occupation_from_levels(0, combo)
                 for combo in _ground_multisets(ground, N, j)]
        block.sort(key=lambda st: st.occ)
        states.extend(block)
    retained = frozenset(g for idxs in list(ground.values()) + list(excited.values())
                         for g in idxs)
    return SectorBasis(n_ex=n_ex, j=j, n_molecules=N, states=states,
                       levels=levels, retained=retained)


def required_v_list(N: int, n_ex: int, j: int, n_max: int,
                    retention: Retention = FULL_RETENTION) -> List[int]:
    """Concrete sorted list of vibronic sectors the basis can touch,
    clipped to the sectors the cutoff can represent."""
    even, odd = required_sectors(N, n_ex, j)
    if even is None:
        even = set(range(-2 * (n_max - 1), 2 * n_max - 1, 2))
    if odd is None:
        odd = set(range(-(2 * n_max - 1), 2 * n_max, 2))
    even = {v for v in even if abs(v) <= 2 * (n_max - 1)}
    odd = {v for v in odd if abs(v) <= 2 * n_max - 1}
    if retention.v_cap is not None:
        even = {v for v in even if abs(v) <= retention.v_cap}
        odd = {v for v in odd if abs(v) <= retention.v_cap}
    return sorted(even | odd)


def _check_coverage(levels, retention, N, n_ex, j):
    """Verify the level table covers every sector the basis could touch."""
    if not levels:
        raise SectorError("empty level table")
    present = {lv.v for lv in levels}
    n_max = _infer_n_max(levels)
    needed = required_v_list(N, n_ex, j, n_max, retention)
    missing = sorted(set(needed) - present)
    if missing:
        raise SectorError(
            f"level table is missing vibronic sector(s) {missing} needed "
            f"for the (n_ex={n_ex}, j={j}) basis with N={N}")


def _infer_n_max(levels: List[VibronicLevel]) -> int:
    return 1 + max(max(st.n_plus, st.n_minus)
                   for lv in levels for st in lv.basis)


def apply_diagonal(level: int, basis: SectorBasis, x: np.ndarray) -> np.ndarray:
    """D_level: scale each amplitude by the occupation of that level."""
    x = np.asarray(x)
    if len(x) != basis.dim:
        raise ValueError("vector length does not match basis")
    counts = np.array([st.count(level) for st in basis.states], dtype=float)
    return counts * x


class LadderResult(NamedTuple):
    vector: np.ndarray
    dropped: int  # amplitudes whose target lies outside the sector basis


def apply_ladder(j_to: int, k_from: int, direction: str, basis: SectorBasis,
                 x: np.ndarray) -> LadderResult:
    """Collective transfer T-_{j,k} (direction '-') or T+_{j,k} ('+').

    T- moves one molecule from level k_from to level j_to with matrix
    element sqrt(N_k (N_j + 1)); T+ is the conjugate. Amplitudes whose
    image violates the sector constraints are dropped and counted.
    """
    if direction not in ("-", "+"):
        raise ValueError("direction must be '-' or '+'")
    if direction == "+":
        j_to, k_from = k_from, j_to
    x = np.asarray(x, dtype=np.complex128)
    if len(x) != basis.dim:
        raise ValueError("vector length does not match basis")
    y = np.zeros_like(x)
    dropped = 0
    for q, st in enumerate(basis.states):
        if x[q] == 0:
            continue
        nk = st.count(k_from)
        if nk == 0:
            continue
        nj = st.count(j_to)
        tgt = _move_one(st, k_from, j_to)
        pos = basis.index.get(tgt)
        if pos is None:
            dropped += 1
            continue
        y[pos] += np.sqrt(nk * (nj + 1)) * x[q]
    return LadderResult(y, dropped)


def _move_one(st: OccupationState, src: int, dst: int) -> OccupationState:
    counts = dict(st.occ)
    counts[src] -= 1
    if counts[src] == 0:
        del counts[src]
    counts[dst] = counts.get(dst, 0) + 1
    return OccupationState(st.photon, tuple(sorted(counts.items())))


def assemble_hamiltonian(basis: SectorBasis, levels: List[VibronicLevel],
                         couplings: CouplingTable,
                         cavity: CavityParams) -> SparseHermitian:
    """Collective Hamiltonian of one (n_ex, j) sector.

    Diagonal: sum_i lambda_i N_i + omega_c (photon number). Interaction:
    photon emission with alpha (LCP) / beta (RCP) collective transfers,
    generated once per pair from the photon-carrying side. Every
    generated element must land inside the basis unless the retention
    filter removed the target level; anything else raises AssemblyError.
    """
    omega_c = cavity.numeric_omega_c()
    if cavity.N != basis.n_molecules:
        raise ValueError("cavity.N does not match the basis molecule count")
    energies = np.array([lv.energy for lv in levels])
    rows, cols, vals = [], [], []
    for q, st in enumerate(basis.states):
        diag = sum(c * energies[l] for l, c in st.occ)
        if st.photon != 0:
            diag += omega_c
        rows.append(q)
        cols.append(q)
        vals.append(diag)
    a_adj, b_adj = couplings.by_ground()
    pref = cavity.Omega / (2.0 * np.sqrt(basis.n_molecules))
    for q, st in enumerate(basis.states):
        if st.photon == 0:
            continue
        # photon absorption: promote one molecule from ground i to
        # excited partner j; LCP photons use alpha, RCP photons beta.
        adj = a_adj if st.photon == +1 else b_adj
        for i_lv, ni in st.occ:
            for j_lv, amp in adj.get(i_lv, ()):
                tgt = _move_one(OccupationState(0, st.occ), i_lv, j_lv)
                pos = basis.index.get(tgt)
                if pos is None:
                    if j_lv in basis.retained and i_lv in basis.retained:
                        raise AssemblyError(
                            f"element from state {q} to {tgt} left the basis")
                    continue
                nj = st.count(j_lv)
                val = pref * np.conj(amp) * np.sqrt(ni * (nj + 1))
                # H[pos, q] = val; store the upper-triangle representative
                if pos <= q:
                    rows.append(pos)
                    cols.append(q)
                    vals.append(val)
                else:
                    rows.append(q)
                    cols.append(pos)
                    vals.append(np.conj(val))
    return SparseHermitian(basis.dim, rows, cols, vals)


def basis_csv_rows(basis: SectorBasis) -> List[str]:
    """CSV lines: index, photon, occupation string "v:i×count;..."."""
    rows = ["index,photon,occupation"]
    for q, st in enumerate(basis.states):
        occ = ";".join(
            f"{basis.levels[l].v}:{basis.levels[l].i}×{c}" for l, c in st.occ)
        rows.append(f"{q},{st.photon},{occ}")
    return rows
