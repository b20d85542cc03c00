"""Observables of the polaritonic eigenstructure.

Stick and Lorentzian-broadened spectra seeded by the bright state (all
molecules in the vibronic ground level plus one circular photon),
per-state vibronic-sector participation ratios, net photon polarization,
and the sector-population heatmap.
"""

from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .collective import SectorBasis, occupation_from_levels
from .numerics import EigenResult, SpectralMeasure

DEFAULT_FWHM = 0.01          # eV, Lorentzian kernel
DEFAULT_WINDOW = (6.2, 7.6)  # eV, LP+UP range used to bound N>=2 record sets


@dataclass
class PolaritonRecord:
    """Per-eigenstate observables in energy order."""

    index: int
    energy: float
    intensity: float
    pr: float
    polarization: float
    sector_populations: Dict[int, float]


def ground_level_index(basis: SectorBasis) -> int:
    """Global index of the true molecular ground level (v = 0, i = 0)."""
    for g, lv in enumerate(basis.levels):
        if lv.v == 0 and lv.i == 0:
            return g
    raise ValueError("level table lacks the v=0 ground level")


def bright_index(basis: SectorBasis) -> int:
    """Position of the bright basis state: every molecule in the ground
    level and one photon matching the sector (RCP for j=-1, LCP for +1)."""
    photon = -1 if basis.j < 0 else +1
    g0 = ground_level_index(basis)
    st = occupation_from_levels(photon, (g0,) * basis.n_molecules)
    pos = basis.index.get(st)
    if pos is None:
        raise ValueError(
            f"bright state absent from the (n_ex={basis.n_ex}, j={basis.j}) "
            "basis; wrong sector?")
    return pos


def bright_state(basis: SectorBasis) -> np.ndarray:
    vec = np.zeros(basis.dim, dtype=np.complex128)
    vec[bright_index(basis)] = 1.0
    return vec


def stick_spectrum(eig: EigenResult, bright: np.ndarray
                   ) -> Tuple[np.ndarray, np.ndarray]:
    """Intensities I_n = |<bright|psi_n>|^2 against the eigenenergies."""
    if eig.vectors is None:
        raise ValueError("stick_spectrum needs eigenvectors; use the "
                         "Lanczos measure path otherwise")
    overlaps = eig.vectors.conj().T @ bright
    return eig.values.copy(), np.abs(overlaps) ** 2


def measure_sticks(measure: SpectralMeasure) -> Tuple[np.ndarray, np.ndarray]:
    """Stick spectrum from a Lanczos spectral measure of the bright seed."""
    return measure.energies.copy(), measure.weights.copy()


def _sector_weight_matrix(basis: SectorBasis) -> Tuple[np.ndarray, List[int]]:
    """Matrix W with W[q, m] = (molecules of state q in sector v_m) / N."""
    v_of = np.array([lv.v for lv in basis.levels])
    v_list = sorted({int(v_of[l]) for st in basis.states for l, _ in st.occ})
    vpos = {v: m for m, v in enumerate(v_list)}
    W = np.zeros((basis.dim, len(v_list)))
    invN = 1.0 / basis.n_molecules
    for q, st in enumerate(basis.states):
        for l, c in st.occ:
            W[q, vpos[int(v_of[l])]] += c * invN
    return W, v_list


def participation_ratio(psi: np.ndarray, basis: SectorBasis,
                        n_molecules: Optional[int] = None
                        ) -> Tuple[float, Dict[int, float]]:
    """Sector participation ratio PR = 1 / sum_v P(v)^2 of one state.

    P(v) is the probability for a single molecule to sit in vibronic
    sector v, read off the occupation representation as
    (1/N) sum_b |psi_b|^2 (molecules of b in sector v).
    """
    if n_molecules is not None and n_molecules != basis.n_molecules:
        raise ValueError("n_molecules does not match the basis")
    W, v_list = _sector_weight_matrix(basis)
    P = (np.abs(np.asarray(psi)) ** 2) @ W
    pr = 1.0 / float((P ** 2).sum())
    return pr, {v: float(p) for v, p in zip(v_list, P)}


def photon_polarization(psi: np.ndarray, basis: SectorBasis) -> float:
    """<P> = sum_b p(b) |psi_b|^2, in [-1, 1]."""
    p = np.array([st.photon for st in basis.states], dtype=float)
    return float(p @ (np.abs(np.asarray(psi)) ** 2))


def polariton_records(eig: EigenResult, basis: SectorBasis,
                      window: Optional[Tuple[float, float]] = None,
                      chunk: int = 256) -> List[PolaritonRecord]:
    """Records for every eigenstate (optionally restricted to an energy
    window), processed in chunks of eigenvectors to bound memory."""
    if eig.vectors is None:
        raise ValueError("polariton_records needs eigenvectors")
    energies, intensities = stick_spectrum(eig, bright_state(basis))
    W, v_list = _sector_weight_matrix(basis)
    p_label = np.array([st.photon for st in basis.states], dtype=float)
    keep = np.arange(len(energies))
    if window is not None:
        keep = keep[(energies >= window[0]) & (energies <= window[1])]
    records: List[PolaritonRecord] = []
    for s in range(0, len(keep), chunk):
        sel = keep[s:s + chunk]
        amp2 = np.abs(eig.vectors[:, sel]) ** 2
        P = amp2.T @ W
        prs = 1.0 / (P ** 2).sum(axis=1)
        pols = amp2.T @ p_label
        for r, n in enumerate(sel):
            records.append(PolaritonRecord(
                index=int(n), energy=float(energies[n]),
                intensity=float(intensities[n]), pr=float(prs[r]),
                polarization=float(pols[r]),
                sector_populations={v: float(x) for v, x in zip(v_list, P[r])},
            ))
    return records


def records_from_ritz(measure: SpectralMeasure, basis: SectorBasis,
                      window: Optional[Tuple[float, float]] = None,
                      residual_tol: float = 1e-6) -> List[PolaritonRecord]:
    """Records from converged Ritz pairs of a Lanczos run (vectors
    required). Pairs with residual bound above residual_tol are skipped;
    the dense path is authoritative when every state matters."""
    if measure.vectors is None:
        raise ValueError("run lanczos_spectral_measure with want_vectors=True")
    keep = np.arange(len(measure.energies))
    if window is not None:
        keep = keep[(measure.energies >= window[0])
                    & (measure.energies <= window[1])]
    W, v_list = _sector_weight_matrix(basis)
    p_label = np.array([st.photon for st in basis.states], dtype=float)
    records = []
    for n in keep:
        if measure.residual_bounds is not None \
                and measure.residual_bounds[n] > residual_tol:
            continue
        amp2 = np.abs(measure.vectors[:, n]) ** 2
        amp2 /= amp2.sum()
        P = amp2 @ W
        records.append(PolaritonRecord(
            index=int(n), energy=float(measure.energies[n]),
            intensity=float(measure.weights[n]),
            pr=float(1.0 / (P ** 2).sum()),
            polarization=float(amp2 @ p_label),
            sector_populations={v: float(x) for v, x in zip(v_list, P)},
        ))
    return records


def broaden(sticks: Sequence[Tuple[float, float]], fwhm: float,
            grid: np.ndarray) -> np.ndarray:
    """Sum of unit-area Lorentzians weighted by stick intensity.

    The mass inside a finite grid window equals the analytic arctan
    expression; with grid spacing well below fwhm the trapezoid integral
    of the returned curve reproduces it to quadrature accuracy.
    """
    if fwhm <= 0:
        raise ValueError("fwhm must be > 0")
    grid = np.asarray(grid, dtype=float)
    curve = np.zeros_like(grid)
    half = 0.5 * fwhm
    for e0, w in sticks:
        curve += w * (half / np.pi) / ((grid - e0) ** 2 + half ** 2)
    return curve


def lorentzian_window_mass(sticks: Sequence[Tuple[float, float]],
                           fwhm: float, lo: float, hi: float) -> float:
    """Analytic integral of the broadened curve over [lo, hi]."""
    half = 0.5 * fwhm
    tot = 0.0
    for e0, w in sticks:
        tot += w * (np.arctan((hi - e0) / half)
                    - np.arctan((lo - e0) / half)) / np.pi
    return float(tot)


def heatmap_table(records: List[PolaritonRecord]
                  ) -> Tuple[np.ndarray, List[int]]:
    """Row-stochastic matrix (record x vibronic sector) of P(v)."""
    v_list = sorted({v for r in records for v in r.sector_populations})
    M = np.zeros((len(records), len(v_list)))
    for r, rec in enumerate(records):
        for m, v in enumerate(v_list):
            M[r, m] = rec.sector_populations.get(v, 0.0)
    return M, v_list


def envelope_fwhm(grid: np.ndarray, curve: np.ndarray,
                  lo: Optional[float] = None,
                  hi: Optional[float] = None) -> float:
    """Full width at half maximum of a curve restricted to [lo, hi],
    by linear interpolation of the outermost half-height crossings."""
    grid = np.asarray(grid)
    curve = np.asarray(curve, dtype=float)
    mask = np.ones_like(grid, dtype=bool)
    if lo is not None:
        mask &= grid >= lo
    if hi is not None:
        mask &= grid <= hi
    g, c = grid[mask], curve[mask]
    if len(g) < 3:
        raise ValueError("window too narrow")
    top = c.max()
    half = 0.5 * top
    above = np.where(c >= half)[0]
    i0, i1 = above[0], above[-1]

    def cross(ia, ib):
        if ia == ib:
            return g[ia]
        return g[ia] + (half - c[ia]) * (g[ib] - g[ia]) / (c[ib] - c[ia])

    left = cross(i0 - 1, i0) if i0 > 0 else g[0]
    right = cross(i1 + 1, i1) if i1 < len(g) - 1 else g[-1]
    return float(right - left)


def sticks_csv_rows(energies: np.ndarray, intensities: np.ndarray) -> List[str]:
    rows = ["energy_eV,intensity"]
    for e, w in zip(energies, intensities):
        rows.append(f"{e:.12g},{w:.12g}")
    return rows


def records_csv_rows(records: List[PolaritonRecord]) -> List[str]:
    rows = ["energy_eV,intensity,pr,polarization"]
    for r in records:
        rows.append(f"{r.energy:.12g},{r.intensity:.12g},"
                    f"{r.pr:.12g},{r.polarization:.12g}")
    return rows


def heatmap_csv_rows(records: List[PolaritonRecord]) -> List[str]:
    rows = ["state_index,v,probability"]
    M, v_list = heatmap_table(records)
    for r, rec in enumerate(records):
        for m, v in enumerate(v_list):
            rows.append(f"{rec.index},{v},{M[r, m]:.12g}")
    return rows


def curve_csv_rows(grid: np.ndarray, curve: np.ndarray) -> List[str]:
    rows = ["energy_eV,absorbance"]
    for e, a in zip(grid, curve):
        rows.append(f"{e:.12g},{a:.12g}")
    return rows
