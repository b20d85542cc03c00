"""Polaritonic eigenstructure and pulse dynamics of Jahn-Teller active
molecules coupled to two circularly polarized cavity modes.

The heavy lifting happens in symmetry-reduced sectors: vibronic angular
momentum blocks for the single molecule, permutation-symmetric
occupation bases labelled by (n_ex, j) for the molecule-cavity system.
"""

from .units import HBAR_EV_FS
from .numerics import (SparseHermitian, EigenResult, SpectralMeasure,
                       matvec, eig_dense, lanczos_spectral_measure,
                       krylov_step, DenseLimitError, PropagationError)
from .molecule import (ModelParams, MolecularBasisState, VibronicLevel,
                       CouplingTable, vibronic_number, sector_states,
                       build_sector_block, diagonalize_molecule,
                       bare_absorption_sticks, brightest_transition_energy)
from .collective import (CavityParams, Retention, FULL_RETENTION,
                         DEFAULT_TRUNCATION, OccupationState, SectorBasis,
                         enumerate_sector_basis, apply_diagonal, apply_ladder,
                         assemble_hamiltonian, SectorError, AssemblyError)
from .spectra import (PolaritonRecord, bright_state, bright_index,
                      stick_spectrum, measure_sticks, participation_ratio,
                      photon_polarization, polariton_records, broaden,
                      heatmap_table)
from .dynamics import (PulseSpec, Trajectory, field_component,
                       vector_potential, drive_operator, build_pulse_space,
                       propagate_pulse, propagate_free,
                       normalized_polarization, autocorrelation_spectrum)

__version__ = "0.1.0"

__all__ = [
    "HBAR_EV_FS",
    "SparseHermitian", "EigenResult", "SpectralMeasure", "matvec",
    "eig_dense", "lanczos_spectral_measure", "krylov_step",
    "DenseLimitError", "PropagationError",
    "ModelParams", "MolecularBasisState", "VibronicLevel", "CouplingTable",
    "vibronic_number", "sector_states", "build_sector_block",
    "diagonalize_molecule", "bare_absorption_sticks",
    "brightest_transition_energy",
    "CavityParams", "Retention", "FULL_RETENTION", "DEFAULT_TRUNCATION",
    "OccupationState", "SectorBasis", "enumerate_sector_basis",
    "apply_diagonal", "apply_ladder", "assemble_hamiltonian",
    "SectorError", "AssemblyError",
    "PolaritonRecord", "bright_state", "bright_index", "stick_spectrum",
    "measure_sticks", "participation_ratio", "photon_polarization",
    "polariton_records", "broaden", "heatmap_table",
    "PulseSpec", "Trajectory", "field_component", "vector_potential",
    "drive_operator", "build_pulse_space", "propagate_pulse",
    "propagate_free", "normalized_polarization", "autocorrelation_spectrum",
    "__version__",
]
