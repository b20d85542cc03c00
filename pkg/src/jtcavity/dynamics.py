"""Pulse-driven dynamics in the weak-field sector union.

A circularly polarized pulse drives the cavity dipole. In the weak-field
limit the state space is the union of the ground sector (0, 0) with the
one-excitation sector (1, -1) for RCP driving or (1, +1) for LCP; the
pulse only moves amplitude between a ground configuration |g, p=0> and
its photon partner |g, p=+-1>.

Field convention (energies eV, times fs): the u = x, y component is the
negative time derivative of the vector potential

    A_u(t) = (d0 / w_L) sin^2(pi t / tau) sin(w_L t - phi_u),  0 <= t <= tau

with w_L = omega_l / hbar the carrier angular frequency and d0 = mu01 E0
the drive amplitude expressed as an energy. The phase pairs
(phi_x, phi_y) = (0, pi/2) for LCP and (pi/2, 0) for RCP make the pulse
resonantly create one LCP (p=+1) or RCP (p=-1) photon respectively. In
the circular-mode basis the photon-creating drive amplitude onto the
p = +-1 state is w_p(t) = -(E_x(t) - i p E_y(t)) / sqrt(2).
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.integrate import trapezoid

from .collective import (CavityParams, OccupationState, Retention,
                         FULL_RETENTION, SectorBasis, assemble_hamiltonian,
                         enumerate_sector_basis)
from .molecule import CouplingTable, ModelParams, VibronicLevel
from .numerics import PropagationError, SparseHermitian, krylov_step
from .spectra import ground_level_index
from .units import HBAR_EV_FS

PHASES = {"LCP": (0.0, 0.5 * np.pi), "RCP": (0.5 * np.pi, 0.0)}
TARGET_PHOTON = {"LCP": +1, "RCP": -1}

DEFAULT_DT = 0.01      # fs
DEFAULT_T_END = 200.0  # fs
DEFAULT_STRIDE = 0.1   # fs
DEFAULT_KDIM = 12
NORM_ABORT = 1e-6


@dataclass(frozen=True)
class PulseSpec:
    """Circularly polarized drive: amplitude d0 = mu01 E0 (eV), carrier
    omega_l (eV), duration tau (fs), handedness."""

    e0_mu: float = 1e-3
    omega_l: float = 7.24
    tau: float = 20.0
    polarization: str = "RCP"

    def __post_init__(self):
        if self.tau <= 0:
            raise ValueError("tau must be > 0")
        if self.omega_l <= 0:
            raise ValueError("omega_l must be > 0")
        if self.e0_mu < 0:
            raise ValueError("e0_mu must be >= 0")
        if self.polarization not in PHASES:
            raise ValueError("polarization must be 'LCP' or 'RCP'")

    @property
    def phases(self) -> Tuple[float, float]:
        return PHASES[self.polarization]

    @property
    def target_photon(self) -> int:
        return TARGET_PHOTON[self.polarization]


def _phase_of(spec: PulseSpec, u: str) -> float:
    if u not in ("x", "y"):
        raise ValueError("component must be 'x' or 'y'")
    return spec.phases[0] if u == "x" else spec.phases[1]


def vector_potential(t, spec: PulseSpec, u: str):
    """A_u(t) in eV*fs; zero outside [0, tau]."""
    phi = _phase_of(spec, u)
    t = np.asarray(t, dtype=float)
    w = spec.omega_l / HBAR_EV_FS
    env = np.sin(np.pi * t / spec.tau) ** 2
    a = (spec.e0_mu / w) * env * np.sin(w * t - phi)
    return np.where((t >= 0) & (t <= spec.tau), a, 0.0)


def field_component(t, spec: PulseSpec, u: str):
    """E_u(t) = -dA_u/dt in eV (d0 folded in); zero outside [0, tau]."""
    phi = _phase_of(spec, u)
    t = np.asarray(t, dtype=float)
    w = spec.omega_l / HBAR_EV_FS
    term1 = (spec.e0_mu / w) * (np.pi / spec.tau) \
        * np.sin(2.0 * np.pi * t / spec.tau) * np.sin(w * t - phi)
    term2 = spec.e0_mu * np.sin(np.pi * t / spec.tau) ** 2 * np.cos(w * t - phi)
    return np.where((t >= 0) & (t <= spec.tau), -(term1 + term2), 0.0)


def drive_amplitude(t, spec: PulseSpec):
    """Complex weight w_p(t) multiplying the photon-creating coupling
    onto the target p = +-1 states."""
    p = spec.target_photon
    ex = field_component(t, spec, "x")
    ey = field_component(t, spec, "y")
    return -(ex - 1j * p * ey) / np.sqrt(2.0)


@dataclass
class ExtendedSpace:
    """Union of the ground sector with one single-excitation sector.

    The ground block occupies positions [0, dim_ground); the excited
    sector follows. ``drive_ground`` / ``drive_excited`` list the union
    positions coupled by the photon-creating drive (same molecular
    configuration, photon 0 <-> target photon).
    """

    ground: SectorBasis
    excited: SectorBasis
    h0: SparseHermitian
    drive_ground: np.ndarray
    drive_excited: np.ndarray
    photon_labels: np.ndarray
    excited_mask: np.ndarray

    @property
    def dim(self) -> int:
        return self.h0.dim

    @property
    def dim_ground(self) -> int:
        return self.ground.dim

    def initial_state(self) -> np.ndarray:
        """All molecules in the ground vibronic level, zero photons."""
        g0 = ground_level_index(self.excited)
        st = OccupationState(0, ((g0, self.ground.n_molecules),))
        pos = self.ground.index.get(st)
        if pos is None:
            raise ValueError("absolute ground state missing from the "
                             "(0, 0) basis")
        psi = np.zeros(self.dim, dtype=np.complex128)
        psi[pos] = 1.0
        return psi


def build_pulse_space(params: ModelParams, cavity: CavityParams,
                      levels: List[VibronicLevel], couplings: CouplingTable,
                      polarization: str = "RCP",
                      retention: Retention = FULL_RETENTION) -> ExtendedSpace:
    """Assemble the (0,0) + (1, -+1) union for the given handedness."""
    p_t = TARGET_PHOTON[polarization]
    ground = enumerate_sector_basis(cavity.N, 0, 0, levels, retention)
    excited = enumerate_sector_basis(cavity.N, 1, p_t, levels, retention)
    hg = assemble_hamiltonian(ground, levels, couplings, cavity)
    he = assemble_hamiltonian(excited, levels, couplings, cavity)
    off = ground.dim
    rows = np.concatenate([hg.rows, he.rows + off])
    cols = np.concatenate([hg.cols, he.cols + off])
    vals = np.concatenate([hg.vals, he.vals])
    h0 = SparseHermitian(ground.dim + excited.dim, rows, cols, vals)
    dg, de = [], []
    for q, st in enumerate(ground.states):
        partner = OccupationState(p_t, st.occ)
        pos = excited.index.get(partner)
        if pos is None:
            raise ValueError("photon partner missing for a ground "
                             "configuration; sector mismatch")
        dg.append(q)
        de.append(off + pos)
    photon = np.zeros(h0.dim, dtype=np.int8)
    for q, st in enumerate(excited.states):
        photon[off + q] = st.photon
    mask = np.zeros(h0.dim, dtype=bool)
    mask[off:] = True
    return ExtendedSpace(ground=ground, excited=excited, h0=h0,
                         drive_ground=np.array(dg, dtype=np.int64),
                         drive_excited=np.array(de, dtype=np.int64),
                         photon_labels=photon, excited_mask=mask)


def drive_operator(t: float, spec: PulseSpec, space: ExtendedSpace
                   ) -> SparseHermitian:
    """Drive Hamiltonian at time t on the union basis (Hermitian)."""
    w = complex(drive_amplitude(t, spec))
    if w == 0:
        return SparseHermitian(space.dim, [], [], [])
    return SparseHermitian(space.dim, space.drive_ground,
                           space.drive_excited,
                           np.full(len(space.drive_ground), np.conj(w)))


class _DrivenOperator:
    """H0 + w(t) drive as a matvec-only operator for krylov_step."""

    def __init__(self, space: ExtendedSpace, w: complex):
        self.space = space
        self.w = w
        self.dim = space.dim
        self._csr = space.h0.to_csr()

    def matvec(self, x):
        y = self._csr @ x
        if self.w != 0:
            y[self.space.drive_excited] += self.w * x[self.space.drive_ground]
            y[self.space.drive_ground] += np.conj(self.w) * x[self.space.drive_excited]
        return y


@dataclass
class Trajectory:
    """Output grid of a propagation run."""

    times: np.ndarray
    polarization: np.ndarray
    excited_population: np.ndarray
    autocorrelation: np.ndarray
    norms: np.ndarray
    spec: Optional[PulseSpec] = None
    states: Optional[np.ndarray] = None  # (n_out, dim) when retained

    def norm_drift(self) -> float:
        return float(np.abs(self.norms - 1.0).max())


def _observables(psi, space: Optional[ExtendedSpace], basis: Optional[SectorBasis]):
    amp2 = np.abs(psi) ** 2
    if space is not None:
        pol = float(space.photon_labels @ amp2)
        pop = float(amp2[space.excited_mask].sum())
    else:
        pol = float(np.array([st.photon for st in basis.states]) @ amp2)
        pop = float(basis.n_ex) * float(amp2.sum())
    return pol, pop


def propagate_pulse(space: ExtendedSpace, spec: PulseSpec,
                    dt: float = DEFAULT_DT, t_end: float = DEFAULT_T_END,
                    stride: float = DEFAULT_STRIDE, kdim: int = DEFAULT_KDIM,
                    store_states: bool = False,
                    dt_free: Optional[float] = None,
                    kdim_free: int = 24) -> Trajectory:
    """Solve the driven TDSE from the absolute ground state.

    Krylov midpoint stepping of H0 + drive(t); polarization, excited
    population and the ground-state autocorrelation are recorded every
    ``stride``. Aborts if the norm drifts by more than 1e-6.

    ``dt`` resolves the carrier during the pulse. After the pulse the
    Hamiltonian is constant and the Krylov exponential is exact in its
    subspace, so strides starting at t >= tau may take the larger
    ``dt_free`` (with ``kdim_free``) without accuracy loss; the default
    keeps a single dt throughout.
    """
    if spec.polarization not in PHASES:
        raise ValueError("bad polarization")
    if dt <= 0:
        raise ValueError("dt must be > 0")
    n_sub = round(stride / dt)
    if n_sub < 1 or abs(n_sub * dt - stride) > 1e-9:
        raise ValueError("dt must divide the output stride")
    if dt_free is not None:
        n_free = round(stride / dt_free)
        if n_free < 1 or abs(n_free * dt_free - stride) > 1e-9:
            raise ValueError("dt_free must divide the output stride")
    psi0 = space.initial_state()
    return _run(space, None, psi0, spec, dt, t_end, stride, kdim,
                store_states, dt_free=dt_free, kdim_free=kdim_free)


def propagate_free(basis: SectorBasis, h: SparseHermitian, psi0: np.ndarray,
                   dt: float = DEFAULT_DT, t_end: float = DEFAULT_T_END,
                   stride: float = DEFAULT_STRIDE, kdim: int = DEFAULT_KDIM,
                   store_states: bool = False) -> Trajectory:
    """Drive-free propagation inside a single sector (autocorrelation runs)."""
    n_sub = round(stride / dt)
    if n_sub < 1 or abs(n_sub * dt - stride) > 1e-9:
        raise ValueError("dt must divide the output stride")
    return _run(None, (basis, h), np.asarray(psi0, dtype=np.complex128),
                None, dt, t_end, stride, kdim, store_states)


def _run(space, sector, psi0, spec, dt, t_end, stride, kdim, store_states,
         dt_free=None, kdim_free=24):
    n_sub = round(stride / dt)
    n_out = int(np.floor(t_end / stride + 1e-9)) + 1
    if space is not None:
        def op_at(t):
            w = complex(drive_amplitude(t, spec)) if spec is not None else 0.0
            return _DrivenOperator(space, w)
        basis = None
    else:
        basis, h = sector

        def op_at(t):
            return h
    psi = psi0.copy()
    times = np.empty(n_out)
    pols = np.empty(n_out)
    pops = np.empty(n_out)
    autoc = np.empty(n_out, dtype=np.complex128)
    norms = np.empty(n_out)
    states = np.empty((n_out, len(psi)), dtype=np.complex128) if store_states else None
    step = 0
    for k_out in range(n_out):
        t = k_out * stride
        times[k_out] = t
        pols[k_out], pops[k_out] = _observables(psi, space, basis)
        autoc[k_out] = np.vdot(psi0, psi)
        norms[k_out] = np.linalg.norm(psi)
        if abs(norms[k_out] - 1.0) > NORM_ABORT:
            raise PropagationError(
                f"norm drifted to {norms[k_out]:.3e} at step {step} (t={t} fs)")
        if states is not None:
            states[k_out] = psi
        if k_out == n_out - 1:
            break
        free = (dt_free is not None and spec is not None
                and t >= spec.tau - 1e-9)
        sub_dt = dt_free if free else dt
        sub_k = kdim_free if free else kdim
        for s in range(round(stride / sub_dt)):
            psi = krylov_step(op_at, psi, t + s * sub_dt, sub_dt, sub_k)
            step += 1
    return Trajectory(times=times, polarization=pols, excited_population=pops,
                      autocorrelation=autoc, norms=norms, spec=spec,
                      states=states)


def normalized_polarization(traj: Trajectory) -> Tuple[np.ndarray, np.ndarray]:
    """<P(t)> / excited population after the pulse, on [tau, t_end]."""
    if traj.spec is None:
        raise ValueError("trajectory was not driven by a pulse")
    tau = traj.spec.tau
    after = traj.times >= tau - 1e-9
    if not after.any():
        raise ValueError("trajectory ends before the pulse does")
    pop = traj.excited_population[after][0]
    if pop <= 1e-12:
        raise ValueError("no excitation after the pulse; increase e0_mu or "
                         "tune omega_l towards resonance")
    return traj.times[after], traj.polarization[after] / pop


def normalized_polarization_full(traj: Trajectory) -> np.ndarray:
    """<P(t)> / after-pulse population on the whole grid (CSV column)."""
    if traj.spec is None:
        return np.zeros_like(traj.polarization)
    after = traj.times >= traj.spec.tau - 1e-9
    pop = traj.excited_population[after][0] if after.any() else 0.0
    if pop <= 1e-12:
        return np.zeros_like(traj.polarization)
    return traj.polarization / pop


def autocorrelation_spectrum(traj: Trajectory, damping_time: float,
                             grid: np.ndarray) -> np.ndarray:
    """Damped cosine transform of <psi(0)|psi(t)>.

    sigma(E) = Re integral_0^T C(t) exp(i E t / hbar - t / damping) dt,
    evaluated by the trapezoid rule on the trajectory grid. Peaks sit at
    eigenenergies carried by the initial state; the transform resolution
    is about 2 pi hbar / T. Keep damping_time <= T/4 or the truncated
    exponential leaves rectangular-window ringing above the noise floor.
    """
    if damping_time <= 0:
        raise ValueError("damping_time must be > 0")
    t = traj.times
    c = traj.autocorrelation * np.exp(-t / damping_time)
    grid = np.asarray(grid, dtype=float)
    phases = np.exp(1j * np.outer(grid, t) / HBAR_EV_FS)
    return trapezoid(phases * c[np.newaxis, :], t, axis=1).real


def transform_resolution(traj: Trajectory) -> float:
    """Energy resolution 2 pi hbar / T of the autocorrelation transform."""
    return 2.0 * np.pi * HBAR_EV_FS / (traj.times[-1] - traj.times[0])


def spectrum_peaks(grid: np.ndarray, curve: np.ndarray,
                   threshold: float = 0.05) -> np.ndarray:
    """Local maxima of the curve above threshold * max."""
    c = np.asarray(curve)
    lo = threshold * c.max()
    idx = [k for k in range(1, len(c) - 1)
           if c[k] >= c[k - 1] and c[k] >= c[k + 1] and c[k] > lo]
    return np.asarray(grid)[idx]


def trajectory_csv_rows(traj: Trajectory) -> List[str]:
    rows = ["t_fs,polarization,polarization_normalized,excited_population,"
            "reautocorr,imautocorr"]
    norm = normalized_polarization_full(traj)
    for k, t in enumerate(traj.times):
        rows.append(
            f"{t:.12g},{traj.polarization[k]:.12g},{norm[k]:.12g},"
            f"{traj.excited_population[k]:.12g},"
            f"{traj.autocorrelation[k].real:.12g},"
            f"{traj.autocorrelation[k].imag:.12g}")
    return rows
