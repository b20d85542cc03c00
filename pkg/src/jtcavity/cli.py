"""Command line entry points: vibronic, spectrum, dynamics, validate.

Every run resolves its configuration (auto cavity frequency, auto
coupling, auto record window), writes data CSVs atomically, and drops a
manifest with the resolved numbers, dimension counts and timings next to
them. Data files contain no wall-clock content, so identical configs
give byte-identical CSVs; timings live only in the manifest.
"""

import argparse
import os
import sys
import tempfile
import time
from typing import Iterable, List, Optional, Tuple

import numpy as np

from . import __version__
from .collective import (CavityParams, DEFAULT_TRUNCATION, Retention,
                         basis_csv_rows, assemble_hamiltonian,
                         enumerate_sector_basis, required_v_list)
from .config import (AUTO, ConfigError, RunConfig, parse_config_file,
                     serialize_config)
from .dynamics import (PulseSpec, build_pulse_space, propagate_pulse,
                       trajectory_csv_rows)
from .molecule import (brightest_transition_energy, diagonalize_molecule,
                       bare_absorption_sticks, levels_csv_rows)
from .numerics import (DenseLimitError, PropagationError, eig_dense,
                       lanczos_spectral_measure)
from .spectra import (DEFAULT_WINDOW, bright_state, broaden, curve_csv_rows,
                      heatmap_csv_rows, measure_sticks, polariton_records,
                      records_csv_rows, records_from_ritz, stick_spectrum,
                      sticks_csv_rows)
from .validate import report_lines, run_checks

EXIT_OK = 0
EXIT_VALIDATE_FAIL = 1
EXIT_CONFIG = 2
EXIT_DENSE_LIMIT = 3
EXIT_PROPAGATION = 4


def _atomic_write(path: str, lines: Iterable[str]):
    d = os.path.dirname(path) or "."
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp_", text=True)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            for line in lines:
                fh.write(line)
                fh.write("\n")
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class _Manifest:
    def __init__(self, command: str):
        self.sections = {"run": {"command": command, "version": __version__},
                         "resolved": {}, "timings": {}}
        self._t0 = time.perf_counter()

    def resolved(self, key, value):
        self.sections["resolved"][key] = value

    def timing(self, key, seconds):
        self.sections["timings"][key] = f"{seconds:.3f}"

    def write(self, outdir: str):
        self.timing("total_s", time.perf_counter() - self._t0)
        lines = []
        for name, kv in self.sections.items():
            lines.append(f"[{name}]")
            for k, v in kv.items():
                lines.append(f"{k} = {v}")
            lines.append("")
        _atomic_write(os.path.join(outdir, "manifest.txt"), lines)


def _resolve_cavity(cfg: RunConfig, levels) -> CavityParams:
    wc = cfg.omega_c_eV
    if wc == AUTO:
        wc = brightest_transition_energy(levels)
    om = cfg.Omega_eV
    if om == AUTO:
        om = 0.1 * wc
    return CavityParams(omega_c=float(wc), Omega=float(om),
                        N=cfg.n_molecules)


def _resolve_retention(cfg: RunConfig) -> Retention:
    ret = cfg.retention()
    if cfg.n_molecules >= 3 and ret.is_full:
        return DEFAULT_TRUNCATION
    return ret


def _resolve_window(cfg: RunConfig) -> Optional[Tuple[float, float]]:
    w = cfg.window_eV
    if w == AUTO:
        return None if cfg.n_molecules == 1 else DEFAULT_WINDOW
    if w == "full":
        return None
    return w


def _load_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    return parse_config_file(path)


def run_vibronic(cfg: RunConfig) -> int:
    man = _Manifest("vibronic")
    if not cfg.v_min <= -1 <= cfg.v_max:
        raise ConfigError("bad value for [vibronic] v_min/v_max: the "
                          "absorption sector v=-1 must be included")
    t0 = time.perf_counter()
    params = cfg.model_params()
    levels, _ = diagonalize_molecule(params, range(cfg.v_min, cfg.v_max + 1))
    man.timing("diagonalize_s", time.perf_counter() - t0)
    sticks = bare_absorption_sticks(levels, sector=-1)
    e_b, _ = max(sticks, key=lambda s: s[1])
    man.resolved("n_levels", len(levels))
    man.resolved("brightest_transition_eV", f"{e_b:.12g}")
    out = cfg.directory
    _atomic_write(os.path.join(out, "levels.csv"), levels_csv_rows(levels))
    _atomic_write(os.path.join(out, "bare_sticks.csv"),
                  sticks_csv_rows(np.array([s[0] for s in sticks]),
                                  np.array([s[1] for s in sticks])))
    _atomic_write(os.path.join(out, "resolved_config.ini"),
                  serialize_config(cfg).splitlines())
    man.write(out)
    return EXIT_OK


def run_spectrum(cfg: RunConfig) -> int:
    man = _Manifest("spectrum")
    N = cfg.n_molecules
    retention = _resolve_retention(cfg)
    if N > 4:
        raise ConfigError("bad value for [cavity] n_molecules: exact and "
                          "retention modes support N <= 4")
    if N > 2 and retention.is_full:
        raise ConfigError("N >= 3 requires a retention filter")
    params = cfg.model_params()
    t0 = time.perf_counter()
    v_list = required_v_list(N, cfg.n_ex, cfg.j, params.n_max, retention)
    levels, table = diagonalize_molecule(params, v_list)
    man.timing("levels_s", time.perf_counter() - t0)
    cavity = _resolve_cavity(cfg, levels)
    man.resolved("omega_c_eV", f"{cavity.omega_c:.12g}")
    man.resolved("Omega_eV", f"{cavity.Omega:.12g}")
    t0 = time.perf_counter()
    basis = enumerate_sector_basis(N, cfg.n_ex, cfg.j, levels, retention)
    h = assemble_hamiltonian(basis, levels, table, cavity)
    man.timing("assemble_s", time.perf_counter() - t0)
    man.resolved("dim_total", basis.dim)
    for p, n in sorted(basis.photon_block_sizes().items()):
        man.resolved(f"dim_photon_{p:+d}", n)
    window = _resolve_window(cfg)
    man.resolved("window_eV",
                 "full" if window is None else f"{window[0]},{window[1]}")
    man.resolved("method", cfg.method)
    t0 = time.perf_counter()
    if cfg.method == "dense":
        if h.dim > cfg.dense_limit:
            raise DenseLimitError(
                f"sector dimension {h.dim} exceeds dense_limit "
                f"{cfg.dense_limit}; set [spectrum] method = lanczos")
        res = eig_dense(h, want_vectors=True, dense_limit=cfg.dense_limit)
        energies, intensities = stick_spectrum(res, bright_state(basis))
        records = polariton_records(res, basis, window=window)
    else:
        m = min(cfg.lanczos_iterations, h.dim)
        meas = lanczos_spectral_measure(h, bright_state(basis), m,
                                        want_vectors=True)
        energies, intensities = measure_sticks(meas)
        records = records_from_ritz(meas, basis, window=window)
    man.timing("eigensolve_s", time.perf_counter() - t0)
    man.resolved("n_records", len(records))
    grid_lo = float(energies.min()) - 0.5
    grid_hi = float(energies.max()) + 0.5
    grid = np.arange(grid_lo, grid_hi, cfg.fwhm_eV / 10.0)
    curve = broaden(list(zip(energies, intensities)), cfg.fwhm_eV, grid)
    out = cfg.directory
    _atomic_write(os.path.join(out, "sticks.csv"),
                  sticks_csv_rows(energies, intensities))
    _atomic_write(os.path.join(out, "broadened.csv"),
                  curve_csv_rows(grid, curve))
    _atomic_write(os.path.join(out, "spectrum.csv"), records_csv_rows(records))
    _atomic_write(os.path.join(out, "heatmap.csv"), heatmap_csv_rows(records))
    _atomic_write(os.path.join(out, "basis.csv"), basis_csv_rows(basis))
    _atomic_write(os.path.join(out, "resolved_config.ini"),
                  serialize_config(cfg).splitlines())
    man.write(out)
    return EXIT_OK


def run_dynamics(cfg: RunConfig) -> int:
    man = _Manifest("dynamics")
    N = cfg.n_molecules
    retention = _resolve_retention(cfg)
    params = cfg.model_params()
    n_max = params.n_max
    t0 = time.perf_counter()
    v_need = set(required_v_list(N, 0, 0, n_max, retention))
    for pol in cfg.polarizations:
        j = -1 if pol == "RCP" else +1
        v_need |= set(required_v_list(N, 1, j, n_max, retention))
    levels, table = diagonalize_molecule(params, sorted(v_need))
    man.timing("levels_s", time.perf_counter() - t0)
    cavity = _resolve_cavity(cfg, levels)
    man.resolved("omega_c_eV", f"{cavity.omega_c:.12g}")
    man.resolved("Omega_eV", f"{cavity.Omega:.12g}")
    out = cfg.directory
    for pol in cfg.polarizations:
        spec = PulseSpec(e0_mu=cfg.pulse_energy_eV, omega_l=cfg.carrier_eV,
                         tau=cfg.tau_fs, polarization=pol)
        t0 = time.perf_counter()
        space = build_pulse_space(params, cavity, levels, table, pol,
                                  retention)
        man.resolved(f"dim_union_{pol.lower()}", space.dim)
        traj = propagate_pulse(space, spec, dt=cfg.dt_fs, t_end=cfg.t_end_fs,
                               stride=cfg.stride_fs)
        man.timing(f"propagate_{pol.lower()}_s", time.perf_counter() - t0)
        man.resolved(f"norm_drift_{pol.lower()}", f"{traj.norm_drift():.3e}")
        _atomic_write(os.path.join(out, f"trajectory_{pol.lower()}.csv"),
                      trajectory_csv_rows(traj))
    _atomic_write(os.path.join(out, "resolved_config.ini"),
                  serialize_config(cfg).splitlines())
    man.write(out)
    return EXIT_OK


def run_validate(cfg: RunConfig) -> int:
    results = run_checks(cfg)
    for line in report_lines(results):
        print(line)
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_VALIDATE_FAIL


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(
        prog="jtcavity",
        description="Cavity Jahn-Teller polariton spectra and dynamics")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (("vibronic", "bare-molecule level table and sticks"),
                        ("spectrum", "polariton sector spectrum"),
                        ("dynamics", "pulse-driven polarization traces"),
                        ("validate", "run the invariant suite")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="path to a run configuration file")
    args = parser.parse_args(argv)
    handlers = {"vibronic": run_vibronic, "spectrum": run_spectrum,
                "dynamics": run_dynamics, "validate": run_validate}
    try:
        cfg = _load_config(args.config)
        return handlers[args.command](cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DenseLimitError as exc:
        print(f"dense limit: {exc}", file=sys.stderr)
        return EXIT_DENSE_LIMIT
    except PropagationError as exc:
        print(f"propagation aborted: {exc}", file=sys.stderr)
        return EXIT_PROPAGATION


if __name__ == "__main__":
    sys.exit(main())
