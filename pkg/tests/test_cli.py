"""Configuration parsing, run orchestration, determinism and exit codes."""

import os

import numpy as np
import pytest

from jtcavity.cli import main
from jtcavity.config import (ConfigError, RunConfig, parse_config,
                             serialize_config)
from jtcavity.molecule import CouplingTable
from jtcavity.validate import selection_rule_violations


def read(path):
    with open(path, "rb") as fh:
        return fh.read()


def write_cfg(tmp_path, body):
    p = tmp_path / "run.ini"
    p.write_text(body)
    return str(p)


class TestConfig:
    def test_defaults_reproduce_paper_setup(self):
        cfg = RunConfig()
        assert cfg.omega_eV == 0.08196
        assert cfg.epsilon_eV == 7.0
        assert abs(cfg.kappa_eV / cfg.omega_eV - 2.2) <= 1e-12
        assert cfg.n_max == 18
        assert cfg.omega_c_eV == "auto"   # resonant-with-brightest
        assert cfg.Omega_eV == "auto"     # Omega / (2 omega_c) = 0.05

    def test_round_trip_identity(self):
        cfg = RunConfig(omega_c_eV=6.8505891531964265,
                        window_eV=(6.2, 7.6),
                        polarizations=("RCP", "LCP"),
                        max_levels_per_sector=7)
        assert parse_config(serialize_config(cfg)) == cfg
        # twice, to catch formatting drift
        once = serialize_config(cfg)
        again = serialize_config(parse_config(once))
        assert once == again

    def test_unknown_key_named(self):
        with pytest.raises(ConfigError, match="omega_ev_typo"):
            parse_config("[model]\nomega_ev_typo = 1.0\n")

    def test_unknown_section_named(self):
        with pytest.raises(ConfigError, match="cavityy"):
            parse_config("[cavityy]\nn_molecules = 1\n")

    def test_bad_value_named(self):
        with pytest.raises(ConfigError, match="n_max"):
            parse_config("[model]\nn_max = eighteen\n")


class TestExitCodes:
    def test_unknown_key_exit_2(self, tmp_path, capsys):
        cfg = write_cfg(tmp_path, "[model]\nnmax = 18\n")
        assert main(["vibronic", "--config", cfg]) == 2
        assert "nmax" in capsys.readouterr().err

    def test_dense_limit_exit_3(self, tmp_path):
        cfg = write_cfg(tmp_path, (
            "[model]\nn_max = 6\n"
            "[spectrum]\nmethod = dense\ndense_limit = 10\n"
            f"[output]\ndirectory = {tmp_path}/out\n"))
        assert main(["spectrum", "--config", cfg]) == 3

    def test_validate_quick_mode_passes(self, tmp_path):
        cfg = write_cfg(tmp_path, "[model]\nn_max = 4\n")
        assert main(["validate", "--config", cfg]) == 0


class TestVibronicRun:
    def test_kappa_zero_single_stick_at_epsilon(self, tmp_path):
        out = tmp_path / "vib"
        cfg = write_cfg(tmp_path, (
            "[model]\nkappa_eV = 0.0\nn_max = 8\n"
            f"[output]\ndirectory = {out}\n"))
        assert main(["vibronic", "--config", cfg]) == 0
        rows = read(out / "bare_sticks.csv").decode().strip().splitlines()[1:]
        big = [(float(e), float(w)) for e, w in
               (r.split(",") for r in rows) if float(w) > 1e-12]
        assert len(big) == 1
        assert abs(big[0][0] - 7.0) <= 1e-9
        assert abs(big[0][1] - 1.0) <= 1e-9

    def test_default_grouped_levels(self, tmp_path):
        out = tmp_path / "vib2"
        cfg = write_cfg(tmp_path, (
            "[model]\nn_max = 8\n"
            f"[output]\ndirectory = {out}\n"))
        assert main(["vibronic", "--config", cfg]) == 0
        man = read(out / "manifest.txt").decode()
        assert "brightest_transition_eV" in man
        bright = float(next(l.split("=")[1] for l in man.splitlines()
                            if l.startswith("brightest_transition_eV")))
        assert abs(bright - 6.85) < 0.05


class TestDeterminism:
    def test_byte_identical_rerun(self, tmp_path):
        out = tmp_path / "out"
        names = ("sticks.csv", "broadened.csv", "spectrum.csv",
                 "heatmap.csv", "basis.csv", "resolved_config.ini")
        cfg = write_cfg(tmp_path, (
            "[model]\nn_max = 8\n"
            "[spectrum]\nmethod = dense\n"
            f"[output]\ndirectory = {out}\n"))
        assert main(["spectrum", "--config", cfg]) == 0
        first = {name: read(out / name) for name in names}
        assert main(["spectrum", "--config", cfg]) == 0
        for name in names:
            assert read(out / name) == first[name], name

    def test_dynamics_csv_columns(self, tmp_path):
        out = tmp_path / "dyn"
        cfg = write_cfg(tmp_path, (
            "[model]\nn_max = 6\n"
            "[dynamics]\nt_end_fs = 2.0\npolarizations = RCP\n"
            f"[output]\ndirectory = {out}\n"))
        assert main(["dynamics", "--config", cfg]) == 0
        header = read(out / "trajectory_rcp.csv").decode().splitlines()[0]
        assert header == ("t_fs,polarization,polarization_normalized,"
                          "excited_population,reautocorr,imautocorr")


class TestValidateMutation:
    def test_injected_beta_sign_error_fails_selection_rules(self, levels18,
                                                            couplings18):
        # flipping the beta selection rule (entries keyed as if
        # v_i = v_j - 1) must be caught by the rule check
        bad = CouplingTable(alpha=dict(couplings18.alpha), beta={})
        for (i, j), c in couplings18.beta.items():
            vi = levels18[i].v
            vj = levels18[j].v
            assert vi == vj + 1
            # rekey onto the sign-flipped sector pairing where possible
            cands = [g for g, lv in enumerate(levels18) if lv.v == vj - 1]
            if cands:
                bad.beta[(cands[0], j)] = c
        assert selection_rule_violations(levels18, couplings18) == 0
        assert selection_rule_violations(levels18, bad) > 0

    def test_spectrum_run_emits_all_files(self, tmp_path):
        out = tmp_path / "spec"
        cfg = write_cfg(tmp_path, (
            "[model]\nn_max = 6\n"
            f"[output]\ndirectory = {out}\n"))
        assert main(["spectrum", "--config", cfg]) == 0
        for name in ("sticks.csv", "broadened.csv", "spectrum.csv",
                     "heatmap.csv", "basis.csv", "manifest.txt",
                     "resolved_config.ini"):
            assert os.path.exists(out / name), name
        man = read(out / "manifest.txt").decode()
        assert "omega_c_eV" in man and "dim_total" in man
