"""Rendering from the committed reference CSVs (produced by the
simulator CLI at default parameters). Covers the four kinds, byte
determinism, the PR color contract for N=1, and error reporting."""

import os

import pytest

from jtfigures import FigureJob, MissingColumnError, pr_color_norm, render
from jtfigures.cli import main

DATA = os.path.join(os.path.dirname(__file__), "data")
SPEC = os.path.join(DATA, "spectrum_n1")
DYN = os.path.join(DATA, "dynamics_n1")
VIB = os.path.join(DATA, "vibronic")


def read_bytes(path):
    with open(path, "rb") as fh:
        return fh.read()


class TestKinds:
    def test_vibronic(self, tmp_path):
        out = str(tmp_path / "vib.svg")
        facts = render(FigureJob("vibronic",
                                 [os.path.join(VIB, "bare_sticks.csv")], out))
        assert facts["n_sticks"] == 35
        assert read_bytes(out).startswith(b"<?xml")

    def test_spectrum_with_overlay_and_annotation(self, tmp_path):
        out = str(tmp_path / "spec.svg")
        facts = render(FigureJob(
            "spectrum",
            [os.path.join(SPEC, "spectrum.csv"),
             os.path.join(SPEC, "broadened.csv")], out))
        assert facts["n_sticks"] == 70
        assert facts["lp_up_annotated"]  # omega_c found via manifest.txt
        assert os.path.getsize(out) > 0

    def test_spectrum_n1_colors_span_pr_1_to_3(self, tmp_path):
        out = str(tmp_path / "spec.svg")
        facts = render(FigureJob("spectrum",
                                 [os.path.join(SPEC, "spectrum.csv")], out))
        assert facts["pr_norm"] == (1.0, 3.0)

    def test_dynamics_mirror_overlay(self, tmp_path):
        out = str(tmp_path / "dyn.svg")
        facts = render(FigureJob(
            "dynamics",
            [os.path.join(DYN, "trajectory_rcp.csv"),
             os.path.join(DYN, "trajectory_lcp.csv")], out))
        assert facts["n_traces"] == 2

    def test_heatmap(self, tmp_path):
        out = str(tmp_path / "heat.svg")
        facts = render(FigureJob("heatmap",
                                 [os.path.join(SPEC, "heatmap.csv")], out))
        assert facts["n_states"] == 70
        assert facts["n_sectors"] == 3

    def test_single_stick(self, tmp_path):
        csv = tmp_path / "one.csv"
        csv.write_text("energy_eV,intensity\n7.0,1.0\n")
        facts = render(FigureJob("vibronic", [str(csv)],
                                 str(tmp_path / "one.svg")))
        assert facts["n_sticks"] == 1


class TestDeterminism:
    def test_same_inputs_same_bytes(self, tmp_path):
        outs = []
        for tag in ("a", "b"):
            out = str(tmp_path / f"{tag}.svg")
            render(FigureJob("spectrum",
                             [os.path.join(SPEC, "spectrum.csv")], out,
                             window=(6.2, 7.6)))
            outs.append(out)
        assert read_bytes(outs[0]) == read_bytes(outs[1])


class TestErrors:
    def test_missing_column_named(self, tmp_path):
        csv = tmp_path / "bad.csv"
        csv.write_text("energy_eV,weight\n7.0,1.0\n")
        with pytest.raises(MissingColumnError, match="intensity"):
            render(FigureJob("vibronic", [str(csv)],
                             str(tmp_path / "x.svg")))

    def test_unknown_kind(self, tmp_path):
        with pytest.raises(ValueError, match="kind"):
            FigureJob("scatter", ["x.csv"], str(tmp_path / "x.svg"))

    def test_pr_norm_widens_beyond_three(self):
        assert pr_color_norm([1.0, 2.0, 17.5]) == (1.0, 17.5)


class TestCli:
    def test_spectrum_command(self, tmp_path):
        out = str(tmp_path / "cli.svg")
        rc = main(["spectrum", "--in", os.path.join(SPEC, "spectrum.csv"),
                   "--out", out, "--window", "6.2,7.6"])
        assert rc == 0
        assert os.path.exists(out)

    def test_missing_column_exit_code(self, tmp_path, capsys):
        csv = tmp_path / "bad.csv"
        csv.write_text("a,b\n1,2\n")
        rc = main(["heatmap", "--in", str(csv),
                   "--out", str(tmp_path / "x.svg")])
        assert rc == 1
        assert "state_index" in capsys.readouterr().err

    def test_bad_window_exit_code(self, tmp_path):
        rc = main(["spectrum", "--in", os.path.join(SPEC, "spectrum.csv"),
                   "--out", str(tmp_path / "x.svg"), "--window", "wide"])
        assert rc == 2
