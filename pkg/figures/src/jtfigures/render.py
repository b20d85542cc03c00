"""Deterministic figure rendering from simulator CSVs.

Four kinds: "vibronic" (bare absorption stems), "spectrum" (polariton
stems colored by participation ratio, LP/UP bands relative to the cavity
frequency), "dynamics" (normalized polarization traces, overlaid), and
"heatmap" (sector population map). SVG output is byte-reproducible: a
fixed hash salt, no embedded dates, fonts rendered as paths.
"""

import os
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.colors import Normalize  # noqa: E402

from .io import (REQUIRED_COLUMNS, discover_manifest, read_columns,
                 read_manifest_omega_c)

KINDS = ("vibronic", "spectrum", "dynamics", "heatmap")

plt.rcParams["svg.hashsalt"] = "jtfigures"
plt.rcParams["svg.fonttype"] = "path"

_SAVEFIG_META = {"Date": None}


@dataclass
class FigureJob:
    """One rendering task: what to draw, from which CSVs, to which file."""

    kind: str
    inputs: List[str]
    output: str
    window: Optional[Tuple[float, float]] = None
    colormap: str = "viridis"
    manifest: Optional[str] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown figure kind {self.kind!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")


def pr_color_norm(prs) -> Tuple[float, float]:
    """Color range for participation-ratio stems: anchored at PR = 1 and
    never narrower than the single-molecule bound of 3."""
    top = max(3.0, float(np.max(prs)))
    return 1.0, top


def render(job: FigureJob) -> Dict[str, object]:
    """Draw the figure and return facts about what was drawn."""
    if job.kind == "vibronic":
        facts = _render_vibronic(job)
    elif job.kind == "spectrum":
        facts = _render_spectrum(job)
    elif job.kind == "dynamics":
        facts = _render_dynamics(job)
    else:
        facts = _render_heatmap(job)
    return facts


def _new_axes():
    fig, ax = plt.subplots(figsize=(6.4, 3.6), dpi=100)
    return fig, ax


def _finish(fig, ax, job, xlabel, ylabel):
    ax.set_xlabel(xlabel)
    ax.set_ylabel(ylabel)
    if job.window is not None and job.kind != "dynamics":
        ax.set_xlim(*job.window)
    fig.tight_layout()
    os.makedirs(os.path.dirname(job.output) or ".", exist_ok=True)
    fig.savefig(job.output, format=_format_of(job.output),
                metadata=_SAVEFIG_META if job.output.endswith(".svg") else None)
    plt.close(fig)


def _format_of(path):
    ext = os.path.splitext(path)[1].lstrip(".").lower()
    return ext or "svg"


def _render_vibronic(job: FigureJob) -> Dict[str, object]:
    cols = read_columns(job.inputs[0], REQUIRED_COLUMNS["vibronic"])
    e = np.array(cols["energy_eV"])
    w = np.array(cols["intensity"])
    fig, ax = _new_axes()
    ml, sl, _ = ax.stem(e, w, basefmt=" ")
    plt.setp(ml, markersize=2.5, color="#555555")
    plt.setp(sl, linewidth=1.2, color="#555555")
    _finish(fig, ax, job, "energy / eV", "intensity")
    return {"n_sticks": int(len(e))}


def _render_spectrum(job: FigureJob) -> Dict[str, object]:
    cols = read_columns(job.inputs[0], REQUIRED_COLUMNS["spectrum"])
    e = np.array(cols["energy_eV"])
    w = np.array(cols["intensity"])
    pr = np.array(cols["pr"])
    vmin, vmax = pr_color_norm(pr)
    norm = Normalize(vmin=vmin, vmax=vmax)
    cmap = plt.get_cmap(job.colormap)
    fig, ax = _new_axes()
    for x, y, p in zip(e, w, pr):
        ax.plot([x, x], [0.0, y], color=cmap(norm(p)), linewidth=1.4)
    for extra in job.inputs[1:]:
        curve = read_columns(extra, REQUIRED_COLUMNS["broadened"])
        ce = np.array(curve["energy_eV"])
        ca = np.array(curve["absorbance"])
        top = w.max() if len(w) else 1.0
        ax.plot(ce, ca / ca.max() * top, color="#bb3333", linewidth=1.0,
                alpha=0.8)
    manifest = job.manifest or discover_manifest(job.inputs[0])
    omega_c = read_manifest_omega_c(manifest)
    annotated = False
    if omega_c is not None:
        ax.axvline(omega_c, color="#999999", linestyle=":", linewidth=0.9)
        lo, hi = ax.get_xlim() if job.window is None else job.window
        ax.text(0.5 * (lo + omega_c), 0.97, "LP", transform=ax.get_xaxis_transform(),
                ha="center", va="top", fontsize=9, color="#444444")
        ax.text(0.5 * (omega_c + hi), 0.97, "UP", transform=ax.get_xaxis_transform(),
                ha="center", va="top", fontsize=9, color="#444444")
        annotated = True
    sm = plt.cm.ScalarMappable(norm=norm, cmap=cmap)
    fig.colorbar(sm, ax=ax, label="participation ratio")
    _finish(fig, ax, job, "energy / eV", "intensity")
    return {"n_sticks": int(len(e)), "pr_norm": (vmin, vmax),
            "lp_up_annotated": annotated}


def _render_dynamics(job: FigureJob) -> Dict[str, object]:
    fig, ax = _new_axes()
    colors = ("#cc5500", "#222222", "#3366aa", "#55aa55")
    n = 0
    for k, path in enumerate(job.inputs):
        cols = read_columns(path, REQUIRED_COLUMNS["dynamics"])
        t = np.array(cols["t_fs"])
        p = np.array(cols["polarization_normalized"])
        label = os.path.splitext(os.path.basename(path))[0]
        ax.plot(t, p, color=colors[k % len(colors)], linewidth=1.2,
                label=label)
        n += 1
    if job.window is not None:
        ax.set_xlim(*job.window)
    ax.axhline(0.0, color="#aaaaaa", linewidth=0.6)
    ax.legend(frameon=False, fontsize=8)
    _finish(fig, ax, job, "time / fs", "normalized photon polarization")
    return {"n_traces": n}


def _render_heatmap(job: FigureJob) -> Dict[str, object]:
    cols = read_columns(job.inputs[0], REQUIRED_COLUMNS["heatmap"])
    idx = np.array(cols["state_index"], dtype=int)
    v = np.array(cols["v"], dtype=int)
    p = np.array(cols["probability"])
    states = np.unique(idx)
    sectors = np.unique(v)
    M = np.zeros((len(states), len(sectors)))
    srow = {s: r for r, s in enumerate(states)}
    vcol = {x: c for c, x in enumerate(sectors)}
    for i, vv, pp in zip(idx, v, p):
        M[srow[i], vcol[vv]] = pp
    fig, ax = _new_axes()
    im = ax.imshow(M.T, aspect="auto", origin="lower", cmap=job.colormap,
                   extent=(states.min() - 0.5, states.max() + 0.5,
                           sectors.min() - 0.5, sectors.max() + 0.5))
    fig.colorbar(im, ax=ax, label="occupation probability")
    _finish(fig, ax, job, "polariton index", "vibronic sector v")
    return {"n_states": int(len(states)), "n_sectors": int(len(sectors))}
