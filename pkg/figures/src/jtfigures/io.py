"""CSV and manifest readers for the simulator's output files.

The renderer consumes only the documented file formats; it never links
against the simulator itself, so the two packages evolve independently.
"""

import configparser
import csv
import os
from typing import Dict, List, Optional

REQUIRED_COLUMNS = {
    "vibronic": ["energy_eV", "intensity"],
    "spectrum": ["energy_eV", "intensity", "pr", "polarization"],
    "dynamics": ["t_fs", "polarization_normalized"],
    "heatmap": ["state_index", "v", "probability"],
    "broadened": ["energy_eV", "absorbance"],
}


class MissingColumnError(ValueError):
    """Input CSV lacks a column the figure kind requires."""


def read_columns(path: str, required: List[str]) -> Dict[str, list]:
    """Read a CSV into float columns, failing loudly on absent names."""
    with open(path, "r", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        header = reader.fieldnames or []
        for col in required:
            if col not in header:
                raise MissingColumnError(
                    f"missing column {col!r} in {os.path.basename(path)}")
        out: Dict[str, list] = {c: [] for c in required}
        for row in reader:
            for c in required:
                out[c].append(float(row[c]))
    return out


def read_manifest_omega_c(path: Optional[str]) -> Optional[float]:
    """Resolved cavity frequency from a run manifest, if available."""
    if path is None or not os.path.exists(path):
        return None
    cp = configparser.ConfigParser()
    cp.optionxform = str
    cp.read(path)
    if cp.has_option("resolved", "omega_c_eV"):
        return cp.getfloat("resolved", "omega_c_eV")
    return None


def discover_manifest(csv_path: str) -> Optional[str]:
    cand = os.path.join(os.path.dirname(csv_path) or ".", "manifest.txt")
    return cand if os.path.exists(cand) else None
