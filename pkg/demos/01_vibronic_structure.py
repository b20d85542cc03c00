#!/usr/bin/env python3
"""Single-molecule Jahn-Teller structure, sector by sector.

The E x e Jahn-Teller Hamiltonian conserves the vibronic angular
momentum v = 2(n_+ - n_-) + sigma, so it splits into independent blocks.
Even-v blocks hold the trivial ground manifold |A, n_+, n_->; odd-v
blocks hold the JT-mixed excited states. This script walks the sector
structure at the working parameters (omega = 0.08196 eV, epsilon = 7 eV,
kappa = 2.2 omega) and locates the optically bright excited state that
the cavity will be tuned to.
"""

import numpy as np

from jtcavity import (ModelParams, bare_absorption_sticks,
                      brightest_transition_energy, diagonalize_molecule,
                      sector_states)

params = ModelParams()
print(f"omega = {params.omega} eV, epsilon = {params.epsilon} eV, "
      f"kappa/omega = {params.kappa / params.omega}, n_max = {params.n_max}")

# --- sector dimensions under the Fock cutoff -------------------------------
print("\nsector dimensions (v : states):")
for v in range(-4, 5):
    print(f"  v = {v:+d} : {len(sector_states(v, params.n_max))}")

# --- diagonalize the reachable sectors -------------------------------------
levels, _ = diagonalize_molecule(params, range(-4, 5))
print(f"\n{len(levels)} levels across v in [-4, 4]")

for v in (0, -1, -2):
    sel = [lv for lv in levels if lv.v == v][:4]
    print(f"  lowest levels of sector v = {v:+d}: "
          + ", ".join(f"{lv.energy:.4f}" for lv in sel) + " eV")

# The Jahn-Teller interaction stabilizes the excited manifold: its lowest
# level sits below the bare electronic gap epsilon.
lowest = min(lv.energy for lv in levels if lv.v == -1)
print(f"\nJT stabilization: lowest excited level {lowest:.6f} eV "
      f"(bare gap {params.epsilon} eV, lowering {params.epsilon - lowest:.4f} eV)")

# --- bare absorption from |A,0,0> -------------------------------------------
# An RCP photon promotes |A,0,0> into the v = -1 sector; the stick
# intensity of level i is its squared overlap with |E-,0,0>.
sticks = bare_absorption_sticks(levels, sector=-1)
print("\nbare absorption sticks with intensity > 0.05:")
for e, w in sticks:
    if w > 0.05:
        bar = "#" * int(round(w * 100))
        print(f"  {e:.4f} eV  {w:.4f}  {bar}")

wc = brightest_transition_energy(levels)
print(f"\nbrightest transition: {wc:.6f} eV "
      "(the auto-resonant cavity frequency)")
