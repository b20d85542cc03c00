"""Unit system: all energies in eV, all times in fs.

Angular frequencies are energies divided by HBAR_EV_FS, so a state of
energy E evolves as exp(-i E t / HBAR_EV_FS).
"""

HBAR_EV_FS = 0.6582119569  # eV * fs
