"""Run configuration: a flat, sectioned key-value file with explicit
units in the key names. Unknown sections or keys are rejected, naming
the offender, so physics runs stay auditable.
"""

import configparser
import io
from dataclasses import dataclass, field, fields, replace
from typing import List, Optional, Tuple

from .collective import Retention
from .molecule import ModelParams

AUTO = "auto"


class ConfigError(ValueError):
    """Bad configuration; the message names the offending key."""


@dataclass(frozen=True)
class RunConfig:
    # [model]
    omega_eV: float = 0.08196
    epsilon_eV: float = 7.0
    kappa_eV: float = 0.180312          # kappa / omega = 2.2
    n_max: int = 18
    # [cavity]
    omega_c_eV: float | str = AUTO      # auto = resonant with brightest stick
    Omega_eV: float | str = AUTO        # auto = 0.1 * omega_c  (Omega/2wc = 0.05)
    n_molecules: int = 1
    # [sector]
    n_ex: int = 1
    j: int = -1
    # [spectrum]
    method: str = "dense"               # dense | lanczos
    fwhm_eV: float = 0.01
    window_eV: str | Tuple[float, float] = AUTO  # auto: full N=1, (6.2,7.6) N>=2
    lanczos_iterations: int = 400
    dense_limit: int = 12_000
    # [dynamics]
    pulse_energy_eV: float = 1e-3       # d0 = mu01 * E0
    carrier_eV: float = 7.24
    tau_fs: float = 20.0
    polarizations: Tuple[str, ...] = ("RCP",)
    dt_fs: float = 0.01
    t_end_fs: float = 200.0
    stride_fs: float = 0.1
    # [vibronic]
    v_min: int = -4
    v_max: int = 4
    # [retention]
    max_levels_per_sector: Optional[int] = None
    v_cap: Optional[int] = None
    # [output]
    directory: str = "runs/default"

    def model_params(self) -> ModelParams:
        return ModelParams(omega=self.omega_eV, epsilon=self.epsilon_eV,
                           kappa=self.kappa_eV, n_max=self.n_max)

    def retention(self) -> Retention:
        return Retention(max_levels_per_sector=self.max_levels_per_sector,
                         v_cap=self.v_cap)


def _parse_float(s):
    return float(s)


def _parse_auto_float(s):
    return AUTO if s.strip().lower() == AUTO else float(s)


def _parse_int(s):
    return int(s)


def _parse_opt_int(s):
    return None if s.strip().lower() in ("none", "") else int(s)


def _parse_window(s):
    s = s.strip()
    if s.lower() == AUTO:
        return AUTO
    if s.lower() == "full":
        return "full"
    lo, hi = (float(x) for x in s.split(","))
    return (lo, hi)


def _parse_pols(s):
    pols = tuple(p.strip().upper() for p in s.split(",") if p.strip())
    for p in pols:
        if p not in ("RCP", "LCP"):
            raise ConfigError(f"invalid polarization {p!r}")
    if not pols:
        raise ConfigError("polarizations must name RCP and/or LCP")
    return pols


def _parse_method(s):
    m = s.strip().lower()
    if m not in ("dense", "lanczos"):
        raise ConfigError(f"invalid method {m!r} (dense or lanczos)")
    return m


def _parse_str(s):
    return s.strip()


# section -> key -> (attribute, parser)
SCHEMA = {
    "model": {
        "omega_eV": ("omega_eV", _parse_float),
        "epsilon_eV": ("epsilon_eV", _parse_float),
        "kappa_eV": ("kappa_eV", _parse_float),
        "n_max": ("n_max", _parse_int),
    },
    "cavity": {
        "omega_c_eV": ("omega_c_eV", _parse_auto_float),
        "Omega_eV": ("Omega_eV", _parse_auto_float),
        "n_molecules": ("n_molecules", _parse_int),
    },
    "sector": {
        "n_ex": ("n_ex", _parse_int),
        "j": ("j", _parse_int),
    },
    "spectrum": {
        "method": ("method", _parse_method),
        "fwhm_eV": ("fwhm_eV", _parse_float),
        "window_eV": ("window_eV", _parse_window),
        "lanczos_iterations": ("lanczos_iterations", _parse_int),
        "dense_limit": ("dense_limit", _parse_int),
    },
    "dynamics": {
        "pulse_energy_eV": ("pulse_energy_eV", _parse_float),
        "carrier_eV": ("carrier_eV", _parse_float),
        "tau_fs": ("tau_fs", _parse_float),
        "polarizations": ("polarizations", _parse_pols),
        "dt_fs": ("dt_fs", _parse_float),
        "t_end_fs": ("t_end_fs", _parse_float),
        "stride_fs": ("stride_fs", _parse_float),
    },
    "vibronic": {
        "v_min": ("v_min", _parse_int),
        "v_max": ("v_max", _parse_int),
    },
    "retention": {
        "max_levels_per_sector": ("max_levels_per_sector", _parse_opt_int),
        "v_cap": ("v_cap", _parse_opt_int),
    },
    "output": {
        "directory": ("directory", _parse_str),
    },
}


def parse_config(text: str) -> RunConfig:
    cp = configparser.ConfigParser()
    cp.optionxform = str  # keep key case; units live in the names
    try:
        cp.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from exc
    values = {}
    for section in cp.sections():
        if section not in SCHEMA:
            raise ConfigError(f"unknown config section [{section}]")
        for key, raw in cp.items(section):
            if key not in SCHEMA[section]:
                raise ConfigError(f"unknown config key [{section}] {key}")
            attr, parser = SCHEMA[section][key]
            try:
                values[attr] = parser(raw)
            except ConfigError:
                raise
            except ValueError as exc:
                raise ConfigError(
                    f"bad value for [{section}] {key}: {raw!r}") from exc
    cfg = RunConfig(**values)
    _validate(cfg)
    return cfg


def parse_config_file(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _validate(cfg: RunConfig):
    cfg.model_params()  # raises on bad physical constants
    if cfg.n_molecules < 1:
        raise ConfigError("bad value for [cavity] n_molecules: must be >= 1")
    if cfg.n_ex not in (0, 1):
        raise ConfigError("bad value for [sector] n_ex: must be 0 or 1")
    if cfg.dt_fs <= 0 or cfg.stride_fs <= 0 or cfg.t_end_fs <= 0:
        raise ConfigError("dynamics steps and horizon must be positive")
    if cfg.v_min > cfg.v_max:
        raise ConfigError("bad value for [vibronic] v_min: exceeds v_max")


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)  # shortest exact form, round-trips bitwise
    if isinstance(value, tuple):
        return ",".join(_fmt(v) for v in value)
    if value is None:
        return "none"
    return str(value)


def serialize_config(cfg: RunConfig) -> str:
    """Canonical text form; parse(serialize(cfg)) == cfg."""
    out = io.StringIO()
    for section, keys in SCHEMA.items():
        out.write(f"[{section}]\n")
        for key, (attr, _) in keys.items():
            out.write(f"{key} = {_fmt(getattr(cfg, attr))}\n")
        out.write("\n")
    return out.getvalue()
