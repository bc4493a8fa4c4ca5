"""Actuator specification files: INI-style sections mirroring the model types.

Example::

    [tube]
    l0_mm = 100.0
    rf_mm = 1.0
    df_mm = 0.5
    ge_mpa = 0.6

    [design]
    pattern = zigzag
    w_mm = 7.0
    stitch_interval_mm = 1.0
    orientation_sign = auto

    [model]
    g_mpa = 2.7
    p0_kpa = auto
    beta0_mode = verbatim-mm

Values in display units (mm, kPa, MPa, deg).  ``auto`` (or omission) leaves
a value to be derived: the transition state from the tube and design, the
orientation sign from the per-pattern default.  Unknown sections or keys are
rejected by name, so typos cannot silently fall back to defaults.
"""

from __future__ import annotations

import configparser
from typing import Dict

_SCHEMA = {
    "tube": {"l0_mm", "rf_mm", "df_mm", "ge_mpa"},
    "design": {"pattern", "w_mm", "alpha0_deg", "stitch_interval_mm", "orientation_sign"},
    "model": {"g_mpa", "p0_kpa", "r0_mm", "beta0_deg", "beta0_mode"},
}

_STRING_KEYS = {"pattern", "beta0_mode"}


class ConfigError(ValueError):
    """Malformed actuator configuration file."""


def load_config(path) -> Dict[str, object]:
    """Parse an actuator config file into a flat {key: value} dict.

    Numeric values come back as floats, ``auto`` as ``None``; keys keep
    their file names (``w_mm``, ``g_mpa``, ...).  Raises
    :class:`ConfigError` naming any unknown section or key.
    """
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found: {path}")
    out: Dict[str, object] = {}
    for section in parser.sections():
        if section not in _SCHEMA:
            raise ConfigError(f"{path}: unknown section [{section}]")
        for key, raw in parser.items(section):
            if key not in _SCHEMA[section]:
                raise ConfigError(f"{path}: unknown key {key!r} in section [{section}]")
            value = raw.strip()
            if value.lower() in ("auto", ""):
                out[key] = None
            elif key in _STRING_KEYS:
                out[key] = value.lower()
            elif key == "orientation_sign":
                if value.lower() == "auto":
                    out[key] = None
                elif value in ("+1", "1", "-1"):
                    out[key] = int(value)
                else:
                    raise ConfigError(
                        f"{path}: orientation_sign must be +1, -1 or auto, got {value!r}"
                    )
            else:
                try:
                    out[key] = float(value)
                except ValueError:
                    raise ConfigError(
                        f"{path}: key {key!r} in [{section}]: not a number: {value!r}"
                    )
    return out
