"""JSON configuration with layered precedence.

Resolution order, lowest to highest: shipped defaults, config file,
command-line flags.  The schema (all keys optional):

    {
      "snr_min": 8.0,            // dB, applies to every scheme
      "snr_max": 32.0,
      "support_ms": 25.0,        // band-pass filter support
      "materials_path": "...",   // JSON registry overriding shipped materials
      "schemes": {
        "bandlimited": {"omega_min": 50.0, "omega_max": 800.0, "p": 8},
        "notch":       {"omega_min": 5000.0, "omega_max": 8000.0, "p": 8},
        "widepass":    {"omega_min": 50.0, "omega_max": 7950.0, "p": 8},
        "rir": {
          "rooms": [[4.0, 4.0, 2.5], [10.0, 10.0, 3.5], [2.5, 1.5, 1.5]],
          "materials": ["hard_surface", "hairy_carpet"],
          "d_min": 0.03, "d_max": 3.0, "max_order": 8
        }
      }
    }
"""

from __future__ import annotations

import json

from .augment import AugmentConfig, AugmentScheme, SnrRange
from .errors import ParameterError
from .room import load_materials

_SCHEME_KEYS = {
    AugmentScheme.BANDLIMITED: ("omega_min", "omega_max", "p"),
    AugmentScheme.NOTCH: ("omega_min", "omega_max", "p"),
    AugmentScheme.WIDEPASS: ("omega_min", "omega_max", "p"),
    AugmentScheme.RIR: ("rooms", "materials", "d_min", "d_max", "max_order"),
}


def load_config(path) -> dict:
    """Parse a configuration file; unknown top-level keys are rejected."""
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise ParameterError(f"{path}: config root must be an object")
    allowed = {"snr_min", "snr_max", "support_ms", "materials_path", "schemes"}
    unknown = set(raw) - allowed
    if unknown:
        raise ParameterError(f"{path}: unknown config keys {sorted(unknown)}")
    return raw


def build_config(
    scheme,
    file_cfg: dict | None = None,
    snr_min: float | None = None,
    snr_max: float | None = None,
) -> AugmentConfig:
    """Materialize an AugmentConfig from the three precedence layers."""
    scheme = AugmentScheme(scheme)
    cfg = AugmentConfig.defaults(scheme)
    file_cfg = file_cfg or {}

    if "support_ms" in file_cfg:
        cfg.support_ms = float(file_cfg["support_ms"])
    if "materials_path" in file_cfg and file_cfg["materials_path"]:
        cfg.material_registry = load_materials(file_cfg["materials_path"])

    section = (file_cfg.get("schemes") or {}).get(scheme.value, {})
    unknown = set(section) - set(_SCHEME_KEYS[scheme])
    if unknown:
        raise ParameterError(
            f"unknown keys {sorted(unknown)} for scheme {scheme.value!r}"
        )
    for key, value in section.items():
        if key == "rooms":
            cfg.rooms = tuple(tuple(float(d) for d in dims) for dims in value)
        elif key == "materials":
            cfg.materials = tuple(str(m) for m in value)
        elif key in ("p", "max_order"):
            setattr(cfg, key, int(value))
        else:
            setattr(cfg, key, float(value))

    gamma_min = cfg.snr.gamma_min
    gamma_max = cfg.snr.gamma_max
    if "snr_min" in file_cfg:
        gamma_min = float(file_cfg["snr_min"])
    if "snr_max" in file_cfg:
        gamma_max = float(file_cfg["snr_max"])
    if snr_min is not None:
        gamma_min = float(snr_min)
    if snr_max is not None:
        gamma_max = float(snr_max)
    cfg.snr = SnrRange(gamma_min, gamma_max)
    return cfg
