"""Run configuration: a single JSON object, validated into :class:`RunConfig`.

Schema (flat, unknown keys rejected)::

    {
      "eta": 0.2, "nu": 1.0, "omega": 0.5,      # required
      "t_max": 50.0,                            # required, units of 1/nu
      "delta": 0.0,                             # must be 0
      "truncation": 60, "samples": 500,
      "mode": "evolve",                         # spectrum | evolve | validate | compare
      "output_path": null, "output_format": "csv",
      "initial": {"motional": "coherent", "alpha": [re, im],
                  "n": 0, "c_e": [re, im], "c_g": [re, im]}
    }

``initial`` may be omitted or given as the string ``"paper"``: the state
``(1/sqrt2) |beta> (|g> - |e>)`` with ``beta = -i eta / 2``.
"""
from __future__ import annotations

import json
import numbers
from dataclasses import dataclass

import numpy as np

from .dynamics import InitialStateSpec
from .model import SystemParams

__all__ = ["ConfigError", "RunConfig", "parse_config", "load_config", "MODES", "FORMATS"]

MODES = ("spectrum", "evolve", "validate", "compare")
FORMATS = ("csv", "json")
DEFAULTS = {
    "delta": 0.0,
    "truncation": 60,
    "samples": 500,
    "mode": "evolve",
    "output_path": None,
    "output_format": "csv",
    "initial": "paper",
}
REQUIRED = ("eta", "nu", "omega", "t_max")
INITIAL_KEYS = {"motional", "alpha", "n", "c_e", "c_g"}


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class RunConfig:
    params: SystemParams
    truncation: int
    initial: InitialStateSpec
    t_max: float
    samples: int
    mode: str = "evolve"
    output_path: str | None = None
    output_format: str = "csv"

    @property
    def t_grid(self) -> np.ndarray:
        return np.linspace(0.0, self.t_max, self.samples)

    def manifest(self) -> dict:
        """Fully resolved config as plain JSON types."""
        ini = self.initial
        return {
            "eta": self.params.eta,
            "nu": self.params.nu,
            "omega": self.params.omega,
            "delta": self.params.delta,
            "truncation": self.truncation,
            "t_max": self.t_max,
            "samples": self.samples,
            "mode": self.mode,
            "output_path": self.output_path,
            "output_format": self.output_format,
            "initial": {
                "motional": ini.motional,
                "alpha": _pair(ini.alpha),
                "n": ini.n,
                "c_e": _pair(ini.c_e),
                "c_g": _pair(ini.c_g),
            },
        }


def _pair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _real(doc, key, path=None):
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise ConfigError(f"{path or key}: expected a number, got {value!r}")
    return float(value)


def _int(doc, key, path=None):
    value = doc[key]
    if isinstance(value, bool) or not isinstance(value, numbers.Integral):
        raise ConfigError(f"{path or key}: expected an integer, got {value!r}")
    return int(value)


def _complex(value, path) -> complex:
    if isinstance(value, numbers.Real) and not isinstance(value, bool):
        return complex(value)
    if (
        isinstance(value, (list, tuple))
        and len(value) == 2
        and all(isinstance(v, numbers.Real) and not isinstance(v, bool) for v in value)
    ):
        return complex(value[0], value[1])
    raise ConfigError(f"{path}: expected a number or [re, im], got {value!r}")


def _initial(raw, params: SystemParams) -> InitialStateSpec:
    if raw == "paper":
        return InitialStateSpec.paper(params)
    if not isinstance(raw, dict):
        raise ConfigError(f"initial: expected \"paper\" or an object, got {raw!r}")
    unknown = set(raw) - INITIAL_KEYS
    if unknown:
        raise ConfigError(f"initial.{sorted(unknown)[0]}: unknown key")
    motional = raw.get("motional", "coherent")
    if motional not in ("coherent", "fock"):
        raise ConfigError(f"initial.motional: expected 'coherent' or 'fock', got {motional!r}")
    n = _int(raw, "n", "initial.n") if "n" in raw else 0
    try:
        return InitialStateSpec(
            motional=motional,
            alpha=_complex(raw.get("alpha", 0.0), "initial.alpha"),
            n=n,
            c_e=_complex(raw.get("c_e", 1.0), "initial.c_e"),
            c_g=_complex(raw.get("c_g", 0.0), "initial.c_g"),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(f"initial: {exc}") from None


def parse_config(text: str | dict) -> RunConfig:
    """Parse and validate a JSON config document (or an already-decoded dict)."""
    if isinstance(text, dict):
        doc = dict(text)
    else:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"<document>: invalid JSON ({exc})") from None
    if not isinstance(doc, dict):
        raise ConfigError("<document>: top level must be an object")

    unknown = set(doc) - set(REQUIRED) - set(DEFAULTS)
    if unknown:
        raise ConfigError(f"{sorted(unknown)[0]}: unknown key")
    for key in REQUIRED:
        if key not in doc:
            raise ConfigError(f"{key}: missing required key")
    doc = {**DEFAULTS, **doc}

    eta, nu, omega, delta = (_real(doc, k) for k in ("eta", "nu", "omega", "delta"))
    if eta < 0:
        raise ConfigError(f"eta: must satisfy eta >= 0, got {eta}")
    if nu <= 0:
        raise ConfigError(f"nu: must satisfy nu > 0, got {nu}")
    if omega < 0:
        raise ConfigError(f"omega: must satisfy omega >= 0, got {omega}")

    mode = doc["mode"]
    if mode not in MODES:
        raise ConfigError(f"mode: expected one of {MODES}, got {mode!r}")
    if delta != 0:
        raise ConfigError(f"delta: out-of-scope detuning ({delta}); mode {mode!r} requires delta = 0")

    truncation = _int(doc, "truncation")
    if truncation < 8:
        raise ConfigError(f"truncation: must be >= 8, got {truncation}")
    samples = _int(doc, "samples")
    if samples < 2:
        raise ConfigError(f"samples: must be >= 2, got {samples}")
    t_max = _real(doc, "t_max")
    if t_max <= 0:
        raise ConfigError(f"t_max: must be > 0, got {t_max}")

    fmt = doc["output_format"]
    if fmt not in FORMATS:
        raise ConfigError(f"output_format: expected one of {FORMATS}, got {fmt!r}")
    out = doc["output_path"]
    if out is not None and not isinstance(out, str):
        raise ConfigError(f"output_path: expected a string, got {out!r}")

    params = SystemParams(eta, nu, omega, delta)
    initial = _initial(doc["initial"], params)
    if initial.motional == "fock" and initial.n >= truncation:
        raise ConfigError(f"initial.n: Fock index {initial.n} must be < truncation {truncation}")
    return RunConfig(params, truncation, initial, t_max, samples, mode, out, fmt)


def load_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config(fh.read())
