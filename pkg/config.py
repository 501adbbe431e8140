"""
evasilab configuration
Budgets, caps and seeds for every search. Read from defaults, then an
optional config file (dotenv KEY=VALUE or JSON), then the environment.
"""

import json
import os
from dataclasses import dataclass, fields, replace
from fractions import Fraction

from dotenv import dotenv_values, load_dotenv

from errors import ConfigError

load_dotenv()

# Environment keys, one per Config field
ENV_PREFIX = "EVLAB_"

OUTPUT_FORMATS = {
    "json": {"label": "JSON (sorted keys, compact)"},
    "tsv": {"label": "Tab-separated rows"},
    "xlsx": {"label": "Excel workbook (openpyxl)"},
}

MEMO_KEYS = {
    "restriction": {"label": "queried mask + assignment"},
    "table": {"label": "subfunction truth table"},
}


@dataclass(frozen=True)
class Config:
    dtc_budget: int = 5_000_000        # decision-tree search nodes
    enum_cap: int = 10_000_000         # group element enumeration
    prime_cap: int = 2 ** 40           # Dirichlet / window scans
    seed: int = 20240601
    output_format: str = "json"
    max_orbits: int = 24               # fixed-point complex orbit cap
    property_cap: int = 200_000        # monotone-property enumeration
    memo_key: str = "restriction"
    workers: int = 1                   # processes for the 2^N scans
    pqr_constant: Fraction = Fraction(1, 32)
    oliver_trials: int = 100
    erh_eps: Fraction = Fraction(1, 20)
    chowla_delta: Fraction = Fraction(1, 10)
    ark_n: int = 4                     # vertices for the exhaustive evasiveness check

    def validate(self):
        for name in ("dtc_budget", "enum_cap", "prime_cap", "max_orbits",
                     "property_cap", "workers", "oliver_trials", "ark_n"):
            if getattr(self, name) <= 0:
                raise ConfigError(f"{name} must be positive, got {getattr(self, name)}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"output_format must be one of {sorted(OUTPUT_FORMATS)}")
        if self.memo_key not in MEMO_KEYS:
            raise ConfigError(f"memo_key must be one of {sorted(MEMO_KEYS)}")
        if self.pqr_constant <= 0:
            raise ConfigError("pqr_constant must be positive")
        return self

    def to_dict(self):
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            out[f.name] = str(value) if isinstance(value, Fraction) else value
        return out


def _coerce(name, raw):
    """Convert a raw string/JSON value to the type of Config.<name>."""
    default = getattr(Config, name)
    try:
        if isinstance(default, Fraction):
            return Fraction(str(raw))
        if isinstance(default, int):
            return int(str(raw).replace("_", ""), 0) if isinstance(raw, str) else int(raw)
        return str(raw)
    except (TypeError, ValueError, ZeroDivisionError) as e:
        raise ConfigError(f"bad value for {name}: {raw!r} ({e})")


def _read_file(path):
    if not os.path.exists(path):
        raise ConfigError(f"config file not found: {path}")
    if path.endswith(".json"):
        try:
            with open(path) as fh:
                data = json.load(fh)
        except json.JSONDecodeError as e:
            raise ConfigError(f"config file {path} is not valid JSON: {e}")
        if not isinstance(data, dict):
            raise ConfigError("JSON config must be an object")
        return {k.lower(): v for k, v in data.items()}
    values = dotenv_values(path)
    return {k[len(ENV_PREFIX):].lower() if k.startswith(ENV_PREFIX) else k.lower(): v
            for k, v in values.items() if v is not None}


def load_config(path=None, environ=None):
    """Build a validated Config: defaults < file < environment."""
    environ = os.environ if environ is None else environ
    known = {f.name for f in fields(Config)}
    overrides = {}

    if path:
        for key, raw in _read_file(path).items():
            if key not in known:
                raise ConfigError(f"unknown config key: {key}")
            overrides[key] = _coerce(key, raw)

    for name in known:
        raw = environ.get(ENV_PREFIX + name.upper())
        if raw is not None and raw != "":
            overrides[name] = _coerce(name, raw)

    return replace(Config(), **overrides).validate()
