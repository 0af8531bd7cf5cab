"""
Run Configuration

Documented defaults, the RunConfig dataclass echoed into every report, and
the merge of built-in defaults, an optional JSON config file and
command-line flags (command line wins).
"""

import json
import os
from dataclasses import asdict, dataclass, fields
from typing import Any, Optional

from errors import ConfigError


# ============================================================================
# Configuration Parameters
# ============================================================================

FIELD_ORDER_CAP = 1 << 20
ANNIHILATOR_COLUMN_CAP = 5000
MAX_EXPONENT = 4096
MAX_EXPANDED_TERMS = 1 << 20
DEFAULT_SEED = 0
SCHEMA_VERSION = 1
DEFAULT_TRIALS = 100
DEFAULT_THREADS = 1
SCAN_CHUNK_SIZE = 1 << 20

OUTPUT_FORMATS = ("json", "csv", "human")
COMMANDS = (
    "check-nice",
    "incidence",
    "expand",
    "counterexample",
    "classify-quadratic",
    "annihilator",
    "conc-family",
)

U64_MAX = (1 << 64) - 1


def thread_count() -> int:
    """Worker cap from FFEXPAND_THREADS (default 1)."""
    raw = os.getenv("FFEXPAND_THREADS")
    if raw is None or raw.strip() == "":
        return DEFAULT_THREADS
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"FFEXPAND_THREADS must be an integer, got '{raw}'")
    if value < 1:
        raise ConfigError(f"FFEXPAND_THREADS must be >= 1, got {value}")
    return value


def verbose_from_env() -> bool:
    return os.getenv("FFEXPAND_VERBOSE", "").strip().lower() in ("1", "true", "yes", "on")


@dataclass
class RunConfig:
    """Everything one CLI run depends on."""

    command: str = "check-nice"
    field_spec: Optional[str] = None
    poly: Optional[str] = None
    nvars: Optional[int] = None
    sets: str = "full"
    seed: int = DEFAULT_SEED
    output_format: str = "json"

    # structure
    bound: Optional[int] = None
    column_cap: int = ANNIHILATOR_COLUMN_CAP
    exhaustive: bool = False
    random_count: int = 0
    polys: Optional[str] = None
    fibre: bool = False

    # incidence
    trials: int = DEFAULT_TRIALS
    degree: int = 1
    points: str = "10"
    curves: str = "10"
    adversarial: bool = False

    # expansion
    prime: Optional[int] = None
    coeffs: str = "1,1,1"
    a: int = 1
    d: int = 3
    f_poly: str = "y"
    g_poly: str = "z^2"
    C: float = 1.0
    epsilon: float = 0.1
    delta: float = 0.25
    witness: bool = False
    early_exit: bool = True
    primes: Optional[str] = None
    max_deficiency: Optional[int] = None

    # output
    output: Optional[str] = None
    verbose: bool = False

    def validate(self) -> "RunConfig":
        if self.command not in COMMANDS:
            raise ConfigError(f"Unknown command '{self.command}'. Choose from: {', '.join(COMMANDS)}")
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"Unknown format '{self.output_format}'. Choose from: {', '.join(OUTPUT_FORMATS)}")
        if not isinstance(self.seed, int) or isinstance(self.seed, bool) or not 0 <= self.seed <= U64_MAX:
            raise ConfigError(f"Seed must be an unsigned 64-bit integer, got {self.seed!r}")
        if self.nvars is not None and self.nvars < 1:
            raise ConfigError(f"--nvars must be >= 1, got {self.nvars}")
        if self.bound is not None and self.bound < 1:
            raise ConfigError(f"--bound must be >= 1, got {self.bound}")
        if self.trials < 0 or self.random_count < 0:
            raise ConfigError("Trial counts must be non-negative")
        if self.degree < 0:
            raise ConfigError(f"--degree must be >= 0, got {self.degree}")
        if self.d < 1:
            raise ConfigError(f"-d must be >= 1, got {self.d}")
        if self.column_cap < 1:
            raise ConfigError(f"--column-cap must be >= 1, got {self.column_cap}")
        return self

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_sources(cls, cli_values: dict[str, Any], config_path: Optional[str] = None) -> "RunConfig":
        """Defaults < JSON config file < explicitly given command-line values."""
        known = {f.name for f in fields(cls)}
        merged: dict[str, Any] = {}

        if config_path:
            merged.update(load_config_file(config_path, known))

        for key, value in cli_values.items():
            if key not in known:
                raise ConfigError(f"Unknown configuration key '{key}'")
            merged[key] = value

        return cls(**merged).validate()


def load_config_file(path: str, known: set[str]) -> dict[str, Any]:
    try:
        with open(path, "r") as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read config file '{path}': {e}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config file '{path}' is not valid JSON: {e}")

    if not isinstance(data, dict):
        raise ConfigError(f"Config file '{path}' must hold a JSON object")

    # Accept the CLI spellings too ("field", "format", "F", "G").
    aliases = {"field": "field_spec", "format": "output_format", "F": "f_poly", "G": "g_poly"}
    out = {}
    for key, value in data.items():
        key = aliases.get(key, key.replace("-", "_"))
        if key not in known:
            raise ConfigError(f"Unknown key '{key}' in config file '{path}'")
        out[key] = value
    return out
