"""
Configuration for the modular Cherednik verifier.

Environment overrides are read once at import (a `.env` file in the working
directory is honoured via python-dotenv):
- CHEREDNIK_THREADS: default worker-pool size
- CHEREDNIK_OUTPUT_DIR: directory relative `--out` paths resolve into
- CHEREDNIK_LOG_LEVEL: logging level for the CLI
- CHEREDNIK_MONOMIAL_WARN: desk-scale guard threshold
"""

import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Tuple

from dotenv import load_dotenv
from sympy import isprime

from errors import ConfigError

load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}", {"variable": name})


DEFAULT_THREADS = max(1, _env_int("CHEREDNIK_THREADS", 1))
OUTPUT_DIR = os.environ.get("CHEREDNIK_OUTPUT_DIR", "")
LOG_LEVEL = os.environ.get("CHEREDNIK_LOG_LEVEL", "INFO").upper()
MONOMIAL_WARN_THRESHOLD = _env_int("CHEREDNIK_MONOMIAL_WARN", 2000)

# (p, n) pairs that finish at desk scale in symbolic mode
RECOMMENDED_PAIRS = ((2, 2), (2, 4), (2, 6), (3, 3), (3, 6), (5, 5))

# Random specializations per "generic c" run
SPECIALIZATION_SAMPLES = 3

DEFAULT_SEED = 0
DEFAULT_RELATION_DEGREE = 4

C_MODES = ("symbolic", "random", "value", "all-Fp", "list")
OUTPUT_FORMATS = ("json", "csv", "text")


def socle_degree(p: int, n: int) -> int:
    """Top degree of ((1 - t^p)/(1 - t))^(n-1)."""
    return (p - 1) * (n - 1)


def default_d_max(p: int, n: int) -> int:
    """One degree past the socle plus one more."""
    return socle_degree(p, n) + 2


def validate_parameters(p: int, n: int) -> None:
    """
    Check the standing hypotheses: p prime, n >= 2, p | n.

    Raises:
        ConfigError: with a message naming the violated condition
    """
    if not isinstance(p, int) or not isprime(p):
        raise ConfigError(f"p = {p} is not prime", {"p": p})
    if n < 2:
        raise ConfigError(f"n must be at least 2, got {n}", {"n": n})
    if n % p:
        raise ConfigError(f"p must divide n (p = {p}, n = {n})", {"p": p, "n": n})


@dataclass
class SessionConfig:
    """Everything a CLI command needs to build its sessions and reports."""

    p: int
    n: int
    c_mode: str = "symbolic"
    c_values: List[int] = field(default_factory=list)
    ext_degree: Optional[int] = None
    modulus: Optional[Tuple[int, ...]] = None
    d_max: Optional[int] = None
    relation_degree: int = DEFAULT_RELATION_DEGREE
    threads: int = DEFAULT_THREADS
    seed: int = DEFAULT_SEED
    output_format: str = "json"
    out: Optional[str] = None
    timings: bool = True

    @property
    def effective_d_max(self) -> int:
        return self.d_max if self.d_max is not None else default_d_max(self.p, self.n)

    @property
    def is_symbolic(self) -> bool:
        return self.c_mode == "symbolic"

    def validate(self, needs_hilbert: bool = False) -> "SessionConfig":
        """
        Validate the configuration.

        Args:
            needs_hilbert: True for commands that compute Hilbert series or
                compare ideals (they need d_max past the socle degree)

        Returns:
            self, for chaining

        Raises:
            ConfigError: on the first invalid field
        """
        validate_parameters(self.p, self.n)
        if self.c_mode not in C_MODES:
            raise ConfigError(f"unknown c mode {self.c_mode!r}", {"c_mode": self.c_mode})
        if self.c_mode == "value" and len(self.c_values) != 1:
            raise ConfigError("a single c value is required", {"c_values": self.c_values})
        if self.output_format not in OUTPUT_FORMATS:
            raise ConfigError(f"unknown output format {self.output_format!r}", {"format": self.output_format})
        if self.threads < 1:
            raise ConfigError(f"--threads must be at least 1, got {self.threads}", {"threads": self.threads})
        if self.relation_degree < 1:
            raise ConfigError("--relation-degree must be at least 1", {"relation_degree": self.relation_degree})
        if self.ext_degree is not None and self.ext_degree < 1:
            raise ConfigError("--ext-degree must be at least 1", {"ext_degree": self.ext_degree})
        if self.d_max is not None and self.d_max < 0:
            raise ConfigError("--d-max must be non-negative", {"d_max": self.d_max})
        minimum = socle_degree(self.p, self.n) + 1
        if needs_hilbert and self.effective_d_max < minimum:
            raise ConfigError(
                f"--d-max must be at least (p-1)(n-1)+1 = {minimum}",
                {"d_max": self.effective_d_max, "minimum": minimum}
            )
        return self

    def output_path(self) -> Optional[Path]:
        """Resolve `out` against CHEREDNIK_OUTPUT_DIR when it is relative."""
        if not self.out:
            return None
        path = Path(self.out)
        if not path.is_absolute() and OUTPUT_DIR:
            path = Path(OUTPUT_DIR) / path
        return path

    def to_dict(self) -> dict:
        return {
            "p": self.p,
            "n": self.n,
            "c_mode": self.c_mode,
            "c_values": list(self.c_values),
            "ext_degree": self.ext_degree,
            "modulus": list(self.modulus) if self.modulus else None,
            "d_max": self.effective_d_max,
            "relation_degree": self.relation_degree,
            "seed": self.seed,
        }
