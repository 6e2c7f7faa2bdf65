"""
Verification sessions.

A Session fixes (p, n), the coefficient field and the value of c used by
every computation downstream. Symbolic sessions work over GF(p)(c) with c the
transcendental; specialized sessions use a number c0 in GF(p) or GF(p^k).
"""

import logging
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence

from coeff import (
    ExtensionField,
    FieldElement,
    extension_field,
    prime_field,
    rational_function_field,
)
from config import validate_parameters
from poly import PolyRing, poly_ring

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Session:
    """Immutable (p, n, field, c, ring) bundle shared by all modules."""

    p: int
    n: int
    field: object
    c: FieldElement
    ring: PolyRing

    @property
    def is_symbolic(self) -> bool:
        return self.field.is_symbolic

    @property
    def label(self) -> str:
        """Human-readable value of c for reports."""
        return "symbolic" if self.is_symbolic else str(self.c)

    def to_dict(self) -> dict:
        out = {"p": self.p, "n": self.n, "field": repr(self.field), "c": self.label}
        if isinstance(self.field, ExtensionField):
            out["modulus"] = list(self.field.modulus)
        return out


def symbolic_session(p: int, n: int) -> Session:
    """Session over GF(p)(c) with c transcendental."""
    validate_parameters(p, n)
    field = rational_function_field(p)
    return Session(p, n, field, field.gen, poly_ring(field, n))


def specialized_session(p: int, n: int, c0) -> Session:
    """
    Session at a fixed value of c.

    Args:
        p: Characteristic
        n: Number of ambient variables (p | n)
        c0: FieldElement of GF(p) or GF(p^k), or an int read as a residue mod p
    """
    validate_parameters(p, n)
    if isinstance(c0, int):
        c0 = prime_field(p)(c0)
    field = c0.field
    return Session(p, n, field, c0, poly_ring(field, n))


def random_sessions(
    p: int,
    n: int,
    count: int,
    seed: int,
    k: Optional[int] = None,
    modulus: Optional[Sequence[int]] = None
) -> List[Session]:
    """
    `count` specialized sessions at random c0 in GF(p^k).

    The same seed always yields the same values of c0.
    """
    validate_parameters(p, n)
    field = extension_field(p, k, modulus)
    rng = random.Random(seed)
    sessions = []
    for _ in range(count):
        c0 = field.random_element(rng)
        logger.info(f"Random specialization c = {c0} in {field!r} (seed {seed})")
        sessions.append(Session(p, n, field, c0, poly_ring(field, n)))
    return sessions
