"""
Error types for the modular Cherednik verifier.

Library modules raise these; the CLI turns them into report records and
exit codes. Every error carries a `details` dict so the report can show the
failing degree, indices or witness polynomial.
"""

from typing import Any, Dict, Optional


class CherednikError(Exception):
    """Base class for all errors raised by this package."""

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message)
        self.details = dict(details or {})

    def to_dict(self) -> Dict[str, Any]:
        """Convert error to dictionary for report records."""
        return {
            "error": type(self).__name__,
            "message": str(self),
            **self.details
        }


# ============== Configuration and Argument Errors ==============

class ConfigError(CherednikError, ValueError):
    """Invalid session configuration (maps to exit code 2)."""


class InvalidArgument(CherednikError, ValueError):
    """An operation was called outside its precondition."""


class DomainMismatch(CherednikError, TypeError):
    """Operands live in different coefficient fields."""


class DivisionByZero(CherednikError, ZeroDivisionError):
    """Inverse or division by the zero element."""


class SpecializationPole(CherednikError):
    """A rational function has a pole at the requested value of c."""


class InternalError(CherednikError):
    """A mathematically impossible state was reached (implementation bug)."""


# ============== Check Failures ==============

class CheckFailure(CherednikError):
    """A mathematical verification did not hold (maps to exit code 1)."""


class LemmaViolation(CheckFailure):
    """A power-series coefficient that must vanish did not."""

    def __init__(self, lemma: str, order: int, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            f"{lemma}: coefficient identity fails at order {order}",
            {"lemma": lemma, "order": order, **(details or {})}
        )
        self.lemma = lemma
        self.order = order


class RelationViolation(CheckFailure):
    """An operator identity of the Cherednik algebra failed on a monomial."""

    def __init__(self, relation: str, indices: tuple, witness: str, degree: int):
        super().__init__(
            f"relation {relation} fails for indices {indices} on {witness}",
            {"relation": relation, "indices": list(indices), "witness": witness, "degree": degree}
        )
        self.relation = relation
        self.indices = indices
        self.witness = witness


class CIFailure(CheckFailure):
    """The Hilbert series of A/I_c differs from the complete-intersection formula."""

    def __init__(self, degree: int, computed: int, expected: int):
        super().__init__(
            f"Hilbert series mismatch in degree {degree}: computed {computed}, expected {expected}",
            {"degree": degree, "computed": computed, "expected": expected}
        )
        self.degree = degree


class ContainmentFailure(CheckFailure):
    """An element of I_c pairs nontrivially under the contravariant form."""

    def __init__(self, degree: int, witness: str):
        super().__init__(
            f"element of I_c in degree {degree} is not in ker(beta_c): {witness}",
            {"degree": degree, "witness": witness}
        )
        self.degree = degree


class DimensionGap(CheckFailure):
    """J_c is strictly larger than I_c in some degree."""

    def __init__(self, degree: int, dim_i: int, dim_j: int, details: Optional[Dict[str, Any]] = None):
        super().__init__(
            f"dim J_c = {dim_j} exceeds dim I_c = {dim_i} in degree {degree}",
            {"degree": degree, "dim_I": dim_i, "dim_J": dim_j, **(details or {})}
        )
        self.degree = degree
