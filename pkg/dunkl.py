"""
Dunkl operators on A and the operator identities of the rational Cherednik
algebra at hbar = 1.

    D_{y_i - y_j} = d_{y_i - y_j} - c sum_{m != i} (1 - s_mi)/(x_i - x_m)
                                  + c sum_{m != j} (1 - s_mj)/(x_j - x_m)

Every piece is computed on the ambient lift and the sum is reduced once.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from coeff import FieldElement, prime_field
from errors import InvalidArgument, RelationViolation
from graded import basis_index
from poly import (
    MultiPoly,
    Permutation,
    act,
    divided_difference_lift,
    monomial_basis,
    partial_diff,
    partial_diff_lift,
    poly_ring,
    reduce,
)
from session import Session

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class DunklOp:
    """D_{y_i - y_j} at parameter c."""

    i: int
    j: int
    c: FieldElement

    def __post_init__(self):
        if self.i == self.j:
            raise InvalidArgument(f"Dunkl operator needs distinct indices, got ({self.i}, {self.j})")

    def __call__(self, f: MultiPoly) -> MultiPoly:
        return dunkl_apply(self, f)

    def reversed(self) -> "DunklOp":
        return DunklOp(self.j, self.i, self.c)


def _check_indices(n: int, i: int, j: int) -> None:
    if not (1 <= i <= n and 1 <= j <= n):
        raise InvalidArgument(f"indices ({i}, {j}) outside 1..{n}")


def _reflection_lift(f: MultiPoly, i: int, j: int) -> MultiPoly:
    """sum_{m != j} (1 - s_jm)/(x_j - x_m) f - sum_{m != i} (1 - s_im)/(x_i - x_m) f, unreduced."""
    difference = f.ring.zero
    for m in range(1, f.n + 1):
        if m != j:
            difference = difference + divided_difference_lift(f, j, m)
        if m != i:
            difference = difference - divided_difference_lift(f, i, m)
    return difference


def dunkl_apply(op: DunklOp, f: MultiPoly) -> MultiPoly:
    """D_{y_i - y_j} f, reduced."""
    _check_indices(f.n, op.i, op.j)
    if not f:
        return f.ring.zero
    result = partial_diff_lift(f, op.i, op.j)
    c = f.field(op.c)
    if not c.is_zero():
        result = result + _reflection_lift(f, op.i, op.j) * c
    return reduce(result)


def dunkl_parts(f: MultiPoly, i: int, j: int) -> Tuple[MultiPoly, MultiPoly]:
    """(derivative, reflection) with D_{y_i - y_j} f = derivative + c * reflection, both reduced."""
    _check_indices(f.n, i, j)
    if not f:
        return f.ring.zero, f.ring.zero
    return partial_diff(f, i, j), reduce(_reflection_lift(f, i, j))


@lru_cache(maxsize=None)
def dunkl_matrices(p: int, n: int, d: int) -> Dict[int, Tuple[np.ndarray, np.ndarray]]:
    """
    D_{y_i - y_n} : A_d -> A_{d-1} as GF(p) residue arrays (P0, P1), i = 1..n-1.

    Row r is the image of the r-th basis monomial; the operator at c is
    P0 + c * P1 for any c in any field of characteristic p.
    """
    ring = poly_ring(prime_field(p), n)
    basis = monomial_basis(n, d)
    index = basis_index(n, d - 1)
    shape = (len(basis), ring.dim(d - 1))
    out = {}
    for i in range(1, n):
        derivative_part = np.zeros(shape, dtype=np.int64)
        reflection_part = np.zeros(shape, dtype=np.int64)
        for r, exponent in enumerate(basis):
            derivative, reflection = dunkl_parts(ring.monomial(exponent), i, n)
            for e, value in derivative.terms.items():
                derivative_part[r, index[e]] = value.value
            for e, value in reflection.terms.items():
                reflection_part[r, index[e]] = value.value
        out[i] = (derivative_part, reflection_part)
    return out


def singular_defects(f: MultiPoly, c: FieldElement) -> List[Tuple[int, MultiPoly]]:
    """Nonzero images D_{y_i - y_1} f, i = 2..n."""
    defects = []
    for i in range(2, f.n + 1):
        image = dunkl_apply(DunklOp(i, 1, c), f)
        if image:
            defects.append((i, image))
    return defects


def is_singular(f: MultiPoly, c: FieldElement) -> bool:
    """
    True iff every Dunkl operator kills f.

    The D_{y_i - y_1} span all of them, so only those are applied.
    """
    for i in range(2, f.n + 1):
        if dunkl_apply(DunklOp(i, 1, c), f):
            return False
    return True


# ============== Algebra Relations ==============

def _transposition_sum(f: MultiPoly, i: int, others: Sequence[int]) -> MultiPoly:
    total = f.ring.zero
    for t in others:
        total = total + act(Permutation.transposition(f.n, i, t), f)
    return total


def _relation_records(session: Session, d: int) -> List[dict]:
    ring = session.ring
    n = session.n
    c = session.c
    monomials = [ring.monomial(e) for e in ring.monomial_basis(d)]
    counts: Dict[Tuple[str, tuple], int] = {}

    def fail(relation: str, indices: tuple, f: MultiPoly):
        raise RelationViolation(relation, indices, str(f), d)

    def passed(relation: str, indices: tuple):
        counts[(relation, indices)] = counts.get((relation, indices), 0) + 1

    # [y_i - y_j, x_i] = 1 - c s_ij - c sum_{t != i} s_it
    for i, j in itertools.permutations(range(1, n + 1), 2):
        op = DunklOp(i, j, c)
        x_i = ring.x(i)
        for f in monomials:
            lhs = op(reduce(x_i * f)) - x_i * op(f)
            rhs = f - act(Permutation.transposition(n, i, j), f) * c
            rhs = rhs - _transposition_sum(f, i, [t for t in range(1, n + 1) if t != i]) * c
            if reduce(lhs - rhs):
                fail("commutator_x_i", (i, j), f)
            passed("commutator_x_i", (i, j))

    # [y_i - y_j, x_l] = c s_il - c s_jl
    for i, j, l in itertools.permutations(range(1, n + 1), 3):
        op = DunklOp(i, j, c)
        x_l = ring.x(l)
        for f in monomials:
            lhs = op(reduce(x_l * f)) - x_l * op(f)
            rhs = (act(Permutation.transposition(n, i, l), f) - act(Permutation.transposition(n, j, l), f)) * c
            if reduce(lhs - rhs):
                fail("commutator_x_l", (i, j, l), f)
            passed("commutator_x_l", (i, j, l))

    pairs = list(itertools.combinations(range(1, n + 1), 2))
    for i, j in pairs:
        op = DunklOp(i, j, c)
        for f in monomials:
            if op(f) + op.reversed()(f):
                fail("antisymmetry", (i, j), f)
            passed("antisymmetry", (i, j))

    # [y_i - y_j, y_l - y_m] = 0
    for (i, j), (l, m) in itertools.combinations(pairs, 2):
        first, second = DunklOp(i, j, c), DunklOp(l, m, c)
        for f in monomials:
            if first(second(f)) != second(first(f)):
                fail("dunkl_commute", (i, j, l, m), f)
            passed("dunkl_commute", (i, j, l, m))

    return [
        {
            "relation": relation,
            "indices": list(indices),
            "degree": d,
            "witness": None,
            "status": "pass",
            "checked": count,
        }
        for (relation, indices), count in counts.items()
    ]


def check_relations(session: Session, d_max: int, executor=None) -> List[dict]:
    """
    Check the defining relations on every monomial of degree <= d_max.

    Returns:
        One record per (relation, indices, degree)

    Raises:
        RelationViolation: on the first identity that fails
    """
    if d_max < 1:
        raise InvalidArgument(f"relation degree must be at least 1, got {d_max}")
    degrees = range(d_max + 1)
    if executor is None:
        per_degree = [_relation_records(session, d) for d in degrees]
    else:
        per_degree = list(executor.map(lambda d: _relation_records(session, d), degrees))
    records = [record for chunk in per_degree for record in chunk]
    logger.debug(f"Checked {len(records)} relation groups up to degree {d_max}")
    return records
