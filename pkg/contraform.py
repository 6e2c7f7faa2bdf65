"""
The contravariant form beta_c between A and Sym(h), and its kernel J_c.

Sym(h) is written in u_i = y_i - y_n, i = 1..n-1. beta_c is fixed by
beta_c(1, 1) = 1 and beta_c(f, u_i g) = beta_c(D_{u_i} f, g), so the Gram
matrix of degree d is built from the one of degree d - 1: the entry for
(x^a, u^b) pairs D_{u_i} x^a against u^(b - e_i), where i is the first
variable of u^b.

Three representations share that recursion:
- `gram_matrix`: sparse rows of field elements (any field),
- `gram_array`: element codes, one block product per u_i (finite fields),
- `gram_coefficients`: GF(p) arrays per power of c (symbolic c).
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from coeff import generic_points
from dunkl import DunklOp, dunkl_apply, dunkl_matrices
from errors import ContainmentFailure, DimensionGap, InvalidArgument
from graded import basis_index, from_vector, ideal_degree_dim, ideal_rank, spanning_labels, spanning_rows, to_vector
from linalg import (
    EchelonBasis,
    PolyMatrix,
    Row,
    coefficient_arrays,
    field_arrays,
    left_kernel,
    mod_matmul,
    poly_evaluate,
    poly_matmul,
    poly_trim,
)
from poly import Exponent, MultiPoly, monomial_basis
from session import Session

logger = logging.getLogger(__name__)

# Polynomials of J_c outside I_c reported with a dimension gap
WITNESS_LIMIT = 5


@dataclass
class GramMatrix:
    """
    rows[r][k] = beta_c(x^a, u^b) for a = row_basis[r], b = col_basis[k].

    Both bases are the canonical degree-d monomial basis (exponent tuples of
    length n with last entry 0; for columns entry i is the power of u_{i+1}).
    """

    degree: int
    rows: List[Row]
    row_basis: List[Exponent]
    col_basis: List[Exponent]

    @property
    def size(self) -> int:
        return len(self.row_basis)

    def entry(self, r: int, k: int):
        return self.rows[r].get(k)

    def to_dense(self, field) -> List[List]:
        return [[row.get(k, field.zero) for k in range(len(self.col_basis))] for row in self.rows]


def _first_variable(exponent: Exponent) -> int:
    """1-based index of the first nonzero entry."""
    for i, k in enumerate(exponent):
        if k:
            return i + 1
    raise InvalidArgument("the constant monomial has no first variable")


@lru_cache(maxsize=None)
def _column_blocks(n: int, d: int) -> Tuple[Tuple[int, np.ndarray, np.ndarray], ...]:
    """(i, columns of degree d headed by u_i, their tails in degree d - 1) for each u_i that heads a column."""
    previous = basis_index(n, d - 1)
    groups: Dict[int, Tuple[List[int], List[int]]] = {}
    for k, b in enumerate(monomial_basis(n, d)):
        i = _first_variable(b)
        rest = list(b)
        rest[i - 1] -= 1
        cols, tails = groups.setdefault(i, ([], []))
        cols.append(k)
        tails.append(previous[tuple(rest)])
    return tuple(
        (i, np.array(cols, dtype=np.int64), np.array(tails, dtype=np.int64))
        for i, (cols, tails) in sorted(groups.items())
    )


class ContravariantForm:
    """
    Gram matrices of beta_c degree by degree, cached.

    Args:
        session: The verification session
        executor: Optional pool; rows (sparse) or u_i blocks (arrays) of one
            degree are computed in parallel
    """

    def __init__(self, session: Session, executor=None):
        self.session = session
        self.ring = session.ring
        self.n = session.n
        self.c = session.c
        self.executor = executor
        self.arrays = field_arrays(session.field)
        self._gram: Dict[int, GramMatrix] = {}
        self._gram_arrays: Dict[int, np.ndarray] = {}
        self._gram_coefficients: Dict[int, PolyMatrix] = {}

    def _map(self, fn, items):
        if self.executor is None:
            return [fn(item) for item in items]
        return list(self.executor.map(fn, items))

    def peel(self, f: MultiPoly, i: int) -> MultiPoly:
        """D_{u_i} f = D_{y_i - y_n} f."""
        return dunkl_apply(DunklOp(i, self.n, self.c), f)

    def pairing(self, f: MultiPoly, word: Sequence[int]) -> object:
        """
        beta_c(f, u_{w_1} ... u_{w_d}) by peeling w_1 first, then w_2, and so on.

        f must be homogeneous of degree len(word); the result is the constant
        term of the iterated image.
        """
        for i in word:
            if not 1 <= i < self.n:
                raise InvalidArgument(f"u index {i} outside 1..{self.n - 1}")
            f = self.peel(f, i)
        return f.constant_term

    def gram_matrix(self, d: int) -> GramMatrix:
        if d < 0:
            raise InvalidArgument(f"degree must be non-negative, got {d}")
        if d in self._gram:
            return self._gram[d]
        basis = monomial_basis(self.n, d)
        if d == 0:
            gram = GramMatrix(0, [{0: self.session.field.one}], basis, basis)
        else:
            previous = self.gram_matrix(d - 1)
            previous_index = {e: k for k, e in enumerate(previous.col_basis)}
            # column k peels u_i and continues with column `tails[k]` of degree d - 1
            heads, tails = [], []
            for b in basis:
                i = _first_variable(b)
                rest = list(b)
                rest[i - 1] -= 1
                heads.append(i)
                tails.append(previous_index[tuple(rest)])

            def build_row(a: Exponent) -> Row:
                images = {}
                row = {}
                for k, (i, tail) in enumerate(zip(heads, tails)):
                    if i not in images:
                        images[i] = to_vector(self.peel(self.ring.monomial(a), i), d - 1)
                    total = None
                    for col, value in images[i].items():
                        entry = previous.rows[col].get(tail)
                        if entry is not None:
                            term = value * entry
                            total = term if total is None else total + term
                    if total is not None and not total.is_zero():
                        row[k] = total
                return row

            gram = GramMatrix(d, self._map(build_row, basis), basis, basis)
        self._gram[d] = gram
        logger.debug(f"Gram matrix in degree {d}: {gram.size} x {gram.size}")
        return gram

    def gram_array(self, d: int) -> np.ndarray:
        """Gram matrix of degree d as element codes of the session's finite field."""
        if self.arrays is None:
            raise InvalidArgument(f"{self.session.field!r} has no array encoding")
        if d < 0:
            raise InvalidArgument(f"degree must be non-negative, got {d}")
        cached = self._gram_arrays.get(d)
        if cached is not None:
            return cached
        if d == 0:
            gram = np.ones((1, 1), dtype=np.int64)
        else:
            arrays = self.arrays
            previous = self.gram_array(d - 1)
            matrices = dunkl_matrices(self.session.p, self.n, d)
            c = arrays.encode(self.c)

            def block(entry):
                i, cols, tails = entry
                derivative, reflection = matrices[i]
                peel = arrays.add(derivative, arrays.mul(reflection, c))
                return cols, arrays.matmul(peel, previous[:, tails])

            size = self.ring.dim(d)
            gram = np.zeros((size, size), dtype=np.int64)
            for cols, product in self._map(block, _column_blocks(self.n, d)):
                gram[:, cols] = product
        self._gram_arrays[d] = gram
        return gram

    def gram_coefficients(self, d: int) -> PolyMatrix:
        """Gram matrix of degree d over GF(p)[c]: entry e is the coefficient array of c^e."""
        if not self.session.is_symbolic:
            raise InvalidArgument("coefficient arrays need a symbolic session")
        if d < 0:
            raise InvalidArgument(f"degree must be non-negative, got {d}")
        cached = self._gram_coefficients.get(d)
        if cached is not None:
            return cached
        if d == 0:
            gram = [np.ones((1, 1), dtype=np.int16)]
        else:
            p = self.session.p
            previous = self.gram_coefficients(d - 1)
            matrices = dunkl_matrices(p, self.n, d)

            def block(entry):
                i, cols, tails = entry
                derivative, reflection = matrices[i]
                parts = [np.zeros((derivative.shape[0], len(cols)), dtype=np.int64) for _ in range(len(previous) + 1)]
                for e, coefficient in enumerate(previous):
                    tail = coefficient[:, tails]
                    parts[e] += mod_matmul(derivative, tail, p)
                    parts[e + 1] += mod_matmul(reflection, tail, p)
                return cols, parts

            size = self.ring.dim(d)
            out = [np.zeros((size, size), dtype=np.int64) for _ in range(len(previous) + 1)]
            for cols, parts in self._map(block, _column_blocks(self.n, d)):
                for e, part in enumerate(parts):
                    out[e][:, cols] = part % p
            gram = [m.astype(np.int16) for m in poly_trim(out)]
        self._gram_coefficients[d] = gram
        return gram

    def gram_rows(self, d: int) -> List[Row]:
        """Sparse rows of the degree-d Gram matrix."""
        if self.arrays is not None:
            return self.arrays.to_rows(self.gram_array(d))
        return self.gram_matrix(d).rows

    def jc_degree_dim(self, d: int) -> Tuple[int, EchelonBasis]:
        """dim of the degree-d slice of J_c = ker(beta_c), with its echelon basis."""
        kernel = left_kernel(self.session.field, self.gram_rows(d), self.ring.dim(d))
        return kernel.rank, kernel

    def kernel_dim(self, d: int, lower_bound: Optional[int] = None) -> int:
        """
        dim of J_c in degree d.

        For symbolic c, `lower_bound` is the dimension of a subspace known to
        lie in J_c. The Gram rank can only drop under specialization, so a
        fixed point where the kernel is no larger than `lower_bound` settles
        the dimension; otherwise the kernel is computed exactly.
        """
        size = self.ring.dim(d)
        if self.arrays is not None:
            return size - self.arrays.rank(self.gram_array(d))
        if self.session.is_symbolic and lower_bound is not None:
            coefficients = self.gram_coefficients(d)
            for c0 in generic_points(self.session.p):
                arrays = field_arrays(c0.field)
                if arrays is None:
                    break
                special = poly_evaluate(coefficients, (size, size), c0, arrays)
                if size - arrays.rank(special) == lower_bound:
                    return lower_bound
            logger.info(f"degree {d}: kernel not settled at the fixed points, eliminating exactly")
        return self.jc_degree_dim(d)[0]

    def _vector_pairs_to_zero(self, vector: Row, d: int) -> bool:
        gram = self.gram_matrix(d)
        totals: Row = {}
        for r, value in vector.items():
            for k, entry in gram.rows[r].items():
                current = totals.get(k)
                totals[k] = value * entry if current is None else current + value * entry
        return all(total.is_zero() for total in totals.values())

    def pairs_to_zero(self, f: MultiPoly, d: int) -> bool:
        """True iff f (homogeneous of degree d) pairs to zero with all of Sym(h)_d."""
        return self._vector_pairs_to_zero(to_vector(f, d), d)

    def first_nonpairing(self, rows: Sequence[Row], d: int) -> Optional[int]:
        """Index of the first row (degree-d coordinates) pairing nontrivially, or None."""
        if not rows:
            return None
        size = self.ring.dim(d)
        if self.arrays is not None:
            product = self.arrays.matmul(self.arrays.from_rows(rows, size), self.gram_array(d))
            bad = np.flatnonzero(product.any(axis=1))
            return int(bad[0]) if bad.size else None
        if self.session.is_symbolic:
            spanning = coefficient_arrays(self.session.field, rows, size)
            if spanning is not None:
                product = poly_matmul(spanning, self.gram_coefficients(d), self.session.p)
                if not product:
                    return None
                bad = np.flatnonzero(np.any([m.any(axis=1) for m in product], axis=0))
                return int(bad[0])
        for r, row in enumerate(rows):
            if not self._vector_pairs_to_zero(row, d):
                return r
        return None

    def check_containment(self, generators: Sequence[MultiPoly], d: int) -> None:
        """
        Raises:
            ContainmentFailure: some m * f_k of degree d pairs nontrivially
        """
        labels = spanning_labels(generators, d)
        bad = self.first_nonpairing(spanning_rows(generators, d), d)
        if bad is not None:
            exponent, k = labels[bad]
            raise ContainmentFailure(d, str(self.ring.monomial(exponent) * generators[k]))


def compare_ideals(
    session: Session,
    generators: Sequence[MultiPoly],
    d_max: int,
    executor=None,
    form: Optional[ContravariantForm] = None
) -> List[dict]:
    """
    Compare I_c with J_c degree by degree.

    Args:
        form: Reuse this form's cached Gram matrices (built for `session`)

    Returns:
        Records {d, dim_A, dim_I, dim_J, equal} for d = 0..d_max

    Raises:
        ContainmentFailure: an element of the spanning set of I_c pairs nontrivially
        DimensionGap: dim J_c > dim I_c in some degree (raised after all degrees
            are recorded; the records and a few polynomials of J_c outside
            I_c travel in the error details)
    """
    form = form or ContravariantForm(session, executor)
    ring = session.ring
    records = []
    for d in range(d_max + 1):
        form.check_containment(generators, d)
        dim_i = ideal_rank(generators, d)
        dim_j = form.kernel_dim(d, lower_bound=dim_i)
        records.append({"d": d, "dim_A": ring.dim(d), "dim_I": dim_i, "dim_J": dim_j, "equal": dim_i == dim_j})
        logger.debug(f"d = {d}: dim A = {ring.dim(d)}, dim I = {dim_i}, dim J = {dim_j}")
    for record in records:
        if not record["equal"]:
            d = record["d"]
            details = {"records": records, "witnesses": gap_witnesses(form, generators, d)}
            raise DimensionGap(d, record["dim_I"], record["dim_J"], details)
    return records


def verify_containment(
    session: Session,
    generators: Sequence[MultiPoly],
    d_max: int,
    form: Optional[ContravariantForm] = None
) -> dict:
    """
    Check I_c in J_c in degrees 0..d_max without comparing dimensions.

    Raises:
        ContainmentFailure: at the first degree with a nonpairing spanning element
    """
    form = form or ContravariantForm(session)
    for d in range(d_max + 1):
        form.check_containment(generators, d)
    return {"degrees": d_max + 1, "c": session.label}


def kernel_dims_agree(forms: Sequence[ContravariantForm], d_max: int) -> Tuple[bool, List[List[int]]]:
    """J_c dimensions in degrees 0..d_max for each form, and whether they all agree."""
    dims = [[form.kernel_dim(d) for d in range(d_max + 1)] for form in forms]
    return all(row == dims[0] for row in dims), dims


def kernel_polynomials(form: ContravariantForm, d: int) -> List[MultiPoly]:
    """The echelon basis of J_c in degree d as polynomials."""
    _, kernel = form.jc_degree_dim(d)
    return [from_vector(form.ring, row, d) for row in kernel.rows]


def gap_witnesses(
    form: ContravariantForm,
    generators: Sequence[MultiPoly],
    d: int,
    limit: int = WITNESS_LIMIT
) -> List[str]:
    """Up to `limit` kernel basis polynomials of degree d that are not in I_c."""
    _, ideal = ideal_degree_dim(generators, d)
    witnesses = []
    for f in kernel_polynomials(form, d):
        if not ideal.contains(to_vector(f, d)):
            witnesses.append(str(f))
            if len(witnesses) == limit:
                break
    return witnesses
