"""
Exact linear algebra over the coefficient fields.

Sparse rows are dicts column -> nonzero element. `row_reduce` brings them to
full reduced row-echelon form, so two spanning sets of the same subspace give
identical bases. Over GF(p)(c) the pivot in each column is the candidate of
smallest weight (numerator plus denominator degree), ties going to the
earlier row.

Dimension counts go through `rank`, which never builds an echelon basis:
finite fields use numpy arrays of element codes (`FieldArrays`), GF(p)(c)
uses fraction-free elimination over GF(p)[c]. Matrices whose entries are
polynomials in c are kept as lists of GF(p) arrays, one per power of c
(`PolyMatrix`, trailing zero arrays trimmed, [] is the zero matrix).
"""

import logging
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_lcm, gf_mul, gf_quo, gf_sub

from coeff import ExtensionField, FieldElement
from errors import InvalidArgument

logger = logging.getLogger(__name__)

Row = Dict[int, FieldElement]
PolyMatrix = List[np.ndarray]

# Extension fields up to this order get full addition and multiplication tables
MAX_TABLE_ORDER = 1024

# float64 matrix products are exact below this bound
FLOAT_EXACT = 2 ** 52


def _subtract_multiple(target: Row, scale: FieldElement, source: Row) -> None:
    """target -= scale * source, in place."""
    for col, value in source.items():
        current = target.get(col)
        update = -(scale * value) if current is None else current - scale * value
        if update.is_zero():
            target.pop(col, None)
        else:
            target[col] = update


def _check_columns(rows: Sequence[Row], ncols: int) -> None:
    for row in rows:
        for col in row:
            if not 0 <= col < ncols:
                raise InvalidArgument(f"column {col} outside 0..{ncols - 1}")


class EchelonBasis:
    """
    Reduced row-echelon basis of a subspace of field^ncols.

    rows[r] has a 1 in column pivots[r] and zeros in every other pivot column;
    pivots are increasing.
    """

    def __init__(self, field, ncols: int, rows: List[Row], pivots: List[int]):
        self.field = field
        self.ncols = ncols
        self.rows = rows
        self.pivots = pivots

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce_vector(self, vector: Row) -> Row:
        """Residual of vector after eliminating every pivot column."""
        residual = dict(vector)
        for pivot, row in zip(self.pivots, self.rows):
            value = residual.get(pivot)
            if value is not None:
                _subtract_multiple(residual, value, row)
        return residual

    def contains(self, vector: Row) -> bool:
        return not self.reduce_vector(vector)

    def to_dense(self) -> List[List[FieldElement]]:
        return [[row.get(col, self.field.zero) for col in range(self.ncols)] for row in self.rows]

    def __eq__(self, other):
        if not isinstance(other, EchelonBasis):
            return NotImplemented
        return self.ncols == other.ncols and self.pivots == other.pivots and self.rows == other.rows

    __hash__ = None

    def __repr__(self):
        return f"EchelonBasis(rank={self.rank}, ncols={self.ncols})"


def row_reduce(field, ncols: int, rows: Iterable[Row]) -> EchelonBasis:
    """
    Reduced row-echelon form of the span of `rows`.

    Args:
        field: Coefficient field of the entries
        ncols: Number of columns
        rows: Sparse rows; they are copied, not modified

    Returns:
        EchelonBasis with no zero rows
    """
    active = [dict(row) for row in rows if row]
    _check_columns(active, ncols)
    basis: List[Row] = []
    pivots: List[int] = []
    for col in range(ncols):
        best: Optional[int] = None
        best_weight = None
        for index, row in enumerate(active):
            value = row.get(col)
            if value is None:
                continue
            weight = value.weight()
            if best is None or weight < best_weight:
                best, best_weight = index, weight
        if best is None:
            continue
        pivot_row = active.pop(best)
        inverse = pivot_row[col].inverse()
        pivot_row = {k: v * inverse for k, v in pivot_row.items()}
        for row in active:
            value = row.get(col)
            if value is not None:
                _subtract_multiple(row, value, pivot_row)
        for row in basis:
            value = row.get(col)
            if value is not None:
                _subtract_multiple(row, value, pivot_row)
        active = [row for row in active if row]
        basis.append(pivot_row)
        pivots.append(col)
    return EchelonBasis(field, ncols, basis, pivots)


def nullspace(field, ncols: int, rows: Iterable[Row]) -> EchelonBasis:
    """Right nullspace {v : M v = 0} of the matrix with the given rows, in echelon form."""
    echelon = row_reduce(field, ncols, rows)
    pivot_set = set(echelon.pivots)
    vectors: List[Row] = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        vector: Row = {free: field.one}
        for pivot, row in zip(echelon.pivots, echelon.rows):
            value = row.get(free)
            if value is not None:
                vector[pivot] = -value
        vectors.append(vector)
    return row_reduce(field, ncols, vectors)


def transpose(rows: Sequence[Row], ncols: int) -> List[Row]:
    """Sparse transpose; the result has ncols rows indexed by the old row numbers."""
    out: List[Row] = [{} for _ in range(ncols)]
    for r, row in enumerate(rows):
        for col, value in row.items():
            out[col][r] = value
    return out


def left_kernel(field, rows: Sequence[Row], ncols: int) -> EchelonBasis:
    """{v : v^T M = 0}, coordinates indexed by the rows of M."""
    return nullspace(field, len(rows), transpose(rows, ncols))


# ============== Finite Fields as Integer Arrays ==============

def _exact_matmul(a: np.ndarray, b: np.ndarray, bound: int) -> np.ndarray:
    """Integer product of matrices with entries in [0, bound]."""
    if a.shape[1] * bound * bound < FLOAT_EXACT:
        return np.rint(a.astype(np.float64) @ b.astype(np.float64)).astype(np.int64)
    return a @ b


def mod_matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """a @ b mod p for residue matrices."""
    return _exact_matmul(a, b, p - 1) % p


class FieldArrays:
    """
    Vectorized arithmetic on finite-field elements stored as integer codes.

    A GF(p) element is its residue. A GF(p^k) element a_0 + a_1 a + ...
    (constant term first) has code a_0 + a_1 p + a_2 p^2 + ..., so residues
    keep their code inside every extension. Extension fields use
    addition and multiplication tables, so their order is capped at
    MAX_TABLE_ORDER.
    """

    def __init__(self, field):
        if field.is_symbolic:
            raise InvalidArgument(f"{field!r} has no integer encoding")
        self.field = field
        self.p = field.characteristic
        self.k = field.degree
        self.order = self.p ** self.k
        self.is_prime = self.k == 1
        self._powers = self.p ** np.arange(self.k, dtype=np.int64)
        if not self.is_prime:
            if self.order > MAX_TABLE_ORDER:
                raise InvalidArgument(
                    f"{field!r} is too large for arithmetic tables",
                    {"order": self.order, "limit": MAX_TABLE_ORDER}
                )
            self._build_tables()

    def _build_tables(self) -> None:
        p, k, q = self.p, self.k, self.order
        codes = np.arange(q, dtype=np.int64)
        digits = (codes[:, None] // self._powers[None, :]) % p
        self._digits = digits
        self._neg = ((-digits) % p) @ self._powers
        self._add = np.empty((q, q), dtype=np.int64)
        self._mul = np.empty((q, q), dtype=np.int64)
        gen = self.field.gen
        alpha_powers = [self.field.one]
        for _ in range(2 * k - 2):
            alpha_powers.append(alpha_powers[-1] * gen)
        # digits of a^m, used to fold products of digit vectors back into the field
        self._folding = np.array([power.coeffs for power in alpha_powers], dtype=np.int64)
        for a in range(q):
            self._add[a] = ((digits[a] + digits) % p) @ self._powers
            element = self.decode(a)
            images = np.array([(element * alpha_powers[s]).coeffs for s in range(k)], dtype=np.int64)
            self._mul[a] = ((digits @ images) % p) @ self._powers
        self._inv = np.zeros(q, dtype=np.int64)
        self._inv[1:] = np.argmax(self._mul[1:] == 1, axis=1)

    # ---- element codes ----

    def encode(self, value) -> int:
        value = self.field(value)
        if isinstance(self.field, ExtensionField):
            return int(np.dot(value.coeffs, self._powers))
        return value.value

    def decode(self, code: int) -> FieldElement:
        code = int(code)
        if isinstance(self.field, ExtensionField):
            return self.field.element([(code // self.p ** s) % self.p for s in range(self.k)])
        return self.field(code)

    def inverse(self, code: int) -> int:
        if not code:
            raise InvalidArgument(f"inverse of 0 in {self.field!r}")
        if self.is_prime:
            return pow(int(code), -1, self.p)
        return int(self._inv[code])

    # ---- elementwise ----

    def add(self, a, b):
        if self.is_prime:
            return (a + b) % self.p
        return self._add[a, b]

    def sub(self, a, b):
        if self.is_prime:
            return (a - b) % self.p
        return self._add[a, self._neg[b]]

    def mul(self, a, b):
        if self.is_prime:
            return (a * b) % self.p
        return self._mul[a, b]

    # ---- matrices ----

    def from_rows(self, rows: Sequence[Row], ncols: int) -> np.ndarray:
        _check_columns(rows, ncols)
        out = np.zeros((len(rows), ncols), dtype=np.int64)
        for r, row in enumerate(rows):
            for col, value in row.items():
                out[r, col] = self.encode(value)
        return out

    def to_rows(self, array: np.ndarray) -> List[Row]:
        rows = []
        for line in array:
            rows.append({int(col): self.decode(line[col]) for col in np.flatnonzero(line)})
        return rows

    def matmul(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        if self.is_prime:
            return mod_matmul(a, b, self.p)
        p, k = self.p, self.k
        left = [self._digits[a][..., s] for s in range(k)]
        right = [self._digits[b][..., t] for t in range(k)]
        digits = np.zeros((a.shape[0], b.shape[1], k), dtype=np.int64)
        for s in range(k):
            for t in range(k):
                product = mod_matmul(left[s], right[t], p)
                digits += product[:, :, None] * self._folding[s + t][None, None, :]
        return (digits % p) @ self._powers

    def rank(self, array: np.ndarray) -> int:
        """Rank by forward elimination to row-echelon form."""
        a = np.array(array, dtype=np.int64, copy=True)
        if a.size == 0:
            return 0
        nrows, ncols = a.shape
        r = 0
        for col in range(ncols):
            if r == nrows:
                break
            candidates = np.flatnonzero(a[r:, col])
            if candidates.size == 0:
                continue
            pivot = r + int(candidates[0])
            if pivot != r:
                a[[r, pivot]] = a[[pivot, r]]
            below = r + 1 + np.flatnonzero(a[r + 1:, col])
            if below.size:
                factors = self.mul(a[below, col], self.inverse(int(a[r, col])))
                update = self.mul(factors[:, None], a[r, col:][None, :])
                a[below, col:] = self.sub(a[below, col:], update)
            r += 1
        return r


@lru_cache(maxsize=None)
def field_arrays(field) -> Optional[FieldArrays]:
    """Cached FieldArrays for a finite field, or None when the field has no encoding."""
    if field.is_symbolic or field.degree > 1 and field.order > MAX_TABLE_ORDER:
        return None
    return FieldArrays(field)


# ============== Fraction-Free Elimination over GF(p)[c] ==============

def _polynomial_rows(field, rows: Sequence[Row]) -> List[Dict[int, list]]:
    """Scale each row of rational functions by the lcm of its denominators."""
    p = field.p
    out = []
    for row in rows:
        common = [1]
        for value in row.values():
            common = gf_lcm(common, value.denominator, p, ZZ)
        out.append({
            col: gf_mul(value.numerator, gf_quo(common, value.denominator, p, ZZ), p, ZZ)
            for col, value in row.items()
        })
    return out


def fraction_free_rank(field, ncols: int, rows: Iterable[Row]) -> int:
    """
    Rank over GF(p)(c) by Bareiss elimination on polynomial entries.

    Each step replaces row j by (pivot * row_j - a_j * pivot_row) / previous
    pivot; the division is exact, so entries stay polynomials of bounded degree.
    The pivot in each column is the entry of smallest degree.
    """
    p = field.p
    rows = [row for row in rows if row]
    _check_columns(rows, ncols)
    active = _polynomial_rows(field, rows)
    previous = [1]
    r = 0
    for col in range(ncols):
        best = None
        for index, row in enumerate(active):
            value = row.get(col)
            if value is not None and (best is None or len(value) < len(active[best][col])):
                best = index
        if best is None:
            continue
        pivot_row = active.pop(best)
        pivot = pivot_row[col]
        updated = []
        for row in active:
            a = row.get(col, [])
            new = {}
            for j in set(row) | set(pivot_row):
                if j == col:
                    continue
                value = gf_mul(pivot, row.get(j, []), p, ZZ)
                if a:
                    value = gf_sub(value, gf_mul(a, pivot_row.get(j, []), p, ZZ), p, ZZ)
                value = gf_quo(value, previous, p, ZZ)
                if value:
                    new[j] = value
            if new:
                updated.append(new)
        active = updated
        previous = pivot
        r += 1
    return r


def rank(field, ncols: int, rows: Iterable[Row]) -> int:
    """
    Rank of the matrix with the given sparse rows.

    Finite fields use FieldArrays (sparse row reduction when the field is too
    large for tables); GF(p)(c) uses fraction-free elimination.
    """
    rows = [row for row in rows if row]
    if not rows:
        return 0
    if field.is_symbolic:
        return fraction_free_rank(field, ncols, rows)
    arrays = field_arrays(field)
    if arrays is None:
        return row_reduce(field, ncols, rows).rank
    return arrays.rank(arrays.from_rows(rows, ncols))


# ============== Matrices Polynomial in c ==============

def poly_trim(matrix: PolyMatrix) -> PolyMatrix:
    out = list(matrix)
    while out and not out[-1].any():
        out.pop()
    return out


def coefficient_arrays(field, rows: Sequence[Row], ncols: int) -> Optional[PolyMatrix]:
    """
    Split rows over GF(p)(c) into GF(p) arrays, one per power of c.

    Returns None when some entry has a nontrivial denominator.
    """
    p = field.p
    degree = -1
    for row in rows:
        for value in row.values():
            if not value.is_polynomial:
                return None
            degree = max(degree, len(value.numerator) - 1)
    out = [np.zeros((len(rows), ncols), dtype=np.int64) for _ in range(degree + 1)]
    for r, row in enumerate(rows):
        for col, value in row.items():
            top = len(value.numerator) - 1
            for position, a in enumerate(value.numerator):
                if a:
                    out[top - position][r, col] = int(a) % p
    return poly_trim(out)


def poly_matmul(left: PolyMatrix, right: PolyMatrix, p: int) -> PolyMatrix:
    """Product of matrices with entries in GF(p)[c]."""
    if not left or not right:
        return []
    shape = (left[0].shape[0], right[0].shape[1])
    out = [np.zeros(shape, dtype=np.int64) for _ in range(len(left) + len(right) - 1)]
    for s, a in enumerate(left):
        if not a.any():
            continue
        for t, b in enumerate(right):
            if b.any():
                out[s + t] = (out[s + t] + mod_matmul(a, b, p)) % p
    return poly_trim(out)


def poly_evaluate(matrix: PolyMatrix, shape: Tuple[int, int], c0: FieldElement, arrays: FieldArrays) -> np.ndarray:
    """Codes of the matrix at c = c0 (c0 in the field of `arrays`)."""
    point = arrays.encode(c0)
    total = np.zeros(shape, dtype=np.int64)
    power = 1
    for coefficient in matrix:
        total = arrays.add(total, arrays.mul(coefficient.astype(np.int64), power))
        power = int(arrays.mul(power, point))
    return total
