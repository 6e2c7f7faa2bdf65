"""
Degree-by-degree linear algebra for the ideal I_c = <f_1, ..., f_{n-1}>.

For each degree d the ideal slice is spanned by {m * f_k : deg m = d - p};
its dimension is the rank of that spanning set in the monomial basis of A_d.
No Groebner bases are involved.

Over GF(p)(c) the rank is certified at a point: specializing at c0 can only
lower it, and the Koszul relations m f_k e_j - m f_j e_k lie in the kernel of
the spanning matrix for every c. When the ranks of both at c0 add up to the
number of spanning rows, the symbolic rank equals the rank at c0.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from coeff import FieldElement, generic_points
from errors import CherednikError, CIFailure, InvalidArgument, SpecializationPole
from linalg import EchelonBasis, Row, rank, row_reduce
from poly import Exponent, MultiPoly, PolyRing, monomial_basis, reduce, specialize_poly

logger = logging.getLogger(__name__)

Label = Tuple[Exponent, int]


@lru_cache(maxsize=None)
def basis_index(n: int, d: int) -> Dict[Exponent, int]:
    """Column of each degree-d exponent in the monomial basis."""
    return {exponent: col for col, exponent in enumerate(monomial_basis(n, d))}


def to_vector(f: MultiPoly, d: int) -> Row:
    """Coordinates of a degree-d element of A in the canonical monomial basis."""
    f = reduce(f)
    index = basis_index(f.n, d)
    vector = {}
    for exponent, value in f.terms.items():
        col = index.get(exponent)
        if col is None:
            raise InvalidArgument(f"{f} is not homogeneous of degree {d}", {"degree": d})
        vector[col] = value
    return vector


def from_vector(ring: PolyRing, vector: Row, d: int) -> MultiPoly:
    basis = monomial_basis(ring.n, d)
    return MultiPoly(ring, {basis[col]: value for col, value in vector.items()}, True)


def spanning_labels(generators: Sequence[MultiPoly], d: int) -> List[Label]:
    """(monomial exponent, generator index) of each m * f_k in degree d: basis order, generators inner."""
    for f in generators:
        if not f.is_homogeneous():
            raise InvalidArgument(f"generator {f} is not homogeneous")
    if not generators:
        return []
    n = generators[0].n
    degrees = [g.degree() for g in generators]
    shifts = sorted({d - e for e in degrees if e >= 0 and d - e >= 0}, reverse=True)
    labels = []
    for shift in shifts:
        for exponent in monomial_basis(n, shift):
            for k, e in enumerate(degrees):
                if e >= 0 and d - e == shift:
                    labels.append((exponent, k))
    return labels


def _shifted(exponent: Exponent, other: Exponent) -> Exponent:
    return tuple(a + b for a, b in zip(exponent, other))


def _shifted_rows(polys: Sequence[MultiPoly], labels: Sequence[Label], d: int) -> List[Row]:
    """Coordinates of m * polys[k] for each label, by shifting exponents."""
    if not polys:
        return []
    index = basis_index(polys[0].n, d)
    terms = [reduce(f).terms for f in polys]
    rows = []
    for exponent, k in labels:
        rows.append({index[_shifted(exponent, e)]: value for e, value in terms[k].items()})
    return rows


def spanning_set(generators: Sequence[MultiPoly], d: int) -> List[MultiPoly]:
    """{m * f_k : m a monomial of degree d - deg f_k}, in basis order, generators inner."""
    if not generators:
        return []
    ring = generators[0].ring
    return [ring.monomial(exponent) * generators[k] for exponent, k in spanning_labels(generators, d)]


def spanning_rows(generators: Sequence[MultiPoly], d: int) -> List[Row]:
    """Coordinate rows of spanning_set(generators, d), same order."""
    return _shifted_rows(generators, spanning_labels(generators, d), d)


def koszul_rows(generators: Sequence[MultiPoly], e: int, d: int) -> List[Row]:
    """
    Koszul relations among the degree-d spanning rows of generators of degree e.

    For j < k and m of degree d - 2e the relation puts m f_k on the row of
    (m', j) and -m f_j on the row of (m', k), in coordinates indexed like
    spanning_labels: row (m', k) is number index(m') * len(generators) + k.
    """
    if d < 2 * e:
        return []
    n = generators[0].n
    count = len(generators)
    index = basis_index(n, d - e)
    terms = [reduce(f).terms for f in generators]
    rows = []
    for j, k in combinations(range(count), 2):
        for exponent in monomial_basis(n, d - 2 * e):
            row = {}
            for t, value in terms[k].items():
                row[index[_shifted(exponent, t)] * count + j] = value
            for t, value in terms[j].items():
                row[index[_shifted(exponent, t)] * count + k] = -value
            rows.append(row)
    return rows


def ideal_degree_dim(generators: Sequence[MultiPoly], d: int) -> Tuple[int, EchelonBasis]:
    """dim of the degree-d slice of the ideal, with its echelon basis."""
    if not generators:
        raise InvalidArgument("need at least one generator")
    ring = generators[0].ring
    basis = row_reduce(ring.field, ring.dim(d), spanning_rows(generators, d))
    logger.debug(f"dim I_{d} = {basis.rank} (of {ring.dim(d)})")
    return basis.rank, basis


def _certified_rank(generators: Sequence[MultiPoly], labels: Sequence[Label], d: int) -> Optional[int]:
    """Symbolic rank of the spanning rows from one specialization, or None if no point certifies it."""
    degrees = {f.degree() for f in generators}
    if len(degrees) != 1:
        return None
    (e,) = degrees
    ring = generators[0].ring
    for c0 in generic_points(ring.p):
        try:
            special = [specialize_poly(f, c0) for f in generators]
        except SpecializationPole:
            continue
        span = rank(c0.field, ring.dim(d), _shifted_rows(special, labels, d))
        relations = rank(c0.field, len(labels), koszul_rows(special, e, d))
        if span + relations == len(labels):
            return span
        logger.debug(f"degree {d}: rank {span} + {relations} relations at c = {c0} miss {len(labels)} rows")
    return None


def ideal_rank(generators: Sequence[MultiPoly], d: int) -> int:
    """dim of the degree-d slice of the ideal."""
    if not generators:
        raise InvalidArgument("need at least one generator")
    ring = generators[0].ring
    labels = spanning_labels(generators, d)
    if not labels:
        return 0
    if ring.field.is_symbolic:
        certified = _certified_rank(generators, labels, d)
        if certified is not None:
            return certified
        logger.info(f"degree {d}: no certificate at the fixed points, eliminating over GF({ring.p})[c]")
    return rank(ring.field, ring.dim(d), _shifted_rows(generators, labels, d))


# ============== Hilbert Series ==============

@dataclass
class HilbertSeries:
    """dims[d] = dimension of the degree-d piece."""

    dims: List[int]

    @staticmethod
    def complete_intersection_formula(p: int, n: int, d_max: int) -> List[int]:
        """Coefficients of ((1 - t^p)/(1 - t))^(n-1), padded with zeros to d_max."""
        coeffs = [1]
        for _ in range(n - 1):
            product = [0] * (len(coeffs) + p - 1)
            for k, a in enumerate(coeffs):
                for shift in range(p):
                    product[k + shift] += a
            coeffs = product
        coeffs = coeffs[:d_max + 1]
        return coeffs + [0] * (d_max + 1 - len(coeffs))

    @property
    def total_dim(self) -> int:
        return sum(self.dims)

    @property
    def socle_degree(self) -> int:
        """Top degree with a nonzero dimension (-1 if all vanish)."""
        nonzero = [d for d, dim in enumerate(self.dims) if dim]
        return nonzero[-1] if nonzero else -1

    def first_deviation(self, expected: Sequence[int]) -> Optional[int]:
        for d, (dim, want) in enumerate(zip(self.dims, expected)):
            if dim != want:
                return d
        return None

    def to_dict(self) -> dict:
        return {"dims": list(self.dims), "socle_degree": self.socle_degree, "total_dim": self.total_dim}


def hilbert_series(generators: Sequence[MultiPoly], d_max: int, executor=None) -> HilbertSeries:
    """dims[d] = dim A_d - dim I_d for d = 0..d_max."""
    if not generators:
        raise InvalidArgument("need at least one generator")
    ring = generators[0].ring

    def quotient_dim(d: int) -> int:
        return ring.dim(d) - ideal_rank(generators, d)

    degrees = range(d_max + 1)
    if executor is None:
        dims = [quotient_dim(d) for d in degrees]
    else:
        dims = list(executor.map(quotient_dim, degrees))
    return HilbertSeries(dims)


def hilbert_report(series: HilbertSeries, p: int, n: int) -> dict:
    """The machine-readable Hilbert series record."""
    expected = HilbertSeries.complete_intersection_formula(p, n, len(series.dims) - 1)
    return {
        "dims": list(series.dims),
        "formula": expected,
        "formula_match": series.first_deviation(expected) is None and series.total_dim == p ** (n - 1),
        "socle_degree": series.socle_degree,
        "total_dim": series.total_dim,
    }


def check_complete_intersection(generators: Sequence[MultiPoly], d_max: int, executor=None) -> dict:
    """
    Compare the Hilbert series of A/I_c with ((1 - t^p)/(1 - t))^(n-1).

    Checks the coefficients through the socle degree, vanishing past it up to
    d_max, and a total dimension of p^(n-1).

    Raises:
        CIFailure: at the first mismatching degree (d_max + 1 for a bad total)
    """
    ring = generators[0].ring
    p, n = ring.p, ring.n
    if d_max < (p - 1) * (n - 1) + 1:
        raise InvalidArgument(f"d_max must be at least {(p - 1) * (n - 1) + 1}", {"d_max": d_max})
    series = hilbert_series(generators, d_max, executor)
    expected = HilbertSeries.complete_intersection_formula(p, n, d_max)
    deviation = series.first_deviation(expected)
    if deviation is not None:
        raise CIFailure(deviation, series.dims[deviation], expected[deviation])
    if series.total_dim != p ** (n - 1):
        raise CIFailure(d_max + 1, series.total_dim, p ** (n - 1))
    return hilbert_report(series, p, n)


def check_linear_independence(generators: Sequence[MultiPoly]) -> bool:
    """True iff the generators (all of one degree) are linearly independent."""
    if not generators:
        return True
    degrees = {f.degree() for f in generators if f}
    if len(degrees) > 1:
        raise InvalidArgument("generators must share one degree", {"degrees": sorted(degrees)})
    if any(not f for f in generators):
        return False
    d = degrees.pop()
    ring = generators[0].ring
    rows = [to_vector(f, d) for f in generators]
    return rank(ring.field, ring.dim(d), rows) == len(generators)


# ============== Parameter Sweeps ==============

@dataclass
class SweepRow:
    """One specialization of c and what was observed there."""

    c: str
    independent: Optional[bool] = None
    hilbert_match: Optional[bool] = None
    first_deviation: Optional[int] = None
    error: Optional[str] = None

    def to_dict(self) -> dict:
        return {
            "c": self.c,
            "independent": self.independent,
            "hilbert_match": self.hilbert_match,
            "first_deviation": self.first_deviation,
            "error": self.error,
        }


def sweep_c(
    symbolic_generators: Sequence[MultiPoly],
    values: Sequence[FieldElement],
    d_max: int,
    executor=None
) -> List[SweepRow]:
    """
    Specialize the generators at each value of c and record independence and
    the Hilbert series comparison. Errors are recorded per row, never raised.
    """
    rows = []
    if not symbolic_generators:
        return rows
    ring = symbolic_generators[0].ring
    expected = HilbertSeries.complete_intersection_formula(ring.p, ring.n, d_max)
    for c0 in values:
        row = SweepRow(c=str(c0))
        try:
            generators = [specialize_poly(f, c0) for f in symbolic_generators]
            row.independent = check_linear_independence(generators)
            series = hilbert_series(generators, d_max, executor)
            row.first_deviation = series.first_deviation(expected)
            row.hilbert_match = row.first_deviation is None
        except CherednikError as e:
            row.error = f"{type(e).__name__}: {e}"
        if not (row.independent and row.hilbert_match):
            logger.warning(f"c = {c0}: independent={row.independent}, hilbert_match={row.hilbert_match}")
        rows.append(row)
    return rows
