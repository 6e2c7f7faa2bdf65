"""
Sparse polynomials in k[x_1..x_n] and the quotient A = k[x_1..x_n]/(x_1 + ... + x_n).

A MultiPoly stores a dict exponent-tuple -> nonzero coefficient. Exponent
tuples always have length n. A polynomial is "reduced" when no term involves
x_n; `reduce` substitutes x_n = -(x_1 + ... + x_{n-1}) to get there.

Divided differences and derivatives are computed on the ambient lift (the
stored terms read in the free ring) and reduced afterwards. Computing them
inside reduced coordinates is wrong in characteristic p | n: for p = n = 2,
x_1 - x_2 reduces to 0.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from sympy.combinatorics import Permutation as SymPermutation
from sympy.combinatorics.named_groups import SymmetricGroup
from sympy.ntheory.multinomial import multinomial_coefficients

from coeff import FieldElement, specialize
from errors import DomainMismatch, InternalError, InvalidArgument

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = Union[FieldElement, int]


def _accumulate(terms: Dict[Exponent, FieldElement], exponent: Exponent, value: FieldElement) -> None:
    current = terms.get(exponent)
    total = value if current is None else current + value
    if total.is_zero():
        terms.pop(exponent, None)
    else:
        terms[exponent] = total


def _grlex_key(exponent: Exponent):
    return sum(exponent), exponent


@lru_cache(maxsize=None)
def _compositions(d: int, parts: int) -> Tuple[Exponent, ...]:
    """Compositions of d into `parts` parts, in descending lexicographic order."""
    if parts == 1:
        return ((d,),)
    out = []
    for first in range(d, -1, -1):
        for rest in _compositions(d - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def _negated_power(m: int, k: int, p: int) -> Tuple[Tuple[Exponent, int], ...]:
    """(-(y_1 + ... + y_m))^k as (exponent, coefficient mod p) pairs, zero terms dropped."""
    sign = -1 if k % 2 else 1
    return tuple(
        (exponent, (sign * coefficient) % p)
        for exponent, coefficient in sorted(multinomial_coefficients(m, k).items())
        if coefficient % p
    )


# ============== Polynomial Ring ==============

class PolyRing:
    """k[x_1..x_n] over a coefficient field, with A = k[x]/(x_1 + ... + x_n) in view."""

    def __init__(self, field, n: int):
        if n < 2:
            raise InvalidArgument(f"need at least two variables, got n = {n}", {"n": n})
        self.field = field
        self.n = n
        self.p = field.characteristic

    @property
    def zero(self) -> "MultiPoly":
        return MultiPoly(self, {}, True)

    @property
    def one(self) -> "MultiPoly":
        return self.constant(1)

    def constant(self, value: Scalar) -> "MultiPoly":
        value = self.field(value)
        if value.is_zero():
            return self.zero
        return MultiPoly(self, {(0,) * self.n: value}, True)

    def monomial(self, exponent: Sequence[int], coefficient: Scalar = 1) -> "MultiPoly":
        exponent = tuple(exponent)
        if len(exponent) != self.n:
            raise InvalidArgument(f"exponent {exponent} must have length {self.n}")
        coefficient = self.field(coefficient)
        if coefficient.is_zero():
            return self.zero
        return MultiPoly(self, {exponent: coefficient})

    def _check_index(self, i: int) -> None:
        if not 1 <= i <= self.n:
            raise InvalidArgument(f"variable index {i} outside 1..{self.n}", {"index": i})

    def gen(self, i: int) -> "MultiPoly":
        """Ambient x_i (not reduced when i = n)."""
        self._check_index(i)
        exponent = [0] * self.n
        exponent[i - 1] = 1
        return self.monomial(exponent)

    def x(self, i: int) -> "MultiPoly":
        """x_i as an element of A; x(n) is -(x_1 + ... + x_{n-1})."""
        return reduce(self.gen(i))

    def monomial_basis(self, d: int) -> List[Exponent]:
        return monomial_basis(self.n, d)

    def dim(self, d: int) -> int:
        """dim A_d = C(d + n - 2, n - 2)."""
        if d < 0:
            return 0
        return comb(d + self.n - 2, self.n - 2)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and other.n == self.n and other.field == self.field

    def __hash__(self):
        return hash(("PolyRing", self.field, self.n))

    def __repr__(self):
        return f"PolyRing({self.field!r}, n={self.n})"


@lru_cache(maxsize=None)
def poly_ring(field, n: int) -> PolyRing:
    """Cached ring constructor."""
    return PolyRing(field, n)


def monomial_basis(n: int, d: int) -> List[Exponent]:
    """
    Degree-d monomials of A as length-n exponents (last entry 0).

    Ordered grlex with x_1 > x_2 > ... > x_{n-1}; within one degree that is
    descending lexicographic order.
    """
    if d < 0:
        return []
    return [composition + (0,) for composition in _compositions(d, n - 1)]


# ============== Polynomials ==============

class MultiPoly:
    """Immutable sparse polynomial; `terms` maps exponent tuples to nonzero coefficients."""

    __slots__ = ("ring", "terms", "reduced")

    def __init__(self, ring: PolyRing, terms: Dict[Exponent, FieldElement], reduced: Optional[bool] = None):
        self.ring = ring
        self.terms = terms
        if reduced is None:
            reduced = all(exponent[-1] == 0 for exponent in terms)
        self.reduced = reduced

    @property
    def n(self) -> int:
        return self.ring.n

    @property
    def field(self):
        return self.ring.field

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self.terms}) <= 1

    def coefficient(self, exponent: Sequence[int]) -> FieldElement:
        return self.terms.get(tuple(exponent), self.field.zero)

    @property
    def constant_term(self) -> FieldElement:
        return self.coefficient((0,) * self.n)

    def sorted_terms(self) -> List[Tuple[Exponent, FieldElement]]:
        """Terms in the canonical grlex order, largest first."""
        return sorted(self.terms.items(), key=lambda item: _grlex_key(item[0]), reverse=True)

    # ---- arithmetic ----

    def _check_ring(self, other: "MultiPoly") -> None:
        if other.ring is not self.ring and other.ring != self.ring:
            raise DomainMismatch(f"cannot combine polynomials over {self.ring!r} and {other.ring!r}")

    def _lift_scalar(self, other) -> Optional["MultiPoly"]:
        if isinstance(other, MultiPoly):
            self._check_ring(other)
            return other
        if isinstance(other, (FieldElement, int)):
            return self.ring.constant(other)
        return None

    def __add__(self, other):
        other = self._lift_scalar(other)
        if other is None:
            return NotImplemented
        terms = dict(self.terms)
        for e, a in other.terms.items():
            _accumulate(terms, e, a)
        return MultiPoly(self.ring, terms, self.reduced and other.reduced)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.ring, {e: -a for e, a in self.terms.items()}, self.reduced)

    def __sub__(self, other):
        other = self._lift_scalar(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._lift_scalar(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, value: Scalar) -> "MultiPoly":
        value = self.field(value)
        if value.is_zero():
            return self.ring.zero
        if value.is_one():
            return self
        return MultiPoly(self.ring, {e: a * value for e, a in self.terms.items()}, self.reduced)

    def __mul__(self, other):
        if isinstance(other, (FieldElement, int)):
            return self.scale(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_ring(other)
        terms: Dict[Exponent, FieldElement] = {}
        for e1, a1 in self.terms.items():
            for e2, a2 in other.terms.items():
                _accumulate(terms, tuple(u + v for u, v in zip(e1, e2)), a1 * a2)
        return MultiPoly(self.ring, terms, self.reduced and other.reduced)

    def __rmul__(self, other):
        if isinstance(other, (FieldElement, int)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        if k < 0:
            raise InvalidArgument("negative powers of polynomials are not defined")
        result = self.ring.one
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        """Equality of stored terms (free-ring equality); reduce both sides to compare in A."""
        if isinstance(other, (FieldElement, int)):
            other = self.ring.constant(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        self._check_ring(other)
        return self.terms == other.terms

    __hash__ = None

    # ---- evaluation and coefficient maps ----

    def evaluate(self, point: Sequence[Scalar]) -> FieldElement:
        """
        Evaluate at a point of A (n - 1 coordinates, x_n = -sum) or of the
        ambient space (n coordinates).
        """
        field = self.field
        values = [field(v) for v in point]
        if len(values) == self.n - 1:
            values.append(-sum(values, field.zero))
        if len(values) != self.n:
            raise InvalidArgument(f"point must have {self.n - 1} or {self.n} coordinates, got {len(point)}")
        total = field.zero
        for exponent, a in self.terms.items():
            term = a
            for v, k in zip(values, exponent):
                if k:
                    term = term * v ** k
            total = total + term
        return total

    def map_coefficients(self, fn: Callable[[FieldElement], FieldElement], ring: Optional[PolyRing] = None) -> "MultiPoly":
        ring = ring or self.ring
        terms = {}
        for e, a in self.terms.items():
            value = ring.field(fn(a))
            if not value.is_zero():
                terms[e] = value
        return MultiPoly(ring, terms, self.reduced)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exponent, a in self.sorted_terms():
            factors = [
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}"
                for i, k in enumerate(exponent) if k
            ]
            coefficient = str(a)
            if " " in coefficient:
                coefficient = f"({coefficient})"
            if not factors:
                parts.append(coefficient)
            elif a.is_one():
                parts.append("*".join(factors))
            else:
                parts.append("*".join([coefficient] + factors))
        return " + ".join(parts)

    def __repr__(self):
        return f"MultiPoly({self})"


def specialize_poly(f: MultiPoly, c0: FieldElement, ring: Optional[PolyRing] = None) -> MultiPoly:
    """Evaluate every coefficient of f (over GF(p)(c)) at c = c0."""
    ring = ring or poly_ring(c0.field, f.n)
    return f.map_coefficients(lambda a: specialize(a, c0), ring)


# ============== Reduction ==============

def reduce(f: MultiPoly) -> MultiPoly:
    """Substitute x_n = -(x_1 + ... + x_{n-1}); idempotent."""
    if f.reduced:
        return f
    ring = f.ring
    m = ring.n - 1
    terms: Dict[Exponent, FieldElement] = {}
    for exponent, a in f.terms.items():
        k = exponent[-1]
        if k == 0:
            _accumulate(terms, exponent, a)
            continue
        head = exponent[:-1]
        for rest, coefficient in _negated_power(m, k, ring.p):
            _accumulate(terms, tuple(h + r for h, r in zip(head, rest)) + (0,), a * coefficient)
    return MultiPoly(ring, terms, True)


# ============== Symmetric Group ==============

@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..n}; images[i - 1] is the image of i."""

    images: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.images) != list(range(1, len(self.images) + 1)):
            raise InvalidArgument(f"{self.images} is not a permutation of 1..{len(self.images)}")

    @property
    def n(self) -> int:
        return len(self.images)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        images = list(range(1, n + 1))
        images[i - 1], images[j - 1] = j, i
        return cls(tuple(images))

    @classmethod
    def from_sympy(cls, perm: SymPermutation) -> "Permutation":
        return cls(tuple(k + 1 for k in perm.array_form))

    def to_sympy(self) -> SymPermutation:
        return SymPermutation([k - 1 for k in self.images])

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """self ∘ other: apply other first."""
        # sympy multiplies left to right
        return Permutation.from_sympy(other.to_sympy() * self.to_sympy())

    def inverse(self) -> "Permutation":
        return Permutation.from_sympy(~self.to_sympy())


def all_permutations(n: int) -> List[Permutation]:
    """All of S_n, sorted by image tuple."""
    return sorted((Permutation.from_sympy(g) for g in SymmetricGroup(n).generate()), key=lambda s: s.images)


def _permute_lift(f: MultiPoly, sigma: Permutation) -> MultiPoly:
    terms = {}
    for exponent, a in f.terms.items():
        image = [0] * f.n
        for i, k in enumerate(exponent):
            image[sigma.images[i] - 1] = k
        terms[tuple(image)] = a
    return MultiPoly(f.ring, terms)


def act(sigma: Permutation, f: MultiPoly) -> MultiPoly:
    """x_i -> x_sigma(i); re-reduced when f was reduced."""
    if sigma.n != f.n:
        raise InvalidArgument(f"permutation of {sigma.n} letters acting on {f.n} variables")
    image = _permute_lift(f, sigma)
    return reduce(image) if f.reduced else image


def _swap_lift(f: MultiPoly, m: int, l: int) -> MultiPoly:
    terms = {}
    for exponent, a in f.terms.items():
        image = list(exponent)
        image[m - 1], image[l - 1] = image[l - 1], image[m - 1]
        terms[tuple(image)] = a
    return MultiPoly(f.ring, terms)


# ============== Divided Differences and Derivatives ==============

def _check_pair(ring: PolyRing, i: int, j: int) -> None:
    ring._check_index(i)
    ring._check_index(j)
    if i == j:
        raise InvalidArgument(f"indices must differ, got ({i}, {j})", {"indices": [i, j]})


def divided_difference_lift(f: MultiPoly, m: int, l: int) -> MultiPoly:
    """
    (f - s_ml f) / (x_m - x_l) in the free ring, f read as its stored terms.

    Each term a * r * x_m^E of the numerator (r free of x_m) splits as
    (x_m - x_l) * a * r * sum_{k<E} x_m^k x_l^(E-1-k) plus a * r * x_l^E,
    so the quotient is summed term by term and the remainder must vanish.
    """
    ring = f.ring
    _check_pair(ring, m, l)
    numerator = f - _swap_lift(f, m, l)
    quotient: Dict[Exponent, FieldElement] = {}
    remainder: Dict[Exponent, FieldElement] = {}
    mi, li = m - 1, l - 1
    for exponent, a in numerator.terms.items():
        e_m = exponent[mi]
        base = list(exponent)
        base[mi] = 0
        for k in range(e_m):
            term = list(base)
            term[mi] = k
            term[li] += e_m - 1 - k
            _accumulate(quotient, tuple(term), a)
        base[li] += e_m
        _accumulate(remainder, tuple(base), a)
    if remainder:
        raise InternalError(
            f"x{m} - x{l} does not divide f - s f",
            {"f": str(f), "remainder": str(MultiPoly(ring, remainder))}
        )
    return MultiPoly(ring, quotient)


def divided_difference(f: MultiPoly, m: int, l: int) -> MultiPoly:
    """(1 - s_ml)/(x_m - x_l) applied to f, reduced."""
    return reduce(divided_difference_lift(f, m, l))


def partial_diff_lift(f: MultiPoly, i: int, j: int) -> MultiPoly:
    """(d/dx_i - d/dx_j) f in the free ring."""
    ring = f.ring
    _check_pair(ring, i, j)
    terms: Dict[Exponent, FieldElement] = {}
    for index, sign in ((i - 1, 1), (j - 1, -1)):
        for exponent, a in f.terms.items():
            k = exponent[index]
            if not k or not k % ring.p:
                continue
            image = list(exponent)
            image[index] -= 1
            _accumulate(terms, tuple(image), a * (sign * k))
    return MultiPoly(ring, terms)


def partial_diff(f: MultiPoly, i: int, j: int) -> MultiPoly:
    """The derivative along y_i - y_j, reduced."""
    return reduce(partial_diff_lift(f, i, j))
