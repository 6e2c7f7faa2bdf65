"""
Coefficient fields for exact computation.

Three domains share one element contract (add, sub, mul, div, inverse,
equality, is_zero):
- the prime field GF(p),
- an extension GF(p^k), used to pick a "generic" c when GF(p) is too small,
- the rational-function field GF(p)(c), in which c stays symbolic.

Dense polynomial arithmetic over GF(p) (numerators, denominators, extension
moduli) is delegated to sympy's galoistools, so every list below is a
galoistools dense representation: highest degree first, no leading zeros.
"""

import itertools
import logging
import math
import random
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import (
    gf_add,
    gf_from_int_poly,
    gf_gcd,
    gf_gcdex,
    gf_irreducible_p,
    gf_mul,
    gf_mul_ground,
    gf_neg,
    gf_quo,
    gf_rem,
    gf_strip,
    gf_sub,
)

from errors import DivisionByZero, DomainMismatch, InternalError, InvalidArgument, SpecializationPole

logger = logging.getLogger(__name__)

# Smallest field order accepted as "generic enough" for random specializations
EXTENSION_TARGET_ORDER = 64

# Conway polynomials for the (p, k) pairs used at desk scale.
# Coefficients are listed from the leading term down.
CONWAY_MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),
    (2, 4): (1, 0, 0, 1, 1),
    (2, 5): (1, 0, 0, 1, 0, 1),
    (2, 6): (1, 0, 1, 1, 0, 1, 1),
    (2, 7): (1, 0, 0, 0, 0, 0, 1, 1),
    (2, 8): (1, 0, 0, 0, 1, 1, 1, 0, 1),
    (3, 2): (1, 2, 2),
    (3, 3): (1, 0, 2, 1),
    (3, 4): (1, 2, 0, 0, 2),
    (3, 5): (1, 0, 0, 0, 2, 1),
    (5, 2): (1, 4, 2),
    (5, 3): (1, 0, 3, 3),
    (5, 4): (1, 0, 4, 4, 2),
    (7, 2): (1, 6, 3),
    (7, 3): (1, 6, 0, 4),
}


def _format_dense(rep: Sequence[int], var: str) -> str:
    """Format a dense GF(p) polynomial as `2*c^2 + c + 1`."""
    if not rep:
        return "0"
    top = len(rep) - 1
    parts = []
    for position, a in enumerate(rep):
        a = int(a)
        if not a:
            continue
        e = top - position
        if e == 0:
            parts.append(str(a))
            continue
        mono = var if e == 1 else f"{var}^{e}"
        parts.append(mono if a == 1 else f"{a}*{mono}")
    return " + ".join(parts)


# ============== Element Base Class ==============

class FieldElement:
    """
    Operator plumbing shared by all coefficient types.

    Subclasses implement `_add`, `_sub`, `_mul`, `_neg`, `inverse`, `is_zero`
    and `_key`. Python ints and GF(p) elements are coerced into the element's field;
    elements of any other field raise DomainMismatch.
    """

    __slots__ = ("field",)

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field is self.field or other.field == self.field:
                return other
            same_characteristic = other.field.characteristic == self.field.characteristic
            if same_characteristic and isinstance(other, PrimeFieldElem):
                return self.field(other)
            if same_characteristic and isinstance(self, PrimeFieldElem):
                # let the larger field embed us
                return None
            raise DomainMismatch(
                f"cannot combine elements of {self.field!r} and {other.field!r}",
                {"left": repr(self.field), "right": repr(other.field)}
            )
        if isinstance(other, int):
            return self.field(other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._add(other)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._sub(other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other._sub(self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._mul(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._mul(other.inverse())

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other._mul(self.inverse())

    def __neg__(self):
        return self._neg()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        result = self.field.one
        base = self
        while k:
            if k & 1:
                result = result._mul(base)
            base = base._mul(base)
            k >>= 1
        return result

    def __eq__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self):
        return hash((type(self).__name__, self._key()))

    def __bool__(self):
        return not self.is_zero()

    def is_one(self) -> bool:
        return self._key() == self.field.one._key()

    def weight(self) -> int:
        """Size measure used to pick row-reduction pivots (0 for finite fields)."""
        return 0

    def __repr__(self):
        return f"{self.field!r}({self})"


# ============== Prime Field GF(p) ==============

class PrimeFieldElem(FieldElement):
    """Residue in [0, p)."""

    __slots__ = ("value",)

    def __init__(self, field: "PrimeField", value: int):
        self.field = field
        self.value = value

    def _add(self, other):
        return PrimeFieldElem(self.field, (self.value + other.value) % self.field.p)

    def _sub(self, other):
        return PrimeFieldElem(self.field, (self.value - other.value) % self.field.p)

    def _mul(self, other):
        return PrimeFieldElem(self.field, (self.value * other.value) % self.field.p)

    def _neg(self):
        return PrimeFieldElem(self.field, (-self.value) % self.field.p)

    def inverse(self) -> "PrimeFieldElem":
        if not self.value:
            raise DivisionByZero(f"inverse of 0 in {self.field!r}")
        return PrimeFieldElem(self.field, pow(self.value, -1, self.field.p))

    def is_zero(self) -> bool:
        return self.value == 0

    def _key(self):
        return self.value

    def __int__(self):
        return self.value

    def __str__(self):
        return str(self.value)


class PrimeField:
    """GF(p) for a prime p."""

    is_symbolic = False
    degree = 1

    def __init__(self, p: int):
        if not isprime(p):
            raise InvalidArgument(f"p = {p} is not prime", {"p": p})
        self.p = p
        self.zero = PrimeFieldElem(self, 0)
        self.one = PrimeFieldElem(self, 1)

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def order(self) -> int:
        return self.p

    def __call__(self, value) -> PrimeFieldElem:
        if isinstance(value, PrimeFieldElem):
            if value.field.p != self.p:
                raise DomainMismatch(f"element of {value.field!r} is not in {self!r}")
            return value
        if isinstance(value, FieldElement):
            raise DomainMismatch(f"element of {value.field!r} is not in {self!r}")
        return PrimeFieldElem(self, int(value) % self.p)

    def elements(self) -> List[PrimeFieldElem]:
        """All p elements, in residue order."""
        return [PrimeFieldElem(self, v) for v in range(self.p)]

    def random_element(self, rng: random.Random) -> PrimeFieldElem:
        return PrimeFieldElem(self, rng.randrange(self.p))

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("GF", self.p))

    def __repr__(self):
        return f"GF({self.p})"


# ============== Extension Field GF(p^k) ==============

class ExtFieldElem(FieldElement):
    """Residue class modulo the field's irreducible modulus (dense GF(p) list)."""

    __slots__ = ("_rep",)

    def __init__(self, field: "ExtensionField", rep: List[int]):
        self.field = field
        self._rep = rep

    @property
    def coeffs(self) -> Tuple[int, ...]:
        """Exactly k coefficients, constant term first."""
        padded = [0] * (self.field.k - len(self._rep)) + [int(a) for a in self._rep]
        return tuple(reversed(padded))

    def _add(self, other):
        return ExtFieldElem(self.field, gf_add(self._rep, other._rep, self.field.p, ZZ))

    def _sub(self, other):
        return ExtFieldElem(self.field, gf_sub(self._rep, other._rep, self.field.p, ZZ))

    def _mul(self, other):
        if not self._rep or not other._rep:
            return self.field.zero
        p = self.field.p
        product = gf_mul(self._rep, other._rep, p, ZZ)
        return ExtFieldElem(self.field, gf_rem(product, self.field._modulus, p, ZZ))

    def _neg(self):
        return ExtFieldElem(self.field, gf_neg(self._rep, self.field.p, ZZ))

    def inverse(self) -> "ExtFieldElem":
        if not self._rep:
            raise DivisionByZero(f"inverse of 0 in {self.field!r}")
        p = self.field.p
        s, _, h = gf_gcdex(self._rep, self.field._modulus, p, ZZ)
        if h != [1]:
            raise InternalError(f"modulus of {self.field!r} is not irreducible")
        return ExtFieldElem(self.field, gf_rem(s, self.field._modulus, p, ZZ))

    def is_zero(self) -> bool:
        return not self._rep

    def _key(self):
        return tuple(self._rep)

    def __str__(self):
        return _format_dense(self._rep, self.field.variable)


class ExtensionField:
    """GF(p^k) = GF(p)[a] / (modulus)."""

    is_symbolic = False
    variable = "a"

    def __init__(self, p: int, modulus: Sequence[int]):
        self.base = prime_field(p)
        rep = gf_from_int_poly([int(a) for a in modulus], p)
        if len(rep) < 2 or rep[0] != 1:
            raise InvalidArgument(
                "extension modulus must be monic of degree at least 1",
                {"p": p, "modulus": list(modulus)}
            )
        if not gf_irreducible_p(rep, p, ZZ):
            raise InvalidArgument(
                f"modulus {_format_dense(rep, 'x')} is not irreducible over GF({p})",
                {"p": p, "modulus": [int(a) for a in rep]}
            )
        self.p = p
        self.k = len(rep) - 1
        self.modulus = tuple(int(a) for a in rep)
        self._modulus = [int(a) for a in rep]
        self.zero = ExtFieldElem(self, [])
        self.one = ExtFieldElem(self, [1])

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def degree(self) -> int:
        return self.k

    @property
    def order(self) -> int:
        return self.p ** self.k

    @property
    def gen(self) -> ExtFieldElem:
        """The class of x modulo the modulus."""
        return ExtFieldElem(self, gf_rem([1, 0], self._modulus, self.p, ZZ))

    def element(self, coeffs: Sequence[int]) -> ExtFieldElem:
        """Build an element from coefficients listed constant term first."""
        rep = gf_from_int_poly([int(a) for a in reversed(coeffs)], self.p)
        return ExtFieldElem(self, gf_rem(rep, self._modulus, self.p, ZZ))

    def __call__(self, value) -> ExtFieldElem:
        if isinstance(value, ExtFieldElem):
            if value.field != self:
                raise DomainMismatch(f"element of {value.field!r} is not in {self!r}")
            return value
        if isinstance(value, PrimeFieldElem):
            if value.field.p != self.p:
                raise DomainMismatch(f"element of {value.field!r} is not in {self!r}")
            return ExtFieldElem(self, gf_strip([value.value]))
        if isinstance(value, FieldElement):
            raise DomainMismatch(f"element of {value.field!r} is not in {self!r}")
        return ExtFieldElem(self, gf_strip([int(value) % self.p]))

    def random_element(self, rng: random.Random) -> ExtFieldElem:
        return self.element([rng.randrange(self.p) for _ in range(self.k)])

    def __eq__(self, other):
        return isinstance(other, ExtensionField) and other.p == self.p and other.modulus == self.modulus

    def __hash__(self):
        return hash(("GFext", self.p, self.modulus))

    def __repr__(self):
        return f"GF({self.p}^{self.k})"


# ============== Rational Function Field GF(p)(c) ==============

class RationalFunc(FieldElement):
    """
    numerator / denominator in GF(p)[c], kept normalized:
    gcd 1, monic denominator, zero stored as 0/1.
    """

    __slots__ = ("numerator", "denominator")

    def __init__(self, field: "RationalFunctionField", numerator: List[int], denominator: List[int]):
        self.field = field
        self.numerator = numerator
        self.denominator = denominator

    @property
    def is_polynomial(self) -> bool:
        return len(self.denominator) == 1

    def _add(self, other):
        p = self.field.p
        if self.denominator == other.denominator:
            numerator = gf_add(self.numerator, other.numerator, p, ZZ)
            if len(self.denominator) == 1:
                return RationalFunc(self.field, numerator, [1])
            return self.field.fraction(numerator, self.denominator)
        numerator = gf_add(
            gf_mul(self.numerator, other.denominator, p, ZZ),
            gf_mul(other.numerator, self.denominator, p, ZZ),
            p, ZZ
        )
        return self.field.fraction(numerator, gf_mul(self.denominator, other.denominator, p, ZZ))

    def _sub(self, other):
        p = self.field.p
        if self.denominator == other.denominator:
            numerator = gf_sub(self.numerator, other.numerator, p, ZZ)
            if len(self.denominator) == 1:
                return RationalFunc(self.field, numerator, [1])
            return self.field.fraction(numerator, self.denominator)
        numerator = gf_sub(
            gf_mul(self.numerator, other.denominator, p, ZZ),
            gf_mul(other.numerator, self.denominator, p, ZZ),
            p, ZZ
        )
        return self.field.fraction(numerator, gf_mul(self.denominator, other.denominator, p, ZZ))

    def _mul(self, other):
        if not self.numerator or not other.numerator:
            return self.field.zero
        p = self.field.p
        numerator = gf_mul(self.numerator, other.numerator, p, ZZ)
        if len(self.denominator) == 1 and len(other.denominator) == 1:
            return RationalFunc(self.field, numerator, [1])
        return self.field.fraction(numerator, gf_mul(self.denominator, other.denominator, p, ZZ))

    def _neg(self):
        return RationalFunc(self.field, gf_neg(self.numerator, self.field.p, ZZ), self.denominator)

    def inverse(self) -> "RationalFunc":
        if not self.numerator:
            raise DivisionByZero("inverse of 0 in GF(p)(c)")
        return self.field.fraction(self.denominator, self.numerator)

    def is_zero(self) -> bool:
        return not self.numerator

    def weight(self) -> int:
        return max(len(self.numerator) - 1, 0) + len(self.denominator) - 1

    def _key(self):
        return tuple(self.numerator), tuple(self.denominator)

    def __str__(self):
        numerator = _format_dense(self.numerator, self.field.variable)
        if len(self.denominator) == 1:
            return numerator
        denominator = _format_dense(self.denominator, self.field.variable)
        return f"({numerator})/({denominator})"


class RationalFunctionField:
    """GF(p)(c): exact "generic c"."""

    is_symbolic = True
    variable = "c"

    def __init__(self, p: int):
        self.base = prime_field(p)
        self.p = p
        self.zero = RationalFunc(self, [], [1])
        self.one = RationalFunc(self, [1], [1])

    @property
    def characteristic(self) -> int:
        return self.p

    @property
    def gen(self) -> RationalFunc:
        """The transcendental c."""
        return RationalFunc(self, [1, 0], [1])

    def fraction(self, numerator: List[int], denominator: List[int]) -> RationalFunc:
        """Normalize numerator/denominator (dense GF(p) lists) into a RationalFunc."""
        p = self.p
        if not denominator:
            raise DivisionByZero("rational function with zero denominator")
        if not numerator:
            return self.zero
        if len(denominator) > 1:
            g = gf_gcd(numerator, denominator, p, ZZ)
            if len(g) > 1:
                numerator = gf_quo(numerator, g, p, ZZ)
                denominator = gf_quo(denominator, g, p, ZZ)
        lc = int(denominator[0])
        if lc != 1:
            inv = pow(lc, -1, p)
            numerator = gf_mul_ground(numerator, inv, p, ZZ)
            denominator = gf_mul_ground(denominator, inv, p, ZZ)
        return RationalFunc(self, numerator, denominator)

    def polynomial(self, coeffs: Sequence[int]) -> RationalFunc:
        """Polynomial in c from coefficients listed constant term first."""
        return RationalFunc(self, gf_from_int_poly([int(a) for a in reversed(coeffs)], self.p), [1])

    def __call__(self, value) -> RationalFunc:
        if isinstance(value, RationalFunc):
            if value.field != self:
                raise DomainMismatch(f"element of {value.field!r} is not in {self!r}")
            return value
        if isinstance(value, PrimeFieldElem):
            if value.field.p != self.p:
                raise DomainMismatch(f"element of {value.field!r} is not in {self!r}")
            return RationalFunc(self, gf_strip([value.value]), [1])
        if isinstance(value, FieldElement):
            raise DomainMismatch(f"element of {value.field!r} is not in {self!r}")
        return RationalFunc(self, gf_strip([int(value) % self.p]), [1])

    def random_element(self, rng: random.Random, degree: int = 3) -> RationalFunc:
        """Random quotient of polynomials of degree <= `degree` (nonzero denominator)."""
        numerator = gf_strip([rng.randrange(self.p) for _ in range(degree + 1)])
        denominator = []
        while not denominator:
            denominator = gf_strip([rng.randrange(self.p) for _ in range(degree + 1)])
        return self.fraction(numerator, denominator)

    def __eq__(self, other):
        return isinstance(other, RationalFunctionField) and other.p == self.p

    def __hash__(self):
        return hash(("GFc", self.p))

    def __repr__(self):
        return f"GF({self.p})(c)"


Field = Union[PrimeField, ExtensionField, RationalFunctionField]


# ============== Field Constructors ==============

@lru_cache(maxsize=None)
def prime_field(p: int) -> PrimeField:
    """Cached GF(p); raises InvalidArgument when p is not prime."""
    return PrimeField(p)


@lru_cache(maxsize=None)
def rational_function_field(p: int) -> RationalFunctionField:
    """Cached GF(p)(c)."""
    prime_field(p)
    return RationalFunctionField(p)


@lru_cache(maxsize=None)
def _extension_field(p: int, modulus: Tuple[int, ...]) -> ExtensionField:
    return ExtensionField(p, modulus)


def default_extension_degree(p: int, target: int = EXTENSION_TARGET_ORDER) -> int:
    """Smallest k with p^k >= target."""
    k = 1
    while p ** k < target:
        k += 1
    return k


def default_modulus(p: int, k: int) -> Tuple[int, ...]:
    """
    Irreducible modulus for GF(p^k).

    Uses the shipped Conway table when it has the pair, otherwise the
    lexicographically first monic irreducible polynomial of degree k.
    """
    entry = CONWAY_MODULI.get((p, k))
    if entry is not None:
        if gf_irreducible_p(list(entry), p, ZZ):
            return entry
        logger.warning(f"Shipped modulus for GF({p}^{k}) failed the irreducibility check; searching")
    for tail in itertools.product(range(p), repeat=k):
        if tail[-1] == 0:
            continue
        candidate = [1, *tail]
        if gf_irreducible_p(candidate, p, ZZ):
            return tuple(candidate)
    raise InternalError(f"no irreducible polynomial of degree {k} over GF({p})")


def extension_field(p: int, k: Optional[int] = None, modulus: Optional[Sequence[int]] = None) -> ExtensionField:
    """
    Cached GF(p^k).

    Args:
        p: Characteristic
        k: Extension degree. Defaults to the smallest k with p^k >= 64.
        modulus: Optional user modulus (leading coefficient first). Must be
            monic, irreducible, and of degree k when k is also given.

    Returns:
        The extension field
    """
    prime_field(p)
    if modulus is None:
        k = k or default_extension_degree(p)
        modulus = default_modulus(p, k)
    modulus = tuple(int(a) % p for a in modulus)
    if k is not None and len(gf_strip(list(modulus))) - 1 != k:
        raise InvalidArgument(
            f"modulus has degree {len(gf_strip(list(modulus))) - 1}, expected {k}",
            {"p": p, "k": k, "modulus": list(modulus)}
        )
    return _extension_field(p, modulus)


# ============== Binomials and Specialization ==============

def binomial(value: FieldElement, m: int) -> FieldElement:
    """
    value (value - 1) ... (value - m + 1) / m! computed in value's field.

    Raises:
        InvalidArgument: if m is negative or m >= p (m! vanishes mod p)
    """
    p = value.field.characteristic
    if m < 0 or m >= p:
        raise InvalidArgument(f"binomial coefficient needs 0 <= m < p = {p}, got m = {m}", {"m": m, "p": p})
    result = value.field.one
    for j in range(m):
        result = result * (value - j)
    return result * pow(math.factorial(m) % p, -1, p)


def binomial_c(field: RationalFunctionField, m: int) -> RationalFunc:
    """binomial(c, m) as a polynomial in the symbolic c (denominator 1)."""
    return binomial(field.gen, m)


def _horner(rep: Iterable[int], point: FieldElement) -> FieldElement:
    acc = point.field.zero
    for a in rep:
        acc = acc * point + int(a)
    return acc


def specialize(r: RationalFunc, c0: Union[FieldElement, int]) -> FieldElement:
    """
    Evaluate a rational function of c at c = c0.

    Args:
        r: Element of GF(p)(c)
        c0: Element of GF(p) or GF(p^k) (an int is read as a residue in GF(p))

    Returns:
        numerator(c0) / denominator(c0) in c0's field

    Raises:
        SpecializationPole: if the denominator vanishes at c0
    """
    if isinstance(c0, int):
        c0 = prime_field(r.field.p)(c0)
    if c0.field.characteristic != r.field.p:
        raise DomainMismatch(f"cannot specialize {r.field!r} at an element of {c0.field!r}")
    numerator = _horner(r.numerator, c0)
    denominator = _horner(r.denominator, c0)
    if denominator.is_zero():
        raise SpecializationPole(
            f"denominator of {r} vanishes at c = {c0}",
            {"value": str(r), "c": str(c0)}
        )
    return numerator / denominator


def generic_points(p: int, count: int = 3) -> List[ExtFieldElem]:
    """
    Fixed elements of the default GF(p^k), outside GF(p) whenever k > 1.

    The generator comes first, then seeded draws; the list depends on p only,
    so symbolic rank certificates are reproducible.
    """
    field = extension_field(p)
    points = [field.gen]
    rng = random.Random(p)
    while len(points) < count:
        value = field.random_element(rng)
        if value in points:
            continue
        if field.k > 1 and value ** p == value:
            continue
        points.append(value)
    return points
