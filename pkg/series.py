"""
Truncated power series in z with polynomial coefficients, and the
construction of the singular vectors.

    g(z)   = prod_{j=1..n} (1 - x_j z)
    F(z)   = sum_{m=0}^{p-1} binom(c, m) (g(z) - 1)^m
    F_i(z) = F(z) / (1 - x_i z)
    f_i    = [z^p] F_i(z)

Series are sympy ring elements of GF(p)[c, x_1, ..., x_{n-1}, z] handled
with ring_series (rs_mul, rs_pow, rs_trunc, rs_series_inversion), so c stays
a variable during the expansion and is only set when a coefficient is read
out as a MultiPoly. Every 1/(1 - x z) is the geometric expansion around
z = 0. Series are truncated at order p by default; the G(z) identity needs
one more order and builds its own series at p + 1.
"""

import logging
import math
from functools import lru_cache
from typing import Dict, List, Optional, Sequence

from sympy.polys.domains import GF
from sympy.polys.ring_series import rs_diff, rs_mul, rs_pow, rs_series_inversion, rs_trunc
from sympy.polys.rings import PolyElement, xring

from coeff import FieldElement, binomial
from errors import InvalidArgument, LemmaViolation
from poly import MultiPoly, PolyRing, reduce
from session import Session

logger = logging.getLogger(__name__)


# ============== Series Ring ==============

class SeriesSpace:
    """
    GF(p)[c, x_1, ..., x_{n-1}, z], where every series lives.

    x_n is -(x_1 + ... + x_{n-1}). Expansions do not depend on the value of
    c, so they are memoized here and shared by every builder with the same
    (p, n).
    """

    def __init__(self, p: int, n: int):
        names = ["c"] + [f"x{i}" for i in range(1, n)] + ["z"]
        self.ring, gens = xring(",".join(names), GF(p))
        self.p = p
        self.n = n
        self.c = gens[0]
        self.z = gens[-1]
        self._xs = gens[1:-1]
        self._memo: Dict[tuple, PolyElement] = {}

    def x(self, i: int) -> PolyElement:
        if not 1 <= i <= self.n:
            raise InvalidArgument(f"variable index {i} outside 1..{self.n}")
        if i == self.n:
            return -sum(self._xs, self.ring.zero)
        return self._xs[i - 1]

    def binomial(self, value: PolyElement, m: int) -> PolyElement:
        """value (value - 1) ... (value - m + 1) / m!, for 0 <= m < p."""
        if m < 0 or m >= self.p:
            raise InvalidArgument(f"binomial coefficient needs 0 <= m < p = {self.p}, got m = {m}")
        result = self.ring.one
        for j in range(m):
            result = result * (value - j)
        return result * pow(math.factorial(m) % self.p, -1, self.p)

    def memo(self, key: tuple, build) -> PolyElement:
        if key not in self._memo:
            self._memo[key] = build()
        return self._memo[key]

    def _x_diff(self, element: PolyElement, i: int) -> PolyElement:
        if i == self.n:
            return self.ring.zero
        out = rs_diff(element, self._xs[i - 1])
        out.strip_zero()
        return out

    def diff(self, element: PolyElement, i: int, j: int) -> PolyElement:
        """d/dx_i - d/dx_j on the lift without x_n."""
        return self._x_diff(element, i) - self._x_diff(element, j)

    def read(self, element: PolyElement, order: int, ring: PolyRing, c: FieldElement) -> List[MultiPoly]:
        """[z^l] element for l = 0..order, with c set to `c`, as reduced elements of `ring`."""
        to_int = self.ring.domain.to_int
        terms: List[Dict[tuple, FieldElement]] = [{} for _ in range(order + 1)]
        powers: Dict[int, FieldElement] = {}
        for monom, coeff in element.items():
            l = monom[-1]
            if l > order:
                continue
            e = monom[0]
            if e not in powers:
                powers[e] = c ** e
            value = powers[e] * (to_int(coeff) % self.p)
            if value.is_zero():
                continue
            exponent = tuple(monom[1:-1]) + (0,)
            current = terms[l].get(exponent)
            terms[l][exponent] = value if current is None else current + value
        return [MultiPoly(ring, {k: v for k, v in t.items() if not v.is_zero()}, True) for t in terms]


@lru_cache(maxsize=None)
def series_space(p: int, n: int) -> SeriesSpace:
    return SeriesSpace(p, n)


# ============== Truncated Series ==============

class TruncatedSeries:
    """
    sum_l a_l z^l modulo z^(order + 1), stored as one element of a SeriesSpace.

    coeffs[l] is a_l read in `ring` with c set to `c`.
    """

    __slots__ = ("space", "element", "order", "ring", "c", "_coeffs")

    def __init__(self, space: SeriesSpace, element: PolyElement, order: int, ring: PolyRing, c: FieldElement):
        self.space = space
        self.element = rs_trunc(element, space.z, order + 1)
        self.order = order
        self.ring = ring
        self.c = c
        self._coeffs: Optional[List[MultiPoly]] = None

    def _wrap(self, element: PolyElement, order: int) -> "TruncatedSeries":
        return TruncatedSeries(self.space, element, order, self.ring, self.c)

    @property
    def coeffs(self) -> List[MultiPoly]:
        if self._coeffs is None:
            self._coeffs = self.space.read(self.element, self.order, self.ring, self.c)
        return self._coeffs

    def coefficient(self, l: int) -> MultiPoly:
        if not 0 <= l <= self.order:
            raise InvalidArgument(f"order {l} outside 0..{self.order}", {"order": l})
        return self.coeffs[l]

    __getitem__ = coefficient

    def truncate(self, order: int) -> "TruncatedSeries":
        return self._wrap(self.element, min(order, self.order))

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._wrap(self.element + other.element, min(self.order, other.order))

    def __neg__(self) -> "TruncatedSeries":
        return self._wrap(-self.element, self.order)

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self._wrap(self.element - other.element, min(self.order, other.order))

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            order = min(self.order, other.order)
            return self._wrap(rs_mul(self.element, other.element, self.space.z, order + 1), order)
        if isinstance(other, (int, PolyElement)):
            return self._wrap(self.element * other, self.order)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, PolyElement)):
            return self * other
        return NotImplemented

    def __pow__(self, k: int) -> "TruncatedSeries":
        return self._wrap(rs_pow(self.element, k, self.space.z, self.order + 1), self.order)

    def shift(self, s: int = 1) -> "TruncatedSeries":
        """Multiply by z^s, keeping the order."""
        return self._wrap(self.element * self.space.z ** s, self.order)

    def derivative(self) -> "TruncatedSeries":
        """d/dz; the result has order one less."""
        out = rs_diff(self.element, self.space.z)
        out.strip_zero()
        return self._wrap(out, self.order - 1)

    def partial_diff(self, i: int, j: int) -> "TruncatedSeries":
        """d_{y_i - y_j} applied to every coefficient."""
        return self._wrap(self.space.diff(self.element, i, j), self.order)

    def is_graded(self) -> bool:
        """a_l homogeneous of degree l in x for every l, whatever c is."""
        return all(sum(monom[1:-1]) == monom[-1] for monom in self.element.keys())

    def dump(self) -> str:
        return "\n".join(f"z^{l}: {a}" for l, a in enumerate(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return self.order == other.order and self.coeffs == other.coeffs

    __hash__ = None


# ============== Singular Vector Construction ==============

class SingularVectorBuilder:
    """
    Builds g, F, F_i and f_i for one session and checks the coefficient
    identities behind them.

    Args:
        session: The verification session
        c: Override for the value of c (used for the c = 0 degeneration)
    """

    def __init__(self, session: Session, c: Optional[FieldElement] = None):
        self.session = session
        self.ring = session.ring
        self.p = session.p
        self.n = session.n
        self.c = session.c if c is None else session.field(c)
        self.space = series_space(self.p, self.n)

    def _order(self, order: Optional[int]) -> int:
        return self.p if order is None else order

    def series(self, element, order: int) -> TruncatedSeries:
        """Wrap an element of the series ring, read at this builder's c."""
        return TruncatedSeries(self.space, self.space.ring(element), order, self.ring, self.c)

    def geometric(self, i: int, order: Optional[int] = None) -> TruncatedSeries:
        """1/(1 - x_i z)."""
        order = self._order(order)
        space = self.space
        element = space.memo(
            ("geometric", i, order),
            lambda: rs_series_inversion(1 - space.x(i) * space.z, space.z, order + 1)
        )
        return self.series(element, order)

    def build_g(self, order: Optional[int] = None) -> TruncatedSeries:
        order = self._order(order)
        space = self.space

        def build():
            g = space.ring.one
            for j in range(1, self.n + 1):
                g = rs_mul(g, 1 - space.x(j) * space.z, space.z, order + 1)
            return g

        return self.series(space.memo(("g", order), build), order)

    def _g_minus_one(self, order: int) -> TruncatedSeries:
        return self.build_g(order) - self.series(1, order)

    def build_F(self, order: Optional[int] = None) -> TruncatedSeries:
        order = self._order(order)
        space = self.space

        def build():
            h = self._g_minus_one(order)
            power = self.series(1, order)
            total = self.series(1, order)
            # z^2 divides g - 1, so h^m vanishes to order 2m
            for m in range(1, min(self.p - 1, order // 2) + 1):
                power = power * h
                total = total + power * space.binomial(space.c, m)
            return total.element

        return self.series(space.memo(("F", order), build), order)

    def build_Fi(self, i: int, order: Optional[int] = None) -> TruncatedSeries:
        if not 1 <= i <= self.n:
            raise InvalidArgument(f"generator index {i} outside 1..{self.n}", {"index": i})
        order = self._order(order)
        return self.build_F(order) * self.geometric(i, order)

    def extract_fi(self, i: int) -> MultiPoly:
        """f_i = [z^p] F_i(z), homogeneous of degree p."""
        return self.build_Fi(i).coefficient(self.p)

    def generators(self, executor=None) -> List[MultiPoly]:
        """f_1, ..., f_{n-1}."""
        self.build_F()
        indices = range(1, self.n)
        if executor is None:
            return [self.extract_fi(i) for i in indices]
        return list(executor.map(self.extract_fi, indices))

    def _sum_x_over_1_minus_xz(self, order: int) -> TruncatedSeries:
        total = self.series(0, order)
        for j in range(1, self.n + 1):
            total = total + self.geometric(j, order) * self.space.x(j)
        return total

    def _top_term(self, order: int) -> TruncatedSeries:
        """binom(c - 1, p - 1) (g - 1)^(p - 1)."""
        return (self._g_minus_one(order) ** (self.p - 1)) * self.space.binomial(self.space.c - 1, self.p - 1)

    def build_V(self, order: Optional[int] = None) -> TruncatedSeries:
        order = self._order(order)
        return self._sum_x_over_1_minus_xz(order) * self._top_term(order) * self.space.c

    def build_G(self, order: Optional[int] = None) -> TruncatedSeries:
        order = self.p + 1 if order is None else order
        return self._mixed_factor(order) * self._top_term(order)

    def _mixed_factor(self, order: int) -> TruncatedSeries:
        """z c / (1 - x_2 z) - z c / (1 - x_1 z)."""
        difference = self.geometric(2, order) - self.geometric(1, order)
        return difference.shift(1) * self.space.c

    # ---- coefficient identities ----

    def check_lemma_g(self) -> dict:
        """[z^0]g = 1 and [z^1]g = 0."""
        g = self.build_g()
        if g[0] != self.ring.one:
            raise LemmaViolation("z^2 divides g - 1", 0, {"value": str(g[0])})
        if g[1]:
            raise LemmaViolation("z^2 divides g - 1", 1, {"value": str(g[1])})
        return {"lemma": "z^2 divides g - 1", "orders_checked": 2}

    def check_lemma_V(self) -> dict:
        """
        [z^l]V = 0 for l < p, and F'(z) = V(z) - sum_j c x_j/(1 - x_j z) F(z)
        through order p - 1.
        """
        order = self.p
        V = self.build_V(order)
        for l in range(self.p):
            if V[l]:
                raise LemmaViolation("V vanishes below order p", l, {"value": str(V[l])})
        F = self.build_F(order)
        lhs = F.derivative()
        rhs = (V - self._sum_x_over_1_minus_xz(order) * F * self.space.c).truncate(order - 1)
        for l in range(order):
            if lhs[l] != rhs[l]:
                raise LemmaViolation(
                    "F' = V - c sum x_j/(1 - x_j z) F", l,
                    {"lhs": str(lhs[l]), "rhs": str(rhs[l])}
                )
        return {"lemma": "V vanishes below order p", "orders_checked": order}

    def check_lemma_G(self) -> dict:
        """
        [z^l]G = 0 for l <= p, and d_{y_2 - y_1} F = G - (z c/(1 - x_2 z) - z c/(1 - x_1 z)) F
        through order p + 1.
        """
        order = self.p + 1
        G = self.build_G(order)
        for l in range(self.p + 1):
            if G[l]:
                raise LemmaViolation("G vanishes through order p", l, {"value": str(G[l])})
        F = self.build_F(order)
        lhs = F.partial_diff(2, 1)
        rhs = G - self._mixed_factor(order) * F
        for l in range(order + 1):
            if lhs[l] != rhs[l]:
                raise LemmaViolation(
                    "d F = G - (z c/(1 - x_2 z) - z c/(1 - x_1 z)) F", l,
                    {"lhs": str(lhs[l]), "rhs": str(rhs[l])}
                )
        return {"lemma": "G vanishes through order p", "orders_checked": order + 1}

    def check_zero_degeneration(self) -> dict:
        """At c = 0: f_i = x_i^p for i < n, and x_n^p = -(f_1 + ... + f_{n-1}) in A."""
        zero = SingularVectorBuilder(self.session, c=0)
        generators = zero.generators()
        for i, f in enumerate(generators, start=1):
            expected = self.ring.x(i) ** self.p
            if f != expected:
                raise LemmaViolation("f_i = x_i^p at c = 0", self.p, {"index": i, "value": str(f)})
        last = reduce(self.ring.gen(self.n) ** self.p)
        total = self.ring.zero
        for f in generators:
            total = total + f
        if last != -total:
            raise LemmaViolation("x_n^p = -(f_1 + ... + f_{n-1}) at c = 0", self.p, {"value": str(last)})
        if zero.extract_fi(self.n) != last:
            raise LemmaViolation("f_n = x_n^p at c = 0", self.p, {"value": str(zero.extract_fi(self.n))})
        return {"lemma": "c = 0 degeneration", "generators": len(generators)}


# ============== Specialization Witnesses ==============

def witness_point(n: int, j: int) -> List[int]:
    """x_j = 1, x_n = -1, every other coordinate 0 (ambient coordinates)."""
    point = [0] * n
    point[j - 1] = 1
    point[n - 1] = -1
    return point


def specialization_witness(generators: Sequence[MultiPoly], j: int) -> List[FieldElement]:
    """Values of f_1..f_{n-1} at the witness point for index j."""
    if not generators:
        return []
    n = generators[0].n
    point = witness_point(n, j)
    return [f.evaluate(point) for f in generators]


def expected_witness(session: Session, j: int, c: Optional[FieldElement] = None) -> List[FieldElement]:
    """
    Closed-form witness values.

    p = 2: f_j -> 1 - c and f_i -> -c.
    p > 2: f_j -> (-1)^((p-1)/2) binom(c - 1, (p-1)/2) and f_i -> 0.
    """
    c = session.c if c is None else session.field(c)
    p = session.p
    values = []
    for i in range(1, session.n):
        if p == 2:
            values.append(1 - c if i == j else -c)
        elif i == j:
            half = (p - 1) // 2
            sign = -1 if half % 2 else 1
            values.append(binomial(c - 1, half) * sign)
        else:
            values.append(session.field.zero)
    return values
