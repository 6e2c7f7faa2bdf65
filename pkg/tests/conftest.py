"""Shared fixtures: sessions for the small (p, n) instances and seeded randomness."""

import random

import pytest

from coeff import extension_field, prime_field
from poly import MultiPoly, PolyRing
from series import SingularVectorBuilder
from session import specialized_session, symbolic_session


@pytest.fixture
def rng():
    return random.Random(20240611)


@pytest.fixture(scope="session")
def sym22():
    return symbolic_session(2, 2)


@pytest.fixture(scope="session")
def sym24():
    return symbolic_session(2, 4)


@pytest.fixture(scope="session")
def sym33():
    return symbolic_session(3, 3)


@pytest.fixture(scope="session")
def gens22(sym22):
    return SingularVectorBuilder(sym22).generators()


@pytest.fixture(scope="session")
def gens24(sym24):
    return SingularVectorBuilder(sym24).generators()


@pytest.fixture(scope="session")
def gens33(sym33):
    return SingularVectorBuilder(sym33).generators()


@pytest.fixture(scope="session")
def generic24():
    """(2, 4) at the generator of GF(2^6), which lies in no proper subfield."""
    field = extension_field(2)
    return specialized_session(2, 4, field.gen)


@pytest.fixture(scope="session")
def zero33():
    return specialized_session(3, 3, prime_field(3).zero)


def random_poly(ring: PolyRing, rng: random.Random, degree: int, terms: int = 4) -> MultiPoly:
    """Random homogeneous element of A of the given degree."""
    basis = ring.monomial_basis(degree)
    f = ring.zero
    for _ in range(terms):
        exponent = basis[rng.randrange(len(basis))]
        if ring.field.is_symbolic:
            value = ring.field.polynomial([rng.randrange(ring.p) for _ in range(3)])
        else:
            value = ring.field.random_element(rng)
        f = f + ring.monomial(exponent, value)
    return f


@pytest.fixture
def make_poly():
    return random_poly
