import pytest

from coeff import prime_field, rational_function_field
from errors import DomainMismatch, InvalidArgument
from poly import (
    Permutation,
    PolyRing,
    act,
    all_permutations,
    divided_difference,
    monomial_basis,
    partial_diff,
    poly_ring,
    reduce,
    specialize_poly,
)


@pytest.fixture
def r33():
    return poly_ring(prime_field(3), 3)


@pytest.fixture
def r22():
    return poly_ring(prime_field(2), 2)


class TestRing:
    def test_needs_two_variables(self):
        with pytest.raises(InvalidArgument):
            PolyRing(prime_field(2), 1)

    def test_last_variable_is_reduced(self, r33):
        assert r33.x(3) == -(r33.gen(1) + r33.gen(2))
        assert r33.x(3).reduced
        assert not r33.gen(3).reduced

    def test_index_checked(self, r33):
        with pytest.raises(InvalidArgument):
            r33.gen(4)

    def test_monomial_basis(self):
        assert monomial_basis(3, 2) == [(2, 0, 0), (1, 1, 0), (0, 2, 0)]
        assert monomial_basis(4, 0) == [(0, 0, 0, 0)]
        assert monomial_basis(3, -1) == []

    @pytest.mark.parametrize("n, d, expected", [(2, 5, 1), (3, 2, 3), (4, 2, 6), (4, 3, 10)])
    def test_dim_matches_basis(self, n, d, expected):
        ring = poly_ring(prime_field(2), n)
        assert ring.dim(d) == expected
        assert len(ring.monomial_basis(d)) == expected

    def test_cached(self):
        assert poly_ring(prime_field(5), 5) is poly_ring(prime_field(5), 5)


class TestArithmetic:
    def test_degree_and_homogeneity(self, r33):
        f = r33.x(1) ** 2 + r33.x(2)
        assert f.degree() == 2
        assert not f.is_homogeneous()
        assert r33.zero.degree() == -1

    def test_scalar_multiplication(self, r33):
        f = r33.x(1) * 2
        assert f == r33.x(1) * prime_field(3)(2)
        assert (f * 0).is_zero()
        assert 3 * f == r33.zero

    def test_power(self, r33):
        assert (r33.x(1) + r33.x(2)) ** 3 == r33.x(1) ** 3 + r33.x(2) ** 3
        with pytest.raises(InvalidArgument):
            r33.x(1) ** -1

    def test_mixed_rings(self, r33):
        other = poly_ring(prime_field(3), 6)
        with pytest.raises(DomainMismatch):
            r33.x(1) + other.x(1)

    def test_formatting(self, r33):
        f = r33.x(1) * 2 + r33.x(2) ** 2
        assert str(f) == "x2^2 + 2*x1"
        assert str(r33.zero) == "0"
        assert str(r33.one) == "1"

    def test_symbolic_coefficients_are_parenthesized(self):
        K = rational_function_field(2)
        ring = poly_ring(K, 2)
        f = ring.x(1) * (K.gen + 1)
        assert str(f) == "(c + 1)*x1"


class TestReduction:
    def test_sum_of_variables_vanishes(self, r33):
        total = r33.gen(1) + r33.gen(2) + r33.gen(3)
        assert reduce(total).is_zero()

    def test_difference_vanishes_when_p_equals_n_equals_two(self, r22):
        assert reduce(r22.gen(1) - r22.gen(2)).is_zero()

    def test_idempotent(self, r33):
        f = reduce(r33.gen(3) ** 4 + r33.gen(1) * r33.gen(3))
        assert reduce(f) is f

    def test_agrees_with_evaluation(self, r33, rng):
        F = r33.field
        for _ in range(10):
            f = r33.zero
            for _ in range(4):
                exponent = [rng.randrange(3) for _ in range(3)]
                f = f + r33.monomial(exponent, F.random_element(rng))
            a, b = F.random_element(rng), F.random_element(rng)
            assert f.evaluate([a, b, -(a + b)]) == reduce(f).evaluate([a, b])

    def test_evaluate(self):
        ring = poly_ring(prime_field(5), 3)
        f = ring.x(1) ** 2 + ring.x(2)
        assert f.evaluate([1, 2]) == 3
        assert ring.gen(3).evaluate([1, 2, 3]) == 3
        assert ring.gen(3).evaluate([1, 2]) == 2
        with pytest.raises(InvalidArgument):
            f.evaluate([1])


class TestPermutations:
    def test_transposition(self):
        assert Permutation.transposition(3, 1, 2).images == (2, 1, 3)

    def test_composition_applies_right_factor_first(self):
        s = Permutation.transposition(3, 1, 2)
        t = Permutation.transposition(3, 2, 3)
        assert (s * t).images == (2, 3, 1)
        assert (s * t)(1) == s(t(1))

    def test_inverse(self):
        for sigma in all_permutations(4):
            assert sigma * sigma.inverse() == Permutation.identity(4)

    def test_all_permutations(self):
        group = all_permutations(3)
        assert len(group) == 6
        assert group[0] == Permutation.identity(3)
        assert len(set(group)) == 6

    def test_rejects_non_bijection(self):
        with pytest.raises(InvalidArgument):
            Permutation((1, 1, 2))

    def test_act_on_last_variable(self, r33):
        s13 = Permutation.transposition(3, 1, 3)
        assert act(s13, r33.x(1)) == r33.x(3)

    def test_act_is_an_action(self, r33, make_poly, rng):
        group = all_permutations(3)
        f = make_poly(r33, rng, 3)
        for s in group:
            for t in group:
                assert act(s * t, f) == act(s, act(t, f))

    def test_act_is_multiplicative(self, r33, make_poly, rng):
        f, g = make_poly(r33, rng, 2), make_poly(r33, rng, 1)
        for s in all_permutations(3):
            assert act(s, reduce(f * g)) == reduce(act(s, f) * act(s, g))


class TestDividedDifferences:
    def test_linear(self, r22):
        assert divided_difference(r22.gen(1), 1, 2) == r22.one

    def test_square(self, r33):
        assert divided_difference(r33.x(1) ** 2, 1, 2) == r33.x(1) + r33.x(2)

    def test_symmetric_input(self, r33):
        assert divided_difference(r33.x(1) * r33.x(2), 1, 2).is_zero()

    def test_leibniz_rule(self, r33, make_poly, rng):
        # d(fg) = d(f) g + s(f) d(g)
        s12 = Permutation.transposition(3, 1, 2)
        f, g = make_poly(r33, rng, 2), make_poly(r33, rng, 2)
        lhs = divided_difference(f * g, 1, 2)
        rhs = reduce(divided_difference(f, 1, 2) * g + act(s12, f) * divided_difference(g, 1, 2))
        assert lhs == rhs

    def test_equal_indices(self, r33):
        with pytest.raises(InvalidArgument):
            divided_difference(r33.x(1), 2, 2)


class TestPartialDerivatives:
    def test_frobenius_kernel(self, r33):
        assert partial_diff(r33.x(1) ** 3, 1, 2).is_zero()

    def test_square(self, r33):
        assert partial_diff(r33.x(1) ** 2, 1, 2) == r33.x(1) * 2

    def test_product(self, r33):
        assert partial_diff(r33.x(1) * r33.x(2), 1, 2) == r33.x(2) - r33.x(1)

    def test_last_variable(self, r33):
        assert partial_diff(r33.gen(1), 1, 3) == r33.one
        assert partial_diff(r33.gen(3), 1, 3) == -r33.one


class TestSpecialize:
    def test_specialize_coefficients(self):
        K = rational_function_field(3)
        ring = poly_ring(K, 3)
        f = ring.x(1) * K.gen + ring.x(2)
        value = specialize_poly(f, prime_field(3)(2))
        target = poly_ring(prime_field(3), 3)
        assert value.ring == target
        assert value == target.x(1) * 2 + target.x(2)

    def test_vanishing_coefficients_dropped(self):
        K = rational_function_field(3)
        ring = poly_ring(K, 3)
        f = ring.x(1) * (K.gen - 1)
        assert specialize_poly(f, prime_field(3)(1)).is_zero()
