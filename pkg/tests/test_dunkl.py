from concurrent.futures import ThreadPoolExecutor
from itertools import combinations

import numpy as np
import pytest

import dunkl
from coeff import prime_field
from dunkl import DunklOp, check_relations, dunkl_apply, dunkl_matrices, dunkl_parts, is_singular, singular_defects
from errors import InvalidArgument, RelationViolation
from graded import to_vector
from poly import all_permutations, act, monomial_basis, partial_diff, poly_ring, reduce, specialize_poly
from series import SingularVectorBuilder
from session import symbolic_session


class TestDunklOperator:
    def test_needs_distinct_indices(self, sym33):
        with pytest.raises(InvalidArgument):
            DunklOp(1, 1, sym33.c)

    def test_index_range(self, sym33):
        with pytest.raises(InvalidArgument):
            dunkl_apply(DunklOp(1, 5, sym33.c), sym33.ring.x(1))

    def test_on_a_variable(self, sym33):
        ring = sym33.ring
        # c n vanishes because p divides n
        assert DunklOp(1, 2, sym33.c)(ring.x(1)) == ring.one
        assert DunklOp(2, 1, sym33.c)(ring.x(1)) == -ring.one

    def test_on_a_product(self, sym24):
        ring = sym24.ring
        assert DunklOp(1, 2, sym24.c)(ring.x(1) * ring.x(2)) == ring.x(1) + ring.x(2)

    def test_zero(self, sym33):
        assert DunklOp(1, 2, sym33.c)(sym33.ring.zero).is_zero()

    def test_constants_are_killed(self, sym33):
        assert DunklOp(3, 1, sym33.c)(sym33.ring.one).is_zero()

    def test_c_zero_is_a_derivative(self, zero33, make_poly, rng):
        f = make_poly(zero33.ring, rng, 3)
        assert DunklOp(2, 1, zero33.c)(f) == partial_diff(f, 2, 1)

    def test_antisymmetric(self, sym33, make_poly, rng):
        op = DunklOp(1, 3, sym33.c)
        f = make_poly(sym33.ring, rng, 2)
        assert (op(f) + op.reversed()(f)).is_zero()

    def test_lowers_degree(self, generic24, make_poly, rng):
        f = make_poly(generic24.ring, rng, 3)
        image = DunklOp(2, 4, generic24.c)(f)
        assert image.is_zero() or (image.is_homogeneous() and image.degree() == 2)


    def test_equivariant(self, sym24, make_poly, rng):
        # sigma D_{y_i - y_j} sigma^-1 = D_{y_sigma(i) - y_sigma(j)}
        f = make_poly(sym24.ring, rng, 2)
        for sigma in all_permutations(4):
            moved = act(sigma, f)
            for i, j in combinations(range(1, 5), 2):
                lhs = act(sigma, DunklOp(i, j, sym24.c)(f))
                rhs = DunklOp(sigma(i), sigma(j), sym24.c)(moved)
                assert reduce(lhs) == reduce(rhs)

    def test_specializes_with_c(self, sym24, generic24, make_poly, rng):
        f = make_poly(sym24.ring, rng, 3)
        c0 = generic24.c
        for i, j in [(1, 2), (3, 1), (2, 4)]:
            symbolic = specialize_poly(DunklOp(i, j, sym24.c)(f), c0)
            assert symbolic == DunklOp(i, j, c0)(specialize_poly(f, c0))

    def test_affine_in_c(self, sym33, make_poly, rng):
        f = make_poly(sym33.ring, rng, 3)
        for i, j in [(1, 2), (3, 2)]:
            derivative, reflection = dunkl_parts(f, i, j)
            assert derivative == partial_diff(f, i, j)
            assert DunklOp(i, j, sym33.c)(f) == derivative + reflection * sym33.c

    def test_parts_of_zero(self, sym33):
        derivative, reflection = dunkl_parts(sym33.ring.zero, 1, 2)
        assert derivative.is_zero() and reflection.is_zero()


class TestDunklMatrices:
    @pytest.mark.parametrize("p, n, d", [(2, 4, 3), (3, 3, 3)])
    def test_rows_are_images_at_every_c(self, p, n, d):
        ring = poly_ring(prime_field(p), n)
        size = ring.dim(d - 1)
        matrices = dunkl_matrices(p, n, d)
        assert sorted(matrices) == list(range(1, n))
        for c0 in prime_field(p).elements():
            for i, (derivative, reflection) in matrices.items():
                at_c0 = (derivative + c0.value * reflection) % p
                for r, exponent in enumerate(monomial_basis(n, d)):
                    expected = np.zeros(size, dtype=np.int64)
                    for col, value in to_vector(DunklOp(i, n, c0)(ring.monomial(exponent)), d - 1).items():
                        expected[col] = value.value
                    assert np.array_equal(at_c0[r], expected)

    def test_cached(self):
        assert dunkl_matrices(3, 3, 2) is dunkl_matrices(3, 3, 2)


class TestSingularVectors:
    @pytest.mark.parametrize("name", ["sym22", "sym24", "sym33"])
    def test_generators_are_singular(self, name, request):
        session = request.getfixturevalue(name)
        generators = request.getfixturevalue(name.replace("sym", "gens"))
        for f in generators:
            assert is_singular(f, session.c)
            assert singular_defects(f, session.c) == []

    def test_variable_is_not_singular(self, sym33):
        defects = singular_defects(sym33.ring.x(1), sym33.c)
        assert [i for i, _ in defects] == [2, 3]
        assert not is_singular(sym33.ring.x(1), sym33.c)

    def test_frobenius_powers_at_zero(self, zero33):
        ring = zero33.ring
        assert is_singular(ring.x(1) ** 3, zero33.c)
        assert not is_singular(ring.x(1) ** 2, zero33.c)

    @pytest.mark.slow
    @pytest.mark.parametrize("p, n", [(2, 6), (3, 6), (5, 5)])
    def test_desk_scale_generators_are_singular(self, p, n):
        session = symbolic_session(p, n)
        generators = SingularVectorBuilder(session).generators()
        assert len(generators) == n - 1
        assert all(f.is_homogeneous() and f.degree() == p for f in generators)
        assert all(is_singular(f, session.c) for f in generators)


class TestRelations:
    @pytest.mark.parametrize("name, degree", [("sym22", 3), ("sym33", 2), ("generic24", 2)])
    def test_relations_hold(self, name, degree, request):
        records = check_relations(request.getfixturevalue(name), degree)
        assert records
        assert all(r["status"] == "pass" for r in records)
        assert {r["degree"] for r in records} == set(range(degree + 1))

    def test_relation_groups(self, sym33):
        names = {r["relation"] for r in check_relations(sym33, 1)}
        assert names == {"commutator_x_i", "commutator_x_l", "antisymmetry", "dunkl_commute"}

    @pytest.mark.slow
    def test_relations_through_degree_four(self, sym24):
        assert all(r["status"] == "pass" for r in check_relations(sym24, 4))

    @pytest.mark.slow
    def test_relations_through_degree_four_for_p_three(self, sym33):
        records = check_relations(sym33, 4)
        assert {r["degree"] for r in records} == set(range(5))
        assert all(r["status"] == "pass" for r in records)

    def test_threaded(self, sym33):
        with ThreadPoolExecutor(max_workers=2) as executor:
            assert check_relations(sym33, 2, executor) == check_relations(sym33, 2)

    def test_degree_checked(self, sym33):
        with pytest.raises(InvalidArgument):
            check_relations(sym33, 0)

    def test_broken_operator_is_caught(self, sym33, monkeypatch):
        # drop the reflection terms: only the derivative is left
        monkeypatch.setattr(dunkl, "dunkl_apply", lambda op, f: partial_diff(f, op.i, op.j))
        with pytest.raises(RelationViolation) as excinfo:
            check_relations(sym33, 2)
        assert excinfo.value.relation == "commutator_x_i"
        assert excinfo.value.details["degree"] == 1
