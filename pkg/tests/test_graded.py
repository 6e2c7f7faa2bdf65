from concurrent.futures import ThreadPoolExecutor

import pytest

import graded
from coeff import prime_field
from errors import CIFailure, InvalidArgument
from graded import (
    HilbertSeries,
    check_complete_intersection,
    check_linear_independence,
    from_vector,
    hilbert_report,
    hilbert_series,
    ideal_degree_dim,
    ideal_rank,
    koszul_rows,
    spanning_rows,
    spanning_set,
    sweep_c,
    to_vector,
)
from poly import poly_ring, specialize_poly
from series import SingularVectorBuilder
from session import symbolic_session


@pytest.fixture
def r33():
    return poly_ring(prime_field(3), 3)


class TestVectors:
    def test_coordinates(self, r33):
        f = r33.x(1) ** 2 + r33.x(1) * r33.x(2) * 2
        assert to_vector(f, 2) == {0: 1, 1: 2}
        assert from_vector(r33, to_vector(f, 2), 2) == f

    def test_last_variable_is_reduced_first(self, r33):
        assert to_vector(r33.gen(3), 1) == {0: 2, 1: 2}

    def test_wrong_degree(self, r33):
        with pytest.raises(InvalidArgument):
            to_vector(r33.x(1), 2)


class TestIdealSlices:
    def test_spanning_set(self, gens33):
        assert len(spanning_set(gens33, 2)) == 0
        assert len(spanning_set(gens33, 3)) == 2
        assert len(spanning_set(gens33, 4)) == 4

    def test_spanning_set_needs_homogeneous_generators(self, r33):
        with pytest.raises(InvalidArgument):
            spanning_set([r33.x(1) + r33.one], 2)

    @pytest.mark.parametrize("d, expected", [(2, 0), (3, 2), (4, 4), (5, 6)])
    def test_ideal_dims(self, gens33, d, expected):
        assert ideal_degree_dim(gens33, d)[0] == expected

    def test_spanning_rows_are_coordinates(self, gens24):
        for d in range(2, 5):
            assert spanning_rows(gens24, d) == [to_vector(f, d) for f in spanning_set(gens24, d)]

    def test_koszul_relations_kill_the_spanning_rows(self, gens24):
        span = spanning_rows(gens24, 5)
        relations = koszul_rows(gens24, 2, 5)
        assert len(relations) == 3 * 3
        for relation in relations:
            total = {}
            for r, a in relation.items():
                for col, value in span[r].items():
                    total[col] = total[col] + a * value if col in total else a * value
            assert all(value.is_zero() for value in total.values())
        assert koszul_rows(gens24, 2, 3) == []


class TestIdealRank:
    @pytest.mark.parametrize("name, d_max", [("gens22", 3), ("gens24", 5), ("gens33", 6)])
    def test_matches_echelon_dims(self, name, d_max, request):
        generators = request.getfixturevalue(name)
        for d in range(d_max + 1):
            assert ideal_rank(generators, d) == ideal_degree_dim(generators, d)[0]

    def test_specialized_generators(self, generic24, gens24):
        generators = [specialize_poly(f, generic24.c) for f in gens24]
        assert [ideal_rank(generators, d) for d in range(6)] == [0, 0, 3, 9, 15, 21]

    def test_uncertified_rank_falls_back_to_elimination(self, gens22, monkeypatch):
        # c = 1 kills the only generator, so no point certifies the rank
        monkeypatch.setattr(graded, "generic_points", lambda p: [prime_field(p)(1)])
        assert ideal_rank(gens22, 2) == 1
        assert ideal_rank(gens22, 3) == 1

    def test_mixed_degrees_use_elimination(self, sym33):
        x1, x2 = sym33.ring.x(1), sym33.ring.x(2)
        generators = [x1 * sym33.c, x1 * x2]
        assert ideal_rank(generators, 2) == ideal_degree_dim(generators, 2)[0] == 2

    def test_below_the_generator_degree(self, gens33):
        assert ideal_rank(gens33, 2) == 0

    def test_needs_generators(self):
        with pytest.raises(InvalidArgument):
            ideal_rank([], 2)


class TestHilbertSeries:
    @pytest.mark.parametrize("p, n, d_max, expected", [
        (2, 2, 3, [1, 1, 0, 0]),
        (2, 4, 5, [1, 3, 3, 1, 0, 0]),
        (3, 3, 6, [1, 2, 3, 2, 1, 0, 0]),
        (5, 5, 2, [1, 4, 10]),
    ])
    def test_formula(self, p, n, d_max, expected):
        assert HilbertSeries.complete_intersection_formula(p, n, d_max) == expected

    @pytest.mark.parametrize("name, d_max, expected", [
        ("gens22", 3, [1, 1, 0, 0]),
        ("gens24", 5, [1, 3, 3, 1, 0, 0]),
        ("gens33", 6, [1, 2, 3, 2, 1, 0, 0]),
    ])
    def test_symbolic_series(self, name, d_max, expected, request):
        series = hilbert_series(request.getfixturevalue(name), d_max)
        assert series.dims == expected

    def test_series_properties(self):
        series = HilbertSeries([1, 2, 3, 2, 1, 0, 0])
        assert series.total_dim == 9
        assert series.socle_degree == 4
        assert series.first_deviation([1, 2, 3, 2, 1, 0, 0]) is None
        assert series.first_deviation([1, 2, 4, 2, 1, 0, 0]) == 2
        assert HilbertSeries([0, 0]).socle_degree == -1

    def test_threaded_series(self, gens24):
        with ThreadPoolExecutor(max_workers=3) as executor:
            assert hilbert_series(gens24, 5, executor).dims == [1, 3, 3, 1, 0, 0]

    def test_report(self, gens33):
        report = hilbert_report(hilbert_series(gens33, 6), 3, 3)
        assert report == {
            "dims": [1, 2, 3, 2, 1, 0, 0],
            "formula": [1, 2, 3, 2, 1, 0, 0],
            "formula_match": True,
            "socle_degree": 4,
            "total_dim": 9,
        }


class TestCompleteIntersection:
    @pytest.mark.parametrize("name, d_max, total", [("gens22", 3, 2), ("gens24", 5, 8), ("gens33", 6, 9)])
    def test_symbolic_generators(self, name, d_max, total, request):
        report = check_complete_intersection(request.getfixturevalue(name), d_max)
        assert report["formula_match"]
        assert report["total_dim"] == total

    @pytest.mark.slow
    def test_two_six(self):
        generators = SingularVectorBuilder(symbolic_session(2, 6)).generators()
        report = check_complete_intersection(generators, 7)
        assert report["dims"] == [1, 5, 10, 10, 5, 1, 0, 0]
        assert report["total_dim"] == 32

    @pytest.mark.slow
    @pytest.mark.parametrize("p, n, socle", [(3, 6, 10), (5, 5, 16)])
    def test_desk_scale_instances(self, p, n, socle):
        generators = SingularVectorBuilder(symbolic_session(p, n)).generators()
        report = check_complete_intersection(generators, socle + 1)
        assert report["formula_match"]
        assert report["socle_degree"] == socle
        assert report["total_dim"] == p ** (n - 1)

    def test_generic_specialization(self, gens24, generic24):
        generators = [specialize_poly(f, generic24.c) for f in gens24]
        assert check_complete_intersection(generators, 5)["socle_degree"] == 3

    def test_d_max_must_pass_the_socle(self, gens24):
        with pytest.raises(InvalidArgument):
            check_complete_intersection(gens24, 3)

    def test_degenerate_value_fails(self, gens22):
        generators = [specialize_poly(f, prime_field(2)(1)) for f in gens22]
        with pytest.raises(CIFailure) as excinfo:
            check_complete_intersection(generators, 3)
        assert excinfo.value.degree == 2


class TestLinearIndependence:
    def test_symbolic_generators(self, gens24):
        assert check_linear_independence(gens24)

    def test_repeated_generator(self, gens33):
        assert not check_linear_independence([gens33[0], gens33[0]])

    def test_zero_generator(self, gens22):
        assert not check_linear_independence([specialize_poly(gens22[0], prime_field(2)(1))])

    def test_mixed_degrees(self, r33):
        with pytest.raises(InvalidArgument):
            check_linear_independence([r33.x(1), r33.x(2) ** 2])


class TestSweep:
    def test_p_equals_n_equals_two(self, gens22):
        rows = sweep_c(gens22, prime_field(2).elements(), 3)
        assert [r.to_dict() for r in rows] == [
            {"c": "0", "independent": True, "hilbert_match": True, "first_deviation": None, "error": None},
            {"c": "1", "independent": False, "hilbert_match": False, "first_deviation": 2, "error": None},
        ]

    def test_zero_is_always_a_complete_intersection(self, gens33):
        (row,) = sweep_c(gens33, [prime_field(3).zero], 6)
        assert row.independent and row.hilbert_match

    def test_empty(self):
        assert sweep_c([], prime_field(2).elements(), 3) == []
