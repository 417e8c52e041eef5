import random
from fractions import Fraction

import pytest

from lietool.exact_linalg import (ExactSpan, independent_rows, invert_square,
                                  null_space, rref, solve_least_exact)


def F(a, b=1):
    return Fraction(a, b)


class TestExactSpan:
    def test_incremental_rank(self):
        span = ExactSpan(3)
        assert span.add((1, 0, 0))
        assert not span.add((2, 0, 0))
        assert span.add((1, 1, 0))
        assert span.rank == 2
        assert span.contains((5, -3, 0))
        assert not span.contains((0, 0, 1))

    def test_coordinates_certificate(self):
        span = ExactSpan(3)
        gens = [(1, 1, 0), (0, 1, 1)]
        for g in gens:
            span.add(g)
        coeffs = span.coordinates((2, 5, 3), gens)
        assert coeffs == [F(2), F(3)]
        assert span.coordinates((0, 0, 1), gens) is None

    def test_reduce_is_exact(self, rng):
        for _ in range(20):
            span = ExactSpan(4)
            vectors = [tuple(F(rng.randint(-5, 5), rng.randint(1, 3))
                             for _ in range(4)) for _ in range(3)]
            for v in vectors:
                span.add(v)
            coeffs = [F(rng.randint(-3, 3)) for _ in vectors]
            combo = [sum((c * v[i] for c, v in zip(coeffs, vectors)), F(0))
                     for i in range(4)]
            assert span.contains(combo)


class TestSolvers:
    def test_solve_exact_system(self):
        # x + y = 3, x - y = 1
        aug = [[F(1), F(1), F(3)], [F(1), F(-1), F(1)]]
        assert solve_least_exact(aug, 2) == [F(2), F(1)]

    def test_solve_detects_inconsistency(self):
        aug = [[F(1), F(1)], [F(1), F(2)]]     # x = 1 and x = 2
        assert solve_least_exact(aug, 1) is None

    def test_solve_underdetermined_sets_free_to_zero(self):
        aug = [[F(1), F(1), F(2)]]
        assert solve_least_exact(aug, 2) == [F(2), F(0)]

    def test_invert_square(self):
        m = [[F(2), F(1)], [F(1), F(1)]]
        inv = invert_square(m)
        assert inv == [[F(1), F(-1)], [F(-1), F(2)]]

    def test_independent_rows(self):
        cols = [[F(0), F(1), F(2)], [F(0), F(0), F(1)]]
        rows = independent_rows(cols)
        assert rows == [1, 2]
        with pytest.raises(ValueError):
            independent_rows([[F(1), F(2)], [F(2), F(4)]])

    def test_rref_pivots(self):
        reduced, pivots = rref([[F(0), F(2), F(4)], [F(1), F(1), F(1)]])
        assert pivots == [0, 1]
        assert reduced[0][0] == 1 and reduced[1][1] == 1


class TestNullSpace:
    def test_basis_and_orthogonality(self):
        matrix = [[F(1), F(0), F(1)], [F(0), F(1), F(1)]]
        basis = null_space(matrix, 3)
        assert len(basis) == 1
        v = basis[0]
        for row in matrix:
            assert sum(a * b for a, b in zip(row, v)) == 0

    def test_empty_matrix_gives_identity(self):
        basis = null_space([], 2)
        assert basis == [(F(1), F(0)), (F(0), F(1))]

    def test_full_rank_gives_trivial(self):
        matrix = [[F(1), F(0)], [F(0), F(1)]]
        assert null_space(matrix, 2) == []
