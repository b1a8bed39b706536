from fractions import Fraction
from itertools import permutations

import pytest
from hypothesis import given, settings, strategies as st

from src.models.errors import (
    BadIndices,
    DegenerateInput,
    MissingValue,
    MissingVariable,
    NotSquare,
    SizeCapExceeded,
    VanishingDenominator,
)
from src.models.types import Root
from src.tools.exact_algebra import (
    PointM,
    PolyMatrix,
    Polynomial,
    RationalExpr,
    formal_matrix,
    fraction_det,
    poly_det,
    ratexpr_equal,
)
from src.tools.root_combinatorics import build_block_structure
from src.tools.serialization import polynomial_from_json, polynomial_to_json


def x(i, j):
    return Polynomial.variable(Root(i, j))


VARIABLES = [Root(1, 2), Root(1, 3), Root(2, 3)]

monomials = st.lists(
    st.tuples(st.sampled_from(VARIABLES), st.integers(min_value=1, max_value=2)), max_size=2
).map(lambda pairs: tuple(sorted(dict(pairs).items())))

polynomials = st.dictionaries(monomials, st.integers(min_value=-5, max_value=5), max_size=4).map(Polynomial)

points = st.fixed_dictionaries({root: st.fractions(max_denominator=5) for root in VARIABLES})


def leibniz(rows):
    """Reference determinant over all permutations"""
    size = len(rows)
    total = Polynomial.zero()
    for perm in permutations(range(size)):
        inversions = sum(1 for a in range(size) for b in range(a + 1, size) if perm[a] > perm[b])
        term = Polynomial.constant(-1 if inversions % 2 else 1)
        for i, j in enumerate(perm):
            term = term * rows[i][j]
        total = total + term
    return total


class TestPolynomial:
    def test_zero_and_constants(self):
        assert Polynomial.zero().is_zero()
        assert not Polynomial.constant(3).is_zero()
        assert Polynomial.constant(0).is_zero()
        assert x(1, 2) - x(1, 2) == Polynomial.zero()

    def test_rendering(self):
        p = x(1, 3) * x(2, 4) - x(1, 4) * x(2, 3)
        assert str(p) == "x(1,3)*x(2,4) - x(1,4)*x(2,3)"
        assert str(Polynomial.zero()) == "0"
        assert str(x(1, 2) ** 2 * 3) == "3*x(1,2)^2"

    def test_variable_outside_universe(self):
        with pytest.raises(BadIndices):
            Polynomial.variable(Root(1, 2), universe=frozenset({Root(1, 3)}))

    def test_universe_is_checked_at_construction(self):
        universe = frozenset({Root(1, 3), Root(2, 4)})
        with pytest.raises(BadIndices) as excinfo:
            Polynomial({((Root(2, 3), 1),): 1}, universe=universe)
        assert excinfo.value.root == (2, 3)
        p = Polynomial.variable(Root(1, 3), universe=universe)
        assert (p * x(2, 4) + 1).universe == universe
        with pytest.raises(BadIndices):
            p * x(2, 3)

    def test_formal_matrix_entries_live_on_the_nilradical(self):
        bs, sets = build_block_structure((1, 2, 1))
        X = formal_matrix(bs.n, sets.M)
        assert X.entries[0][1].universe == sets.M
        with pytest.raises(BadIndices):
            X.entries[0][1] * x(2, 3)

    def test_evaluate(self):
        p = x(1, 2) * x(2, 4) + x(1, 3) * x(3, 4)
        values = {Root(1, 2): 2, Root(2, 4): 3, Root(1, 3): 0, Root(3, 4): 5}
        assert p.evaluate(values) == 6
        assert x(2, 3).evaluate({Root(2, 3): Fraction(-7, 3)}) == Fraction(-7, 3)

    def test_evaluate_missing_variable(self):
        with pytest.raises(MissingVariable):
            (x(1, 2) * x(2, 3)).evaluate({Root(1, 2): 1})

    def test_substitute_and_derivative(self):
        p = x(1, 2) * x(2, 3) + x(1, 3)
        assert p.substitute({Root(1, 3): 0, Root(2, 3): 1}) == x(1, 2)
        assert p.derivative(Root(2, 3)) == x(1, 2)
        assert (x(1, 2) ** 3).derivative(Root(1, 2)) == x(1, 2) ** 2 * 3

    def test_degree_and_variables(self):
        p = x(1, 2) ** 2 * x(2, 3) + x(1, 3)
        assert p.degree() == 3
        assert p.variables() == {Root(1, 2), Root(2, 3), Root(1, 3)}
        assert Polynomial.constant(4).degree() == 0

    def test_torus_weight(self):
        assert (x(1, 3) * x(2, 4) - x(1, 4) * x(2, 3)).torus_weight(4) == (1, 1, -1, -1)
        assert (x(1, 2) + x(1, 3)).torus_weight(3) is None

    @settings(deadline=None)
    @given(polynomials, polynomials, polynomials)
    def test_ring_axioms(self, p, q, r):
        assert p + q == q + p
        assert p * q == q * p
        assert (p + q) + r == p + (q + r)
        assert (p * q) * r == p * (q * r)
        assert p * (q + r) == p * q + p * r
        assert p - p == Polynomial.zero()

    @settings(deadline=None)
    @given(polynomials, polynomials, points)
    def test_evaluation_is_a_ring_homomorphism(self, p, q, values):
        assert (p + q).evaluate(values) == p.evaluate(values) + q.evaluate(values)
        assert (p * q).evaluate(values) == p.evaluate(values) * q.evaluate(values)

    def test_json_round_trip(self):
        p = x(1, 3) * x(2, 4) * Fraction(-2, 3) + x(1, 2) ** 2 + 5
        assert polynomial_from_json(polynomial_to_json(p)) == p


class TestRationalExpr:
    def test_equality_by_cross_multiplication(self):
        a = RationalExpr(x(1, 2) * x(1, 3), x(1, 3) * x(2, 3))
        b = RationalExpr(x(1, 2), x(2, 3))
        assert ratexpr_equal(a, b)
        assert not ratexpr_equal(a, RationalExpr(x(1, 2)))

    def test_zero_denominator(self):
        with pytest.raises(VanishingDenominator):
            RationalExpr(x(1, 2), Polynomial.zero())
        with pytest.raises(ZeroDivisionError):
            RationalExpr(x(1, 2), x(1, 3) - x(1, 3))

    def test_evaluate_vanishing_denominator(self):
        expr = RationalExpr(x(1, 2), x(1, 3) - x(2, 3))
        with pytest.raises(DegenerateInput):
            expr.evaluate({Root(1, 2): 1, Root(1, 3): 4, Root(2, 3): 4})

    def test_product_and_quotient(self):
        a = RationalExpr(x(1, 2), x(2, 3))
        b = RationalExpr(x(2, 3), x(1, 3))
        assert ratexpr_equal(a * b, RationalExpr(x(1, 2), x(1, 3)))
        assert ratexpr_equal(a / a, RationalExpr(Polynomial.constant(1)))


class TestDeterminants:
    def test_two_by_two_minor(self):
        _, sets = build_block_structure((2, 2))
        X = formal_matrix(4, sets.M)
        assert poly_det(X.submatrix([1, 2], [3, 4])) == x(1, 3) * x(2, 4) - x(1, 4) * x(2, 3)

    def test_one_by_one(self):
        _, sets = build_block_structure((2, 2))
        X = formal_matrix(4, sets.M)
        assert poly_det(X.submatrix([2], [3])) == x(2, 3)
        assert X[1, 2].is_zero()

    def test_three_by_three_matches_leibniz(self):
        _, sets = build_block_structure((2, 1, 3, 2))
        sub = formal_matrix(8, sets.M).submatrix([1, 2, 3], [4, 5, 6])
        assert poly_det(sub) == leibniz(sub.entries)

    def test_empty_matrix(self):
        assert poly_det(PolyMatrix([])) == Polynomial.constant(1)

    def test_not_square(self):
        with pytest.raises(NotSquare):
            poly_det(PolyMatrix([[x(1, 2), x(1, 3)]]))

    def test_size_cap(self):
        m = PolyMatrix([[Polynomial.constant(1), Polynomial.zero()], [Polynomial.zero(), Polynomial.constant(1)]])
        with pytest.raises(SizeCapExceeded):
            poly_det(m, cap=1)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(min_value=1, max_value=3).flatmap(
        lambda size: st.tuples(*[st.lists(st.lists(st.integers(-4, 4), min_size=size, max_size=size),
                                          min_size=size, max_size=size)] * 2)))
    def test_determinant_is_multiplicative(self, pair):
        a, b = pair
        A = PolyMatrix([[Polynomial.constant(v) for v in row] for row in a])
        B = PolyMatrix([[Polynomial.constant(v) for v in row] for row in b])
        assert poly_det(A @ B) == poly_det(A) * poly_det(B)
        assert poly_det(A) == fraction_det(a)

    def test_fraction_det_with_pivoting(self):
        assert fraction_det([[0, 1], [1, 0]]) == -1
        assert fraction_det([[Fraction(1, 2), 1], [1, 2]]) == 0


class TestPointM:
    def test_build_and_read(self):
        _, sets = build_block_structure((1, 1, 1))
        point = PointM.build(3, sets.M, {(1, 2): 1, (1, 3): 0, (2, 3): Fraction(1, 2)})
        assert point[(2, 3)] == Fraction(1, 2)
        assert point.support() == frozenset({Root(1, 2), Root(2, 3)})
        assert point.matrix()[0][1] == 1

    def test_coordinate_outside_nilradical(self):
        _, sets = build_block_structure((2, 1))
        with pytest.raises(BadIndices):
            PointM.build(3, sets.M, {(1, 2): 1, (1, 3): 1, (2, 3): 1})

    def test_missing_coordinate(self):
        _, sets = build_block_structure((1, 1, 1))
        with pytest.raises(MissingValue):
            PointM.build(3, sets.M, {(1, 2): 1})
