from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from ihq import linalg

small = st.integers(-3, 3).map(Fraction)


@st.composite
def matrices(draw, max_rows=5, max_cols=5):
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    return [[draw(small) for _ in range(c)] for _ in range(r)], c


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_rank_matches_sympy(mc):
    m, c = mc
    assert linalg.rank(m, c) == sympy.Matrix(m).rank()


@settings(max_examples=150, deadline=None)
@given(matrices())
def test_nullspace_is_a_kernel_basis(mc):
    m, c = mc
    basis = linalg.nullspace(m, c)
    assert len(basis) == c - sympy.Matrix(m).rank()
    for v in basis:
        assert all(x == 0 for x in linalg.matvec(m, v))
    assert linalg.rank(basis, c) == len(basis)


@settings(max_examples=100, deadline=None)
@given(matrices(), st.lists(small, min_size=5, max_size=5))
def test_solve_consistent_systems(mc, x):
    m, c = mc
    x = x[:c]
    b = linalg.matvec(m, x)
    y = linalg.solve(m, b, c)
    assert y is not None
    assert linalg.matvec(m, y) == b


def test_solve_reports_inconsistency():
    m = linalg.to_matrix([[1, 1], [2, 2]])
    assert linalg.solve(m, [Fraction(1), Fraction(3)], 2) is None


def test_left_nullspace_and_span():
    m = linalg.to_matrix([[1, 2], [2, 4], [0, 1]])
    left = linalg.left_nullspace(m, 3, 2)
    assert len(left) == 1
    assert linalg.vecmat(left[0], m, 2) == [0, 0]
    assert linalg.same_span([[Fraction(1), Fraction(1)]], [[Fraction(-2), Fraction(-2)]], 2)
    assert not linalg.same_span([[Fraction(1), Fraction(0)]], [[Fraction(0), Fraction(1)]], 2)


def test_no_columns_means_everything_is_radical():
    assert linalg.left_nullspace([[], []], 2, 0) == linalg.identity(2)
