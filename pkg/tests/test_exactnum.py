from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sympy.polys.domains import QQ

from algebra import exactnum
from algebra.exactnum import CoordinateSolver, Subspace
from errors import DimensionMismatchError

small = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def bareiss_rank(rows):
    """Fraction-free elimination on a dense copy."""
    M = [[Fraction(x) for x in row] for row in rows]
    rank, col = 0, 0
    n_rows, n_cols = len(M), len(M[0]) if M else 0
    while rank < n_rows and col < n_cols:
        pivot = next((r for r in range(rank, n_rows) if M[r][col]), None)
        if pivot is None:
            col += 1
            continue
        M[rank], M[pivot] = M[pivot], M[rank]
        for r in range(rank + 1, n_rows):
            factor = M[r][col] / M[rank][col]
            M[r] = [a - factor * b for a, b in zip(M[r], M[rank])]
        rank += 1
        col += 1
    return rank


def test_scalar_parses_exact_strings():
    assert exactnum.scalar("3/2") == QQ(3, 2)
    assert exactnum.scalar(" -4 ") == QQ(-4)
    assert exactnum.fmt(QQ(6, 4)) == "3/2"
    assert exactnum.fmt(QQ(-2)) == "-2"


def test_scalar_rejects_booleans():
    with pytest.raises(TypeError):
        exactnum.scalar(True)


def test_vector_drops_zeros():
    assert exactnum.vector([0, "1/2", 0, 3]) == {1: QQ(1, 2), 3: QQ(3)}


def test_add_scaled_removes_cancelled_entries():
    v = {0: QQ(1), 1: QQ(2)}
    exactnum.add_scaled(v, {1: QQ(1)}, QQ(-2))
    assert v == {0: QQ(1)}


def test_kernel_of_rank_one_matrix():
    M = exactnum.matrix({(0, 0): 1, (0, 1): 2, (1, 0): 2, (1, 1): 4}, (2, 2))
    K = exactnum.kernel(M)
    assert K.dim == 1
    assert exactnum.act(M, K.basis[0]) == {}


def test_kernel_of_zero_matrix_is_everything():
    assert exactnum.kernel(exactnum.zeros(2, 3)).dim == 3


def test_contains_rejects_wrong_length():
    S = Subspace.span(2, [{0: 1}])
    with pytest.raises(DimensionMismatchError):
        exactnum.contains(S, {5: 1})


def test_intersect_of_two_planes():
    S = Subspace.span(3, [{0: 1}, {1: 1}])
    T = Subspace.span(3, [{1: 1}, {2: 1}])
    I = exactnum.intersect(S, T)
    assert I.dim == 1
    assert {1: 1} in I


def test_solve_in_returns_rref_coordinates():
    S = Subspace.span(3, [{0: 1, 2: 1}, {1: 1}])
    assert exactnum.solve_in(S, {0: 2, 1: 3, 2: 2}) == [QQ(2), QQ(3)]
    with pytest.raises(DimensionMismatchError):
        exactnum.solve_in(S, {2: 1})


def test_coordinate_solver_on_skew_basis():
    solver = CoordinateSolver([{0: 1, 1: 1}, {1: 1}], 2)
    assert solver.coordinates({0: 3, 1: 5}) == {0: QQ(3), 1: QQ(2)}
    with pytest.raises(DimensionMismatchError):
        CoordinateSolver([{0: 1}, {0: 2}], 2)


def test_is_nilpotent():
    N = exactnum.matrix({(0, 1): 1, (1, 2): 1}, (3, 3))
    assert exactnum.is_nilpotent(N)
    assert not exactnum.is_nilpotent(exactnum.identity(3))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_matches_bareiss(rows):
    M = exactnum.from_rows([exactnum.vector(r) for r in rows], 4)
    assert exactnum.rank(M) == bareiss_rank(rows)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=1, max_size=5))
def test_rank_nullity(rows):
    M = exactnum.from_rows([exactnum.vector(r) for r in rows], 4)
    assert exactnum.rank(M) + exactnum.kernel(M).dim == 4


def test_largest_invariant_subspace_of_jordan_block():
    # e0 <- e1 <- e2 under a single nilpotent shift
    shift = exactnum.matrix({(0, 1): 1, (1, 2): 1}, (3, 3))
    W = exactnum.largest_invariant_subspace(Subspace.coordinate(3, [0, 1]), [shift])
    assert W == Subspace.coordinate(3, [0, 1])
    W = exactnum.largest_invariant_subspace(Subspace.coordinate(3, [1, 2]), [shift])
    assert W.dim == 0


def test_largest_invariant_subspace_with_grading():
    shift = exactnum.matrix({(0, 1): 1, (2, 3): 1}, (4, 4))
    grading = [0, 1, 0, 1]
    W = exactnum.largest_invariant_subspace(Subspace.coordinate(4, [0, 2, 3]), [shift], grading)
    assert W == Subspace.coordinate(4, [0, 2, 3])


def test_span_closure_and_early_exit():
    shift = exactnum.matrix({(1, 0): 1, (2, 1): 1}, (3, 3))
    full = exactnum.span_closure([{0: 1}], [shift], 3)
    assert full.dim == 3
    partial = exactnum.span_closure([{0: 1}], [shift], 3, target={1: 1})
    assert {1: 1} in partial


def test_quotient_basis_and_reduce_mod():
    N = Subspace.span(3, [{0: 1, 1: 1}])
    keep = exactnum.quotient_basis(N)
    assert keep == [1, 2]
    assert exactnum.reduce_mod(N, {0: 1}, keep) == {0: QQ(-1)}
