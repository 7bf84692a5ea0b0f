"""Exact linear algebra, checked against sympy as an independent oracle."""

from fractions import Fraction
from math import lcm

from hypothesis import given, settings, strategies as st
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from torusgerbes.linalg import (clear_denominators, hermite_normal_form, in_row_lattice,
                                integer_kernel, is_saturated, rational_rank, smith_invariants,
                                solve_integer, solve_rational)


def int_matrices(max_rows=5, max_cols=6, bound=9):
    return st.integers(1, max_rows).flatmap(lambda r: st.integers(1, max_cols).flatmap(
        lambda c: st.lists(st.lists(st.integers(-bound, bound), min_size=c, max_size=c),
                           min_size=r, max_size=r)))


def sympy_invariants(rows):
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    return sorted(abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0)


@settings(max_examples=80, deadline=None)
@given(int_matrices())
def test_smith_invariants_match_sympy(rows):
    ours = smith_invariants(rows)
    assert sorted(ours) == sympy_invariants(rows)
    assert all(b % a == 0 for a, b in zip(ours, ours[1:]))


@settings(max_examples=80, deadline=None)
@given(int_matrices())
def test_integer_kernel(rows):
    ncols = len(rows[0])
    basis = integer_kernel(rows, ncols)
    m = Matrix(rows)
    assert len(basis) == ncols - m.rank()
    for vec in basis:
        assert all(sum(a * b for a, b in zip(row, vec)) == 0 for row in rows)
    assert is_saturated(basis)
    # every sympy rational nullspace vector, scaled to be integral, lies in our lattice
    for v in m.nullspace():
        den = lcm(*(int(x.q) for x in v))
        ints = [int(x * den) for x in v]
        assert in_row_lattice(basis, ints)


@settings(max_examples=80, deadline=None)
@given(int_matrices())
def test_hnf_is_canonical(rows):
    h = hermite_normal_form(rows)
    assert len(h) == Matrix(rows).rank()
    # a unimodular mix of the rows has the same HNF
    mixed = [list(r) for r in rows]
    if len(mixed) > 1:
        mixed[0] = [a + 3 * b for a, b in zip(mixed[0], mixed[1])]
        mixed[1], mixed[-1] = mixed[-1], mixed[1]
    assert hermite_normal_form(mixed) == h
    assert hermite_normal_form(h) == h


@settings(max_examples=80, deadline=None)
@given(int_matrices(), st.lists(st.integers(-4, 4), min_size=6, max_size=6))
def test_solve_integer(rows, x):
    ncols = len(rows[0])
    x = x[:ncols]
    rhs = [sum(a * b for a, b in zip(row, x)) for row in rows]
    sol = solve_integer(rows, rhs, ncols)
    assert sol is not None
    assert [sum(a * b for a, b in zip(row, sol)) for row in rows] == rhs


def test_solve_integer_detects_no_solution():
    assert solve_integer([[2, 4]], [1], 2) is None
    assert solve_integer([[1, 1], [1, 1]], [0, 1], 2) is None


def test_saturation():
    assert is_saturated([[1, 0], [0, 1]])
    assert not is_saturated([[2, 0], [0, 1]])
    assert not is_saturated([[1, 1], [1, -1]])


def test_rational_routines():
    m = [[Fraction(1, 2), 1], [3, Fraction(-1, 3)]]
    x = solve_rational(m, [1, 2])
    assert [sum(a * b for a, b in zip(row, x)) for row in m] == [1, 2]
    assert solve_rational([[1, 2], [2, 4]], [1, 1]) is None
    assert rational_rank([[1, 2], [2, 4], [0, Fraction(1, 7)]]) == 2
    assert clear_denominators([Fraction(1, 2), Fraction(-1, 3), 0]) == [3, -2, 0]
