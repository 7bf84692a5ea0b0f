from fractions import Fraction

import pytest

from conftest import random_rational_torus
from torusgerbes.errors import SingularImaginaryPart
from torusgerbes.exact_algebra import ComplexElement, alg_inv, as_complex, rational_algebra
from torusgerbes.torus import (TorusSpec, apply_J, complex_structure_defects, g2_minor_identity,
                               standard_basis)


def matrix_values(J):
    return [[x.rational_value() if x.is_rational() else x for x in row] for row in J.matrix]


def test_elliptic_curve_structure(fixtures):
    J = fixtures["elliptic_i"].J
    assert matrix_values(J) == [[0, 1], [-1, 0]]
    e0 = (1, 0)
    assert [x.rational_value() for x in apply_J(J, e0)] == [0, -1]
    assert all(not x for x in apply_J(J, (0, 0)))


def test_diagonal_imaginary_blocks(fixtures):
    torus = fixtures["abc_sqrt23"]
    J = torus.J.matrix
    for p in range(3):
        y = torus.tau[p][p].im
        for s in range(6):
            expected_top = alg_inv(y) if s == p + 3 else 0
            expected_bottom = -y if s == p else 0
            assert J[p][s] == torus.algebra.coerce(expected_top)
            assert J[p + 3][s] == torus.algebra.coerce(expected_bottom)


def square_is_minus_identity(torus):
    n = torus.n
    for v in standard_basis(n):
        w = apply_J(torus.J, apply_J(torus.J, v))
        assert [torus.algebra.coerce(x) for x in w] == [torus.algebra.coerce(-x) for x in v]


def test_invariants_on_fixtures(fixture_torus):
    square_is_minus_identity(fixture_torus)
    assert complex_structure_defects(fixture_torus, fixture_torus.J) == []


@pytest.mark.parametrize("g", [1, 2, 3])
@pytest.mark.parametrize("seed", range(4))
def test_invariants_on_random_tori(g, seed):
    torus = random_rational_torus(g, seed * 10 + g)
    square_is_minus_identity(torus)
    assert complex_structure_defects(torus, torus.J) == []
    # i Pi e_s = Pi J e_s, checked directly from the period matrix
    pi = torus.period_matrix()
    alg = torus.algebra
    for s, e in enumerate(standard_basis(torus.n)):
        je = apply_J(torus.J, e)
        for r in range(g):
            lhs = pi[r][s].times_i()
            rhs = sum((pi[r][t] * je[t] for t in range(torus.n)), as_complex(0, alg))
            assert lhs == rhs


@pytest.mark.parametrize("seed", range(10))
def test_genus_two_minor_identity(seed):
    torus = random_rational_torus(2, 100 + seed)
    assert g2_minor_identity(torus.J) == torus.algebra.one()


def test_genus_two_minor_identity_fixture(fixtures):
    assert g2_minor_identity(fixtures["generic_g2"].J) == fixtures["generic_g2"].algebra.one()


def test_singular_imaginary_part():
    alg = rational_algebra()
    z = ComplexElement(alg.rational(Fraction(1, 2)), alg.zero())
    with pytest.raises(SingularImaginaryPart):
        TorusSpec(1, alg, [[z]])
    w = ComplexElement(alg.zero(), alg.one())
    with pytest.raises(SingularImaginaryPart):
        TorusSpec(2, alg, [[w, w], [w, w]])
