from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from torusgerbes.errors import NotInvertible, SpecMismatch, ValidationError
from torusgerbes.exact_algebra import (AlgebraSpec, ComplexElement, alg_inv, alg_mul,
                                       format_fraction, is_integer, quadratic_algebra,
                                       rational_algebra, to_fraction)

Q2 = quadratic_algebra("s2", 2)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def q2(a, b):
    return Q2.element([a, b])


def test_unit_law_and_defining_relation():
    x = q2(Fraction(3, 7), -5)
    assert alg_mul(Q2.one(), x) == x
    assert alg_mul(Q2.basis(1), Q2.basis(1)) == Q2.rational(2)


def test_conjugate_product():
    assert alg_mul(q2(1, 1), q2(1, -1)) == Q2.rational(-1)


def test_inverse_examples():
    assert alg_inv(Q2.one()) == Q2.one()
    assert alg_inv(Q2.basis(1)) == q2(0, Fraction(1, 2))
    with pytest.raises(NotInvertible):
        alg_inv(Q2.zero())


@settings(max_examples=60, deadline=None)
@given(rationals, rationals)
def test_inverse_roundtrip(a, b):
    x = q2(a, b)
    if not x:
        return
    assert alg_mul(x, alg_inv(x)) == Q2.one()


@settings(max_examples=60, deadline=None)
@given(rationals, rationals, rationals, rationals)
def test_complex_norm(a, b, c, d):
    z = ComplexElement(q2(a, b), q2(c, d))
    assert z * z.conj() == ComplexElement(z.re * z.re + z.im * z.im, Q2.zero())
    assert z.norm_squared() == z.re * z.re + z.im * z.im


def test_is_integer():
    assert is_integer(ComplexElement(Q2.rational(3), Q2.zero())) == (True, 3)
    assert is_integer(Q2.rational(Fraction(1, 2)))[0] is False
    assert is_integer(Q2.basis(1))[0] is False
    assert is_integer(ComplexElement(Q2.rational(1), Q2.rational(1)))[0] is False


def test_non_associative_table_rejected():
    # e1*e1 = e2, e2*e2 = e1, e1*e2 = 1 is commutative but (e1 e1) e2 != e1 (e1 e2)
    table = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
             [[0, 1, 0], [0, 0, 1], [1, 0, 0]],
             [[0, 0, 1], [1, 0, 0], [0, 0, 2]]]
    with pytest.raises(ValidationError):
        AlgebraSpec(["1", "a", "b"], table)


def test_non_commutative_table_rejected():
    z = [0, 0, 0]
    table = [[[1, 0, 0], [0, 1, 0], [0, 0, 1]],
             [[0, 1, 0], z, [0, 1, 0]],
             [[0, 0, 1], z, z]]
    with pytest.raises(ValidationError):
        AlgebraSpec(["1", "a", "b"], table)


def test_broken_unit_rejected():
    with pytest.raises(ValidationError):
        AlgebraSpec(["1", "x"], [[[1, 0], [1, 1]], [[1, 1], [1, 0]]])


def test_spec_mismatch():
    Q3 = quadratic_algebra("s3", 3)
    with pytest.raises(SpecMismatch):
        Q2.basis(1) + Q3.basis(1)


def test_fraction_parsing_and_format():
    assert to_fraction("-3/6") == Fraction(-1, 2)
    assert format_fraction(Fraction(4, 2)) == "2"
    assert format_fraction(Fraction(-1, 3)) == "-1/3"
    with pytest.raises(TypeError):
        to_fraction(True)


def test_mixed_scalars():
    alg = rational_algebra()
    x = alg.rational(Fraction(1, 3))
    assert x * 3 == alg.one()
    assert (ComplexElement.i(alg) * ComplexElement.i(alg)) == ComplexElement(alg.rational(-1), alg.zero())
