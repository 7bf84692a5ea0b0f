"""Cochain constructions: vectorised evaluators against the single-sample formulas,
plus the small worked examples for each formula."""

import random
from fractions import Fraction

import pytest

from torusgerbes.alt_forms import AltForm, hodge_proj_1form, hodge_proj_2form, index_tuples, semicharacter, sigma_section
from torusgerbes.cocycles import (DualPoint, GerbeCochains, H_exponent, beta_double_prime,
                                  beta_prime, coboundary, gerbe_theta_exponent, helper_delta,
                                  k_and_l, kappa_cochain, kappa_exponent, line_ah_exponent,
                                  line_bundle_cochain, poincare_cochain, poincare_line_exponent,
                                  pullback_isogeny, r_term, u_term, universal_cochain,
                                  universal_psi_exponent, universal_topological_class)
from torusgerbes.cohomology_ranks import GerbeClass, htb_group, ns_group
from torusgerbes.errors import InvalidForm
from torusgerbes.exact_algebra import as_complex, is_integer
from torusgerbes.torus import apply_J, standard_basis

SAMPLES = 15


def lattice(rng, n):
    return tuple(rng.randint(-5, 5) for _ in range(n))


def point(rng, n):
    return tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 6)) for _ in range(n))


def rational_2form(rng, n):
    return AltForm.from_vector(2, n, [Fraction(rng.randint(-6, 6), rng.randint(1, 5))
                                      for _ in index_tuples(n, 2)])


def int_2form(rng, n, bound=3):
    return AltForm.from_vector(2, n, [rng.randint(-bound, bound) for _ in index_tuples(n, 2)])


def add(*vs):
    return tuple(sum(xs) for xs in zip(*vs))


def C(torus, x):
    return as_complex(x, torus.algebra)


@pytest.fixture(scope="module")
def gerbe_case(fixtures):
    """A torus with nonzero HTB and a class built from a combination of basis forms."""
    torus = fixtures["abc_sqrt23"]
    rng = random.Random(1)
    ker = htb_group(torus)
    E = ker.combination([rng.randint(-2, 2) for _ in ker.basis])
    c = GerbeClass.from_rational_form(rational_2form(rng, 6), E, torus)
    return torus, c, GerbeCochains(torus, c.E, c.B)


def test_gerbe_cochains_match_scalar_formulas(gerbe_case):
    torus, c, gc = gerbe_case
    rng = random.Random(2)
    for _ in range(SAMPLES):
        l1, l2, l3, v = lattice(rng, 6), lattice(rng, 6), lattice(rng, 6), point(rng, 6)
        assert gc.theta(l1, l2, point=v) == gerbe_theta_exponent(torus, c, l1, l2, v)
        assert gc.H(l1, l2, point=v) == H_exponent(torus, c.E, l1, l2, v)
        k, l = k_and_l(torus, c.E, l1, l2, l3)
        assert gc.k(l1, l2, l3, point=v) == C(torus, k)
        assert gc.l(l1, l2, l3, point=v) == C(torus, l)
        assert gc.beta2(l1, l2, point=v) == C(torus, beta_double_prime(torus, c.E, l1, l2))
        assert gc.u(l1, l2, point=v) == C(torus, u_term(c.E, l1, l2))
        assert gc.r(l1, l2, point=v) == C(torus, r_term(torus, c.E, l1, l2))
        assert gc.beta1(l1, l2, point=v) == C(torus, beta_prime(torus, c.E, l1, l2))


def test_scalar_gerbe_identities(gerbe_case):
    torus, c, _ = gerbe_case
    rng = random.Random(3)
    E = c.E
    for _ in range(SAMPLES):
        l1, l2, l3, v = lattice(rng, 6), lattice(rng, 6), lattice(rng, 6), point(rng, 6)
        # holomorphy of H in v
        assert H_exponent(torus, E, l1, l2, apply_J(torus.J, v)) == \
            H_exponent(torus, E, l1, l2, v).times_i()
        # dH = H_{l2,l3}(l1), independent of v
        dH = (H_exponent(torus, E, l2, l3, add(v, l1)) - H_exponent(torus, E, add(l1, l2), l3, v)
              + H_exponent(torus, E, l1, add(l2, l3), v) - H_exponent(torus, E, l1, l2, v))
        assert dH == H_exponent(torus, E, l2, l3, l1)
        # d beta'' + l = 0 and d r + k - E/6 = 0
        d = lambda f: f(l2, l3) - f(add(l1, l2), l3) + f(l1, add(l2, l3)) - f(l1, l2)
        k, l = k_and_l(torus, E, l1, l2, l3)
        assert not d(lambda a, b: beta_double_prime(torus, E, a, b)) + l
        e6 = Fraction(E(l1, l2, l3), 6)
        assert not d(lambda a, b: r_term(torus, E, a, b)) + k - e6
        assert is_integer(d(lambda a, b: u_term(E, a, b)) + e6)[0]
        # the full theta: integral coboundary
        th = lambda a, b, w=v: gerbe_theta_exponent(torus, c, a, b, w)
        dth = th(l2, l3, add(v, l1)) - th(add(l1, l2), l3) + th(l1, add(l2, l3)) - th(l1, l2)
        assert is_integer(dth)[0]


def test_line_bundle_and_poincare_match_scalar(fixture_torus):
    torus = fixture_torus
    n = torus.n
    rng = random.Random(4)
    ns = ns_group(torus)
    E = ns.combination([rng.randint(-2, 2) for _ in ns.basis])
    phi = line_bundle_cochain(torus, E)
    psi = poincare_cochain(torus)
    for _ in range(SAMPLES):
        lam, v = lattice(rng, n), point(rng, n)
        assert phi(lam, point=v) == line_ah_exponent(torus, E, lam, v)
        h, c = lattice(rng, n), point(rng, n)
        assert psi((lam, h), point=DualPoint(v, c)) == poincare_line_exponent(torus, lam, h, v, c)


def test_universal_and_kappa_match_scalar(fixtures):
    for name in ("generic_g2", "abc_chain"):
        torus = fixtures[name]
        n = torus.n
        rng = random.Random(5)
        psi = universal_cochain(torus)
        for _ in range(SAMPLES):
            l1, l2, v = lattice(rng, n), lattice(rng, n), point(rng, n)
            mu1, mu2 = int_2form(rng, n), int_2form(rng, n)
            B = hodge_proj_2form(rational_2form(rng, n), torus.J)
            assert psi((l1, mu1), (l2, mu2), point=(v, B)) == \
                universal_psi_exponent(torus, l1, mu1, l2, mu2, v, B)
            mu = int_2form(rng, n)
            assert kappa_cochain(torus, mu)(l1, point=v) == kappa_exponent(torus, mu, l1, v)


def test_trivial_values(fixtures):
    torus = fixtures["generic_g2"]
    n = torus.n
    zero2, zero3 = AltForm(2, n), AltForm(3, n)
    rng = random.Random(6)
    l1, l2, v = lattice(rng, n), lattice(rng, n), point(rng, n)
    zero = C(torus, 0)
    assert line_ah_exponent(torus, zero2, l1, v) == zero
    assert H_exponent(torus, zero3, l1, l2, v) == zero
    assert k_and_l(torus, zero3, l1, l2, l1) == (torus.algebra.zero(), torus.algebra.zero())
    assert beta_prime(torus, zero3, l1, l2) == torus.algebra.zero()
    assert gerbe_theta_exponent(torus, GerbeClass(zero2, zero3), l1, l2, v) == zero
    assert poincare_line_exponent(torus, l1, (0,) * n, v, (0,) * n) == zero
    assert universal_psi_exponent(torus, l1, zero2, l2, zero2, v, zero2) == zero
    assert kappa_exponent(torus, zero2, l1, v) == zero
    E = htb_group(torus).forms()[0]
    assert not beta_double_prime(torus, E, (0,) * n, (0,) * n)


def test_line_bundle_at_origin(fixtures):
    torus = fixtures["abc_rational"]
    for E in ns_group(torus).forms():
        for lam in standard_basis(6):
            expected = C(torus, semicharacter(E, lam)) - \
                C(torus, E(apply_J(torus.J, lam), lam)).times_i() * Fraction(1, 4)
            assert line_ah_exponent(torus, E, lam, (0,) * 6) == expected


def test_poincare_at_zero_lattice_vector(fixtures):
    torus = fixtures["abc_sqrt23"]
    rng = random.Random(7)
    h, v, c = lattice(rng, 6), point(rng, 6), point(rng, 6)
    xi = hodge_proj_1form(AltForm.from_vector(1, 6, list(h)), torus.J)
    assert poincare_line_exponent(torus, (0,) * 6, h, v, c) == -xi(v).conj()


def test_coboundary_rules(gerbe_case):
    torus, c, gc = gerbe_case
    d3 = coboundary(gc.theta)
    assert d3.degree == 3
    with pytest.raises(ValueError):
        coboundary(d3)
    zero = kappa_cochain(torus, AltForm(2, 6))
    rng = random.Random(8)
    l1, l2, v = lattice(rng, 6), lattice(rng, 6), point(rng, 6)
    assert coboundary(zero)(l1, l2, point=v) == C(torus, 0)


def test_invalid_forms_rejected(fixtures):
    torus = fixtures["abc_sqrt23"]
    ker = htb_group(torus)
    bad = next(AltForm.basis_form(3, 6, idx) for idx in index_tuples(6, 3)
               if not ker.contains(AltForm.basis_form(3, 6, idx).to_vector()))
    with pytest.raises(InvalidForm):
        GerbeCochains(torus, bad)
    with pytest.raises(InvalidForm):
        H_exponent(torus, bad, (1,) * 6, (0,) * 6, (0,) * 6)
    ns = ns_group(torus)
    bad2 = next(AltForm.basis_form(2, 6, idx) for idx in index_tuples(6, 2)
                if not ns.contains(AltForm.basis_form(2, 6, idx).to_vector()))
    with pytest.raises(InvalidForm):
        line_bundle_cochain(torus, bad2)


def test_helper_closed_form(gerbe_case):
    torus, c, _ = gerbe_case
    rng = random.Random(9)
    E = c.E
    assert helper_delta(torus, E, [0] * 6, (1,) * 6, (2,) * 6, (3,) * 6) == \
        (torus.algebra.zero(), torus.algebra.zero())
    gaussian = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    for _ in range(SAMPLES):
        xs = [rng.choice(gaussian) if rng.random() < 0.5 else
              (Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4)))
              for _ in range(6)]
        direct, closed = helper_delta(torus, E, xs, lattice(rng, 6), lattice(rng, 6), lattice(rng, 6))
        assert direct == closed


def test_universal_coboundary_pattern(fixtures):
    """d(Psi) is integral; its exact value is -sigma(mu3)(l2, l1)."""
    torus = fixtures["generic_g2"]
    n = torus.n
    rng = random.Random(10)
    J = torus.J
    psi = lambda a, ma, b, mb, v, B: universal_psi_exponent(torus, a, ma, b, mb, v, B)
    for _ in range(SAMPLES):
        (l1, l2, l3), v = [lattice(rng, n) for _ in range(3)], point(rng, n)
        m1, m2, m3 = (int_2form(rng, n) for _ in range(3))
        B = hodge_proj_2form(rational_2form(rng, n), J)
        value = (psi(l2, m2, l3, m3, add(v, l1), B + hodge_proj_2form(m1, J))
                 - psi(add(l1, l2), m1 + m2, l3, m3, v, B)
                 + psi(l1, m1, add(l2, l3), m2 + m3, v, B)
                 - psi(l1, m1, l2, m2, v, B))
        assert value == C(torus, -sigma_section(m3)(l2, l1))


def test_universal_restriction_and_topological_class(fixtures):
    torus = fixtures["abc_chain"]
    rng = random.Random(11)
    zero = AltForm(2, 6)
    for _ in range(SAMPLES):
        l1, l2, v = lattice(rng, 6), lattice(rng, 6), point(rng, 6)
        B = hodge_proj_2form(rational_2form(rng, 6), torus.J)
        assert universal_psi_exponent(torus, l1, zero, l2, zero, v, B) == \
            C(torus, B(l1, l2)) * Fraction(1, 2)
    mu3 = AltForm.basis_form(2, 6, (0, 1))
    e = standard_basis(6)
    assert universal_topological_class(e[0], e[1], e[4], zero, zero, mu3) == 1


def test_kappa_trivializes_half_mu_h(fixtures):
    torus = fixtures["abc_sqrt23"]
    rng = random.Random(12)
    for _ in range(SAMPLES):
        mu = int_2form(rng, 6)
        l1, l2, v = lattice(rng, 6), lattice(rng, 6), point(rng, 6)
        k = lambda lam, w: kappa_exponent(torus, mu, lam, w)
        dk = k(l2, add(v, l1)) - k(add(l1, l2), v) + k(l1, v)
        half = C(torus, hodge_proj_2form(mu, torus.J)(l1, l2)) * Fraction(1, 2)
        assert is_integer(dk - half)[0]


def test_pullback_examples(gerbe_case):
    torus, c, _ = gerbe_case
    assert pullback_isogeny(1, c) == c
    assert pullback_isogeny(-1, c) == GerbeClass(c.B, c.E * -1)
    n = 2
    lhs = c.scaled((n * n + n ** 3) // 2) + GerbeClass(c.B, c.E * -1).scaled((n * n - n ** 3) // 2)
    assert lhs == pullback_isogeny(2, c) == GerbeClass(c.B * 4, c.E * 8)
    rng = random.Random(13)
    for m in (-3, -1, 2, 3):
        pc = pullback_isogeny(m, c)
        for _ in range(5):
            l1, l2, v = lattice(rng, 6), lattice(rng, 6), point(rng, 6)
            scale = lambda x: tuple(m * t for t in x)
            diff = (gerbe_theta_exponent(torus, c, scale(l1), scale(l2), scale(v))
                    - gerbe_theta_exponent(torus, pc, l1, l2, v))
            assert is_integer(diff)[0]


# --- negative controls: the identities are sharp enough to reject nearby variants

def test_doubled_helper_closed_form_disagrees(gerbe_case):
    torus, c, _ = gerbe_case
    rng = random.Random(14)
    mismatches = 0
    for _ in range(SAMPLES):
        xs = [(Fraction(rng.randint(-5, 5), rng.randint(1, 4)), rng.randint(-2, 2)) for _ in range(6)]
        direct, closed = helper_delta(torus, c.E, xs, lattice(rng, 6), lattice(rng, 6), lattice(rng, 6))
        mismatches += direct != closed * 2
    assert mismatches > 0


def test_unscaled_r_fails(gerbe_case):
    torus, c, _ = gerbe_case
    E = c.E
    rng = random.Random(15)
    failures = 0
    for _ in range(SAMPLES):
        l1, l2, l3 = lattice(rng, 6), lattice(rng, 6), lattice(rng, 6)
        r48 = lambda a, b: r_term(torus, E, a, b) * 48
        dr = r48(l2, l3) - r48(add(l1, l2), l3) + r48(l1, add(l2, l3)) - r48(l1, l2)
        k, _ = k_and_l(torus, E, l1, l2, l3)
        failures += bool(dr + k - Fraction(E(l1, l2, l3), 6))
    assert failures > 0


def test_halved_kappa_bracket_fails(fixtures):
    from torusgerbes.alt_forms import type_11_part
    torus = fixtures["generic_g2"]
    J = torus.J
    rng = random.Random(16)
    failures = 0
    for _ in range(SAMPLES):
        mu = int_2form(rng, 4)
        M, mh = type_11_part(mu, J), hodge_proj_2form(mu, J)

        def kappa_half(lam, v):
            jv, jl = apply_J(J, v), apply_J(J, lam)
            bracket = (C(torus, M(jv, lam)).times_i() * Fraction(-1, 2) + C(torus, M(v, lam)) * Fraction(1, 2)
                       + C(torus, M(jl, lam)).times_i() * Fraction(-1, 4))
            return (C(torus, sigma_section(mu)(lam, lam)) * Fraction(1, 2) - bracket * Fraction(1, 2)
                    - C(torus, mh(v, lam)).conj() * Fraction(1, 2))

        l1, l2, v = lattice(rng, 4), lattice(rng, 4), point(rng, 4)
        dk = kappa_half(l2, add(v, l1)) - kappa_half(add(l1, l2), v) + kappa_half(l1, v)
        failures += not is_integer(dk - C(torus, mh(l1, l2)) * Fraction(1, 2))[0]
    assert failures > 0


def test_form_outside_htb_gives_non_integral_coboundary(fixtures):
    torus = fixtures["abc_sqrt23"]
    ker = htb_group(torus)
    bad = next(AltForm.basis_form(3, 6, idx) for idx in index_tuples(6, 3)
               if not ker.contains(AltForm.basis_form(3, 6, idx).to_vector()))
    theta = GerbeCochains(torus, bad, check=False).theta
    rng = random.Random(17)
    failures = 0
    for _ in range(SAMPLES):
        l1, l2, l3, v = lattice(rng, 6), lattice(rng, 6), lattice(rng, 6), point(rng, 6)
        failures += not is_integer(coboundary(theta)(l1, l2, l3, point=v))[0]
    assert failures > 0
