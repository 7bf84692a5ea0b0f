"""Acceptance criteria: exact ranks, lattice cross-checks and cocycle identities.

Each test prints one PASS/FAIL line (visible with ``-s``) and the same lines
are repeated in the terminal summary of every pytest run.
"""

import random
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from conftest import ACCEPTANCE
from torusgerbes import verification as V
from torusgerbes.alt_forms import AltForm
from torusgerbes.cohomology_ranks import htb_group, htb_via_tau, ns_group, same_lattice
from torusgerbes.errors import SingularImaginaryPart
from torusgerbes.exact_algebra import ComplexElement, rational_algebra
from torusgerbes.spec_files import FIXTURE_NAMES, load_fixture
from torusgerbes.torus import TorusSpec

SEED = 0


@contextmanager
def criterion(number, title):
    entry = {"number": number, "passed": False, "notes": []}
    start = time.perf_counter()
    try:
        yield entry
        entry["passed"] = True
    finally:
        elapsed = time.perf_counter() - start
        notes = "; ".join(entry["notes"])
        entry["line"] = (f"{'PASS' if entry['passed'] else 'FAIL'}  criterion {number}: {title} "
                         f"({elapsed:.2f} s){' - ' + notes if notes else ''}")
        ACCEPTANCE.append(entry)
        print("\n" + entry["line"])


def require(results):
    failed = [(r.name, r.counterexample) for r in results if not r.passed]
    assert not failed, failed
    return {r.name: r for r in results}


@pytest.fixture(scope="module")
def tori():
    return {name: load_fixture(name) for name in FIXTURE_NAMES}


def random_g2_tori(count, seed):
    rng = random.Random(seed)
    alg = rational_algebra()
    q = lambda: Fraction(rng.randint(-12, 12), rng.randint(1, 12))
    out = []
    while len(out) < count:
        tau = [[ComplexElement(alg.rational(q()), alg.rational(q())) for _ in range(2)] for _ in range(2)]
        try:
            out.append(TorusSpec(2, alg, tau))
        except SingularImaginaryPart:
            continue
    return out


def test_criterion_1_genus_two_universality():
    with criterion(1, "rank HTB = 4 for 25 random rational genus-2 tori, < 1 s") as entry:
        tori = random_g2_tori(25, SEED)
        start = time.perf_counter()
        ranks = [htb_group(t).rank for t in tori]
        elapsed = time.perf_counter() - start
        entry["notes"].append(f"ranks {sorted(set(ranks))}, kernel time {elapsed:.3f} s")
        assert ranks == [4] * 25
        assert elapsed < 1.0


def test_criterion_2_rank_table(tori):
    with criterion(2, "NS/HTB ranks of the genus-3 diagonal fixtures, < 1 s each") as entry:
        expected = {"abc_sqrt23": (3, 12), "abc_rational": (9, 18)}
        for name in ("abc_sqrt23", "abc_rational", "abc_chain"):
            start = time.perf_counter()
            ns, htb = ns_group(tori[name]), htb_group(tori[name])
            elapsed = time.perf_counter() - start
            entry["notes"].append(f"{name} NS {ns.rank} HTB {htb.rank} in {elapsed:.2f} s")
            assert elapsed < 1.0
            if name in expected:
                assert (ns.rank, htb.rank) == expected[name]
        chain = htb_group(tori["abc_chain"])
        assert ns_group(tori["abc_chain"]).rank == 3
        assert chain.rank >= 14
        # exact value produced by the kernel computation itself, recorded as a regression value
        assert chain.rank == 16
        first = AltForm(3, 6, {(0, 4, 5): 1, (1, 3, 5): 1, (2, 3, 4): 1})
        second = AltForm(3, 6, {(0, 2, 4): 1, (0, 1, 5): 1, (3, 4, 5): 1})
        assert chain.contains(first.to_vector()) and chain.contains(second.to_vector())


def test_criterion_3_formulation_crosscheck(tori):
    with criterion(3, "htb_group and htb_via_tau give the same saturated lattice on all fixtures") as entry:
        for name, torus in tori.items():
            a, b = htb_group(torus), htb_via_tau(torus)
            assert same_lattice(a, b) and a.is_saturated() and b.is_saturated()
            entry["notes"].append(f"{name} {a.rank}")


def test_criterion_4_gerbe_cocycle(tori):
    with criterion(4, "d Theta integral, v-independent, s(d Theta) = E; 500 samples, < 10 s per fixture") as entry:
        for name, torus in tori.items():
            start = time.perf_counter()
            results = require(V.check_gerbe_cocycle(torus, SEED, 500))
            elapsed = time.perf_counter() - start
            classes = results["gerbe.d_theta_integral"].details["classes"]
            assert classes == 3 * htb_group(torus).rank
            if classes:
                assert "gerbe.skew_d_theta_equals_E" in results
                entry["notes"].append(f"{name} {classes} classes {elapsed:.2f} s")
            else:
                entry["notes"].append(f"{name} HTB = 0 (vacuous)")
            assert elapsed < 10.0


def test_criterion_5_splitting_identities(tori):
    with criterion(5, "d beta'' + l = 0, d r + k - E/6 = 0, d u + E/6 integral, helper closed form") as entry:
        for name, torus in tori.items():
            if htb_group(torus).rank == 0:
                entry["notes"].append(f"{name} HTB = 0 (vacuous)")
                continue
            split = require(V.check_splitting(torus, SEED, 500))
            for key in ("beta2.kills_l", "r.coboundary", "u.coboundary", "beta1.real_part"):
                assert key in split
            helper = require(V.check_helper(torus, SEED, 200))
            assert helper["helper.closed_form"].samples >= 200
            zero = split["beta1.real_part"].details["exactly_zero_everywhere"]
            entry["notes"].append(f"{name} (d beta' + k = 0 at every sample: {zero})")


def test_criterion_6_universal_gerbe(tori):
    with criterion(6, "d Psi integral, restriction to mu = 0, topological class, kappa trivialises mu^H/2") as entry:
        for name, torus in tori.items():
            uni = require(V.check_universal(torus, SEED, 500, topo_samples=100))
            assert uni["universal.d_psi_integral"].samples >= 500
            assert uni["universal.topological_class"].samples == 100
            assert "universal.restriction_mu_zero" in uni
            kap = require(V.check_kappa(torus, SEED, 500))
            assert kap["kappa.trivializes_half_muH"].samples >= 500
            pattern = uni["universal.d_psi_integral"].details
            entry["notes"].append(f"{name} d Psi = -sigma(mu3)(l2,l1): "
                                  f"{pattern['equals_minus_sigma_mu3_l2_l1']}")


def test_criterion_7_pullback(tori):
    with criterion(7, "n* Theta(B,E) vs Theta(n^2 B, n^3 E) for n in -3..3, 200 samples each; class identity") as entry:
        for name, torus in tori.items():
            res = require(V.check_pullback(torus, SEED, 200, ns=range(-3, 4)))
            diff = res["pullback.exponent_difference_integral"]
            assert diff.details["n_values"] == list(range(-3, 4))
            assert "pullback.class_identity" in res
            entry["notes"].append(f"{name} exact zero: {diff.details['exactly_zero']}")


def test_criterion_8_line_bundles(tori):
    with criterion(8, "d phi^E and d psi integral at 500 samples, E from the NS basis") as entry:
        for name, torus in tori.items():
            res = require(V.check_line_bundles(torus, SEED, 500))
            assert res["line.d_phi_integral"].samples >= 500 * ns_group(torus).rank
            assert res["poincare.d_psi_integral"].samples >= 500
            entry["notes"].append(f"{name} NS {ns_group(torus).rank}")
