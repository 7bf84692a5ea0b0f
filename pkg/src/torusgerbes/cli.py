"""Command line interface: ``torusgerbes <command> <specfile> [flags]``.

Every command prints one report (JSON by default) and exits with 0 when all
of its assertions hold, 1 when one fails and 2 on bad input.  Reports carry
no timing or other run-dependent data, so they are byte-identical for a
fixed spec file and seed; ``--text`` output adds the elapsed time.
"""

import argparse
import cmath
import json
import sys
import time
from fractions import Fraction

from . import __version__
from .alt_forms import AltForm, index_tuples
from .cocycles import GerbeCochains, pullback_isogeny, universal_cochain
from .cohomology_ranks import (GerbeClass, diagonal_htb_excess, diagonal_ns_counts,
                               gerbe_classes_equivalent, htb_group, htb_via_tau, ns_group,
                               same_lattice, witness_mu)
from .errors import TorusGerbeError, ParseError
from .exact_algebra import as_complex, format_fraction
from .spec_files import compact_json, fingerprint, load_spec
from .tensors import complex_batch_element
from . import verification as V

COMMANDS = ("verify-torus", "ns", "htb", "htb-crosscheck", "equiv", "eval-gerbe",
            "eval-universal", "pullback", "verify")

EXIT_PASS, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class InputError(TorusGerbeError):
    """Bad command line input (other than the spec file itself)."""


# ----------------------------------------------------------------------------
# formatting
# ----------------------------------------------------------------------------

def _fmt(x):
    return format_fraction(x) if isinstance(x, Fraction) else str(x)


def _complex_json(z, spec):
    z = as_complex(z, spec)
    return {"re": [format_fraction(c) for c in z.re.coords],
            "im": [format_fraction(c) for c in z.im.coords]}


def _approx_exp(z, spec):
    """exp(2 pi i z) as [re, im] floats via the real embedding (display only)."""
    w = cmath.exp(2j * cmath.pi * as_complex(z, spec).approx())
    return [float(f"{w.real:.12g}"), float(f"{w.imag:.12g}")]


def _form_json(form):
    return [_fmt(form.coefficient(t)) for t in index_tuples(form.rank, form.degree)]


def _complex_form_json(form, spec):
    return [_complex_json(form.coefficient(t), spec) for t in index_tuples(form.rank, form.degree)]


def _kernel_json(ker):
    return {"rank": ker.rank,
            "index_tuples": [list(t) for t in index_tuples(ker.rank_of_lattice, ker.degree)],
            "basis": [list(b) for b in ker.basis],
            "saturated": ker.is_saturated(),
            "constraints_hold": all(ker.satisfies_constraints(b) for b in ker.basis)}


def _results_json(results):
    return [r.to_dict() for r in results]


# ----------------------------------------------------------------------------
# class files
# ----------------------------------------------------------------------------

def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path) from None
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"{path}: line {exc.lineno}") from None


def _parse_rationals(values, length, where):
    if not isinstance(values, list) or len(values) != length:
        raise ParseError(f"expected a list of {length} rationals", where)
    out = []
    for k, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, str)):
            raise ParseError("expected an integer or 'p/q' string", f"{where}[{k}]")
        try:
            out.append(Fraction(v))
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"not a rational number: {v!r}", f"{where}[{k}]") from None
    return out


def class_from_json(data, torus, where="$"):
    """``{"omega": [C(n,2) rationals], "E": [C(n,3) integers]}`` -> GerbeClass.

    B is taken to be omega^H, so it is a (0,2) form by construction.
    """
    n = torus.n
    if not isinstance(data, dict):
        raise ParseError("expected an object with 'omega' and 'E'", where)
    omega = _parse_rationals(data.get("omega", [0] * len(index_tuples(n, 2))),
                             len(index_tuples(n, 2)), f"{where}.omega")
    e_vals = _parse_rationals(data.get("E"), len(index_tuples(n, 3)), f"{where}.E")
    if any(x.denominator != 1 for x in e_vals):
        raise ParseError("E must have integer coefficients", f"{where}.E")
    E = AltForm.from_vector(3, n, [int(x) for x in e_vals])
    return GerbeClass.from_rational_form(AltForm.from_vector(2, n, omega), E, torus).validate(torus)


def _class_json(c, spec):
    return {"B": _complex_form_json(c.B, spec), "E": _form_json(c.E)}


def _default_class(torus, seed):
    """E = sum of the HTB basis, B = omega^H for a seeded random rational omega."""
    forms = htb_group(torus).forms()
    E = sum(forms[1:], forms[0]) if forms else AltForm(3, torus.n)
    omega = V.Sampler(seed, "cli.class").rational_form(2, torus.n)
    return GerbeClass.from_rational_form(omega, E, torus)


def _load_class(args, torus):
    if args.class_file:
        return class_from_json(_read_json(args.class_file), torus, args.class_file)
    return _default_class(torus, args.seed)


# ----------------------------------------------------------------------------
# commands: each returns (result dict, passed)
# ----------------------------------------------------------------------------

def cmd_verify_torus(torus, args):
    res = V.check_complex_structure(torus)
    J = torus.J
    out = {"g": torus.g, "algebra_basis": list(torus.algebra.basis_names),
           "algebra_dim": torus.algebra.dim,
           "J": [[str(J.matrix[t][s]) for s in range(J.n)] for t in range(J.n)],
           "identities": _results_json(res)}
    return out, all(r.passed for r in res)


def _diagonal_family(torus):
    try:
        r1, r2 = diagonal_ns_counts(torus)
        return {"R": diagonal_htb_excess(torus), "R1": r1, "R2": r2}
    except ValueError:
        return None


def _kernel_ok(out):
    fam = out.get("diagonal_family")
    return out["saturated"] and out["constraints_hold"] and (fam is None or fam["matches"])


def cmd_ns(torus, args):
    ker = ns_group(torus)
    out = _kernel_json(ker)
    fam = _diagonal_family(torus)
    if fam:
        predicted = 3 + fam["R1"] + fam["R2"]
        out["diagonal_family"] = {"R1": fam["R1"], "R2": fam["R2"], "predicted_rank": predicted,
                                  "matches": predicted == ker.rank}
    return out, _kernel_ok(out)


def cmd_htb(torus, args):
    ker = htb_group(torus)
    out = _kernel_json(ker)
    fam = _diagonal_family(torus)
    if fam:
        predicted = 12 + fam["R"]
        out["diagonal_family"] = {"R": fam["R"], "predicted_rank": predicted,
                                  "matches": predicted == ker.rank}
    return out, _kernel_ok(out)


def cmd_htb_crosscheck(torus, args):
    a, b = htb_group(torus), htb_via_tau(torus)
    same = same_lattice(a, b)
    out = {"rank_htb_group": a.rank, "rank_htb_via_tau": b.rank, "same_lattice": same,
           "saturated": a.is_saturated() and b.is_saturated()}
    return out, same and out["saturated"]


def cmd_equiv(torus, args):
    spec = torus.algebra
    if args.pair_file:
        data = _read_json(args.pair_file)
        if not isinstance(data, dict) or "first" not in data or "second" not in data:
            raise ParseError("expected an object with 'first' and 'second'", args.pair_file)
        c1 = class_from_json(data["first"], torus, "$.first")
        c2 = class_from_json(data["second"], torus, "$.second")
        eq = gerbe_classes_equivalent(c1, c2, torus)
        mu = witness_mu(c1.B, c2.B, torus) if eq else None
        out = {"equivalent": eq, "witness_mu": [int(x) for x in mu.to_vector()] if mu else None}
        return out, True
    # built-in checks on a seeded class
    c = _default_class(torus, args.seed)
    sampler = V.Sampler(args.seed, "cli.equiv")
    mu = sampler.int_form(2, torus.n)
    shifted = GerbeClass.from_rational_form(mu, AltForm(3, torus.n), torus)
    shifted = GerbeClass(c.B + shifted.B, c.E)
    checks = [("reflexive", gerbe_classes_equivalent(c, c, torus), True),
              ("integral_shift", gerbe_classes_equivalent(c, shifted, torus), True)]
    forms = htb_group(torus).forms()
    if forms:
        other = GerbeClass(c.B, c.E + forms[0])
        checks.append(("different_E", gerbe_classes_equivalent(c, other, torus), False))
    out = {"class": _class_json(c, spec), "shift_mu": [int(x) for x in mu.to_vector()],
           "checks": [{"check": name, "equivalent": got, "expected": want, "passed": got == want}
                      for name, got, want in checks]}
    return out, all(got == want for _, got, want in checks)


def _sample_values(cochain, group, elements, point, count, spec, embed):
    values = cochain.evaluate(elements, point)
    out = []
    for k in range(count):
        entry = V._describe(group, elements, point, k)
        z = complex_batch_element(values, k, spec)
        entry["exponent"] = _complex_json(z, spec)
        if embed:
            entry["approx_exp"] = _approx_exp(z, spec)
        out.append(entry)
    return out


def cmd_eval_gerbe(torus, args):
    spec = torus.algebra
    c = _load_class(args, torus)
    sampler = V.Sampler(args.seed, "cli.eval-gerbe")
    theta = GerbeCochains(torus, c.E, c.B).theta
    group = theta.group
    els = [V._lattice_batch(sampler, 3, torus.n) for _ in range(2)]
    pt = V._point_batch(sampler, 3, torus.n)
    res = V.check_gerbe_cocycle(torus, args.seed, args.samples, classes=[c])
    out = {"class": _class_json(c, spec),
           "values": _sample_values(theta, group, els, pt, 3, spec, args.embed),
           "identities": _results_json(res)}
    return out, all(r.passed for r in res)


def cmd_eval_universal(torus, args):
    spec = torus.algebra
    psi = universal_cochain(torus)
    group = psi.group
    sampler = V.Sampler(args.seed, "cli.eval-universal")
    els = [V._universal_elements(group, sampler, 3) for _ in range(2)]
    pt = V._universal_points(group, sampler, 3)
    res = V.universal_suite(torus, args.seed, args.samples)
    values = _sample_values(psi, group, els, pt, 3, spec, args.embed)
    for k, entry in enumerate(values):
        _, B = group.point_at(pt, k)
        entry["B"] = _complex_form_json(B, spec)
    out = {"values": values, "identities": _results_json(res)}
    return out, all(r.passed for r in res)


def cmd_pullback(torus, args):
    spec = torus.algebra
    c = _load_class(args, torus)
    res = V.check_pullback(torus, args.seed, args.samples, classes=[c])
    out = {"class": _class_json(c, spec),
           "pullbacks": [{"n": n, "class": _class_json(pullback_isogeny(n, c), spec)}
                         for n in range(-3, 4)],
           "identities": _results_json(res)}
    return out, all(r.passed for r in res)


def cmd_verify(torus, args):
    res = V.run_suite(torus, args.seed, args.samples)
    failed = [r.name for r in res if not r.passed]
    out = {"identities": _results_json(res), "total": len(res), "failed": failed}
    return out, not failed


HANDLERS = {
    "verify-torus": cmd_verify_torus, "ns": cmd_ns, "htb": cmd_htb,
    "htb-crosscheck": cmd_htb_crosscheck, "equiv": cmd_equiv, "eval-gerbe": cmd_eval_gerbe,
    "eval-universal": cmd_eval_universal, "pullback": cmd_pullback, "verify": cmd_verify,
}


# ----------------------------------------------------------------------------
# entry point
# ----------------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="torusgerbes",
        description="Neron-Severi and holomorphic Brauer groups of complex tori, and "
                    "exact checks of their Appell-Humbert cocycles.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("specfile", help="torus spec JSON file, or a bundled fixture name")
    parser.add_argument("--seed", type=int, default=0, help="sampling seed (default 0)")
    parser.add_argument("--samples", type=int, default=500,
                        help="samples per randomized identity (default 500)")
    fmt = parser.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json",
                     help="JSON report (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text",
                     help="human-readable summary")
    parser.add_argument("--embed", action="store_true",
                        help="also print approximate exp(2 pi i x) values via the real embedding")
    parser.add_argument("--class", dest="class_file", metavar="FILE",
                        help="gerbe class {omega, E} for eval-gerbe and pullback")
    parser.add_argument("--pair", dest="pair_file", metavar="FILE",
                        help="two gerbe classes {first, second} for equiv")
    parser.set_defaults(fmt="json")
    return parser


def _check_flags(args, torus):
    if not 0 <= args.seed < 2 ** 64:
        raise InputError("--seed must be an unsigned 64-bit integer")
    if args.samples < 1:
        raise InputError("--samples must be positive")
    if args.class_file and args.command not in ("eval-gerbe", "pullback"):
        raise InputError("--class only applies to eval-gerbe and pullback")
    if args.pair_file and args.command != "equiv":
        raise InputError("--pair only applies to equiv")
    if args.embed:
        if args.command not in ("eval-gerbe", "eval-universal"):
            raise InputError("--embed only applies to eval-gerbe and eval-universal")
        if torus.algebra.real_embedding is None and torus.algebra.dim > 1:
            raise InputError("--embed needs a real_embedding in the spec's algebra")


def _text_report(report, elapsed):
    lines = [f"{report['command']} on {report['spec']['name'] or report['spec']['file']} "
             f"(fingerprint {report['spec']['fingerprint'][:12]}, seed {report['seed']})"]
    result = report["result"]
    for key in ("rank", "rank_htb_group", "rank_htb_via_tau", "same_lattice", "equivalent"):
        if key in result:
            lines.append(f"  {key}: {result[key]}")
    if "diagonal_family" in result:
        lines.append(f"  diagonal family: {result['diagonal_family']}")
    for item in result.get("checks", []):
        lines.append(f"  {'PASS' if item['passed'] else 'FAIL'}  {item['check']}")
    for item in result.get("identities", []):
        mark = "PASS" if item["passed"] else "FAIL"
        lines.append(f"  {mark}  {item['identity']} ({item['samples']} samples)")
        if item.get("details"):
            lines.append(f"        {json.dumps(item['details'], sort_keys=True)}")
        if item.get("counterexample"):
            lines.append(f"        counterexample: {json.dumps(item['counterexample'])}")
    lines.append(f"{'PASSED' if report['passed'] else 'FAILED'} in {elapsed:.2f} s")
    return "\n".join(lines)


def run(command, torus, args, spec_label):
    """Run one command and return the report (a dict)."""
    result, passed = HANDLERS[command](torus, args)
    return {"command": command,
            "spec": {"file": spec_label, "name": torus.name, "fingerprint": fingerprint(torus)},
            "seed": args.seed, "samples": args.samples, "passed": bool(passed),
            "result": result}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    start = time.perf_counter()
    try:
        torus = load_spec(args.specfile)
        _check_flags(args, torus)
        report = run(args.command, torus, args, args.specfile)
    except ParseError as exc:
        print(f"torusgerbes: parse error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except TorusGerbeError as exc:
        print(f"torusgerbes: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.fmt == "text":
        print(_text_report(report, time.perf_counter() - start))
    else:
        print(compact_json(report))
    return EXIT_PASS if report["passed"] else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
