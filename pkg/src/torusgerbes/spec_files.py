"""Reading and writing torus spec files (JSON).

Schema::

    {
      "name": "abc_sqrt23",                 # optional label
      "g": 3,
      "algebra": {
        "basis": ["1", "s2", "s3", "s6"],   # unit first
        "mult_table": [[[...d rationals...], ...d...], ...d...],
        "real_embedding": ["1", "1.414..."] # optional, display only
      },
      "tau": [[{"re": [...d...], "im": [...d...]}, ...g...], ...g...]
    }

Rationals are ints or ``"p/q"`` strings.  Serialisation always writes
strings, so parse -> serialise -> parse is the identity.
"""

import hashlib
import json
from fractions import Fraction
from importlib import resources
from pathlib import Path

from .errors import ParseError, ValidationError
from .exact_algebra import AlgebraElement, AlgebraSpec, ComplexElement, format_fraction
from .torus import TorusSpec

FIXTURE_NAMES = ("elliptic_i", "generic_g2", "abc_sqrt23", "abc_chain", "abc_rational")


def _rational(value, where):
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(f"expected an integer or 'p/q' string, got {value!r}", where)
    try:
        return Fraction(value.strip() if isinstance(value, str) else value)
    except (ValueError, ZeroDivisionError):
        raise ParseError(f"not a rational number: {value!r}", where) from None


def _field(obj, key, where, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field '{key}'", where)
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(f"field '{key}' has the wrong type", f"{where}.{key}")
    return value


def _coords(value, dim, where):
    if not isinstance(value, list) or len(value) != dim:
        raise ParseError(f"expected a list of {dim} rationals", where)
    return [_rational(x, f"{where}[{k}]") for k, x in enumerate(value)]


def spec_from_dict(data):
    """Build a validated :class:`TorusSpec` from decoded JSON."""
    g = _field(data, "g", "$", int)
    if isinstance(g, bool) or g < 1:
        raise ParseError("g must be a positive integer", "$.g")
    alg = _field(data, "algebra", "$", dict)
    names = _field(alg, "basis", "$.algebra", list)
    if not names or not all(isinstance(x, str) for x in names):
        raise ParseError("basis must be a non-empty list of names", "$.algebra.basis")
    if names[0] != "1":
        raise ValidationError("the first basis element must be the unit '1'", "unit first")
    d = len(names)
    table = _field(alg, "mult_table", "$.algebra", list)
    if len(table) != d:
        raise ParseError(f"mult_table must have {d} rows", "$.algebra.mult_table")
    parsed_table = []
    for a, row in enumerate(table):
        if not isinstance(row, list) or len(row) != d:
            raise ParseError(f"row must have {d} entries", f"$.algebra.mult_table[{a}]")
        parsed_table.append([_coords(cell, d, f"$.algebra.mult_table[{a}][{b}]")
                             for b, cell in enumerate(row)])
    emb = alg.get("real_embedding")
    if emb is not None:
        if not isinstance(emb, list) or len(emb) != d:
            raise ParseError(f"real_embedding must list {d} decimals", "$.algebra.real_embedding")
        for k, x in enumerate(emb):
            try:
                float(x)
            except (TypeError, ValueError):
                raise ParseError("not a decimal", f"$.algebra.real_embedding[{k}]") from None
        emb = [str(x) for x in emb]
    spec = AlgebraSpec(names, parsed_table, emb)
    tau_raw = _field(data, "tau", "$", list)
    if len(tau_raw) != g:
        raise ParseError(f"tau must have {g} rows", "$.tau")
    tau = []
    for i, row in enumerate(tau_raw):
        if not isinstance(row, list) or len(row) != g:
            raise ParseError(f"row must have {g} entries", f"$.tau[{i}]")
        out = []
        for j, entry in enumerate(row):
            where = f"$.tau[{i}][{j}]"
            re = _coords(_field(entry, "re", where), d, f"{where}.re")
            im = _coords(_field(entry, "im", where), d, f"{where}.im")
            out.append(ComplexElement(AlgebraElement(spec, re), AlgebraElement(spec, im)))
        tau.append(out)
    name = data.get("name")
    return TorusSpec(g, spec, tau, name=name if isinstance(name, str) else None)


def parse_spec(text):
    """Parse JSON text into a validated :class:`TorusSpec`."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", f"line {exc.lineno} column {exc.colno}") from None
    return spec_from_dict(data)


def spec_to_dict(spec, include_name=True):
    alg = spec.algebra
    out = {}
    if include_name and spec.name:
        out["name"] = spec.name
    out["g"] = spec.g
    algebra = {
        "basis": list(alg.basis_names),
        "mult_table": [[[format_fraction(c) for c in cell] for cell in row]
                       for row in alg.mult_table],
    }
    if alg.real_embedding is not None:
        algebra["real_embedding"] = list(alg.real_embedding)
    out["algebra"] = algebra
    out["tau"] = [[{"re": [format_fraction(c) for c in z.re.coords],
                    "im": [format_fraction(c) for c in z.im.coords]} for z in row]
                  for row in spec.tau]
    return out


def compact_json(obj, indent=0):
    """Indented JSON that keeps flat lists, and objects holding only scalars or
    flat lists, on a single line."""
    pad = "  " * (indent + 1)
    flat = lambda v: not isinstance(v, (list, dict)) or (
        isinstance(v, list) and not any(isinstance(x, (list, dict)) for x in v))
    if isinstance(obj, dict) and all(flat(v) for v in obj.values()):
        return json.dumps(obj)
    if isinstance(obj, dict):
        items = [f"{pad}{json.dumps(k)}: {compact_json(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + "  " * indent + "}"
    if isinstance(obj, list) and obj and any(isinstance(x, (list, dict)) for x in obj):
        items = [pad + compact_json(x, indent + 1) for x in obj]
        return "[\n" + ",\n".join(items) + "\n" + "  " * indent + "]"
    return json.dumps(obj)


def serialize_spec(spec):
    return compact_json(spec_to_dict(spec)) + "\n"


def fingerprint(spec):
    """SHA-256 of the canonical JSON of the mathematical content (name excluded)."""
    canon = json.dumps(spec_to_dict(spec, include_name=False), sort_keys=True,
                       separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def fixture_path(name):
    return resources.files("torusgerbes") / "fixtures" / f"{name}.json"


def load_fixture(name):
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}")
    return parse_spec(fixture_path(name).read_text())


def load_spec(path_or_name):
    """Load a spec from a file path, falling back to a bundled fixture name."""
    path = Path(path_or_name)
    if path.exists():
        try:
            text = path.read_text()
        except OSError as exc:
            raise ParseError(f"cannot read file: {exc}", str(path)) from None
        return parse_spec(text)
    stem = path.name[:-5] if path.name.endswith(".json") else path.name
    if stem in FIXTURE_NAMES and len(path.parts) == 1:
        return load_fixture(stem)
    raise ParseError("no such file", str(path))
