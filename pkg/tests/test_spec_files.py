import json

import pytest

from torusgerbes.errors import ParseError, SingularImaginaryPart, ValidationError
from torusgerbes.spec_files import (FIXTURE_NAMES, fingerprint, fixture_path, load_spec,
                                    parse_spec, serialize_spec, spec_to_dict)


def elliptic_dict():
    return json.loads(fixture_path("elliptic_i").read_text())


@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_round_trip(name):
    text = fixture_path(name).read_text()
    spec = parse_spec(text)
    again = parse_spec(serialize_spec(spec))
    assert again == spec
    assert again.name == spec.name
    assert serialize_spec(again) == serialize_spec(spec)
    assert fingerprint(again) == fingerprint(spec)


def test_fixture_contents(fixtures):
    assert fixtures["elliptic_i"].g == 1 and fixtures["elliptic_i"].algebra.dim == 1
    assert fixtures["generic_g2"].g == 2
    assert list(fixtures["abc_sqrt23"].algebra.basis_names) == ["1", "s2", "s3", "s6"]
    assert fixtures["abc_chain"].algebra.dim == 2


def test_fingerprint_ignores_name_only():
    data = elliptic_dict()
    a = parse_spec(json.dumps(data))
    data["name"] = "renamed"
    b = parse_spec(json.dumps(data))
    assert fingerprint(a) == fingerprint(b)
    data["tau"][0][0]["re"] = ["1/3"]
    assert fingerprint(parse_spec(json.dumps(data))) != fingerprint(a)


def test_rationals_written_as_strings():
    out = spec_to_dict(parse_spec(json.dumps(elliptic_dict())))
    assert out["tau"][0][0] == {"re": ["0"], "im": ["1"]}


@pytest.mark.parametrize("mutate,location", [
    (lambda d: d.pop("tau"), "$"),
    (lambda d: d.update(g=0), "$.g"),
    (lambda d: d.update(g="1"), "$.g"),
    (lambda d: d["tau"][0][0].update(im=["x"]), "$.tau[0][0].im[0]"),
    (lambda d: d["tau"][0][0].update(im=[1.5]), "$.tau[0][0].im[0]"),
    (lambda d: d["tau"][0][0].update(re=[0, 0]), "$.tau[0][0].re"),
    (lambda d: d["algebra"].update(mult_table=[]), "$.algebra.mult_table"),
    (lambda d: d["algebra"].update(real_embedding=["abc"]), "$.algebra.real_embedding[0]"),
])
def test_parse_errors_name_location(mutate, location):
    data = elliptic_dict()
    mutate(data)
    with pytest.raises(ParseError) as info:
        parse_spec(json.dumps(data))
    assert info.value.location == location


def test_invalid_json():
    with pytest.raises(ParseError) as info:
        parse_spec("{\"g\": 1,")
    assert "line 1" in info.value.location


def test_validation_errors():
    data = elliptic_dict()
    data["tau"][0][0]["im"] = ["0"]
    with pytest.raises(SingularImaginaryPart):
        parse_spec(json.dumps(data))
    data = elliptic_dict()
    data["algebra"] = {"basis": ["1", "a"],
                       "mult_table": [[[1, 0], [0, 1]], [[0, 1], [1, 1]]]}
    data["tau"] = [[{"re": [0, 0], "im": [1, 0]}]]
    parse_spec(json.dumps(data))
    data["algebra"]["basis"] = ["a", "1"]
    with pytest.raises(ValidationError):
        parse_spec(json.dumps(data))


def test_load_spec_prefers_files(tmp_path):
    assert load_spec("elliptic_i").name == "elliptic_i"
    assert load_spec("abc_chain.json").name == "abc_chain"
    path = tmp_path / "mine.json"
    data = elliptic_dict()
    data["name"] = "mine"
    path.write_text(json.dumps(data))
    assert load_spec(str(path)).name == "mine"
    with pytest.raises(ParseError):
        load_spec(str(tmp_path / "missing.json"))
