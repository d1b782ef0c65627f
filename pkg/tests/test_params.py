"""Parameter document IO: strict keys, validation, packaged defaults."""

import json

import pytest

from glycosim import ModelParams, ParameterError, load_params, save_params
from glycosim.params import params_from_dict, params_to_dict


def test_defaults_validate():
    ModelParams().validate()


def test_packaged_defaults_match_dataclass_defaults():
    packaged = load_params(None)
    assert params_to_dict(packaged) == params_to_dict(ModelParams())


def test_roundtrip(tmp_path):
    p = ModelParams()
    p.il6.SR = 0.1234
    path = tmp_path / "p.json"
    save_params(p, str(path))
    q = load_params(str(path))
    assert params_to_dict(q) == params_to_dict(p)


def test_unknown_top_level_key_rejected():
    with pytest.raises(ParameterError, match="unknown parameter key: nope"):
        params_from_dict({"nope": 1})


def test_unknown_nested_key_names_offender():
    with pytest.raises(ParameterError, match="il6.k_x"):
        params_from_dict({"il6": {"k_x": 1.0}})


def test_non_numeric_value_rejected():
    with pytest.raises(ParameterError, match="ha.R0"):
        params_from_dict({"ha": {"R0": "fast"}})


def test_invalid_json_file(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(ParameterError, match="invalid parameter JSON"):
        load_params(str(path))


@pytest.mark.parametrize("path,value,match", [
    ("coupling.zeta3", 0.9, "zeta3"),           # must exceed 1
    ("coupling.zeta1", 1.5, "zeta1"),           # must stay below 1
    ("decay.tau_SI", -1.0, "tau_SI"),
    ("ha.R0", 0.0, "R0"),
    ("diabetic_threshold", 90.0, "diabetic_threshold"),
])
def test_invariant_violations(path, value, match):
    doc = params_to_dict(ModelParams())
    group, _, leaf = path.partition(".")
    if leaf:
        doc[group][leaf] = value
    else:
        doc[group] = value
    with pytest.raises(ParameterError, match=match):
        params_from_dict(doc)


def test_replace_path_copies():
    p = ModelParams()
    q = p.replace_path("il6.k_s", 2e-6)
    assert q.il6.k_s == 2e-6
    assert p.il6.k_s != 2e-6


def test_replace_path_unknown():
    with pytest.raises(ParameterError, match="unknown parameter path"):
        ModelParams().replace_path("ha.nothing", 1.0)


def test_params_json_is_plain_numbers():
    doc = params_to_dict(ModelParams())
    text = json.dumps(doc)
    parsed = json.loads(text)
    assert params_to_dict(params_from_dict(parsed)) == doc
