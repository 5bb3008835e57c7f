import json

import pytest

from weilcartan.model_file import ModelError, load_model
from weilcartan.operation import check_axioms

from conftest import MODELS, model_path

GOOD = ["circle", "t2", "t2_diagonal", "su2_frame", "weil_u1", "weil_su2", "circle_weil_u1"]


def write(tmp_path, doc, name="m.json"):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc, indent=2))
    return str(p)


def minimal(**overrides):
    doc = {
        "name": "tmp",
        "lie_algebra": {"dim": 1, "basis": ["e1"], "structure_constants": []},
        "operation": {"generators": [{"name": "x", "degree": 1}], "I": [{"x": "1"}]},
    }
    doc.update(overrides)
    return doc


@pytest.mark.parametrize("name", GOOD)
def test_fixtures_load_and_satisfy_axioms(name):
    m = load_model(model_path(name))
    assert m.lie_violation is None
    assert check_axioms(m.op, 3) == []


def test_every_fixture_is_covered():
    names = {p.stem for p in MODELS.glob("*.json")}
    assert names == set(GOOD) | {"bad_antisym", "bad_operation"}


def test_structure_constants_are_antisymmetrized():
    m = load_model(model_path("su2_frame"))
    C = m.lie.C
    assert C[0][1][2] == 1 and C[0][2][1] == -1


def test_raw_constants_taken_literally():
    m = load_model(model_path("bad_antisym"))
    assert m.op is None
    assert "antisymmetry" in m.lie_violation.describe()


def test_weil_operation_block():
    m = load_model(model_path("weil_su2"))
    assert m.op.algebra.names[:3] == ("a1", "a2", "a3")
    assert check_axioms(m.op, 3) == []


def test_missing_images_default_to_zero(tmp_path):
    m = load_model(write(tmp_path, minimal()))
    x = m.op.algebra.gen(0)
    assert m.op.d(x) == 0 and m.op.L[0](x) == 0 and m.op.I[0](x) == 1


def test_reduction_theta_follows_ideal_order(tmp_path):
    doc = minimal(lie_algebra={"dim": 2, "structure_constants": []})
    doc["operation"] = {"generators": [{"name": "x", "degree": 1}, {"name": "y", "degree": 1}],
                        "I": [{"x": "1"}, {"y": "1"}]}
    doc["reduction"] = {"ideal": [2, 1], "theta": ["y", "x"]}
    m = load_model(write(tmp_path, doc))
    A = m.op.algebra
    assert m.ideal.indices == (0, 1)
    assert m.reduction_theta == [A.parse("x"), A.parse("y")]


def test_digest_is_of_file_bytes(tmp_path):
    p = write(tmp_path, minimal())
    q = write(tmp_path, json.dumps(minimal()), "n.json")
    assert load_model(p).digest != load_model(q).digest
    assert load_model(p).digest == load_model(p).digest


def test_invalid_json_reports_line(tmp_path):
    p = write(tmp_path, '{\n  "name": "x",\n  "lie_algebra": {\n}}}\n')
    with pytest.raises(ModelError) as e:
        load_model(p)
    assert e.value.line == 4
    assert f"{p}:4" in str(e.value)


def test_bad_element_reports_line(tmp_path):
    doc = minimal()
    doc["operation"]["d"] = {"x": "x +"}
    with pytest.raises(ModelError) as e:
        load_model(write(tmp_path, doc))
    text = (tmp_path / "m.json").read_text().splitlines()
    assert '"x +"' in text[e.value.line - 1]


def test_unknown_generator_reports_line(tmp_path):
    doc = minimal()
    doc["operation"]["d"] = {"zz": "0"}
    with pytest.raises(ModelError) as e:
        load_model(write(tmp_path, doc))
    assert "unknown generator" in str(e.value)
    assert '"zz"' in (tmp_path / "m.json").read_text().splitlines()[e.value.line - 1]


@pytest.mark.parametrize("mutate,needle", [
    (lambda d: d.pop("lie_algebra"), "missing field"),
    (lambda d: d["lie_algebra"].update(structure_constants=[[1, 1, 2, 1]]), "out of range"),
    (lambda d: d["lie_algebra"].update(dim=2, basis=["e1"]), "basis"),
    (lambda d: d["operation"].update(I=[{"x": "1"}, {"x": "0"}]), "one image map"),
    (lambda d: d["operation"]["generators"].append({"name": "x", "degree": 2}), "generators"),
    (lambda d: d.update(connections={"c": ["x", "x"]}), "connections.c"),
    (lambda d: d.update(reduction={"ideal": [1, 1], "theta": ["x", "x"]}), "repeats"),
    (lambda d: d.update(polynomials={"p": 3}), "polynomials"),
])
def test_malformed_files(tmp_path, mutate, needle):
    doc = minimal()
    mutate(doc)
    with pytest.raises(ModelError) as e:
        load_model(write(tmp_path, doc))
    assert needle in str(e.value)


def test_unreadable_file(tmp_path):
    with pytest.raises(ModelError):
        load_model(tmp_path / "absent.json")
