import json
import re
import subprocess
import sys

import pytest

from weilcartan.cli import main, parse_t

from conftest import cli_suite_argv, model_path

SUITE = cli_suite_argv()


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def strip_time(text):
    return re.sub(r"wall_time: [0-9.]+s|\"wall_time\": [0-9.e-]+", "wall_time", text)


@pytest.mark.parametrize("argv,code", SUITE, ids=[" ".join(a[:-1] + [a[-1].rsplit("/", 1)[-1]]) for a, _ in SUITE])
def test_suite_exit_codes(capsys, argv, code):
    got, out, _ = run(capsys, *argv)
    assert got == code, out
    assert out.rstrip().splitlines()[-2] == ("status: ok" if code == 0 else "status: fail")


def test_validate_circle(capsys):
    code, out, _ = run(capsys, "validate", model_path("circle"))
    assert code == 0
    assert "fail" not in out


def test_validate_antisymmetry_witness(capsys):
    code, out, _ = run(capsys, "validate", model_path("bad_antisym"))
    assert code == 1
    assert "antisymmetry violation at (1, 2, 3)" in out


def test_weil_dims(capsys):
    code, out, _ = run(capsys, "weil", "--max-degree", "4", model_path("weil_u1"))
    assert code == 0
    assert "dims H(W_g): (1,0,0,0,0)" in out


def test_cohomology_both_models(capsys):
    code, out, _ = run(capsys, "cohomology", "--max-degree", "4", model_path("t2"))
    assert code == 0
    assert "dims cartan: (1,0,1,0,1)" in out and "dims weil-basic: (1,0,1,0,1)" in out


def test_kalkman_reports_seed_and_correction(capsys):
    code, out, _ = run(capsys, "kalkman", "--t", "seed:1", "--max-degree", "2", model_path("weil_su2"))
    assert code == 1
    assert "value seed: 1" in out
    assert "value R_T is zero: false" in out
    assert re.search(r"check exp\(A_T\) D exp\(-A_T\) = D_T \+ R_T .*: ok", out)


def test_json_format(capsys):
    code, out, _ = run(capsys, "reduce", "--format", "json", model_path("t2"))
    assert code == 0
    doc = json.loads(out)
    assert doc["status"] == "ok"
    assert doc["dims"]["G-basic W_G (x) A"] == [1, 0, 1, 0, 1]
    assert doc["dims"]["Q-Cartan (S q* (x) B)^Q"] == [1, 0, 1, 0, 1]
    assert all(c["status"] == "ok" for c in doc["checks"])
    assert set(doc) >= {"command", "model", "checks", "dims", "status", "wall_time"}


@pytest.mark.parametrize("argv", [
    ["char-class", "--poly", "nope", model_path("t2")],
    ["kalkman", "--t", "seed:x", model_path("circle")],
    ["kalkman", "--t", "random", model_path("circle")],
    ["transgress", "--theta0", "nope", "--theta1", "x", model_path("circle_weil_u1")],
    ["transgress", "--theta0", "weil:bogus", "--theta1", "weil:taut", model_path("circle")],
    ["validate", "/nonexistent/model.json"],
    ["validate", "--max-degree", "-1", model_path("circle")],
])
def test_input_errors_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("error:")


def test_parse_error_names_file_and_line(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text('{\n  "lie_algebra": {"dim": 1},\n  "operation": {\n    "generators": [{"name": "x", "degree": 1}],\n'
                 '    "d": {"x": "x*"}\n  }\n}\n')
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2
    assert f"{p}:5" in err


def test_reduce_without_reduction_section(tmp_path, capsys):
    p = tmp_path / "m.json"
    p.write_text(json.dumps({"lie_algebra": {"dim": 1}, "operation": {"generators": []}}))
    code, _, err = run(capsys, "reduce", str(p))
    assert code == 2
    assert "no reduction section" in err


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as e:
        main(["validate", "--bogus", model_path("circle")])
    assert e.value.code == 2


def test_parse_t():
    assert parse_t("identity", 2) == [[1, 0], [0, 1]]
    assert parse_t("zero", 1) == [[0]]
    assert parse_t("seed:3", 3) == parse_t("seed:3", 3)


def test_module_entry_point_is_deterministic():
    argv = [sys.executable, "-m", "weilcartan", "kalkman", "--t", "seed:2", "--max-degree", "3", model_path("circle")]
    a = subprocess.run(argv, capture_output=True, text=True)
    b = subprocess.run(argv, capture_output=True, text=True)
    assert a.returncode == b.returncode == 0
    assert strip_time(a.stdout) == strip_time(b.stdout)
