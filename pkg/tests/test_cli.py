import io
import json

import pytest

from covhom import cli
from covhom.documents import packaged_data
from covhom.invariants import Check


def data(name):
    return str(packaged_data(f"{name}.json"))


def run(*argv):
    buf = io.StringIO()
    code = cli.run(list(argv), stdout=buf)
    return code, buf.getvalue()


def test_verify_torus_exits_zero():
    code, out = run("verify", data("torus"))
    assert code == 0
    assert "FAIL" not in out
    assert "ok   twisted_equals_cover" in out


def test_cover_of_torus_over_f3():
    code, out = run("cover", data("torus"), "--n", "3", "--field", "p3")
    assert code == 0
    assert "Betti numbers over GF(3): (1, 2, 1)" in out


def test_missing_heights_exit_two(tmp_path, capsys):
    doc = json.loads(packaged_data("torus.json").read_text())
    del doc["circle_map"]["heights"]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(doc, indent=1))
    code, _ = run("cover", str(path), "--n", "3")
    assert code == 2
    err = capsys.readouterr().err
    assert "heights" in err and "bad.json:" in err


@pytest.mark.parametrize("argv", [["homology", "x.json", "--field", "p9"], ["frobnicate", "x.json"], ["cover", "x.json"]])
def test_bad_arguments_exit_two(argv, tmp_path):
    assert cli.run(argv, stdout=io.StringIO()) == 2


def test_power_series_commands_reject_cyclotomic_fields():
    code, _ = run("alexander", data("torus"), "--field", "zeta3")
    assert code == 2


def test_failed_invariant_exits_one(monkeypatch):
    from covhom import invariants

    monkeypatch.setattr(invariants, "square_zero", lambda X, F: Check("square_zero", False, "forced"))
    code, out = run("verify", data("circle"))
    assert code == 1
    assert "FAIL square_zero" in out


def test_output_is_byte_deterministic(tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"r{i}.json"
        code, text = run("report", data("klein"), "--field", "p2", "--out", str(path))
        assert code == 0
        outs.append((text, path.read_bytes()))
    assert outs[0] == outs[1]


def test_report_is_union_of_commands(tmp_path):
    code, report = run("report", data("torus"), "--field", "p3")
    assert code == 0
    for argv in (
        ["homology"],
        ["cover", "--n", "3"],
        ["aomoto"],
        ["alexander"],
        ["spectral"],
        ["massey"],
    ):
        code, out = run(argv[0], data("torus"), "--field", "p3", *argv[1:])
        assert code == 0
        body = out.split("\n", 1)[1]
        assert body in report, argv


def test_report_on_presentation_includes_local_system_bounds():
    code, out = run("report", data("heisenberg"), "--field", "p3")
    assert code == 0
    assert "Massey product of length 3 on degree 1 predicts 0 < 1 (holds)" in out
    assert "degeneration page: E_3" in out


def test_spectral_rows_are_run_length_encoded():
    code, out = run("spectral", data("circle"), "--m", "6")
    assert "1^6" in out


def test_spectral_prime_power_columns():
    code, out = run("spectral", data("wedge"), "--field", "p2", "--r", "2")
    assert code == 0
    assert "abutment holds" in out


def test_massey_with_explicit_class():
    code, out = run("massey", data("torus"), "--degree", "1", "--omega", "1,0", "--kmax", "2")
    assert code == 0
    assert out.count("k=") >= 1


def test_arrangement_commands():
    code, out = run("arrangement", data("monomial_313"), "--field", "p3")
    assert code == 0
    assert "Aomoto Betti numbers (0, 2, 22, 20)" in out
    code, out = run("verify", data("boolean"))
    assert code == 0
    code, _ = run("arrangement", data("boolean"), "--field", "q0")
    assert code == 2


def test_fox_command():
    code, out = run("fox", data("trefoil"), "--cover", "6")
    assert code == 0
    assert "Alexander polynomial: t^2 - t + 1" in out
    assert "b_1 of the 6-fold cover over QQ: 3" in out


def test_json_output_schema(tmp_path):
    path = tmp_path / "c.json"
    run("cover", data("torus"), "--n", "2", "--out", str(path))
    payload = json.loads(path.read_text())
    assert payload["command"] == "cover"
    assert payload["sections"][0]["data"]["betti"] == [1, 2, 1]
