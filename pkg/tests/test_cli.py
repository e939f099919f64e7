import json
from fractions import Fraction
from pathlib import Path

import pytest

from plane_lct.cli import main, parse_document, spec_document
from plane_lct.gen import cusp, example_figure1


@pytest.fixture
def write(tmp_path):
    def _write(name, doc):
        path = tmp_path / name
        path.write_text(json.dumps(doc))
        return str(path)
    return _write


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_compute_figure(capsys, write, ex17):
    path = write("figure1.json", spec_document(ex17))
    code, out = run(capsys, "compute", path, "--method", "all", "--deterministic")
    doc = json.loads(out)
    assert code == 0
    assert (doc["lct"]["num"], doc["lct"]["den"]) == ("11", "134")
    assert doc["distinguished_vertex"] == 7 and doc["agree"]
    assert doc["sigma"]["7"] == "-8"
    assert Fraction(int(doc["lct"]["num"]), int(doc["lct"]["den"])) == Fraction(11, 134)


@pytest.mark.parametrize("method", ["formula", "divisorial", "corollary"])
def test_compute_single_methods(capsys, write, method):
    spec_doc = spec_document(cusp())
    spec_doc["branches"].append({"name": "g", "at": 3})
    code, out = run(capsys, "compute", write("two.json", spec_doc), "--method", method, "--deterministic")
    assert code == 0 and json.loads(out)["lct"]["den"] == "12"


def test_compute_cusp(capsys, write):
    code, out = run(capsys, "compute", write("cusp.json", spec_document(cusp())), "--deterministic")
    assert code == 0 and json.loads(out)["lct"]["num"] == "5"


def test_invalid_satellite_exit_2(capsys, write):
    doc = spec_document(cusp())
    doc["points"][2]["satellite_of"] = 2
    code, out = run(capsys, "compute", write("bad.json", doc))
    assert code == 2
    assert json.loads(out)["errors"][0]["code"] == "InvalidSatellite"


def test_missing_file_exit_2(capsys, tmp_path):
    code, out = run(capsys, "check", str(tmp_path / "nope.json"))
    assert code == 2 and json.loads(out)["errors"]


def test_empty_branches_is_an_error(capsys, write):
    doc = spec_document(cusp())
    doc["branches"] = []
    code, out = run(capsys, "check", write("empty.json", doc))
    assert code == 2 and json.loads(out)["errors"][0]["code"] == "EmptyBranches"


def test_disagreement_exit_3(capsys, write, monkeypatch):
    import plane_lct.lct as lct_mod
    monkeypatch.setattr(lct_mod, "lct_divisorial", lambda spec, points=None: (Fraction(1), frozenset({1})))
    code, out = run(capsys, "compute", write("cusp.json", spec_document(cusp())))
    assert code == 3 and json.loads(out)["errors"][0]["code"] == "MethodDisagreement"


def test_invariants(capsys, write, ex17):
    code, out = run(capsys, "invariants", write("f.json", spec_document(ex17)), "--deterministic")
    doc = json.loads(out)
    assert [(b["beta0"], b["beta1"]) for b in doc["branches"]][:2] == [("5", "17"), ("3", "11")]
    assert doc["pairs"]["1,2"]["intersection"] == "51"
    assert (doc["pairs"]["1,3"]["q"], doc["pairs"]["1,3"]["c"]) == ("0", "4")
    assert doc["S"] == [2, 4, 15]


def test_invariants_smooth_warning(capsys, write):
    doc = {"version": 1, "points": [{"id": 1, "parent": None}], "branches": [{"name": "l", "at": 1}]}
    code, out = run(capsys, "invariants", write("l.json", doc), "--deterministic")
    assert json.loads(out)["warnings"] == ["SmoothInput"]


def test_check_padded_cusp(capsys, write):
    doc = spec_document(cusp())
    doc["points"] += [{"id": 4, "parent": 3}, {"id": 5, "parent": 4}]
    doc["branches"][0]["at"] = 5
    code, out = run(capsys, "check", write("pad.json", doc), "--deterministic")
    report = json.loads(out)
    assert not report["minimal"] and report["unnecessary"] == [4, 5] and "suggestion" in report


def test_ideal_mode(capsys, write):
    doc = spec_document(cusp())
    doc["mode"] = "ideal"
    doc["branches"] = [{"name": "p", "at": 3, "multiplicity": 3}]
    code, out = run(capsys, "compute", write("ideal.json", doc), "--deterministic")
    assert (json.loads(out)["lct"]["num"], json.loads(out)["lct"]["den"]) == ("5", "18")


def test_dot_outputs(tmp_path, write, ex17):
    path = write("f.json", spec_document(ex17))
    for sub in ("a", "b"):
        assert main(["dot", path, "--out", str(tmp_path / sub)]) == 0
    for name in ("dual.dot", "proximity.dot"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    assert (tmp_path / "a" / "dual.dot").read_text().startswith("graph dual {")


def test_gen(tmp_path):
    for sub in ("a", "b"):
        assert main(["gen", "--seed", "7", "--count", "5", "--points", "20", "--branches", "3",
                     "--out", str(tmp_path / sub), "--deterministic"]) == 0
    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["all_agree"] == 5 and not summary["failures"]
    for f in sorted((tmp_path / "a").iterdir()):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()


def test_gen_zero(capsys):
    code, out = run(capsys, "gen", "--count", "0", "--deterministic")
    assert code == 0 and json.loads(out)["count"] == 0 and json.loads(out)["kinds"] == {}


def test_timestamp_only_without_flag(capsys, write):
    path = write("cusp.json", spec_document(cusp()))
    assert "timestamp" in json.loads(run(capsys, "compute", path)[1])
    assert "timestamp" not in json.loads(run(capsys, "compute", path, "--deterministic")[1])


def test_document_round_trip(ex17):
    spec, mode = parse_document(spec_document(ex17))
    assert spec == ex17 and mode == "curve"


def test_unordered_points_accepted():
    doc = spec_document(cusp())
    doc["points"].reverse()
    assert parse_document(doc)[0] == cusp()


def test_data_files_match_fixtures():
    root = Path(__file__).resolve().parent.parent / "data"
    assert parse_document(json.loads((root / "figure1.json").read_text()))[0] == example_figure1()
    assert parse_document(json.loads((root / "cusp.json").read_text()))[0] == cusp()
