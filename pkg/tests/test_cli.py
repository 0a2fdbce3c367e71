import json
import subprocess
import sys

import pytest

from nilgap.cli import example_documents, main
from nilgap.constructions import curated_examples
from nilgap.io import SpecError, dumps, loads, parse_spec, spec_to_json, torus_to_json


def write(tmp_path, doc, name="spec.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc) if not isinstance(doc, str) else doc)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- spec files ----------------------------------------------------------------------


@pytest.mark.parametrize("ex", curated_examples(), ids=lambda e: e.name)
def test_torus_round_trip(ex):
    doc = torus_to_json(ex.spec)
    sf = loads(dumps(doc))
    assert sf.torus == ex.spec
    assert dumps(spec_to_json(sf)) == dumps(doc)


@pytest.mark.parametrize("name", ["heisenberg_ST", "n32_basic"])
def test_nil_round_trip(name):
    doc = dict(example_documents()[name])
    doc.pop("description")
    sf = parse_spec(doc)
    assert spec_to_json(parse_spec(spec_to_json(sf))) == spec_to_json(sf)


@pytest.mark.parametrize(
    "doc, where",
    [
        ([], "$"),
        ({"kind": "torus", "dim": 2, "generators": []}, "generators"),
        ({"kind": "plane"}, "kind"),
        ({"kind": "torus", "version": "2"}, "version"),
        ({"kind": "torus", "dim": 2, "generators": [{"matrix": [[2, 0], [0, 1]]}]}, "generators[0].matrix"),
        ({"kind": "torus", "dim": 2, "generators": [{"matrix": [[1, 0], [0, 0.5]]}]}, "generators[0].matrix[1][1]"),
        ({"kind": "torus", "dim": 2, "generators": [{"matrix": [[1, 0], [0, 1]]}], "weights": ["1/2"]}, "weights"),
        ({"kind": "torus", "dim": 2, "generators": [{"matrix": [[1, 0], [0, 1]]}], "budgets": {"speed": 1}}, "budgets.speed"),
        ({"kind": "torus", "dim": 2, "generators": [{"matrix": [[1, 0], [0, 1]]}], "budgets": {"depth": 0}}, "budgets.depth"),
        ({"kind": "heisenberg", "word": [3]}, "word"),
        ({"kind": "n32", "generators": [[[2, 0, 0], [0, 1, 0], [0, 0, 1]]]}, "generators[0]"),
        ({"kind": "n32", "orbits": [{"x0": [0, 0], "y0": [1, 0, 0]}]}, "orbits[0].x0"),
    ],
)
def test_spec_errors_name_the_field(doc, where):
    with pytest.raises(SpecError) as info:
        parse_spec(doc)
    assert info.value.where == where


def test_malformed_json_reports_position():
    with pytest.raises(SpecError) as info:
        loads('{"kind": ')
    assert info.value.where.startswith("line 1 column")


def test_dumps_is_canonical():
    text = dumps({"b": [1, 2], "a": {"c": [[1], [2]]}})
    assert text.endswith("\n") and text.index('"b"') < text.index('"a"')
    assert '"b": [1, 2]' in text


# -- commands -----------------------------------------------------------------------------


def example_file(tmp_path, capsys, name):
    code, out, _ = run(capsys, "examples", name)
    assert code == 0
    return write(tmp_path, out, f"{name}.json")


def test_examples_listing(capsys):
    code, out, _ = run(capsys, "examples")
    assert code == 0
    assert len(out.splitlines()) == 9 and "sl2z_ST" in out
    assert run(capsys, "examples", "nope")[0] == 2


def test_analyze_report(tmp_path, capsys):
    path = example_file(tmp_path, capsys, "block_reducible")
    code, out, _ = run(capsys, "analyze", path)
    rep = json.loads(out)
    assert code == 0 and rep["command"] == "analyze"
    assert rep["verdict"]["kind"] == "NoGap"
    assert rep["verdict"]["witness"] is not None
    assert "timing_seconds" not in rep


def test_analyze_timing_flag(tmp_path, capsys):
    path = example_file(tmp_path, capsys, "cat_map")
    rep = json.loads(run(capsys, "analyze", path, "--timing")[1])
    assert set(rep["timing_seconds"]) == {"verdict", "ergodicity"}


def test_walk_report_and_output_file(tmp_path, capsys):
    path = example_file(tmp_path, capsys, "rational_rotation")
    dest = tmp_path / "out.json"
    code, out, _ = run(capsys, "walk", path, "--radius", "4", "8", "-o", str(dest))
    assert code == 0 and out == ""
    rep = json.loads(dest.read_text())
    assert [e["radius"] for e in rep["norm_estimates"]] == [4, 8]
    assert rep["herz_check"]["holds"]


def test_walk_rejects_bad_radius(tmp_path, capsys):
    path = example_file(tmp_path, capsys, "sl2z_ST")
    assert run(capsys, "walk", path, "--radius", "0")[0] == 2
    code, _, err = run(capsys, "walk", path, "--radius", "100000")
    assert code == 2 and "budgets.radius" in err


def test_nil_orbits_and_stab(tmp_path, capsys):
    path = example_file(tmp_path, capsys, "n32_basic")
    rep = json.loads(run(capsys, "nil", path, "orbits")[1])
    recs = rep["orbits"]
    assert [r.get("rationality", {}).get("rational", r.get("rational")) for r in recs] == [True, True, False, True]
    assert all(r.get("brute_force_agrees", True) for r in recs)
    stab = json.loads(run(capsys, "nil", path, "stab")[1])
    assert stab["orbits"][-1]["stabilizer"] is None


def test_nil_heisenberg_subcommands(tmp_path, capsys):
    doc = dict(example_documents()["heisenberg_ST"])
    doc.pop("description")
    doc["budgets"] = {"truncation": [16, 32], "nevo_truncation": 12, "n_max": 6, "iterations": 500, "seed": 0}
    path = write(tmp_path, doc)
    meta = json.loads(run(capsys, "nil", path, "meta")[1])
    assert [e["truncation"] for e in meta["norm_estimates"]] == [16, 32]
    nevo = json.loads(run(capsys, "nil", path, "nevo")[1])
    assert nevo["nevo"]["holds"]
    decay = json.loads(run(capsys, "nil", path, "decay")[1])
    assert len(decay["decay"]["coefficients"]) == 6


def test_non_hyperbolic_decay_is_a_record(tmp_path, capsys):
    path = write(tmp_path, {"kind": "heisenberg", "word": [1, 2], "budgets": {"truncation": [16]}})
    code, out, _ = run(capsys, "nil", path, "decay")
    assert code == 0 and json.loads(out)["decay"]["rejected"] == "non-hyperbolic"


def test_kind_mismatch_and_missing_file(tmp_path, capsys):
    path = example_file(tmp_path, capsys, "n32_basic")
    code, _, err = run(capsys, "analyze", path)
    assert code == 2 and "kind" in err
    assert run(capsys, "nil", path, "meta")[0] == 2
    assert run(capsys, "analyze", str(tmp_path / "missing.json"))[0] == 2
    assert run(capsys, "analyze", path, "--seed", "-1")[0] == 2


def test_console_entry_point(tmp_path):
    res = subprocess.run([sys.executable, "-m", "nilgap.cli", "examples", "cat_map"], capture_output=True, text=True)
    assert res.returncode == 0 and json.loads(res.stdout)["name"] == "cat_map"
