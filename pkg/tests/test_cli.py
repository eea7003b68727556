import json
import random
import subprocess
import sys

import pytest
from hypothesis import given, strategies as st

from ordcorners import cli_io as io
from ordcorners import corners as C
from ordcorners.generators import random_space
from ordcorners.monoid_fan import MonoidVector


def run(args, tmp_path, name="out.json"):
    out = tmp_path / name
    code = io.run_cli(list(args) + ["--out", str(out)])
    return code, out


def report(path):
    return json.loads(path.read_text(encoding="utf-8"))["outputs"]


def test_product_example(data_dir, tmp_path):
    code, out = run(["product", "--variant", "min", str(data_dir / "half-line.json"), str(data_dir / "half-line-y.json")], tmp_path)
    r = report(out)
    assert code == 0 and len(r["rays"]) == 3 and len(r["poset_edges"]) == 2 and r["blowup_agrees"]


def test_psub_examples(data_dir, tmp_path):
    code, out = run(["psub-check", str(data_dir / "figure-b.json"), "--sigmas", "r1/r2,r1/r3"], tmp_path)
    assert code == 0 and report(out)["psub"] is True
    code, out = run(["psub-check", str(data_dir / "figure-c.json"), "--sigmas", "r1/r2,r1/r3"], tmp_path)
    assert code == 2 and report(out)["psub"] is False


def test_frames_example(tmp_path):
    code, out = run(["frames-verify", "--kind", "phi", "--n", "3", "--k", "2"], tmp_path)
    assert code == 0 and report(out)["table_ok"]


def test_sigma_check_exit_codes(data_dir, tmp_path):
    code, out = run(["sigma-check", str(data_dir / "figure-b.json"), "--sigmas", "r1/r2"], tmp_path)
    assert code == 2 and report(out)["results"][0]["overall"] == "NotSmooth"
    code, out = run(["sigma-check", str(data_dir / "figure-c.json"), "--sigmas", "r2/r3"], tmp_path)
    r = report(out)["results"][0]
    assert code == 0 and r["vanishing"] == ["2"] and r["vanishing_inverse"] == ["3"]


def test_lift_check(data_dir, tmp_path):
    code, out = run(["lift-check", str(data_dir / "map-identity-half-line.json"), str(data_dir / "half-line.json")], tmp_path)
    assert code == 0 and report(out)["exists"]
    code, out = run(["lift-check", str(data_dir / "map-identity-quadrant.json"), str(data_dir / "quadrant-blown.json")], tmp_path)
    assert code == 2 and not report(out)["exists"]


def test_join_cone_manybody_fiber(data_dir, tmp_path):
    hx, hy = str(data_dir / "half-line.json"), str(data_dir / "half-line-y.json")
    for variant in ("max", "min"):
        code, out = run(["join", "--variant", variant, hx, hy], tmp_path)
        assert code == 0 and report(out)["equivalence"]["ok"]
    code, out = run(["join", "--variant", "relative", "--principal", "max", hx, hy], tmp_path)
    assert code == 0 and report(out)["direct_agrees"]
    code, out = run(["cone", "--variant", "max", hx], tmp_path)
    assert code == 0 and report(out)["violations"] == []
    code, out = run(["manybody", str(data_dir / "axes-r2.json")], tmp_path)
    assert code == 0 and len(report(out)["space"]["hypersurfaces"]) == 3
    code, out = run(["mb-product-check", str(data_dir / "axes-r2.json"), str(data_dir / "line.json")], tmp_path)
    assert code == 0 and report(out)["hypersurfaces"] == 7
    code, out = run(["fiber-product", str(data_dir / "map-identity-half-line.json"), str(data_dir / "map-identity-half-line.json")], tmp_path)
    assert code == 0 and report(out)["psub_ok"]


def test_validate_reports_violations(data_dir, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"schema_version": 1, "interior": "X", "hypersurfaces": ["A", "B"], "order": [["X", "A"], ["X", "B"]], "corners": [["A", "B"]]}))
    code, out = run(["validate", str(bad)], tmp_path)
    assert code == 2 and len(report(out)["violations"]) == 1


@pytest.mark.parametrize(
    "doc",
    [
        "not json",
        json.dumps({"schema_version": 2, "interior": "X", "hypersurfaces": []}),
        json.dumps({"schema_version": 1, "interior": "X", "hypersurfaces": ["H"], "order": [["X", "Q"]]}),
        json.dumps({"schema_version": 1, "interior": "X", "hypersurfaces": ["H"], "order": [["X", "H"], ["H", "X"]]}),
        json.dumps({"schema_version": 1, "interior": "X", "hypersurfaces": ["H"], "extra": 1}),
    ],
)
def test_input_errors_exit_1(doc, tmp_path, capsys):
    p = tmp_path / "in.json"
    p.write_text(doc)
    assert io.run_cli(["validate", str(p)]) == 1
    assert capsys.readouterr().err.strip()


def test_usage_errors_exit_1(data_dir, tmp_path):
    with pytest.raises(SystemExit) as e:
        io.run_cli(["nonsense"])
    assert e.value.code == 1
    assert io.run_cli(["validate"]) == 1
    assert io.run_cli(["psub-check", str(data_dir / "figure-b.json")]) == 1
    assert io.run_cli(["psub-check", str(data_dir / "figure-b.json"), "--sigmas", "r1/r2/r3"]) == 1
    assert io.run_cli(["frames-verify", "--n", "2"]) == 1
    assert io.run_cli(["validate", "--format", "dot", str(data_dir / "figure-a.json")]) == 1


def test_inadmissible_blowups_are_input_errors(data_dir, tmp_path):
    doc = json.loads((data_dir / "figure-a.json").read_text())
    doc["blowups"] = [["2", "3"], ["1", "2", "3"]]
    p = tmp_path / "bad-order.json"
    p.write_text(json.dumps(doc))
    assert io.run_cli(["blowup", str(p), "--out", str(tmp_path / "o.json")]) == 1


def test_sigma_parser():
    assert io.parse_sigma("r1^2/r2") == MonoidVector({"1": 2, "2": -1})
    assert io.parse_sigma("r1*r3/r2^2") == MonoidVector({"1": 1, "3": 1, "2": -2})
    assert io.parse_sigma("rH rG^-1") == MonoidVector({"H": 1, "G": -1})
    assert io.parse_sigma("1/rH") == MonoidVector({"H": -1})
    assert io.parse_sigma("r1/r1").is_zero()
    for bad in ("x1", "r1/r2/r3", "/r1", "r1^"):
        with pytest.raises(io.InputError):
            io.parse_sigma(bad)


def test_dot_examples(data_dir, tmp_path):
    code, out = run(["product", "--variant", "min", "--format", "dot", str(data_dir / "half-line.json"), str(data_dir / "half-line-y.json")], tmp_path, "p.dot")
    text = out.read_text()
    assert code == 0 and text.count("[label=") == 3 and text.count(" -> ") == 2 and "dashed" not in text
    code, out = run(["blowup", "--format", "dot", str(data_dir / "half-line.json")], tmp_path, "h.dot")
    text = out.read_text()
    assert text.count("[label=") == 1 and " -> " not in text
    fp = C.face_poset(io.refined_from_doc(io.load_space(json.loads((data_dir / "figure-d.json").read_text()))))
    unordered = C.FacePoset(fp.rays, fp.facets, None, fp.names)
    text = io.emit_dot(unordered)
    assert text.count("[label=") == 5
    edges = [l for l in text.splitlines() if " -> " in l]
    assert edges and all("dashed" in l for l in edges)
    assert edges == sorted(edges)


@given(st.integers(0, 10**6))
def test_space_documents_round_trip(seed):
    s = random_space(random.Random(seed))
    doc = io.dump_space(s)
    again = io.load_space(json.loads(json.dumps(doc)))
    assert again.space == s
    assert io.dump_space(again.space) == doc


def test_blowups_round_trip(data_dir):
    doc = json.loads((data_dir / "figure-d.json").read_text())
    sd = io.load_space(doc)
    assert io.dump_space(sd.space, sd.blowups) == io.dump_space(io.load_space(io.dump_space(sd.space, sd.blowups)).space, sd.blowups)


def test_out_dir_override(data_dir, tmp_path, monkeypatch):
    monkeypatch.setenv(io.OUT_DIR_ENV, str(tmp_path))
    assert io.run_cli(["validate", str(data_dir / "figure-a.json")]) == 0
    assert (tmp_path / "validate.json").read_text().endswith("}\n")


def test_reports_are_byte_identical(data_dir, tmp_path):
    args = ["product", "--variant", "max", "--seed", "7", str(data_dir / "figure-a.json"), str(data_dir / "half-line-y.json")]
    _, a = run(args, tmp_path, "a.json")
    _, b = run(args, tmp_path, "b.json")
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point(data_dir):
    proc = subprocess.run(
        [sys.executable, "-m", "ordcorners", "validate", str(data_dir / "half-line.json"), "--out", "-"],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["operation"] == "validate"
