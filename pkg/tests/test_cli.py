import json
import shutil
import subprocess
import sys

import pytest

from toricmirror import cli, simp
from toricmirror.cli import OUTPUT_ENV, RunConfig, main, run


def invoke(capsys, *argv):
    code = main(list(argv))
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_cohomology_p2_o_o3(capsys):
    code, out, _ = invoke(capsys, "cohomology", "--fan", "P2", "--bundle", "0,0,0", "--bundle", "1,1,1")
    assert code == 0
    rows = [l for l in out.splitlines() if l.strip().startswith("[")]
    assert len(rows) == 10 and all(l.split()[-3:] == ["0", "1", "-"] for l in rows)
    assert "H^0=10" in out and "euler characteristic: 10" in out


def test_cohomology_json_and_determinism(capsys):
    argv = ["cohomology", "--fan", "P1", "--bundle", "0,0", "--bundle", "-3,0", "--format", "json"]
    _, a, _ = invoke(capsys, *argv)
    _, b, _ = invoke(capsys, *argv)
    assert a == b
    doc = json.loads(a)
    assert doc["schema"] == 1 and doc["certified"]
    assert doc["euler_characteristic"] == -2
    assert {p["degree"] for p in doc["pieces"]} == {1}
    assert len(doc["certificate"]) == 4


def test_cohomology_box_banner(capsys):
    code, out, _ = invoke(capsys, "cohomology", "--fan", "P1", "--bundle", "0,0", "--bundle", "1,1",
                          "--box", "3")
    assert code == 0 and out.startswith("WARNING: not certified")
    assert "H^0=3" in out


def test_cohomology_bad_bundle_length(capsys):
    code, _, err = invoke(capsys, "cohomology", "--fan", "P2", "--bundle", "0,0", "--bundle", "1,1,1")
    assert code == 2 and "rays" in err


def test_fan_file_errors(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"dim": 2,\n  "rays": [}')
    code, _, err = invoke(capsys, "cohomology", "--fan", str(bad), "--bundle", "0", "--bundle", "0")
    assert code == 2 and "line 2" in err
    nonconvex = tmp_path / "nc.json"
    nonconvex.write_text(json.dumps({"dim": 2, "rays": [[1, 0], [0, 1], [-1, -1]],
                                     "max_cones": [[0, 1], [1, 2], [2, 0]], "psi": [1, 1, -2]}))
    code, _, err = invoke(capsys, "verify", "--fan", str(nonconvex))
    assert code == 2 and "strictly convex" in err
    code, _, err = invoke(capsys, "verify", "--fan", "nope")
    assert code == 2 and "catalog" in err


def test_amoeba_svg(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path))
    code, out, _ = invoke(capsys, "amoeba", "--fan", "P2")
    assert code == 0 and "diagnostic: Fano-consistent" in out
    svg = (tmp_path / "P2-amoeba.svg").read_text()
    assert svg.count('class="edge"') == 3 and svg.count("<polygon") == 1


def test_amoeba_json_non_fano(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path))
    code, out, _ = invoke(capsys, "amoeba", "--fan", "Bl4P2", "--format", "json", "--output", "b.json")
    assert code == 0 and "extra bounded region" in out
    doc = json.loads((tmp_path / "b.json").read_text())
    assert doc["schema"] == 1
    assert doc["diagnostic"]["bounded_regions"] == [[0, 0], [-1, -1]]


def test_amoeba_psi_override(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv(OUTPUT_ENV, str(tmp_path))
    code, out, _ = invoke(capsys, "amoeba", "--fan", "P2", "--psi", "2,1,1", "--format", "json")
    assert code == 0
    doc = json.loads(out.split("diagnostic:")[0])
    assert doc["diagnostic"]["c0_equals_polytope"]


def test_amoeba_svg_needs_plane(capsys):
    code, _, err = invoke(capsys, "amoeba", "--fan", "P1")
    assert code == 2 and "two dimensional" in err


def test_verify_p1(capsys):
    code, out, _ = invoke(capsys, "verify", "--fan", "P1")
    assert code == 0
    assert "compare_models: exact" in out and "verify: all checks passed" in out
    assert "trichotomy Delta^4: ok" in out


def test_verify_fails_when_an_invariant_breaks(monkeypatch, capsys):
    monkeypatch.setattr(simp, "square_discrepancy", lambda K, rel=simp.EMPTY: "forced")
    code, out, _ = invoke(capsys, "verify", "--fan", "P1", "--model")
    assert code == 1 and "FAIL forced" in out


def test_trees_report(capsys):
    code, out, _ = invoke(capsys, "trees", "--d", "4", "--report")
    assert code == 0
    assert "trivalent ribbon trees: 5" in out and "Stasheff facets: 5" in out
    assert "wall crossing: 5/5 walls pass" in out and "Part(4,2)=3" in out
    _, again, _ = invoke(capsys, "trees", "--d", "4", "--report")
    assert again == out


def test_trees_bad_d(capsys):
    code, _, err = invoke(capsys, "trees", "--d", "1")
    assert code == 2 and err.startswith("error:")


def test_glue_negative():
    assert cli._glue_negative(["--bundle", "-3,0", "--bundle", "1,2"]) == \
        ["--bundle=-3,0", "--bundle", "1,2"]


def test_run_config_direct(capsys):
    import io
    buf = io.StringIO()
    assert run(RunConfig("cohomology", fan="P1", bundles=[(0, 0), (0, 0)]), buf) == 0
    assert "euler characteristic: 1" in buf.getvalue()


@pytest.mark.skipif(shutil.which("toricmirror") is None, reason="console script not installed")
def test_console_script():
    res = subprocess.run(["toricmirror", "trees", "--d", "3"], capture_output=True, text=True)
    assert res.returncode == 0 and "Catalan(2) = 2" in res.stdout


def test_module_invocation():
    res = subprocess.run([sys.executable, "-c", "import sys; from toricmirror.cli import main; "
                          "sys.exit(main(['trees', '--d', '3']))"], capture_output=True, text=True)
    assert res.returncode == 0
