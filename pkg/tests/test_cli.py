import io
import json
import subprocess
import sys

import pytest

from omegacomm.cli import run_command
from omegacomm.corpus import get
from omegacomm.fileformat import emit_algebra


def run(argv, stdin_text=""):
    out, err = io.StringIO(), io.StringIO()
    code = run_command(argv, io.StringIO(stdin_text), out, err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("alg")
    paths = {}
    for eid in ("a5", "d8star", "z16ternary", "zring4", "z2xz2", "narng5", "z8"):
        A, subs = get(eid)
        p = d / f"{eid}.alg"
        p.write_text(emit_algebra(A, subs))
        paths[eid] = str(p)
    return paths


def test_corpus_pipeline_into_higgins():
    code, text, _ = run(["corpus", "a5"])
    assert code == 0
    code, out, _ = run(["higgins", "-", "K", "L", "--format", "structured"], text)
    assert code == 0
    res = json.loads(out)["result"]
    assert len(res["higgins"]) == 3 and len(res["huq"]) == 60
    assert res["higginsIsIdeal"] is False


def test_corpus_listing():
    code, out, _ = run(["corpus"])
    assert code == 0 and "d8star" in out


def test_unknown_corpus_entry():
    code, _, err = run(["corpus", "nope"])
    assert code == 2 and err.startswith("error:")


def test_validate_ok_and_bad_file(files, tmp_path):
    assert run(["validate", files["zring4"]])[0] == 0
    bad = tmp_path / "bad.alg"
    bad.write_text("algebra x\nelements 2\nop + 2\n0 1\n1\nop - 1\n0 1\n")
    code, _, err = run(["validate", str(bad)])
    assert code == 2 and "expected 4 entries, got 3" in err


def test_missing_file_and_bad_args(files):
    assert run(["validate", "/nonexistent/file.alg"])[0] == 2
    assert run(["higgins", files["a5"]])[0] == 2
    assert run(["frobnicate"])[0] == 2


def test_audit_exit_codes(files):
    code, out, _ = run(["audit-nh", files["d8star"]])
    assert code == 1 and "violations: 1" in out
    assert run(["audit-nh", files["z2xz2"]])[0] == 0
    code, out, _ = run(["audit-sh", files["z16ternary"], "--max-size", "16", "--format", "structured"])
    assert code == 1 and json.loads(out)["result"]["violationCount"] == 2


def test_smith_and_ternary(files):
    code, out, _ = run(["smith", files["z16ternary"], "2Z", "4Z", "--format", "structured"])
    assert code == 0 and json.loads(out)["result"]["smithNormalization"] == ["0", "8"]
    code, out, _ = run(["ternary", files["z16ternary"], "2Z", "4Z", "--format", "structured"])
    assert code == 0 and json.loads(out)["result"]["ternary"] == ["0", "8"]


def test_smith_rejects_non_ideal(files):
    code, _, err = run(["smith", files["d8star"], "S", "S"])
    assert code == 2 and "not an ideal" in err


def test_axioms_text(files):
    code, out, _ = run(["axioms", files["d8star"]])
    assert code == 0
    assert "CI7: FAIL" in out and "CI5: pass" in out


def test_axioms_ci8_none_within_bound(files):
    code, out, _ = run(["axioms", files["narng5"], "--ci8-depth", "2", "--format", "structured"])
    res = json.loads(out)["result"]
    assert code == 0
    assert not res["axioms"]["CI8"]["passed"]
    assert set(res["ci8Witnesses"].values()) == {"none within bound"}


def test_ideals_and_cooperates(files):
    code, out, _ = run(["ideals", files["z8"], "--format", "structured"])
    assert code == 0 and len(json.loads(out)["result"]["ideals"]) == 4
    code, out, _ = run(["cooperates", files["d8star"], "K", "K"])
    assert code == 0 and "cooperate: no" in out


def test_points_check(files):
    code, out, _ = run(["points-check", files["z16ternary"], "2Z", "4Z"])
    assert code == 0 and "huq equals smith: no" in out
    code, out, _ = run(["points-check", files["z16ternary"], "2Z", "4Z", "--point", "square", "--format", "structured"])
    pair = json.loads(out)["result"]["pairs"][0]
    assert code == 1
    assert pair["preservation"]["pointHuqKernel"] == ["0", "8"]
    assert pair["preservation"]["plainHuq"] == ["0"]


def test_char_check(files):
    assert run(["char-check", files["z8"], "2"])[0] == 0
    code, out, _ = run(["char-check", files["z2xz2"], "1", "--format", "structured"])
    assert code == 1 and json.loads(out)["result"]["autInvariant"] is False


def test_huq_trivial_in_abelian_group(files):
    code, out, _ = run(["huq", files["z8"], "2", "full"])
    assert code == 0 and out.startswith("huq (1 elements)")


def test_module_entry_point():
    p = subprocess.run(
        [sys.executable, "-m", "omegacomm", "corpus", "z3"], capture_output=True, text=True, check=False
    )
    assert p.returncode == 0 and p.stdout.startswith("algebra z3")
