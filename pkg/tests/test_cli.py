import io
import json

import pytest

from gfermat.cli import run


def _write(tmp_path, name, data):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


@pytest.fixture
def c33_path(tmp_path):
    return _write(tmp_path, "c33.json", {"k": 3, "n": 3, "field": {"kind": "prime", "p": 13}, "lambdas": [4]})


def _run(argv):
    buf = io.StringIO()
    code = run(argv, stdout=buf)
    return code, json.loads(buf.getvalue()), buf.getvalue()


def test_genus(c33_path):
    code, out, _ = _run(["genus", "-c", c33_path])
    assert code == 0 and out["genus"] == 10 and out["schema"] == "gfermat/1"


def test_describe(c33_path):
    code, out, _ = _run(["describe", "-c", c33_path])
    assert code == 0
    assert out["canonical_degree"] == 18
    assert out["branch_values"][0] == "inf"


def test_aut(c33_path):
    code, out, _ = _run(["aut", "-c", c33_path])
    assert code == 0 and out["L_order"] == 324 and out["g0_order"] == 12


def test_pluecker(c33_path):
    code, out, _ = _run(["pluecker", "-c", c33_path])
    assert code == 0 and out["d"] == [9, 36, 45, 0] and out["closure"] is True


def test_smooth(c33_path):
    code, out, _ = _run(["smooth", "-c", c33_path])
    assert code == 0 and out["smooth"] and len(out["points"]) == 36


def test_osculate_variants(c33_path):
    code, out, _ = _run(["osculate", "-c", c33_path, "--point", "0"])
    assert code == 0 and out["hermite"]["h"] == [0, 1, 3, 6]
    code, out, _ = _run(["osculate", "-c", c33_path, "--all-fixed"])
    assert code == 0 and len(out["points"]) == 36 and out["pluecker"]["passed"]
    code, out, _ = _run(["osculate", "-c", c33_path, "--samples", "5"])
    assert code == 0 and out["sample_count"] == 5
    code, out, _ = _run(["osculate", "-c", c33_path, "--point", "99"])
    assert code == 2 and out["error"]["code"] == "validation"


def test_points(c33_path):
    code, out, _ = _run(["points", "-c", c33_path])
    assert code == 0 and out["count"] == 9
    code, out, _ = _run(["points", "-c", c33_path, "--q", "13", "169"])
    assert code == 0 and [r["count"] for r in out["censuses"]] == [9, 171]


def test_budget_exit_code(c33_path):
    code, out, _ = _run(["points", "-c", c33_path, "--budget", "5"])
    assert code == 4 and out["error"]["code"] == "budget_exceeded"


def test_validation_exit_code(tmp_path):
    bad = _write(tmp_path, "bad.json", {"k": 3, "n": 3, "field": {"kind": "prime", "p": 13}, "lambdas": [1]})
    code, out, _ = _run(["genus", "-c", bad])
    assert code == 2 and out["error"]["message"]
    small = _write(tmp_path, "small.json", {"k": 3, "n": 3, "field": {"kind": "prime", "p": 7}, "lambdas": [2]})
    code, out, _ = _run(["pluecker", "-c", small])
    assert code == 2 and out["error"]["code"] == "characteristic"
    code, out, _ = _run(["genus", "-c", str(tmp_path / "missing.json")])
    assert code == 2


def test_missing_roots_is_validation(tmp_path):
    path = _write(tmp_path, "c.json", {"k": 3, "n": 3, "field": {"kind": "cyclotomic", "k": 3}, "lambdas": [-1]})
    code, out, _ = _run(["aut", "-c", path])
    assert code == 2 and out["error"]["code"] == "missing_roots"
    assert out["error"]["context"]["required"]


def test_qform(tmp_path):
    curve = _write(tmp_path, "c.json", {"k": 3, "n": 3, "field": {"kind": "extension", "p": 2, "degree": 2}, "lambdas": [[0, 1]]})
    ident = [[[1 if i == j else 0] for j in range(4)] for i in range(4)]
    mat = _write(tmp_path, "m.json", ident)
    code, out, _ = _run(["qform", "-c", curve, "--matrix", mat])
    assert code == 0 and out["qform"]["passed"] and out["consistent"]
    swap = [row[:] for row in ident]
    swap[0], swap[1] = swap[1], swap[0]
    mat = _write(tmp_path, "m2.json", {"matrix": swap})
    code, out, _ = _run(["qform", "-c", curve, "--matrix", mat])
    assert code == 0 and not out["qform"]["passed"] and not out["linear_automorphism"]


def test_qform_wrong_regime(tmp_path, c33_path):
    ident = [[[1 if i == j else 0] for j in range(4)] for i in range(4)]
    mat = _write(tmp_path, "m.json", ident)
    code, out, _ = _run(["qform", "-c", c33_path, "--matrix", mat])
    assert code == 2


def test_verify(c33_path):
    code, out, _ = _run(["verify", "-c", c33_path, "--samples", "10"])
    assert code == 0 and out["passed"]
    assert {ch["name"] for ch in out["checks"]} >= {"genus", "automorphisms", "pluecker", "census"}


def test_deterministic_output(c33_path, tmp_path):
    outfile = tmp_path / "report.json"
    _, _, first = _run(["osculate", "-c", c33_path, "--samples", "8", "--out", str(outfile)])
    _, _, second = _run(["osculate", "-c", c33_path, "--samples", "8"])
    assert first == second == outfile.read_text()
