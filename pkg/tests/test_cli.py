import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest

from purebench.cli import main
from purebench.instances import VERSION

DEMOS = Path(__file__).resolve().parent.parent / "demos" / "instances"
LINE = str(DEMOS / "line_inclusion.json")
WORKED = str(DEMOS / "qpushout_worked.json")


def _write(tmp_path, name, data) -> str:
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


@pytest.fixture
def kinds_file(tmp_path):
    data = {
        "version": VERSION,
        "objects": {
            "one": {"base": "qmet", "points": ["a"], "distances": [[]]},
            "two1": {"base": "qmet", "points": [0, 1], "distances": [["1"], []]},
            "two2": {"base": "qmet", "points": [0, 1], "distances": [["2"], []]},
        },
        "morphisms": {
            "i0": {"dom": "one", "cod": "two2", "images": [0]},
            "squash": {"dom": "two2", "cod": "two1", "images": [0, 1]},
            "pick": {"dom": "one", "cod": "two1", "images": [0]},
        },
        "families": {"G": ["i0"]},
        "checks": [
            {"id": "inj", "kind": "injective", "f": "two1", "g": "G"},
            {"id": "orth", "kind": "orthogonal", "f": "one", "g": "squash"},
            {"id": "split", "kind": "split", "f": "pick"},
            {"id": "elem", "kind": "elementary", "f": "squash", "g": "i0"},
        ],
    }
    return _write(tmp_path, "kinds.json", data)


def test_validate(tmp_path, capsys):
    assert main(["validate", LINE]) == 0
    assert capsys.readouterr().out.startswith("valid:")
    bad = {"version": VERSION, "objects": {"X": {"base": "qmet", "points": [0, 1, 2],
                                                 "distances": [["1", "5"], ["1"], []]}}}
    assert main(["validate", _write(tmp_path, "bad.json", bad)]) == 2
    assert "(0, 1, 2)" in capsys.readouterr().err
    dd = {"version": VERSION, "objects": {"C": {"base": "dg-fin", "window": [0, 2],
                                                "groups": {"0": [2], "1": [2], "2": [2]},
                                                "differentials": {"1": [[1]], "2": [[1]]}}}}
    assert main(["validate", _write(tmp_path, "dd.json", dd)]) == 2
    assert "degree 2" in capsys.readouterr().err


def test_check_single_requests(capsys):
    assert main(["check", LINE, "pure", "idK", "f", "--system", "surj"]) == 0
    assert main(["check", LINE, "pure", "f", "f", "--system", "surj"]) == 1
    out = capsys.readouterr().out
    assert "false" in out and '"u"' in out
    assert main(["check", LINE, "weakly", "f", "f", "--tolerance", "1"]) == 0
    # every nonexpanding map onto the end points is constant, so 1/2 fails
    assert main(["check", LINE, "weakly", "f", "f", "--tolerance", "1/2"]) == 1


def test_check_errors(capsys):
    assert main(["check", LINE, "sideways", "f", "f"]) == 2
    assert main(["check", LINE, "pure", "nope", "f"]) == 2
    assert main(["check", LINE, "weakly", "f", "f", "--tolerance", "-1"]) == 2
    assert main(["--guard", "2", "check", LINE, "pure", "f", "f"]) == 2
    assert "guard" in capsys.readouterr().out


def test_every_kind_dispatches(kinds_file, tmp_path, capsys):
    report = tmp_path / "kinds-report.json"
    code = main(["check", kinds_file, "--json", str(report)])
    data = json.loads(report.read_text())
    outcomes = {r["id"]: r["verdict"]["outcome"] for r in data["requests"]}
    assert outcomes == {"inj": True, "orth": True, "split": True, "elem": True}
    assert code == 0
    assert [r["id"] for r in data["requests"]] == sorted(outcomes)
    assert main(["recheck", str(report)]) == 0


def test_json_report_round_trips(tmp_path, capsys):
    report = tmp_path / "line-report.json"
    assert main(["check", LINE, "--json", str(report)]) == 1
    data = json.loads(report.read_text())
    assert data["version"] == "purebench-report/1"
    outcomes = {r["id"]: r["verdict"]["outcome"] for r in data["requests"]}
    assert outcomes == {"a-identity": True, "b-inclusion": False, "c-barely": False,
                        "d-weak-half": False, "e-weak-one": True, "f-elementary": False}
    capsys.readouterr()
    assert main(["recheck", str(report)]) == 0
    assert capsys.readouterr().out.count("confirmed") == 6
    # flipping a verdict is caught
    data["requests"][1]["verdict"]["outcome"] = True
    data["requests"][1]["verdict"]["counterexample"] = None
    tampered = _write(tmp_path, "tampered.json", data)
    assert main(["recheck", tampered]) == 1


def test_qpushout(tmp_path, capsys):
    assert main(["qpushout", WORKED, "i0", "id1", "1/2"]) == 0
    out = capsys.readouterr().out
    assert "= 1/2" in out and "= 3/2" in out
    report = tmp_path / "po.json"
    assert main(["qpushout", WORKED, "i0", "id1", "1/2", "--competitor", "top", "bottom",
                 "--json", str(report)]) == 0
    assert "mediating map" in capsys.readouterr().out
    assert len(json.loads(report.read_text())["mediator"]) == 3
    assert main(["qpushout", WORKED, "i0", "id1", "0"]) == 0
    assert capsys.readouterr().out.count("  d(") == 1


def test_qpushout_rejects_other_bases(tmp_path):
    data = {"version": VERSION, "objects": {"P": {"base": "omega-cpo", "points": ["p"]}},
            "morphisms": {"i": {"identity": "P"}}}
    assert main(["qpushout", _write(tmp_path, "p.json", data), "i", "i", "0"]) == 2


def test_verify(capsys):
    assert main(["verify", "dg-counterexample"]) == 0
    assert main(["verify", "no-such-suite"]) == 2
    assert main(["verify", "qmet-equivalence", "--seed", "7", "--cases", "200"]) == 0
    assert "three-way-agree: 201 passed, 0 failed" in capsys.readouterr().out


def test_console_script_is_installed():
    exe = shutil.which("purebench")
    cmd = [exe] if exe else [sys.executable, "-m", "purebench.cli"]
    res = subprocess.run(cmd + ["validate", LINE], capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.startswith("valid:")
