import json

import pytest

from logenriques import cli
from logenriques.cli import ParseError, main, parse_subset
from logenriques.dual_graph import deserialize
from logenriques.enumeration import SubsetT, VerificationReport
from logenriques.models import ModelCase, golden_graph


def test_parse_subset():
    assert parse_subset("8,12") == SubsetT.of([8, 12])
    assert parse_subset("1,1,2") == SubsetT.of([1, 2])
    assert parse_subset(" 3 , 15 ") == SubsetT.of([3, 15])
    assert parse_subset("") == SubsetT(0)
    for bad in ("16", "0", "a", "1,,2", "1.5", "-3"):
        with pytest.raises(ParseError):
            parse_subset(bad)


def test_extract_z2(capsys):
    assert main(["extract", "--model", "z2"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == ["(-3,3/7)-(-2,2/7)-(-2,1/7)-(-1,0)-C̄", "ΔC² = -7/2"]


def test_extract_a26_reports_boundary(capsys, tmp_path):
    dot = tmp_path / "a26.dot"
    assert main(["extract", "--model", "a26", "--dot-out", str(dot)]) == 0
    out = capsys.readouterr().out
    assert "C1² = -14 (minimal resolution -1)" in out
    assert "C2² = -14 (minimal resolution 6)" in out
    assert dot.read_text().startswith('graph "a26"')


def test_check_subset(capsys):
    assert main(["check-subset", "--case", "a26", "--t", "8,12"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["valid"] is True and doc["rho"] == 1 and doc["rank_delta"] == 15
    assert main(["check-subset", "--case", "a26", "--t", "3,11,14"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["valid"] is False and doc["reason"] == "PairNotNegativeDefinite"
    assert doc["c1_sq"] == "-1"


@pytest.mark.parametrize(
    "argv",
    [
        ["check-subset", "--case", "a26", "--t", "16"],
        ["check-subset", "--case", "a26", "--t", "1,,2"],
        ["check-subset", "--case", "k3", "--t", "1"],
        ["extract", "--model", "z5"],
        ["verify", "--case", "a26", "--bogus"],
        [],
    ],
)
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_export_json_and_dot(tmp_path):
    out = tmp_path / "g.json"
    assert main(["export", "--case", "i22", "--what", "golden", "--out", str(out)]) == 0
    assert deserialize(json.loads(out.read_text())) == golden_graph(ModelCase.I22).graph
    dot = tmp_path / "g.dot"
    assert main(["export", "--case", "a26", "--what", "minimal", "--format", "dot", "--out", str(dot)]) == 0
    assert dot.read_text().count(" -- ") == 4  # C1-C2, C1-a1, a2_1-a2_2, C1-a2_2


def test_verify_exit_code_follows_report(monkeypatch, tmp_path, capsys):
    def fake(case, bad):
        rep = VerificationReport(case, {}, valid_raw=1)
        if bad:
            rep.mismatches.append({"record": {"t": [1]}, "oracle": False, "theorem": True, "clause": "x"})
            rep.theorem_only = 1
        return rep

    monkeypatch.setattr(cli, "verify_theorem", lambda case: fake(case, False))
    report = tmp_path / "r.json"
    assert main(["verify", "--case", "both", "--report-out", str(report)]) == 0
    assert [r["case"] for r in json.loads(report.read_text())["reports"]] == ["a26", "i22"]
    monkeypatch.setattr(cli, "verify_theorem", lambda case: fake(case, case is ModelCase.I22))
    assert main(["verify", "--case", "both"]) == 1
    assert "T=[1]" in capsys.readouterr().out
