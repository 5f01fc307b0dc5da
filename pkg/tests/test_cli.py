from __future__ import annotations

import json
import subprocess
import sys
from pathlib import Path

import pytest

from valvol.algebra import parse_rational, poly_parse
from valvol.cli import main

FIXTURES = Path(__file__).parent / "fixtures"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, out + err
    return json.loads(out)


class TestAnalyze:
    def test_cusp_with_tail(self, capsys):
        doc = run_json(capsys, "analyze", "--a", "2", "--phi", "3:1,4:1", "--lambda", "1/2")
        out = doc["outputs"]
        assert out["characteristic"] == [2, 3]
        assert out["lct"] == "5/6" and out["nvol"] == "2/3"
        assert out["ray"] == [2, 3] and out["case"] == "cone"
        assert doc["provenance"]["closed_form_matches_minimizer"] is True

    def test_klt_boundary_error(self, capsys):
        code, out, err = run(capsys, "analyze", "--a", "2", "--phi", "3:1", "--lambda", "5/6")
        assert code != 0
        lines = out.strip().splitlines()
        assert len(lines) == 1
        payload = json.loads(lines[0])["error"]
        assert payload["code"] == "klt_range"
        assert payload["message"] == "lambda outside klt range [0, 5/6)"

    def test_smooth(self, capsys):
        doc = run_json(capsys, "analyze", "--a", "1", "--phi", "2:1", "--lambda", "0")
        assert doc["outputs"]["nvol"] == "4"

    def test_parse_error(self, capsys):
        code, out, _ = run(capsys, "analyze", "--a", "2", "--phi", "3:1", "--lambda", "1/0")
        assert code != 0 and json.loads(out)["error"]["code"] == "parse_error"

    def test_non_primitive(self, capsys):
        code, out, _ = run(capsys, "analyze", "--a", "2", "--phi", "4:1,6:1", "--lambda", "0")
        assert code != 0 and json.loads(out)["error"]["code"] == "non_primitive"


class TestDegenerate:
    def test_cone(self, capsys):
        out = run_json(capsys, "degenerate", "--a", "2", "--phi", "3:1,4:1", "--lambda", "1/2")["outputs"]
        assert out["initial_form"] == "y^2 - x^3"
        assert out["xi"] == [2, 3] and out["kss"] is True
        xys = ("x", "y", "s")
        assert poly_parse(out["rees"], xys) == poly_parse("y^2 - 2*x^2*y*s + x^4*s^2 - x^3", xys)

    def test_toric(self, capsys):
        out = run_json(capsys, "degenerate", "--a", "2", "--phi", "3:1", "--lambda", "1/8")["outputs"]
        assert out["central_boundary"] == [["y", "1/4"]]
        assert out["xi"] == [3, 4]

    def test_boundary_is_cone(self, capsys):
        out = run_json(capsys, "degenerate", "--a", "2", "--phi", "3:1", "--lambda", "1/6")["outputs"]
        assert out["case"] == "cone"


class TestKss:
    @pytest.mark.parametrize("coeff, verdict", [("1/6", True), ("1/12", False), ("0", False)])
    def test_threshold(self, capsys, coeff, verdict):
        out = run_json(capsys, "kss", "--orders", "2,3", "--coeff", coeff)["outputs"]
        assert out["kss"] is verdict

    def test_not_log_fano(self, capsys):
        code, out, _ = run(capsys, "kss", "--orders", "2,3", "--coeff", "9/10")
        assert code != 0 and json.loads(out)["error"]["code"] == "not_log_fano"


class TestFamily:
    def test_equisingular(self, capsys):
        out = run_json(capsys, "family", "--file", str(FIXTURES / "equisingular.json"))["outputs"]
        assert all(out["constant"].values())
        assert out["common_degeneration"]["xi"] == [2, 3]
        assert out["flat"]["ok"] is True

    def test_non_equisingular(self, capsys):
        code, out, err = run(capsys, "family", "--file", str(FIXTURES / "mutated.json"), "--cutoff", "20")
        doc = json.loads(out)["outputs"]
        assert code == 0
        assert doc["constant"]["char"] is False
        assert doc["flat"]["witness"]["lambda"] == "3"
        assert "graded dims differ at lambda = 3" in err

    def test_flagged(self, capsys):
        code, out, err = run(capsys, "family", "--file", str(FIXTURES / "flagged.json"))
        doc = json.loads(out)["outputs"]
        assert doc["flagged"][0]["sample"] == "0"
        assert "excluded s = 0" in err


def test_text_format(capsys):
    code, out, _ = run(capsys, "analyze", "--a", "2", "--phi", "3:1", "--lambda", "1/2", "--format", "text")
    assert code == 0
    assert 'outputs.nvol = "2/3"' in out.splitlines()


def _rationals(node):
    if isinstance(node, dict):
        for v in node.values():
            yield from _rationals(v)
    elif isinstance(node, list):
        for v in node:
            yield from _rationals(v)
    elif isinstance(node, str):
        try:
            yield node, parse_rational(node)
        except ValueError:
            pass


def test_rationals_round_trip(capsys):
    doc = run_json(capsys, "degenerate", "--a", "4", "--phi", "6:1,7:-2/3", "--lambda", "1/5")
    found = list(_rationals(doc))
    assert found
    for text, q in found:
        assert str(q) == text
    f = poly_parse(doc["outputs"]["equation"], ("x", "y"))
    assert str(f) == doc["outputs"]["equation"]


def test_selftest_seeded(monkeypatch, capsys):
    monkeypatch.setenv("VALVOL_SEED", "5")
    doc = run_json(capsys, "selftest", "--count", "5")
    assert doc["inputs"]["seed"] == 5 and doc["outputs"]["ok"] is True


def test_module_entry_point_deterministic():
    cmd = [sys.executable, "-m", "valvol", "degenerate", "--a", "2", "--phi", "3:1,4:1", "--lambda", "1/2"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and first
