"""Command-line workspace scripts: output, exit codes, JSON and DOT export."""

import json
import os
import shutil
import subprocess
import sys

import pytest

from diagkit.cli import main

HERE = os.path.dirname(os.path.abspath(__file__))
WORKSPACES = os.path.join(HERE, "..", "scripts", "workspaces")


@pytest.fixture
def ws(tmp_path):
    shutil.copy(os.path.join(WORKSPACES, "pres.json"), tmp_path / "pres.json")
    return tmp_path


def run(ws, text, *flags):
    script = ws / "s.dk"
    script.write_text(text)
    return main([*flags, "--script", str(script)])


def test_round_check_on_globe(ws, capsys):
    assert run(ws, "shape g2 = cell(cell(pt,pt),cell(pt,pt))\ncheck-round g2\n") == 0
    assert "round: true" in capsys.readouterr().out


def test_unit_is_certified(ws, capsys):
    code = run(ws, "load pres.json\nunit u1 --of f\ncheck-equiv u1 cert:degeneracy --depth 1\n")
    assert code == 0
    assert capsys.readouterr().out.strip().endswith("accept")


def test_divide_pipeline(ws, capsys):
    code = run(ws, "load pres.json\nunit ef --of f\ncontext E = lp(ef) --domain f g\napply b = E al\n"
                   "divide E b --depth 2 --as sol\ncheck-equiv sol.witness sol.cert --depth 2\n", "--json")
    assert code == 0
    lines = [json.loads(x) for x in capsys.readouterr().out.splitlines()]
    assert lines[-2]["verdict"]["status"] == "accept"
    assert lines[-1]["verdict"]["status"] == "accept"


def test_parse_error_exit_code(ws, capsys):
    assert run(ws, "shape x = cell(pt\n") == 1
    assert "end of input" in capsys.readouterr().err
    assert run(ws, "frobnicate x\n") == 1


def test_validation_error_exit_code(ws, capsys):
    assert run(ws, "shape w = paste(globe(2),arrow,0)\ncheck-round w\n") == 2
    assert run(ws, "shape w = cell(arrow,pt)\n") == 2


def test_budget_exit_code(ws, capsys):
    code = run(ws, "load pres.json\nunit ef --of f\ncontext E = lp(ef) --domain f g\napply b = E al\n"
                   "divide E b --depth 2 --budget 1\n")
    assert code == 3


def test_json_errors_are_structured(ws, capsys):
    assert run(ws, "shape x = cell(pt\n", "--json") == 1
    out = json.loads(capsys.readouterr().out.splitlines()[-1])
    assert out["ok"] is False and out["exit"] == 1 and out["line"] == 1


def test_export_is_deterministic_and_reloads(ws, capsys):
    text = ("load pres.json\nlunitor l1 --of al\nexport-json l1 --out l1.json\n"
            "load l1.json --as l2\nexport-json l2 --out l2.json\nexport-json --out p.json\n"
            "export-dot l1 --out l1.dot\n")
    assert run(ws, text) == 0
    first = (ws / "l1.json").read_text()
    assert first == (ws / "l2.json").read_text()
    assert run(ws, text) == 0
    assert (ws / "l1.json").read_text() == first
    dot = (ws / "l1.dot").read_text()
    assert dot.startswith("digraph")
    pres = json.loads((ws / "p.json").read_text())
    assert [g["name"] for g in pres["generators"]] == ["a", "b", "c", "f", "g", "h", "al"]


def test_shipped_workspaces_run():
    for name in ("basics.dk", "divide.dk"):
        assert main(["--script", os.path.join(WORKSPACES, name)]) == 0


def test_console_entry_point(ws):
    proc = subprocess.run([sys.executable, "-m", "diagkit.cli", "check-molecule", "globe(2)"],
                          capture_output=True, text=True, cwd=ws)
    assert proc.returncode == 0 and proc.stdout.strip() == "molecule: true"
    proc = subprocess.run([sys.executable, "-m", "diagkit.cli", "shape", "x", "=", "globe(2)"],
                          capture_output=True, text=True, cwd=ws)
    assert proc.returncode == 0 and "x: dim 2 size 5" in proc.stdout
