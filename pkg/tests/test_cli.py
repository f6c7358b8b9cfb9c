import json
import subprocess
import sys

import pytest

from regcantor.cli import COMMANDS, main
from regcantor.realisers import OracleKind

SMOKE = [
    "eval --fn thomae --at 1/3",
    "eval --fn pl_identity --at 1/2+1/4*sqrt2 --side left",
    "limits --fn thomae --at 1/2 --verify",
    "jumpset --fn thomae --n 2",
    "continuity-point --fn thomae --depth 4 --verify",
    "continuity-near --fn thomae --at 1/2 --k 3 --depth 4 --verify",
    "weak-point --fn thomae --depth 4 --verify",
    "weak-point --fn thomae --at 1/2",
    "volterra-rational --fn thomae --budget 0 --verify",
    "volterra-rational --fn pl_identity --depth 4 --verify",
    "volterra-pair --fn thomae --gn rationals_spike --depth 4 --verify",
    "volterra-dense --fn thomae --set rationals --depth 4 --verify",
    "band --fn pl_identity --verify --samples 200",
    "integral --fn tent --a 1/4 --b 3/4",
    "integral-zero --fn rationals_spike --depth 4 --verify",
    "ftc-point --fn pl_identity --depth 4 --verify",
    "nonmax --fn tent --depth 4 --verify",
    "strict-maxima --fn rationals_spike --count 4 --verify",
    "cantor --set random --seed 3 --depth 6",
    "baire --set rationals --depth 5",
    "verify --op band --fn thomae --samples 100",
    "demo spike --depth 4",
] + [f"reduce --from {k.value} --set random --seed 1 --depth 4" for k in OracleKind]


def run(capsys, line):
    code = main(line.split())
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def test_every_listed_command_exists():
    listed = {
        "eval", "limits", "jumpset", "continuity-point", "continuity-near", "weak-point",
        "volterra-rational", "volterra-pair", "volterra-dense", "band", "integral",
        "integral-zero", "ftc-point", "nonmax", "strict-maxima", "cantor", "baire",
        "reduce", "verify", "demo",
    }
    assert listed == set(COMMANDS)


@pytest.mark.parametrize("line", SMOKE)
def test_command_runs_and_repeats(capsys, line):
    code, out, err = run(capsys, line)
    assert code == 0, err + out
    assert out.strip()
    if "--verify" in line or line.split()[0] in ("cantor", "baire", "verify", "demo"):
        assert out.rstrip().endswith("verification: PASS")
    assert run(capsys, line)[1] == out


def test_integral_prints_half(capsys):
    code, out, _ = run(capsys, "integral --fn pl_identity")
    assert code == 0
    assert "integral: 1/2" in out.splitlines()


def test_rationals_print_as_fractions(capsys):
    _, out, _ = run(capsys, "eval --fn thomae --at 2/4")
    assert "value: 1/2" in out
    assert "." not in out.replace("...", "")


def test_structured_output_is_json(capsys):
    code, out, _ = run(capsys, "cantor --set random --seed 2 --depth 4 --format structured --precision 12")
    assert code == 0
    doc = json.loads(out)
    assert doc["command"] == "cantor" and doc["status"] == "pass"
    assert "/" in doc["result"]["y_approx"]
    assert out == json.dumps(doc, sort_keys=True, indent=2) + "\n"


def test_demo_thomae_example(capsys):
    code, out, _ = run(capsys, "demo thomae --op continuity-point --precision 10 --depth 6")
    assert code == 0
    lines = out.splitlines()
    assert any(l.startswith("y_approx: ") for l in lines)
    assert any(l.startswith("certificate: ") for l in lines)
    assert lines[-1] == "verification: PASS"


@pytest.mark.parametrize(
    "line",
    [
        "integral-zero --fn pl_identity",
        "eval --fn nosuch --at 1/2",
        "eval --fn thomae --at 3/2",
        "eval --fn thomae --at 1/0",
        "eval --fn thomae",
        "nonmax --fn nosuch",
        "reduce --from nosuch --set rationals",
        "cantor --set nosuch",
        "strict-maxima --fn tent_unseparated --file /nonexistent/file.txt",
    ],
)
def test_precondition_errors_exit_2(capsys, line):
    code, out, err = run(capsys, line)
    assert code == 2
    assert err.startswith("error: ") and out == ""


def test_format_errors_exit_2_with_line(tmp_path, capsys):
    path = tmp_path / "bad.txt"
    path.write_text("function g {\n  base: pl [(0,0),(1,0)]\n  spikes: levels { 3: [(1/3, 1/2)] }\n}\n")
    code, _, err = run(capsys, f"verify --file {path}")
    assert code == 2 and "line 3" in err


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["nosuchcommand"])
    assert exc.value.code == 2


def test_failed_verification_exits_1(tmp_path, capsys):
    # the finite spike at 1/64 sits below the scan budget, so "continuous" is only a claim
    path = tmp_path / "g.txt"
    path.write_text("function g { base: pl [(0,0),(1,0)] spikes: levels { 6: [(1/64, 1/64)] } }\n")
    code, out, _ = run(capsys, f"limits --file {path} --fn g --at 1/64 --budget 3 --verify")
    assert code == 1
    assert "sample=1/64" in out and out.rstrip().endswith("verification: FAIL")


def test_verify_file_normalizes(tmp_path, capsys):
    path = tmp_path / "defs.txt"
    path.write_text("# demo\nfunction f { base: pl [(0,0),(1,1)] }\nheightset H { levels { 0: [1/2] } }\n")
    code, out, _ = run(capsys, f"verify --file {path}")
    assert code == 0
    assert "definition: function f" in out and "definition: heightset H" in out
    code, out, _ = run(capsys, f"cantor --file {path} --set H --depth 0")
    assert code == 0 and out.rstrip().endswith("verification: PASS")


def test_output_identical_across_processes():
    cmd = [sys.executable, "-m", "regcantor.cli", "cantor", "--set", "rationals", "--precision", "8", "--depth", "6"]
    first = subprocess.run(cmd, capture_output=True, check=True).stdout
    second = subprocess.run(cmd, capture_output=True, check=True).stdout
    assert first == second and b"verification: PASS" in first
