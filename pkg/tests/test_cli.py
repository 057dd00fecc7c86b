import io
import json
import subprocess
import sys
from fractions import Fraction as F

import pytest

from psdsynth import cli
from psdsynth.cli import RunConfig
from psdsynth.transforms import TransformSpec


def run_main(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def coefficients(report):
    return [cli.rational_from_json(c) for c in report["c"]]


def test_rational_json_roundtrip():
    for q in [F(0), F(-7, 3), F(6631164), F(204631, 45)]:
        assert cli.rational_from_json(json.loads(json.dumps(cli.rational_json(q)))) == q


def test_example_5_json(capsys):
    code, out, _ = run_main(["x*(1+2*x)*(1+3*x)*(1+4*x)", "--order", "8", "--format", "json"], capsys)
    report = json.loads(out)
    assert code == 0
    assert report["route_agreement"]
    # the stated covariance; the printed table needs an extra factor (1+6x)
    assert coefficients(report) == [1, 1, 5, 36, 306, 2861, 28457, 295616]


def test_printed_example_5_table(capsys):
    code, out, _ = run_main(["x*(1+2*x)*(1+3*x)*(1+4*x)*(1+6*x)", "--order", "8", "--format", "json"], capsys)
    assert code == 0
    assert coefficients(json.loads(out)) == [1, 1, 8, 96, 1379, 21937, 372724, 6631164]


def test_negative_control_exits_2(capsys):
    code, out, _ = run_main(["2*x*(1-x)", "--format", "json"], capsys)
    report = json.loads(out)
    assert code == 2
    assert report["verdict"]["first_negative_index"] == 4


def test_non_integral_linear_term_exits_2(capsys):
    code, _, err = run_main(["x/2"], capsys)
    assert code == 2
    assert "V'(0)" in err


@pytest.mark.parametrize("argv", [["x*("], ["1+x"], ["x", "--order", "1"], ["--bogus"], [], ["x", "--power", "0"]])
def test_usage_errors_exit_1(argv, capsys):
    code, _, _ = run_main(argv, capsys)
    assert code == 1


def test_parse_error_position(capsys):
    code, out, err = run_main(["x*(1-", "--format", "json"], capsys)
    assert code == 1
    assert "column" in json.loads(out)["error"]


def test_poisson_oracle(capsys):
    code, out, _ = run_main(["x", "--verify", "oracle", "--x", "1", "--samples", "200000", "--format", "json"], capsys)
    report = json.loads(out)
    assert code == 0
    point = report["oracle"][0]
    assert point["variance"] == pytest.approx(1, abs=1e-9)
    assert point["monte_carlo"]["ok"]
    assert all(report["identities"].values())


def test_stdin(capsys, monkeypatch):
    code, out, _ = run_main(["-", "--format", "json", "--order", "6"], capsys, stdin="x*(1+x)\n", monkeypatch=monkeypatch)
    assert code == 0
    assert coefficients(json.loads(out)) == [1] * 6


def test_preset(capsys):
    code, out, _ = run_main(["--preset", "sqrt-example", "--s-lead", "1/2", "--order", "7", "--format", "json"], capsys)
    assert code == 0
    assert coefficients(json.loads(out)) == [1, 2, F(5, 2), F(8, 3), F(67, 24), F(31, 10), F(2731, 720)]


def test_transform_flags(capsys):
    code, out, _ = run_main(
        ["x*(1+x/2)*(1+x)^2", "--s-lead", "1/2", "--shift", "1", "--verify", "identities", "--order", "10", "--format", "json"],
        capsys,
    )
    report = json.loads(out)
    assert code == 0
    assert report["transform"]["roundtrip"] is True
    assert report["transform"]["covariance"] == "-1/2*x^2 + 1/2*x^4"
    assert cli.rational_from_json(report["transform"]["omega"][1]) == 1


def test_text_output(capsys):
    code, out, _ = run_main(["x*(1-x)", "--order", "4"], capsys)
    assert code == 0
    assert "c_1 = 1" in out
    assert "covariance check: passed" in out


def test_run_api():
    code, report = cli.run(RunConfig(expression="x", order=6, transform=TransformSpec(argpow_n=2), verify_level="identities"))
    assert code == 0
    assert report["transform"]["roundtrip"]
    assert report["exit_code"] == 0


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "psdsynth", "x", "--order", "4", "--format", "json"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["schema"] == 1
