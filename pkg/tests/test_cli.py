import json
from pathlib import Path

import pytest

from ratcurves import report
from ratcurves.cli import main

ROOT = Path(__file__).resolve().parent.parent
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(autouse=True)
def _at_root(monkeypatch):
    monkeypatch.chdir(ROOT)


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_golden_count_mor(capsys):
    code, out, _ = run(capsys, "count-mor", "--spec", "specs/line-in-plane.spec", "--e", "1")
    assert code == 0
    assert out == (GOLDEN / "count-mor-line-p2.json").read_text()


def test_report_round_trip(capsys):
    code, out, _ = run(capsys, "find-lines", "--spec", "specs/dp3-fermat.spec", "--field", "p=7")
    doc = report.loads(out)
    assert doc["schema"] == report.SCHEMA
    assert doc["result"]["count"] == "27"


def test_threads_byte_identical(capsys, tmp_path):
    outs = []
    for t in ("1", "8"):
        path = tmp_path / f"r{t}.json"
        assert main(["count-points", "--spec", "specs/dp3-fermat.spec", "--e-max", "2",
                     "--threads", t, "--output", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_csv_export(capsys):
    code, out, _ = run(capsys, "count-points", "--spec", "specs/line-in-plane.spec", "--e-max", "1",
                       "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3 and "orbits" in lines[0]


def test_usage_errors(capsys):
    assert run(capsys, "count-mor", "--spec", "specs/line-in-plane.spec")[0] == 2
    assert run(capsys, "nonsense")[0] == 2
    assert run(capsys, "find-lines", "--spec", "specs/dp3-fermat.spec", "--threads", "0")[0] == 2


def test_parse_errors(capsys, tmp_path):
    assert run(capsys, "validate", "--spec", str(tmp_path / "missing.spec"))[0] == 3
    bad = tmp_path / "bad.spec"
    bad.write_text('field = "p=4"\nforms = ["x0"]\nvars = ["x0", "x1"]\n')
    assert run(capsys, "count-mor", "--spec", str(bad), "--e", "1")[0] == 3


def test_validation_errors(capsys, tmp_path):
    inh = tmp_path / "inh.spec"
    inh.write_text('field = "p=5"\nvars = ["x0", "x1", "x2"]\nforms = ["x0^2 + x1^3"]\n')
    code, out, _ = run(capsys, "validate", "--spec", str(inh))
    assert code == 4
    assert "x1^3" in out
    code, _, err = run(capsys, "count-mor", "--spec", "specs/dp3-fermat.spec", "--e", "2",
                       "--strategy", "interpolation")
    assert code == 4 and "nodes" in err
    code, _, _ = run(capsys, "theorem1-check", "--spec", "specs/dp2-default.spec", "--e-max", "1",
                     "--exclusions", "auto-lines")
    assert code == 4


def test_budget_refusal(capsys):
    code, _, err = run(capsys, "count-mor", "--spec", "specs/dp3-fermat.spec", "--e", "3",
                       "--strategy", "naive", "--budget", "1000")
    assert code == 5
    assert "2^" in err


def test_certificate_failure_exit(capsys):
    code, out, _ = run(capsys, "dim-estimate", "--spec", "specs/line-in-plane.spec", "--e", "1",
                       "--fields", "p=3;p=5", "--tol", "0.01")
    assert code == 6
    assert json.loads(out)["result"]["verdict"] in ("excess", "deficient")


def test_bounds_command(capsys):
    code, out, _ = run(capsys, "bounds", "--spec", "specs/dp1-default.spec", "--e", "2")
    assert code == 0
    assert report.loads(out)["result"]["formula"] == "6^13*q^5"


def test_exclusion_file(capsys, tmp_path):
    ex = tmp_path / "ex.toml"
    ex.write_text('field = "p=2"\nvars = ["x0", "x1", "x2"]\ncomponents = [["x1", "x2"]]\n')
    base = run(capsys, "count-mor", "--spec", "specs/line-in-plane.spec", "--e", "1")
    code, out, _ = run(capsys, "count-mor", "--spec", "specs/line-in-plane.spec", "--e", "1",
                       "--exclusions", f"file:{ex}")
    assert code == 0
    assert int(report.loads(out)["result"]["excluded_orbits"]) == 0  # degree-1 maps are never constant
    assert report.loads(base[1])["result"]["n_u"] == report.loads(out)["result"]["n_u"]


def test_eckardt_and_classify_commands(capsys):
    code, out, _ = run(capsys, "eckardt-scan", "--spec", "specs/dp3-fermat.spec", "--field", "p=7", "--certify")
    assert code == 0
    assert len(report.loads(out)["result"]["points"]) == 18
    code, out, _ = run(capsys, "fano-fibre", "--spec", "specs/fermat-threefold.spec", "--point", "1,6,0,0,0",
                       "--m-max", "2")
    assert code == 0


def test_classify_lines_check_eckardt(capsys):
    code, out, _ = run(capsys, "classify-lines", "--spec", "specs/fermat-threefold.spec", "--check-eckardt")
    assert code == 0
