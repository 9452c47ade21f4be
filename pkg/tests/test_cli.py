import json

import pytest

from qdbar.cli import EXIT_INCONCLUSIVE, EXIT_OK, EXIT_USAGE, main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval(capsys):
    code, out, _ = run(capsys, "eval", "c*a")
    assert code == EXIT_OK and out.splitlines()[0] == "q^(-1)*a*c"


def test_eval_exact_ring(capsys):
    code, out, _ = run(capsys, "eval", "a*as", "--r", "1/2")
    assert code == EXIT_OK and out.splitlines()[0] == "1 - 1/16*c*cs"


def test_dbar_and_integral(capsys):
    assert run(capsys, "dbar", "B0")[1].strip() == "-q^(-2)*a*c"
    code, out, _ = run(capsys, "integral", "-q^(-2)*a*c")
    assert code == EXIT_OK and out.strip() == "c*cs"


def test_norm_prints_interval(capsys, tmp_path):
    csv = tmp_path / "m.csv"
    code, out, _ = run(capsys, "norm", "B0", "--q", "0.25", "--csv", str(csv))
    lo, hi = (float(t) for t in out.strip().strip("[]").split(","))
    assert code == EXIT_OK and lo <= 1.0 <= hi and csv.exists()


def test_decide_certified_writes_report(capsys, tmp_path):
    path = tmp_path / "r.json"
    code, _, err = run(capsys, "decide", "0.01*B0", "0", "--q", "1/4", "--out", str(path))
    doc = json.loads(path.read_text())
    assert code == EXIT_OK and doc["decision"] == "EquivalentCertified"
    assert doc["run_config"]["seed"] == 2024 and "decision" in err


def test_decide_inconclusive(capsys):
    code, _, _ = run(capsys, "decide", "0", "3*B0", "--cap", "6")
    assert code in (EXIT_INCONCLUSIVE, 10)


@pytest.mark.parametrize("argv", [
    ["eval", ""],
    ["decide", "B0", "B0 + 1"],
    ["norm", "a", "--q", "0.5", "--r", "1/2"],
    ["norm", "a", "--q", "2"],
    ["integral", "a*c*c"],
    ["bogus"],
])
def test_usage_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_USAGE
