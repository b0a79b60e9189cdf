import json
import subprocess
import sys
import time

import pytest

from coinduel import cli
from coinduel.nullcline import p1_closed
from coinduel.numerics import UncertifiedSign


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--json")
    return code, json.loads(out)


def test_optimal_n_json(capsys):
    code, doc = run_json(capsys, "optimal-n", "--q", "0.18", "--p", "0.2")
    assert code == 0
    assert set(doc) == {"schema_version", "command", "inputs", "result", "timing_ms", "precision_used"}
    assert doc["command"] == "optimal-n" and doc["inputs"] == {"q": "0.18", "p": "0.2", "precision": None}
    assert doc["result"]["N"] == "26" and doc["result"]["tie"] is False
    assert doc["result"]["bounds"]["upper_simple"] == "40"


def test_optimal_n_text(capsys):
    code, out, _ = run(capsys, "optimal-n", "--q", "1/3", "--p", "2/3")
    assert code == 0 and "N = 1" in out and "tie = True" in out


def test_table_value(capsys):
    code, doc = run_json(capsys, "optimal-n", "--q", "1e-15", "--p", "2e-15")
    assert doc["result"]["N"] == "727689031794675"


def test_reflection(capsys):
    _, a = run_json(capsys, "optimal-n", "--q", "0.9", "--p", "0.95")
    _, b = run_json(capsys, "optimal-n", "--q", "0.05", "--p", "0.1")
    assert a["result"]["N"] == b["result"]["N"] and a["result"]["reflected"]


@pytest.mark.parametrize("argv", [
    ("optimal-n", "--q", "0.3", "--p", "0.2"),
    ("optimal-n", "--q", "0", "--p", "0.2"),
    ("optimal-n", "--q", "abc", "--p", "0.2"),
    ("win-prob", "--q", "0.1", "--p", "0.2", "--n-max", "0"),
    ("nullcline", "--n", "0"),
])
def test_invalid_input_exit_2(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and out == "" and "invalid input" in err


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        cli.main(["optimal-n", "--q", "0.1"])
    assert exc.value.code == 2


def test_uncertified_exit_3(capsys, monkeypatch):
    def boom(*a, **k):
        raise UncertifiedSign("sign not certified", 4000)

    monkeypatch.setattr(cli, "optimal_n", boom)
    code, out, err = run(capsys, "optimal-n", "--q", "0.18", "--p", "0.2")
    assert code == 3 and "not certified" in err


def test_precision_env(capsys, monkeypatch):
    monkeypatch.setenv(cli.PRECISION_ENV, "77")
    _, doc = run_json(capsys, "indicator", "--q", "0.18", "--p", "0.2", "--n", "1000")
    assert doc["result"]["sign"] == "Negative"
    _, doc = run_json(capsys, "indicator", "--q", "0.18", "--p", "0.2", "--n", "1000", "--strategy", "quadrature")
    assert doc["precision_used"] >= 77
    monkeypatch.setenv(cli.PRECISION_ENV, "lots")
    assert run(capsys, "bounds", "--q", "0.1", "--p", "0.2")[0] == 0  # bounds ignore precision
    assert run(capsys, "optimal-n", "--q", "0.1", "--p", "0.2")[0] == 2


def test_win_prob(capsys, tmp_path):
    path = tmp_path / "f.csv"
    code, doc = run_json(capsys, "win-prob", "--q", "0.18", "--p", "0.2", "--n-max", "60", "--csv", str(path))
    res = doc["result"]
    assert code == 0 and res["argmax"] == 26
    assert res["values"][1]["f"].startswith("0.144")
    fs = [float(v["f"]) for v in res["values"][1:]]
    peak = fs.index(max(fs))
    assert all(a < b for a, b in zip(fs[:peak], fs[1:peak + 1]))
    assert all(a > b for a, b in zip(fs[peak:], fs[peak + 1:]))
    lines = path.read_text().splitlines()
    assert lines[0] == "n,f,abs_error,is_argmax" and len(lines) == 62


def test_win_prob_diagonal(capsys):
    code, doc = run_json(capsys, "win-prob", "--q", "0.4", "--p", "0.6", "--n-max", "4")
    assert code == 0 and doc["result"]["argmax"] == 2
    assert doc["result"]["values"][1]["f"] == "0.16"


def test_indicator_zero(capsys):
    code, out, _ = run(capsys, "indicator", "--q", "0.4", "--p", "0.6", "--n", "2")
    assert code == 0 and "Zero" in out


def test_bounds(capsys):
    _, doc = run_json(capsys, "bounds", "--q", "0.18", "--p", "0.2")
    assert doc["result"]["lower"] == "26" and doc["result"]["h_approx"] == "26"


def test_nullcline(capsys, tmp_path):
    path = tmp_path / "n1.csv"
    code, doc = run_json(capsys, "nullcline", "--n", "1", "--samples", "100", "--csv", str(path))
    assert code == 0
    samples = doc["result"]["samples"]
    assert len(samples) == 100 and not doc["result"]["invariant_violations"]
    assert max(abs(s["p"] - p1_closed(s["q"])) for s in samples) < 1e-8
    assert path.read_text().splitlines()[0] == "q,p,dp_dq"


def test_region_map_reproducible(capsys, tmp_path):
    args = ("region-map", "--count", "5000", "--seed", "4", "--csv", str(tmp_path / "r.csv"))
    _, a = run_json(capsys, *args)
    first_csv = (tmp_path / "r.csv").read_bytes()
    _, b = run_json(capsys, *args)
    a.pop("timing_ms"), b.pop("timing_ms")
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    assert (tmp_path / "r.csv").read_bytes() == first_csv
    assert a["result"]["points"] == 5000


def test_verify_quick(capsys):
    t0 = time.perf_counter()
    code, out, _ = run(capsys, "verify", "--level", "quick")
    assert code == 0 and "all checks passed" in out and "FAIL" not in out
    assert time.perf_counter() - t0 < 60


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "coinduel", "bounds", "--q", "0.18", "--p", "0.2"],
                         capture_output=True, text=True)
    assert out.returncode == 0 and "upper_simple = 40" in out.stdout
