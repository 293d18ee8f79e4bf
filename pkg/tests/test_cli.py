import json
import subprocess
import sys
from fractions import Fraction

import pytest

from superquant.cli import main
from superquant.equivariant import gamma_table, table_from_json


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_gamma_table_example(capsys):
    code, out, _ = run(capsys, "gamma-table", "-n", "2", "--order2", "1", "--lambdas", "1,0", "--mu", "3")
    assert code == 0
    data = json.loads(out)
    assert data["delta"] == "2"
    assert {"s": [1, 0], "i": [0, 0], "value": "-2/3"} in data["entries"]
    assert table_from_json(data) == gamma_table((1, 0), 3, 1)


def test_gamma_table_trivial(capsys):
    code, out, _ = run(capsys, "gamma-table", "-n", "1", "--order2", "0", "--lambdas", "1/2", "--mu", "1/2")
    assert code == 0
    assert json.loads(out)["entries"] == [{"s": [0], "i": [0], "value": "1"}]


def test_gamma_table_resonant(capsys):
    code, out, err = run(capsys, "gamma-table", "-n", "2", "--order2", "2", "--lambdas", "0,0", "--mu", "1/2")
    assert code == 2
    assert out == ""
    assert "(1, 0)" in err


def test_gamma_table_partial(capsys):
    code, out, _ = run(capsys, "gamma-table", "-n", "2", "--order2", "2", "--lambdas", "0,0", "--mu", "1/2",
                       "--allow-partial")
    assert code == 0
    data = json.loads(out)
    assert data["partial"] is True
    assert data["resonant_pivot"] == {"ell": 1, "p": 0}


def test_recursion_method_matches_closed(capsys):
    args = ["gamma-table", "-n", "3", "--order2", "3", "--lambdas", "1/3,-2,5/4", "--mu", "7/3"]
    _, closed, _ = run(capsys, *args)
    _, rec, _ = run(capsys, *args, "--method", "recursion")
    a, b = json.loads(closed), json.loads(rec)
    assert a["entries"] == b["entries"]
    assert b["kind"] == "varpi"


def test_text_format_has_delta_header(capsys):
    code, out, _ = run(capsys, "gamma-table", "-n", "1", "--order2", "2", "--lambdas", "1", "--mu", "4",
                       "--format", "text")
    assert code == 0
    assert "delta = 3" in out


def test_output_file_and_determinism(tmp_path, capsys):
    path = tmp_path / "t.json"
    args = ["gamma-table", "-n", "2", "--order2", "3", "--lambdas", "1/2,3", "--mu=-1/5", "--output", str(path)]
    assert main(args) == 0
    first = path.read_bytes()
    assert main(args) == 0
    assert path.read_bytes() == first
    assert capsys.readouterr().out == ""


def test_bad_lambdas_length(capsys):
    code, _, err = run(capsys, "gamma-table", "-n", "2", "--order2", "1", "--lambdas", "1", "--mu", "3")
    assert code == 2
    assert "expected 2 lambdas" in err


def test_verify_default_sweep(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "0")
    assert code == 0
    report = json.loads(out)
    assert report["ok"]
    assert len(report["blocks"]) == 6
    assert all("delta" in b["weights"] for b in report["blocks"])
    names = {r["name"] for b in report["blocks"] for r in b["results"]}
    assert names == {"commutation", "action-closed-vs-oracle", "closed-form-vs-recursion", "equivariance", "roundtrip"}


def test_verify_is_deterministic(capsys):
    _, first, _ = run(capsys, "verify", "--seed", "5", "--format", "text")
    _, second, _ = run(capsys, "verify", "--seed", "5", "--format", "text")
    assert first == second


def test_verify_seed_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SUPERQUANT_SEED", "11")
    _, out, _ = run(capsys, "verify")
    assert json.loads(out)["seed"] == 11
    monkeypatch.setenv("SUPERQUANT_SEED", "abc")
    code, _, _ = run(capsys, "verify")
    assert code == 2


def test_verify_sign_flip_is_caught(capsys):
    code, out, _ = run(capsys, "verify", "--seed", "0", "--inject-sign-flip")
    assert code == 1
    report = json.loads(out)
    failures = [r for b in report["blocks"] for r in b["results"] if r["status"] == "fail"]
    assert failures and all(r["name"] == "equivariance" for r in failures)
    assert all("operator" in r["counterexample"] for r in failures)


def test_verify_resonant_weights_skip(capsys):
    code, out, _ = run(capsys, "verify", "-n", "1", "--order2", "2", "--lambdas", "0", "--mu", "1")
    assert code == 0
    statuses = {r["name"]: r["status"] for r in json.loads(out)["blocks"][0]["results"]}
    assert statuses["equivariance"] == statuses["roundtrip"] == "resonant"


@pytest.mark.parametrize("order2", [0, 2])
def test_roundtrip_passes(capsys, order2):
    code, out, _ = run(capsys, "roundtrip", "-n", "2", "--order2", str(order2), "--lambdas", "1/3,2",
                       "--mu", "5/7", "--seed", "0")
    assert code == 0
    assert json.loads(out)["ok"]


def test_roundtrip_resonant(capsys):
    code, _, err = run(capsys, "roundtrip", "-n", "2", "--order2", "2", "--lambdas", "0,0", "--mu", "1/2")
    assert code == 2
    assert "resonant" in err


def test_console_entry_point():
    proc = subprocess.run([sys.executable, "-m", "superquant.cli", "gamma-table", "-n", "1", "--order2", "1",
                           "--lambdas", "1", "--mu", "3", "--format", "text"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "delta = 2" in proc.stdout
    assert f"s=(1,) i=(0,) {Fraction(-2, 3)}" in proc.stdout
