import json
import subprocess
import sys

import pytest

from semirand.cli import main
from semirand.hypergraph import Hypergraph, serialize
from semirand.patterns import complete, full_star


@pytest.fixture
def files(tmp_path):
    out = {}
    for name, g in {"k6_3": complete(6, 3), "k3": complete(3), "star": full_star(4, 3, 1)}.items():
        p = tmp_path / f"{name}.json"
        p.write_text(serialize(g))
        out[name] = str(p)
    tri = tmp_path / "tri.json"
    tri.write_text(json.dumps({"k": 3, "edges": [{"from": 1, "to": 2}, {"from": 2, "to": 3}, {"from": 3, "to": 1}]}))
    out["tri"] = str(tri)
    host = Hypergraph(6, 2, 1)
    for t, (u, v) in enumerate([(1, 2), (2, 3), (3, 1), (4, 5)], start=1):
        host.add_edge((u,), (v,), t)
    hp = tmp_path / "host.json"
    hp.write_text(serialize(host))
    out["host"] = str(hp)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    out["bad"] = str(bad)
    return out


def exponents(doc):
    return {r["source"]: (r["exponent"]["num"], r["exponent"]["den"]) for r in doc["reports"]}


def test_analyze_k6(files, capsys):
    assert main(["analyze", "--pattern", files["k6_3"], "--r", "2"]) == 0
    doc = json.loads(capsys.readouterr().out)
    ex = exponents(doc)
    assert ex["edge-count-lower"] == (7, 4)
    assert ex["generic-starplus-upper"] == (20, 11)
    assert doc["balanced"] is True
    assert doc["mu"] == {"num": 4, "den": 1}


def test_analyze_full_star(files, capsys):
    assert main(["analyze", "--pattern", files["star"], "--r", "2"]) == 0
    assert exponents(json.loads(capsys.readouterr().out))["starplus"] == (1, 1)


def test_analyze_ordered_pattern(files, capsys):
    assert main(["analyze", "--pattern", files["tri"]]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["weights"] == {"1": 3, "2": 3, "3": 3}


def test_simulate_writes_transcript(files, tmp_path, capsys):
    out = tmp_path / "t.txt"
    assert main(["simulate", "--pattern", files["k3"], "--r", "1", "--strategy", "degeneracy",
                 "--n", "1000", "--t", "400", "--seed", "2", "--out", str(out)]) == 0
    summary = json.loads(capsys.readouterr().out)
    lines = out.read_text().splitlines()
    assert len(lines) == summary["rounds_used"]
    if summary["success"]:
        assert summary["oracle_confirms"] is True


def test_sweep_reproducible_csv(files, tmp_path):
    outs = []
    for i, workers in enumerate(("1", "2")):
        out = tmp_path / f"s{i}.csv"
        assert main(["sweep", "--pattern", files["k3"], "--r", "1", "--strategy", "degeneracy", "--n", "800",
                     "--c", "0.5,4", "--trials", "16", "--seed", "5", "--workers", workers, "--out", str(out)]) == 0
        outs.append(out.read_bytes())
        assert (tmp_path / f"s{i}.csv.manifest.json").exists()
    assert outs[0] == outs[1]


def test_sweep_from_config(files, tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"pattern": files["k3"], "r": 1, "strategy": "degeneracy", "n": [500],
                               "t": [10, 200], "trials": 8, "seed": 1, "workers": 1}))
    assert main(["sweep", "--config", str(cfg), "--format", "json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert [r["t"] for r in doc["records"]] == [10, 200]


def test_verify_single_suite(capsys):
    assert main(["verify", "--suite", "weights"]) == 0
    assert json.loads(capsys.readouterr().out)["passed"] is True


def test_oracle_queries(files, capsys):
    assert main(["oracle", "contains", "--host", files["host"], "--pattern", files["k3"], "--r", "1"]) == 0
    assert json.loads(capsys.readouterr().out) == {"contains": True}
    assert main(["oracle", "hom-set", "--host", files["host"], "--pattern", files["tri"], "--anchor", "1"]) == 0
    assert json.loads(capsys.readouterr().out)["set"] == [1]
    assert main(["oracle", "k-sets", "--host", files["host"], "--k", "3", "--j", "3"]) == 0
    assert json.loads(capsys.readouterr().out)["count"] == 1


@pytest.mark.parametrize("argv", [
    ["nosuch"],
    ["analyze", "--bogus"],
    ["sweep", "--pattern", "x.json"],
    ["simulate", "--pattern", "x.json", "--r", "1"],
    ["verify", "--suite", "nope"],
])
def test_usage_errors_exit_2(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2


def test_malformed_file_exit_2(files):
    assert main(["analyze", "--pattern", files["bad"], "--r", "2"]) == 2
    assert main(["analyze", "--pattern", "/nonexistent.json", "--r", "2"]) == 2


def test_strategy_mismatch_exit_2(files):
    assert main(["sweep", "--pattern", files["k3"], "--r", "1", "--strategy", "k6", "--n", "50", "--t", "5"]) == 2


def test_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "semirand.cli", "analyze", "--help"], capture_output=True, text=True)
    assert proc.returncode == 0 and "--pattern" in proc.stdout
