"""Command line behavior: outputs, exit codes, cache, determinism."""

import json

import pytest

from metadiam.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_weight_alpha(capsys, tmp_path):
    code, out, _ = run(capsys, "weight", "--n", "13", "--k", "2", "--alpha",
                       "--cache", str(tmp_path / "w.jsonl"))
    assert code == 0
    obj = json.loads(out)
    assert obj["schema_version"] == 1
    assert (obj["n"], obj["k"], obj["alpha"], obj["mode"]) == (13, 2, 12, "alpha")
    assert obj["weight"] == 3
    assert sum(obj["witness"]) == 3


def test_weight_seq_and_level(capsys, tmp_path):
    cache = str(tmp_path / "w.jsonl")
    code, out, _ = run(capsys, "weight", "--n", "30", "--k", "7", "--seq", "1,0",
                       "--cache", cache)
    assert code == 0 and json.loads(out)["weight"] == 5
    code, out, _ = run(capsys, "weight", "--n", "13", "--k", "2", "--level", "3",
                       "--cache", cache)
    obj = json.loads(out)
    assert code == 0 and obj["weight"] == 3 and obj["sequence"] == [2, 1, 0]


def test_weight_trivial_order_one(capsys, tmp_path):
    code, out, _ = run(capsys, "weight", "--n", "7", "--k", "1", "--alpha",
                       "--cache", str(tmp_path / "w.jsonl"))
    assert code == 0 and json.loads(out)["weight"] == 3


def test_weight_cache_written_and_reused(capsys, tmp_path, monkeypatch):
    cache = tmp_path / "records.jsonl"
    monkeypatch.setenv("METACYCLIC_CACHE", str(cache))
    # env default applies when the parser is rebuilt
    code, out1, _ = run(capsys, "weight", "--n", "13", "--k", "2", "--alpha",
                        "--cache", str(cache))
    assert code == 0 and cache.exists()
    lines = cache.read_text().strip().splitlines()
    assert len(lines) == 1
    rec = json.loads(lines[0])
    assert rec["sequence"] == "alpha" and rec["weight"] == 3
    # second run hits the cache and does not append
    code, out2, _ = run(capsys, "weight", "--n", "13", "--k", "2", "--alpha",
                        "--cache", str(cache))
    assert len(cache.read_text().strip().splitlines()) == 1
    a, b = json.loads(out1), json.loads(out2)
    a.pop("elapsed"), b.pop("elapsed")
    assert a == b


def test_weight_no_cache_deterministic(capsys, tmp_path):
    cache = tmp_path / "none.jsonl"
    outs = []
    for _ in range(2):
        code, out, _ = run(capsys, "weight", "--n", "17", "--k", "3", "--alpha",
                           "--no-cache", "--cache", str(cache))
        assert code == 0
        obj = json.loads(out)
        obj.pop("elapsed")
        outs.append(json.dumps(obj, sort_keys=True))
    assert outs[0] == outs[1]
    assert not cache.exists()


def test_weight_usage_errors(capsys, tmp_path):
    code, _, err = run(capsys, "weight", "--n", "10", "--k", "4", "--alpha",
                       "--cache", str(tmp_path / "w.jsonl"))
    assert code == 1 and "not a unit" in err
    code, _, _ = run(capsys, "weight", "--n", "10", "--k", "3")  # missing mode
    assert code == 1


def test_diameter(capsys, tmp_path):
    code, out, _ = run(capsys, "diameter", "--m", "60", "--n", "61", "--k", "2")
    assert code == 0 and json.loads(out)["diameter"] == 31
    code, out, _ = run(capsys, "diameter", "--m", "28", "--n", "29", "--k", "2")
    assert code == 0 and json.loads(out)["diameter"] == 15
    code, out, _ = run(capsys, "diameter", "--m", "4", "--n", "5", "--k", "1")
    assert code == 0 and json.loads(out)["diameter"] == 4


def test_diameter_norm_export(capsys, tmp_path):
    path = tmp_path / "norms.csv"
    code, out, _ = run(capsys, "diameter", "--m", "6", "--n", "7", "--k", "3",
                       "--norms", str(path))
    assert code == 0
    text = path.read_text()
    assert text.startswith("a,b,norm\n")
    assert text.rstrip().endswith("# diameter=4")
    from metadiam.metacyclic import read_norm_csv

    with open(path, encoding="utf-8") as fh:
        assert read_norm_csv(fh).diameter == 4


def test_diameter_budget_exit(capsys):
    code, _, err = run(capsys, "diameter", "--m", "2000", "--n", "2000", "--k", "1",
                       "--max-states", "1000")
    assert code == 3 and "budget" in err


@pytest.mark.parametrize("which,rows", [("primes-1mod4", 7), ("primes-3mod4", 8)])
def test_table_check(capsys, which, rows):
    code, out, _ = run(capsys, "table", "--which", which, "--check")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "m,n,k,wt,lambda,diam,bound"
    assert len(lines) == rows + 1


def test_table_omega_example(capsys):
    code, out, _ = run(capsys, "table", "--which", "omega-example", "--check")
    assert code == 0
    assert out.splitlines()[0] == "seq,lambda1,lambda2,wt"


def test_table_output_file_and_jobs(capsys, tmp_path):
    path = tmp_path / "t.csv"
    code, _, _ = run(capsys, "table", "--which", "primes-3mod4", "--check",
                     "-o", str(path), "--jobs", "2")
    assert code == 0
    from metadiam.tables import parse_split_table_csv

    rows = parse_split_table_csv(path.read_text())
    assert [r.diameter for r in rows] == [4, 6, 10, 12, 16, 22, 24, 30]


def test_verify_props(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "props", "--max-n", "10")
    assert code == 0 and "props:" in out and "ok" in out


def test_verify_reductions(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "reductions", "--max-n", "8",
                       "--max-m", "8", "--sum-trials", "500")
    assert code == 0 and "reductions:" in out


def test_verify_bounds_flags_conjecture(capsys):
    # n = 8 contains the smallest conjecture counterexample; flagged, exit 0
    code, out, _ = run(capsys, "verify", "--suite", "bounds", "--max-n", "8",
                       "--max-m", "8")
    assert code == 0
    assert "conjecture counterexample" in out
    assert "(m=2, n=8, k=3)" in out


def test_verify_jobs_matches_serial(capsys):
    code1, out1, _ = run(capsys, "verify", "--suite", "props", "--max-n", "9")
    code2, out2, _ = run(capsys, "verify", "--suite", "props", "--max-n", "9",
                         "--jobs", "2")
    assert code1 == code2 == 0
    # same checks and outcome regardless of sharding (timing aside)
    assert out1.split("checks")[0].split(":")[1].strip() == \
        out2.split("checks")[0].split(":")[1].strip()


def test_config_file_defaults(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"max_n": 6, "sum_trials": 10, "max_m": 6}))
    code, out, _ = run(capsys, "verify", "--suite", "reductions", "--config", str(cfg))
    assert code == 0
    code, _, err = run(capsys, "verify", "--suite", "props", "--config",
                       str(tmp_path / "missing.json"))
    assert code == 1 and "config" in err


def test_version_flag(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and "metadiam" in out
