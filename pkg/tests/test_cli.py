import json
import os

import pytest

from quadrep.cli import run_subcommand
from quadrep.forms import scaled_identity, validate


def run(capsys, *argv):
    code = run_subcommand(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_count_prints_r(capsys, form_file):
    path = form_file(scaled_identity(4))
    code, out, _ = run(capsys, "count", "--form", path, "--n", "25")
    assert code == 0 and out.strip() == "248"  # 8 * sigma(25) = 8 * 31


def test_validate_json(capsys, form_file):
    path = form_file(validate([[2, 1, 0, 0], [1, 2, 1, 0], [0, 1, 2, 1], [0, 0, 1, 2]]))
    code, out, _ = run(capsys, "validate", "--form", path, "--format", "json")
    assert code == 0
    assert json.loads(out) == {"dim": 4, "discriminant": 5, "level": 5, "primitive": True}


def test_pairs_full_table(capsys):
    code, out, _ = run(capsys, "pairs", "--d", "5", "--n", "4")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "t,A"
    table = dict(tuple(map(int, l.split(","))) for l in lines[1:])
    assert set(table) == set(range(-4, 5))
    assert table[4] == 0 and table[-4] == 90 and sum(table.values()) == 90 * 89


def test_caps_and_ortho(capsys):
    code, out, _ = run(capsys, "caps", "--d", "5", "--n", "1", "--Y2", "4", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["mean"] == "9" and obj["probability_above"] == "1"
    code, out, _ = run(capsys, "ortho", "--d", "5", "--n", "4", "--t", "3")
    assert code == 0 and out.splitlines()[1] == "5,4,3,640"
    code, out, _ = run(capsys, "ortho", "--d", "5", "--n", "1", "--v", "1,1,1,1,0", "--format", "json")
    assert code == 0 and json.loads(out)["disc"] == 4


def test_split_rho_density_minima(capsys, form_file):
    path = form_file(scaled_identity(4))
    code, out, _ = run(capsys, "split", "--form", path, "--n", "1", "--format", "json")
    obj = json.loads(out)
    assert code == 0 and obj["r"] == 8 and float(obj["tau_lo"]) <= 0 <= float(obj["tau_hi"])
    code, out, _ = run(capsys, "rho", "--form", path, "--n", "3", "--cutoff", "100")
    assert code == 0 and out.startswith("n,rho_lo,rho_hi")
    code, out, _ = run(capsys, "density", "--form", path, "--n", "3", "--cutoff", "7")
    assert code == 0 and "3,32/27,32/27" in out
    code, out, _ = run(capsys, "minima", "--form", path)
    assert code == 0 and out.splitlines()[1] == "1,1,1 0 0 0"


def test_usage_errors(capsys, form_file, tmp_path):
    path = form_file(scaled_identity(4))
    code, _, err = run(capsys, "count", "--form", path, "--n", "5", "--bogus")
    assert code == 2 and "--bogus" in err
    code, _, err = run(capsys, "count", "--n", "5")
    assert code == 2 and "--form" in err
    code, _, err = run(capsys, "count", "--form", str(tmp_path / "missing.json"), "--n", "5")
    assert code == 2 and "--form" in err
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"gram": [[1, 0], [0, 2]]}))
    code, _, err = run(capsys, "validate", "--form", str(bad))
    assert code == 2 and "odd" in err
    code, _, err = run(capsys, "count", "--form", path, "--n", "5", "--threads", "0")
    assert code == 2 and "--threads" in err
    code, _, err = run(capsys, "ortho", "--d", "5", "--n", "4", "--t", "9")
    assert code == 2 and "--t" in err
    code, _, _ = run(capsys, "nosuchcommand")
    assert code == 2


def test_computational_error_exit_1(capsys, form_file):
    path = form_file(scaled_identity(4))
    code, _, err = run(capsys, "rho", "--form", path, "--n", "53", "--cutoff", "50")
    assert code == 1 and "CutoffTooSmall" in err
    code, _, err = run(capsys, "count", "--form", path, "--n", "400", "--budget", "10")
    assert code == 1 and "BudgetExceeded" in err


def test_threads_env_fallback(capsys, form_file, monkeypatch):
    path = form_file(scaled_identity(5))
    monkeypatch.setenv("QUADREP_THREADS", "3")
    code, out, _ = run(capsys, "count", "--form", path, "--n", "30")
    assert code == 0 and int(out) > 0
    monkeypatch.setenv("QUADREP_THREADS", "x")
    code, _, err = run(capsys, "count", "--form", path, "--n", "30")
    assert code == 2 and "QUADREP_THREADS" in err


def test_generate_family(capsys, tmp_path):
    out_dir = tmp_path / "fam"
    code, out, _ = run(capsys, "generate-family", "--seed", "1", "--count", "3", "--k", "4", "--out", str(out_dir))
    obj = json.loads(out)
    assert code == 0 and [f["id"] for f in obj["forms"]] == ["s1-000-k4", "s1-001-k4", "s1-002-k4"]
    assert sorted(os.listdir(out_dir)) == ["family.json", "s1-000-k4.json", "s1-001-k4.json", "s1-002-k4.json"]
    # a written form file feeds straight back into the other subcommands
    code, _, _ = run(capsys, "validate", "--form", str(out_dir / "s1-000-k4.json"))
    assert code == 0


def test_verify_all_surfaces_cutoff_error(capsys, tmp_path):
    code, out, _ = run(capsys, "verify-all", "--profile", "full", "--only", "4", "--cutoff", "50",
                       "--skip-determinism", "--out", str(tmp_path / "v"))
    assert code == 1 and "CutoffTooSmall" in out


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_verify_all_threads_byte_identical(capsys, tmp_path, fmt):
    trees = []
    for threads in ("1", "8"):
        out = tmp_path / f"t{threads}"
        code, _, _ = run(capsys, "verify-all", "--only", "1,5,10", "--skip-determinism",
                         "--threads", threads, "--format", fmt, "--out", str(out))
        assert code == 0
        trees.append({p: (out / p).read_bytes() for p in sorted(os.listdir(out))})
    assert trees[0] == trees[1]
    assert "summary.json" in trees[0]
