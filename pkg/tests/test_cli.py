import json
import subprocess
import sys

import pytest

from medianlab.cli import main
from medianlab.fileio import read_edge_list, write_metric_file, write_metric_json
from medianlab.harness import generate_instance
from medianlab.metric import MetricTable


@pytest.fixture()
def star_file(tmp_path):
    path = str(tmp_path / "star12.txt")
    write_metric_file(path, generate_instance("star-path", 12, 0))
    return path


def run_cli(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def test_solve_json(capsys, star_file):
    code, out = run_cli(capsys, "solve", "--metric", star_file, "--inner", "exact", "--f-of-n", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 12
    assert payload["subset_size"] == 6
    assert payload["queries"] == 15
    assert 1 <= payload["output"] <= 12
    assert payload["checks"] == {"budget_respected": True, "within_bound": True}
    assert payload["ratio"] <= payload["bound"]


def test_solve_pivot_and_sampling(capsys, star_file):
    for inner in ("pivot", "sampling"):
        code, out = run_cli(capsys, "solve", "--metric", star_file, "--inner", inner, "--f-of-n", "9")
        payload = json.loads(out)
        assert code == 0
        assert payload["checks"]["budget_respected"]


def test_solve_deterministic_output(capsys, star_file):
    _, a = run_cli(capsys, "--seed", "7", "solve", "--metric", star_file, "--inner", "sampling", "--f-of-n", "1")
    _, b = run_cli(capsys, "--seed", "7", "solve", "--metric", star_file, "--inner", "sampling", "--f-of-n", "1")
    assert a == b


def test_verify_clean_and_broken(capsys, tmp_path, star_file):
    code, out = run_cli(capsys, "verify", "--metric", star_file)
    assert code == 0
    assert json.loads(out)["valid"]

    t = generate_instance("star-path", 6, 0)
    units = t.units.copy()
    units[0, 5] = units[5, 0] = 50  # far beyond any path through point 0
    broken = str(tmp_path / "broken.json")
    write_metric_json(broken, MetricTable(units))
    code, out = run_cli(capsys, "verify", "--metric", broken)
    payload = json.loads(out)
    assert code == 1
    assert not payload["valid"]
    assert payload["violation_count"] > 0
    kinds = {v["kind"] for v in payload["violations"]}
    assert kinds == {"triangle"}


def test_adversary_json(capsys):
    code, out = run_cli(capsys, "adversary", "--n", "24", "--q", "12", "--d", "4", "--algo", "pivot")
    payload = json.loads(out)
    assert code == 0
    assert payload["rounds"] == 36
    assert all(payload["checks"].values())
    assert payload["ratio"] >= 1.0


def test_adversary_rejects_bad_cap(capsys):
    with pytest.raises(Exception):
        run_cli(capsys, "adversary", "--n", "24", "--q", "12", "--d", "4", "--C", "3")


def test_lowerbound_single_json(capsys):
    code, out = run_cli(capsys, "lowerbound", "--n", "100", "--q", "10", "--d", "4", "--algo", "exact")
    payload = json.loads(out)
    assert code == 0
    assert payload["m"] == 21
    assert all(payload["checks"].values())
    assert payload["ratio"] >= 1.0


def test_lowerbound_sweep_csv(capsys):
    code, out = run_cli(capsys, "--seed", "1", "lowerbound", "--sweep", "128,64", "--d", "4", "--q", "10", "--algo", "exact")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "n,q,ratio,log2_n,f_hat,checks_ok"
    assert len(lines) == 3
    assert lines[1].startswith("64,10,")  # sizes are sorted ascending
    assert lines[2].startswith("128,10,")


def test_expander_json_and_edge_export(capsys, tmp_path):
    edges_out = str(tmp_path / "g.edges")
    code, out = run_cli(
        capsys, "expander", "--n", "16", "--d", "4", "--certify", "exhaustive", "--edges-out", edges_out
    )
    payload = json.loads(out)
    assert code == 0
    assert payload["edges"] == 32
    assert payload["method"] == "exhaustive"
    assert payload["alpha_lower"] > 0
    n, edges = read_edge_list(edges_out)
    assert n == 16
    assert len(edges) == 32


def test_sweep_csv(capsys):
    code, out = run_cli(
        capsys, "sweep", "--sizes", "9,12", "--factors", "4", "--kinds", "grid,table", "--inners", "exact", "--out", "csv"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].startswith("kind,n,f_of_n,inner,seed,")
    assert len(lines) == 5
    assert all(line.endswith("True") for line in lines[1:])


def test_global_flags_accepted_on_either_side(capsys, star_file):
    _, a = run_cli(capsys, "--seed", "3", "solve", "--metric", star_file, "--inner", "exact", "--f-of-n", "1")
    _, b = run_cli(capsys, "solve", "--metric", star_file, "--inner", "exact", "--f-of-n", "1", "--seed", "3")
    assert a == b


def test_console_entry_point(star_file):
    proc = subprocess.run(
        [sys.executable, "-m", "medianlab", "solve", "--metric", star_file, "--inner", "exact", "--f-of-n", "4"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["n"] == 12


def test_extern_protocol_over_pipes():
    proc = subprocess.Popen(
        [sys.executable, "-m", "medianlab", "adversary", "--n", "16", "--q", "4", "--d", "4", "--algo", "extern"],
        stdin=subprocess.PIPE,
        stdout=subprocess.PIPE,
        text=True,
    )
    try:
        answers = []
        for a, b in ((1, 5), (2, 9), (3, 16), (1, 2)):
            proc.stdin.write(f"QUERY {a} {b}\n")
            proc.stdin.flush()
            answers.append(proc.stdout.readline().strip())
        proc.stdin.write("OUTPUT 7\n")
        proc.stdin.flush()
        proc.stdin.close()
        report = json.loads(proc.stdout.read())
    finally:
        proc.wait(timeout=60)
    assert answers == ["ANSWER 1"] * 4  # a fresh arena answers 1 to distinct pairs
    assert report["output"] == 7
    assert all(report["checks"].values())
    assert proc.returncode == 0
