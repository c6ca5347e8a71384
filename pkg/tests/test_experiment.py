import json
import math
import time

import numpy as np
import pytest

from satdist import cli
from satdist.boolfn import constant, parse_function, serialize_function
from satdist.errors import UnsatisfiableError
from satdist.experiment import SCHEMA, ExperimentConfig, num_trials, run_experiment
from satdist.model import WeightVector
from satdist.sgd import SgdConfig, run_sgd_logloss


@pytest.mark.parametrize("delta, expected", [(0.05, 3), (0.5, 1), (1e-4, 10), (0.9, 1)])
def test_num_trials(delta, expected):
    assert num_trials(delta) == expected


@pytest.mark.parametrize("delta", [0.0, 1.0, -0.1, 2.0])
def test_num_trials_out_of_range(delta):
    with pytest.raises(ValueError):
        num_trials(delta)


@pytest.mark.parametrize(
    "kwargs",
    [dict(epsilon=0), dict(delta=1.0), dict(samples=4), dict(rho=-1.0), dict(surrogate="sin"),
     dict(eps1=-0.1)],
)
def test_config_validation(kwargs):
    with pytest.raises(ValueError):
        ExperimentConfig(None, **kwargs)


def test_constant_true_learns_uniform():
    cfg = ExperimentConfig(None, epsilon=0.2, delta=0.05, samples=500, seed=2)
    report = run_experiment(cfg, f=constant(4))
    best = report.best
    assert best.kl <= 0.2
    assert best.l1 <= math.sqrt(0.4)
    assert report.num_satisfying == 16


def test_report_echoes_budget():
    cfg = ExperimentConfig(None, epsilon=0.1, delta=0.05, samples=20, radius=1.0, rho=1.0)
    report = run_experiment(cfg, f=constant(3))
    assert report.T == 100
    assert report.num_trials == 3
    assert report.total_steps == 300
    assert all(t.steps == 100 for t in report.trials)
    assert report.to_dict()["T"] == 100


def test_selected_trial_is_argmin():
    cfg = ExperimentConfig(None, epsilon=0.3, delta=1e-3, samples=40, seed=9)
    report = run_experiment(cfg, f=parse_function("p cnf 5 2\n1 -2 0\n3 4 5 0\n", "dimacs"))
    risks = [t.validation_risk for t in report.trials]
    assert report.selected == risks.index(min(risks))
    assert report.num_trials == 7


def test_report_pinsker_invariant():
    cfg = ExperimentConfig(None, epsilon=0.5, delta=0.01, samples=100, seed=3)
    report = run_experiment(cfg, f=parse_function("p cnf 6 3\n1 2 0\n-3 4 0\n5 -6 0\n", "dimacs"))
    for t in report.trials:
        assert t.l1 <= math.sqrt(2 * t.kl) + 1e-12
        assert t.excess_kl >= -1e-9


def test_split_sizes():
    report = run_experiment(ExperimentConfig(None, samples=5, epsilon=1.0), f=constant(2))
    assert (report.num_samples_train, report.num_samples_validation) == (4, 1)


def test_workers_do_not_change_result():
    f = parse_function("p cnf 6 2\n1 2 3 0\n-4 5 0\n", "dimacs")
    a = run_experiment(ExperimentConfig(None, epsilon=0.3, delta=0.01, seed=4), f=f)
    b = run_experiment(ExperimentConfig(None, epsilon=0.3, delta=0.01, seed=4, workers=3), f=f)
    assert [t.wbar for t in a.trials] == [t.wbar for t in b.trials]


def test_large_n_metrics_absent():
    cfg = ExperimentConfig(None, epsilon=2.0, delta=0.5, samples=50, seed=1)
    report = run_experiment(cfg, f=parse_function("p cnf 22 1\n1 2 0\n", "dimacs"))
    assert not report.exact_metrics
    best = report.best
    assert best.kl is None and best.l1 is None and best.confusion is None
    assert report.num_satisfying is None
    assert math.isfinite(best.b)


def test_unsatisfiable():
    with pytest.raises(UnsatisfiableError):
        run_experiment(ExperimentConfig(None), f=parse_function("p cnf 2 2\n1 0\n-1 0\n", "dimacs"))


def test_per_step_cost_scales_linearly():
    """Per-step SGD work is Theta(n): n=64 costs 4x..16x the n=8 step time."""

    def per_step(n, T=400_000):
        X = np.where(np.random.default_rng(0).random((64, n)) < 0.5, 1, -1)
        cfg = SgdConfig(1.0, 2 * math.sqrt(n), 0.1, T, 1e-3)
        run_sgd_logloss(X, SgdConfig(1.0, 1.0, 0.1, 10, 1e-3))  # compile
        best = math.inf
        for _ in range(5):
            t = time.perf_counter()
            run_sgd_logloss(X, cfg, rng=np.random.default_rng(0))
            best = min(best, time.perf_counter() - t)
        return best / T

    ratio = per_step(64) / per_step(8)
    assert 4 <= ratio <= 16, ratio


# --- command line ----------------------------------------------------------------


@pytest.fixture
def cnf_file(tmp_path):
    path = tmp_path / "f.cnf"
    path.write_text("c test\np cnf 4 2\n1 2 0\n-3 4 0\n")
    return path


def test_cli_learn_writes_report(cnf_file, tmp_path, capsys):
    out = tmp_path / "run"
    rc = cli.main(["learn", "--function", str(cnf_file), "--format", "dimacs", "--epsilon",
                   "0.3", "--delta", "0.05", "--samples", "100", "--seed", "1", "--out", str(out)])
    assert rc == 0
    report = json.loads((out / "report.json").read_text())
    assert report["schema"] == SCHEMA
    assert report["num_trials"] == 3 and len(report["trials"]) == 3
    assert report["total_steps"] == 3 * report["T"]
    assert set(report["timing"]) == {"sample", "sgd", "metrics", "total"}
    assert (out / "trace_2.csv").read_text().startswith("t,risk_estimate,iterate_norm\n")
    selected = report["trials"][report["selected_trial"]]
    assert WeightVector.load(out / "wbar.txt").w.tolist() == selected["wbar"]
    assert "trials=3" in capsys.readouterr().out


def test_cli_learn_deterministic(cnf_file, tmp_path):
    out = tmp_path / "run"
    argv = ["learn", "--function", str(cnf_file), "--epsilon", "0.3", "--seed", "7",
            "--surrogate", "phuber", "--out", str(out)]

    def without_timing():
        assert cli.main(argv) == 0
        report = json.loads((out / "report.json").read_text())
        report.pop("timing")
        return json.dumps(report, indent=2).encode(), (out / "trace_0.csv").read_bytes()

    assert without_timing() == without_timing()


@pytest.mark.parametrize("fmt, text", [("tt-hex", "8"), ("ltf", "1 1 ; 2\n")])
def test_cli_learn_other_formats(fmt, text, tmp_path):
    path = tmp_path / "f.txt"
    path.write_text(text)
    rc = cli.main(["learn", "--function", str(path), "--format", fmt, "--epsilon", "0.5",
                   "--samples", "10", "--out", str(tmp_path / "o")])
    assert rc == 0
    report = json.loads((tmp_path / "o" / "report.json").read_text())
    assert report["num_satisfying"] == 1


def test_cli_exit_codes(tmp_path, capsys):
    unsat = tmp_path / "u.cnf"
    unsat.write_text("p cnf 2 2\n1 0\n-1 0\n")
    bad = tmp_path / "b.cnf"
    bad.write_text("p cnf 2 1\n5 0\n")
    out = str(tmp_path / "o")
    assert cli.main(["learn", "--function", str(unsat), "--out", out]) == cli.EXIT_UNSAT
    assert cli.main(["learn", "--function", str(bad), "--out", out]) == cli.EXIT_CONFIG
    assert cli.main(["learn", "--function", str(tmp_path / "missing"), "--out", out]) == 2
    assert cli.main(["learn", "--function", str(unsat), "--samples", "3", "--out", out]) == 2
    with pytest.raises(SystemExit) as info:
        cli.main(["learn", "--function", str(unsat), "--format", "xml"])
    assert info.value.code == 2


def test_cli_numeric_failure_exit_code(monkeypatch, cnf_file, tmp_path):
    from satdist.errors import NumericError

    def boom(*args, **kwargs):
        raise NumericError("nan")

    monkeypatch.setattr(cli, "run_experiment", boom)
    assert cli.main(["learn", "--function", str(cnf_file), "--out", str(tmp_path)]) == 4


def test_cli_enumerate(cnf_file, capsys):
    assert cli.main(["enumerate", "--function", str(cnf_file)]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "index,bits"
    # (x1 or x2) and (not x3 or x4): 3 choices for (x1,x2) times 3 for (x3,x4)
    assert len(lines) == 10
    assert lines[1] == "4,-+--"


def test_cli_eval(tmp_path, capsys):
    WeightVector(np.zeros(2)).save(tmp_path / "a.txt")
    WeightVector(np.array([1.0, 0.0])).save(tmp_path / "b.txt")
    assert cli.main(["eval", "--weights", str(tmp_path / "a.txt"), str(tmp_path / "b.txt")]) == 0
    result = json.loads(capsys.readouterr().out)
    # KL(uniform || P_(1,0)) = log cosh 1 for the first bit
    assert result["kl"] == pytest.approx(math.log(math.cosh(1.0)), abs=1e-12)
    assert result["l1"] <= result["pinsker"] + 1e-12


def test_cli_eval_mismatch(tmp_path):
    WeightVector(np.zeros(2)).save(tmp_path / "a.txt")
    WeightVector(np.zeros(3)).save(tmp_path / "b.txt")
    assert cli.main(["eval", "--weights", str(tmp_path / "a.txt"), str(tmp_path / "b.txt")]) == 2


@pytest.mark.parametrize("kind, fmt", [("cnf", "dimacs-cnf"), ("ltf", "ltf-text")])
def test_cli_gen(kind, fmt, tmp_path, capsys):
    argv = ["gen", kind, "--n", "6", "--seed", "3"]
    assert cli.main(argv) == 0
    first = capsys.readouterr().out
    assert cli.main(argv) == 0
    assert capsys.readouterr().out == first
    f = parse_function(first, fmt)
    assert f.n == 6
    assert serialize_function(f, fmt) == first
    assert cli.main(argv + ["--out", str(tmp_path / "g.txt")]) == 0
    assert (tmp_path / "g.txt").read_text() == first


def test_module_entry_point(cnf_file):
    import subprocess
    import sys

    proc = subprocess.run([sys.executable, "-m", "satdist", "enumerate", "--function",
                           str(cnf_file)], capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stdout.startswith("index,bits")
