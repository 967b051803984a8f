"""CLI smoke tests: subcommands, file outputs, exit codes, config files."""

import json
import os
import subprocess

import numpy as np
import pytest

CLI = os.environ.get("WSNIDS_CLI")
pytestmark = pytest.mark.skipif(not CLI, reason="WSNIDS_CLI not set")


def run_cli(*args, expect=0):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    assert proc.returncode == expect, proc.stdout + proc.stderr
    return proc


@pytest.fixture(scope="module")
def toy_csv(tmp_path_factory):
    rng = np.random.default_rng(5)
    path = tmp_path_factory.mktemp("data") / "toy.csv"
    lines = ["f0,f1,f2,Attack type"]
    for c, (name, n) in enumerate([("Normal", 150), ("Grayhole", 40), ("Blackhole", 25)]):
        for _ in range(n):
            vals = rng.normal(c * 4.0, 1.0, 3)
            lines.append(",".join(f"{v:.5f}" for v in vals) + f",{name}")
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def test_inspect(toy_csv):
    out = run_cli("inspect", "--data", toy_csv).stdout
    assert "rows: 215" in out
    assert "Grayhole: 40" in out


def test_balance(toy_csv, tmp_path):
    out_dir = tmp_path / "bal"
    run_cli("balance", "--data", toy_csv, "--task", "multiclass", "--seed", "3",
            "--out", str(out_dir))
    report = json.loads((out_dir / "resample_report.json").read_text())
    csv_rows = (out_dir / "balanced.csv").read_text().strip().splitlines()
    assert len(csv_rows) - 1 == report["after"]["total"]


def test_run_and_evaluate(toy_csv, tmp_path):
    out_dir = tmp_path / "run"
    out = run_cli(
        "run", "--data", toy_csv, "--task", "multiclass", "--balance", "smotetomek",
        "--models", "dt,knn", "--folds", "3", "--seed", "42", "--out", str(out_dir),
    ).stdout
    assert "fold-mean metrics" in out
    report = json.loads((out_dir / "report.json").read_text())
    assert report["config"]["models"] == ["dt", "knn"]
    assert set(report["fold_means"]) == {"dt", "knn"}
    for name in ["roc_points.csv", "confusion_cells.csv", "metrics_per_fold.csv",
                 "metrics_summary.csv"]:
        assert (out_dir / name).exists()

    truth = tmp_path / "truth.txt"
    pred = tmp_path / "pred.txt"
    truth.write_text("0\n1\n1\n0\n")
    pred.write_text("0\n1\n0\n0\n")
    eval_dir = tmp_path / "eval"
    out = run_cli("evaluate", "--truth", str(truth), "--pred", str(pred),
                  "--out", str(eval_dir)).stdout
    assert "accuracy=75" in out
    metrics = json.loads((eval_dir / "metrics_report.json").read_text())
    assert metrics["metrics"]["accuracy"] == 75.0


def test_evaluate_paper_confusion(tmp_path):
    cm = tmp_path / "cm.txt"
    cm.write_text("33898 77\n74 33873\n")
    out = run_cli("evaluate", "--confusion", str(cm), "--out", str(tmp_path)).stdout
    assert "accuracy=99.7777" in out


def test_evaluate_multiclass_scores(tmp_path):
    truth = tmp_path / "truth.txt"
    scores = tmp_path / "scores.txt"
    truth.write_text("0\n1\n2\n1\n0\n2\n")
    rows = ["0.8 0.1 0.1", "0.1 0.8 0.1", "0.2 0.2 0.6",
            "0.3 0.5 0.2", "0.6 0.3 0.1", "0.1 0.2 0.7"]
    scores.write_text("\n".join(rows) + "\n")
    out_dir = tmp_path / "mc"
    out = run_cli("evaluate", "--truth", str(truth), "--scores", str(scores),
                  "--out", str(out_dir)).stdout
    assert "accuracy=100" in out
    roc = (out_dir / "roc.csv").read_text().splitlines()
    assert roc[0] == "class,threshold,fpr,tpr"
    assert {line.split(",")[0] for line in roc[1:]} == {"0", "1", "2"}
    cells = (out_dir / "confusion_cells.csv").read_text().splitlines()
    assert len(cells) == 1 + 9


def test_config_file_with_flag_precedence(toy_csv, tmp_path):
    config = tmp_path / "exp.ini"
    config.write_text(f"data={toy_csv}\ntask=multiclass\nmodels=dt\nfolds=5\nseed=1\n"
                      f"out={tmp_path / 'cfg_run'}\n")
    out = run_cli("run", "--config", str(config), "--folds", "3").stdout
    report = json.loads((tmp_path / "cfg_run" / "report.json").read_text())
    assert report["config"]["folds"] == 3  # flag beats file
    assert report["config"]["seed"] == 1   # file value survives


def test_exit_codes(toy_csv, tmp_path):
    run_cli("run", "--data", "missing.csv", "--models", "dt", "--out", str(tmp_path), expect=3)
    run_cli("run", "--data", toy_csv, "--definitely-not-a-flag", expect=2)
    run_cli("evaluate", "--out", str(tmp_path), expect=2)  # missing inputs
