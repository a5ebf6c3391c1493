import csv
import json

import pytest

from awlssvm.cli import main, parse_run_config
from awlssvm.data import make_complementary_views, save_dataset
from awlssvm.errors import ConfigError
from awlssvm.evaluation import BenchmarkReport, reports_to_json


@pytest.fixture
def data_dir(tmp_path):
    ds = make_complementary_views(12, 0.3, seed=0, name="synthetic")
    return save_dataset(ds, tmp_path / "data")


@pytest.fixture
def config_file(tmp_path):
    path = tmp_path / "config.json"
    path.write_text(json.dumps({
        "gamma": 1.0, "rho": 5.0, "iterations": 3, "seeds": [0, 1],
        "search": {"budget": 2, "seed": 0},
    }))
    return path


def test_defaults():
    cfg = parse_run_config({})
    assert cfg.train.iterations == 2 and cfg.train.beta == 0.7
    assert cfg.plan.test_fraction == 0.2 and cfg.plan.seeds == (0, 1, 2)
    assert cfg.folds == 3


@pytest.mark.parametrize("doc", [{"bogus": 1}, {"search": {"budgett": 3}}, {"beta": 1.5},
                                 {"folds": 1}, {"kernel": "poly"}, {"seeds": []}])
def test_config_rejected(doc):
    with pytest.raises(ConfigError):
        parse_run_config(doc)


def test_train_predict_roundtrip(data_dir, config_file, tmp_path, capsys):
    model = tmp_path / "model.json"
    assert main(["train", "--data", str(data_dir), "--config", str(config_file), "--out", str(model)]) == 0
    assert model.is_file()
    out = tmp_path / "pred.csv"
    assert main(["predict", "--model", str(model), "--data", str(data_dir), "--out", str(out)]) == 0
    assert "balanced_accuracy=1.000000" in capsys.readouterr().out
    rows = list(csv.reader(out.open()))
    assert rows[0] == ["sample_index", "predicted_class", "score_0", "score_1", "score_2"]
    assert len(rows) == 1 + 36


def test_train_missing_view_file(data_dir, tmp_path, capsys):
    (data_dir / "view1.csv").unlink()
    code = main(["train", "--data", str(data_dir), "--out", str(tmp_path / "m.json")])
    assert code == 1
    assert "view1.csv" in capsys.readouterr().err


def test_train_bad_beta(data_dir, tmp_path, capsys):
    cfg = tmp_path / "bad.json"
    cfg.write_text(json.dumps({"beta": 1.5}))
    code = main(["train", "--data", str(data_dir), "--config", str(cfg), "--out", str(tmp_path / "m.json")])
    assert code == 1
    assert "beta" in capsys.readouterr().err


def test_solver_failure_exit_code(data_dir, tmp_path, monkeypatch):
    from awlssvm.errors import SolverError

    def boom(p):
        raise SolverError("forced")
    monkeypatch.setattr("awlssvm.adaptive.solve_dual", boom)
    assert main(["train", "--data", str(data_dir), "--out", str(tmp_path / "m.json")]) == 2


def test_predict_view_mismatch(data_dir, tmp_path):
    model = tmp_path / "model.json"
    assert main(["train", "--data", str(data_dir), "--out", str(model)]) == 0
    ds = make_complementary_views(4, 0.3, seed=1)
    other = save_dataset(ds.select_views([0]), tmp_path / "one_view")
    assert main(["predict", "--model", str(model), "--data", str(other), "--out", str(tmp_path / "p.csv")]) == 1


def test_tune_command(data_dir, config_file, tmp_path):
    out = tmp_path / "tune.json"
    assert main(["tune", "--data", str(data_dir), "--config", str(config_file), "--out", str(out)]) == 0
    doc = json.loads(out.read_text())
    assert len(doc["trials"]) == 2 and doc["best"]["iterations"] == 3


def test_benchmark_command(data_dir, config_file, tmp_path, capsys):
    out1, out2 = tmp_path / "r1.json", tmp_path / "r2.json"
    args = ["benchmark", "--data", str(data_dir), "--methods", "aw,bsv,early,late",
            "--config", str(config_file)]
    assert main([*args, "--out", str(out1)]) == 0
    table = capsys.readouterr().out
    assert main([*args, "--out", str(out2)]) == 0
    assert out1.read_bytes() == out2.read_bytes()
    doc = json.loads(out1.read_text())
    assert [r["method"] for r in doc["reports"]] == ["aw", "bsv", "early", "late"]
    assert "(±" in table and "synthetic" in table


def test_benchmark_unknown_method(data_dir, tmp_path):
    assert main(["benchmark", "--data", str(data_dir), "--methods", "aw,easymkl",
                 "--out", str(tmp_path / "r.json")]) == 1


def write_reports(path, method, means):
    reports = [BenchmarkReport.from_scores(name, method, method, [0], [m], [{}], [], {})
               for name, m in means.items()]
    path.write_text(reports_to_json(reports))
    return path


NINE = [f"ds{i}" for i in range(9)]


def test_compare_uniformly_better(tmp_path, capsys):
    a = write_reports(tmp_path / "a.json", "aw", {d: 0.8 + 0.01 * i for i, d in enumerate(NINE)})
    b = write_reports(tmp_path / "b.json", "bsv", {d: 0.7 for d in NINE})
    assert main(["compare", "--reports", str(a), str(b)]) == 0
    out = capsys.readouterr().out
    assert "T=0.0" in out and "p=0.00390625" in out


def test_compare_identical(tmp_path, capsys):
    a = write_reports(tmp_path / "a.json", "aw", {d: 0.8 for d in NINE})
    assert main(["compare", "--reports", str(a), str(a)]) == 0
    out = capsys.readouterr().out
    assert "T=0.0" in out and "p=1" in out


def test_compare_mismatched_datasets(tmp_path):
    a = write_reports(tmp_path / "a.json", "aw", {d: 0.8 for d in NINE})
    b = write_reports(tmp_path / "b.json", "bsv", {d: 0.7 for d in NINE[:8]})
    assert main(["compare", "--reports", str(a), str(b)]) == 1


def test_compare_method_selection(tmp_path, capsys):
    reports = []
    for d in NINE:
        reports.append(BenchmarkReport.from_scores(d, "aw", "aw", [0], [0.9], [{}], [], {}))
        reports.append(BenchmarkReport.from_scores(d, "late", "late", [0], [0.5], [{}], [], {}))
    path = tmp_path / "both.json"
    path.write_text(reports_to_json(reports))
    assert main(["compare", "--reports", str(path), str(path)]) == 1
    assert main(["compare", "--reports", str(path), str(path),
                 "--method-a", "aw", "--method-b", "late"]) == 0
    assert "p=0.00390625" in capsys.readouterr().out


def test_module_entry_point(data_dir, tmp_path):
    import subprocess
    import sys

    out = tmp_path / "m.json"
    proc = subprocess.run([sys.executable, "-m", "awlssvm", "train", "--data", str(data_dir),
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert out.is_file()
