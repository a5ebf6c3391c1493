"""Command-line interface.

Exit codes: 0 on success, 1 on invalid input or configuration, 2 when the
numerical solver fails. Diagnostics go to standard error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

import numpy as np

from . import evaluation
from .adaptive import TrainConfig
from .data import load_dataset
from .errors import AwLssvmError, ConfigError, SolverError
from .evaluation import SearchSpace, SplitPlan
from .kernels import KernelSpec
from .persistence import load_model, save_model
from .stats import balanced_accuracy, wilcoxon_signed_rank

log = logging.getLogger("awlssvm")

TRAIN_KEYS = {"gamma", "rho", "beta", "iterations", "kernel", "bandwidth", "standardize"}
PLAN_KEYS = {"test_fraction", "seeds", "folds"}
SEARCH_KEYS = {"gamma_range", "rho_range", "bandwidth_range", "budget", "seed"}


@dataclass
class RunConfig:
    train: TrainConfig = field(default_factory=TrainConfig)
    plan: SplitPlan = field(default_factory=SplitPlan)
    search: SearchSpace = field(default_factory=SearchSpace)
    folds: int = 3


def parse_run_config(doc: dict) -> RunConfig:
    """Validate a run-configuration mapping; unknown keys are rejected."""
    if not isinstance(doc, dict):
        raise ConfigError("configuration must be a JSON object")
    unknown = set(doc) - TRAIN_KEYS - PLAN_KEYS - {"search"}
    if unknown:
        raise ConfigError(f"unknown configuration key(s): {', '.join(sorted(unknown))}")
    search = doc.get("search", {})
    if not isinstance(search, dict):
        raise ConfigError("'search' must be an object")
    unknown = set(search) - SEARCH_KEYS
    if unknown:
        raise ConfigError(f"unknown search key(s): {', '.join(sorted(unknown))}")
    try:
        kernel = KernelSpec(doc.get("kernel", "rbf"), float(doc.get("bandwidth", 1.0)))
        train = TrainConfig(
            gamma=float(doc.get("gamma", 1.0)),
            rho=float(doc.get("rho", 1.0)),
            beta=float(doc.get("beta", 0.7)),
            iterations=doc.get("iterations", 2),
            kernel=kernel,
            standardize=bool(doc.get("standardize", True)),
        )
        plan = SplitPlan(float(doc.get("test_fraction", 0.2)), tuple(doc.get("seeds", (0, 1, 2))))
        defaults = SearchSpace()
        space = SearchSpace(
            gamma_range=tuple(search.get("gamma_range", defaults.gamma_range)),
            rho_range=tuple(search.get("rho_range", defaults.rho_range)),
            bandwidth_range=tuple(search.get("bandwidth_range", defaults.bandwidth_range)),
            budget=search.get("budget", defaults.budget),
            seed=int(search.get("seed", defaults.seed)),
        )
        folds = doc.get("folds", 3)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid configuration value: {exc}") from exc
    if int(folds) != folds or folds < 2:
        raise ConfigError(f"folds must be an integer >= 2, got {folds}")
    return RunConfig(train=train, plan=plan, search=space, folds=int(folds))


def load_run_config(path: Optional[str]) -> RunConfig:
    if path is None:
        return RunConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config file {path} is not valid JSON: {exc}") from exc
    return parse_run_config(doc)


def cmd_train(args) -> int:
    cfg = load_run_config(args.config)
    ds = load_dataset(args.data)
    model = evaluation.fit_method(args.method, ds, cfg.train, folds=cfg.folds, seed=cfg.search.seed)
    save_model(model, args.out)
    print(f"trained {evaluation.method_label(args.method, cfg.train)} on {ds.name!r} "
          f"({ds.n_samples} samples, {ds.n_views} views, {ds.num_classes} classes) -> {args.out}")
    return 0


def cmd_predict(args) -> int:
    model = load_model(args.model)
    ds = load_dataset(args.data)
    labels, scores = evaluation.predict_any(model, ds.views)
    with open(args.out, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["sample_index", "predicted_class", *(f"score_{c}" for c in range(scores.shape[1]))])
        for i, (lab, row) in enumerate(zip(labels, scores)):
            w.writerow([i, int(lab), *(repr(float(x)) for x in row)])
    if ds.labels is not None:
        print(f"balanced_accuracy={balanced_accuracy(ds.labels, labels):.6f}")
    print(f"wrote {len(labels)} predictions to {args.out}")
    return 0


def cmd_tune(args) -> int:
    cfg = load_run_config(args.config)
    ds = load_dataset(args.data)
    result = evaluation.tune(ds, cfg.search, args.method, cfg.folds, cfg.train)
    doc = {
        "method": args.method,
        "best_index": result.best_index,
        "best": result.config.to_dict(),
        "median_distance": result.median_distance,
        "search": {"method": evaluation.SEARCH_METHOD, **cfg.search.to_dict()},
        "trials": result.trials,
    }
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
    best = result.trials[result.best_index]
    print(f"best trial {result.best_index}: gamma={best['gamma']:.4g} rho={best['rho']:.4g} "
          f"bandwidth={best['bandwidth']:.4g} cv_balanced_accuracy={best['cv_score']:.4f}")
    return 0


def cmd_benchmark(args) -> int:
    cfg = load_run_config(args.config)
    methods = [m.strip() for m in args.methods.split(",") if m.strip()]
    if not methods:
        raise ConfigError("no methods given")
    for m in methods:
        evaluation.check_method(m)
    reports = []
    for path in args.data:
        ds = load_dataset(path)
        reports.extend(evaluation.benchmark(ds, cfg.plan, methods, cfg.search, cfg.folds, cfg.train))
    Path(args.out).write_text(evaluation.reports_to_json(reports), encoding="utf-8")
    sys.stdout.write(evaluation.format_table(reports))
    return 0


def _report_means(path: str, method: Optional[str]) -> dict:
    try:
        reports = evaluation.reports_from_json(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as exc:
        raise ConfigError(f"report not found: {path}") from exc
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        raise ConfigError(f"malformed report {path}: {exc}") from exc
    if method is not None:
        reports = [r for r in reports if r.method == method]
    if not reports:
        raise ConfigError(f"{path} has no reports for method {method!r}")
    if len({r.method for r in reports}) != 1:
        raise ConfigError(f"{path} holds several methods; select one with --method-a/--method-b")
    means = {}
    for r in reports:
        if r.dataset in means:
            raise ConfigError(f"{path} has duplicate reports for dataset {r.dataset!r}")
        means[r.dataset] = r.mean
    return means


def cmd_compare(args) -> int:
    a = _report_means(args.reports[0], args.method_a)
    b = _report_means(args.reports[1], args.method_b)
    if set(a) != set(b):
        raise ConfigError(
            f"reports cover different datasets: {sorted(set(a) ^ set(b))}")
    names = sorted(a)
    res = wilcoxon_signed_rank([a[d] for d in names], [b[d] for d in names])
    print(f"datasets={len(names)} T={res.statistic:.1f} p={res.pvalue:.6g} ({res.method})")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="awlssvm", description="Adaptive weighted multi-view LS-SVM")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("train", help="train a model and write it as JSON")
    t.add_argument("--data", required=True)
    t.add_argument("--config")
    t.add_argument("--out", required=True)
    t.add_argument("--method", default="aw")
    t.set_defaults(func=cmd_train)

    pr = sub.add_parser("predict", help="predict with a saved model, writing CSV")
    pr.add_argument("--model", required=True)
    pr.add_argument("--data", required=True)
    pr.add_argument("--out", required=True)
    pr.set_defaults(func=cmd_predict)

    tu = sub.add_parser("tune", help="random-search hyperparameters by cross-validation")
    tu.add_argument("--data", required=True)
    tu.add_argument("--config")
    tu.add_argument("--out", required=True)
    tu.add_argument("--method", default="aw")
    tu.set_defaults(func=cmd_tune)

    b = sub.add_parser("benchmark", help="split / tune / test protocol over one or more datasets")
    b.add_argument("--data", required=True, action="append", help="dataset directory (repeatable)")
    b.add_argument("--methods", default="aw,bsv,early,late")
    b.add_argument("--config")
    b.add_argument("--out", required=True)
    b.set_defaults(func=cmd_benchmark)

    c = sub.add_parser("compare", help="Wilcoxon signed-rank test between two methods")
    c.add_argument("--reports", nargs=2, required=True, metavar=("A", "B"))
    c.add_argument("--method-a")
    c.add_argument("--method-b")
    c.set_defaults(func=cmd_compare)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except SolverError as exc:
        print(f"error: solver failure: {exc}", file=sys.stderr)
        return 2
    except (AwLssvmError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
