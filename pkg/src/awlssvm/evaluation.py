"""Cross-validation, hyperparameter search and benchmark reports.

Hyperparameters are chosen by a seeded random search, log-uniform over
``gamma``, ``rho`` and an RBF bandwidth expressed as a multiple of the
median pairwise distance of the (standardized, concatenated) training
features. Every trial is logged so a run can be audited and replayed.
"""

from __future__ import annotations

import json
import math
import re
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np

from . import adaptive, baselines
from .adaptive import TrainConfig
from .data import (
    MultiViewDataset,
    stratified_kfold_indices,
    stratified_split,
    standardize_apply,
    standardize_fit,
)
from .errors import ConfigError
from .kernels import KernelSpec, median_pairwise_distance
from .stats import balanced_accuracy

FORMAT_VERSION = "1.0"
SEARCH_METHOD = "log-uniform random search (seeded)"

_AW_PATTERN = re.compile(r"^aw(?:_t(\d+))?$")
BASELINE_METHODS = {"bsv": "BSV", "early": "Early Fusion", "late": "Late Fusion"}


def check_method(method: str) -> str:
    m = _AW_PATTERN.match(method)
    if m is None and method not in BASELINE_METHODS:
        raise ConfigError(
            f"unknown method {method!r}; expected aw, aw_t<T>, bsv, early or late")
    if m is not None and m.group(1) is not None and int(m.group(1)) < 1:
        raise ConfigError(f"iteration count in {method!r} must be >= 1")
    return method


def method_label(method: str, config: TrainConfig) -> str:
    m = _AW_PATTERN.match(method)
    if m is None:
        return BASELINE_METHODS[method]
    T = int(m.group(1)) if m.group(1) else config.iterations
    return f"AW-LSSVM(T={T})"


def fit_method(method: str, train: MultiViewDataset, config: TrainConfig, folds: int = 3, seed: int = 0):
    check_method(method)
    m = _AW_PATTERN.match(method)
    if m is not None:
        if m.group(1):
            config = config.with_(iterations=int(m.group(1)))
        return adaptive.fit(train, config)
    if method == "bsv":
        return baselines.fit_bsv(train, config, folds=folds, seed=seed)
    if method == "early":
        return baselines.fit_early_fusion(train, config)
    return baselines.fit_late_fusion(train, config)


def predict_any(model, views):
    if isinstance(model, adaptive.AwModel):
        return adaptive.predict(model, views)
    return baselines.predict_baseline(model, views)


def kfold_cv(train: MultiViewDataset, config: TrainConfig, method: str = "aw", k: int = 3,
             seed: int = 0) -> float:
    """Mean balanced accuracy over ``k`` stratified folds of ``train``."""
    check_method(method)
    labels = train.require_labels()
    scores = []
    for tr, te in stratified_kfold_indices(labels, k, seed):
        model = fit_method(method, train.subset(tr), config, folds=k, seed=seed)
        pred, _ = predict_any(model, [X[te] for X in train.views])
        scores.append(balanced_accuracy(labels[te], pred))
    return float(np.mean(scores))


# ---------------------------------------------------------------------------
# Random search
# ---------------------------------------------------------------------------

def _check_interval(name: str, rng: Tuple[float, float]) -> Tuple[float, float]:
    lo, hi = float(rng[0]), float(rng[1])
    if not (lo > 0 and hi >= lo and math.isfinite(hi)):
        raise ConfigError(f"{name} must be a positive interval, got {rng}")
    return lo, hi


@dataclass(frozen=True)
class SearchSpace:
    gamma_range: Tuple[float, float] = (1e-2, 1e3)
    rho_range: Tuple[float, float] = (1e-2, 1e3)
    bandwidth_range: Tuple[float, float] = (0.25, 4.0)
    budget: int = 16
    seed: int = 0

    def __post_init__(self):
        for name in ("gamma_range", "rho_range", "bandwidth_range"):
            object.__setattr__(self, name, _check_interval(name, getattr(self, name)))
        if int(self.budget) != self.budget or self.budget < 1:
            raise ConfigError(f"budget must be an integer >= 1, got {self.budget}")

    def sample(self) -> List[Dict[str, float]]:
        """The ``budget`` candidate points, in trial order."""
        rng = np.random.default_rng(self.seed)

        def draw(lo, hi):
            u = rng.uniform()
            if lo == hi:
                return lo
            return float(math.exp(math.log(lo) + u * (math.log(hi) - math.log(lo))))

        return [
            {"gamma": draw(*self.gamma_range),
             "rho": draw(*self.rho_range),
             "bandwidth_multiplier": draw(*self.bandwidth_range)}
            for _ in range(self.budget)
        ]

    def to_dict(self) -> dict:
        d = asdict(self)
        for k in ("gamma_range", "rho_range", "bandwidth_range"):
            d[k] = list(d[k])
        return d


@dataclass
class TuneResult:
    config: TrainConfig
    best_index: int
    trials: List[dict]
    median_distance: float


def reference_distance(train: MultiViewDataset, standardize: bool) -> float:
    """Median pairwise distance of the concatenated (optionally standardized) views."""
    views = train.views
    if standardize:
        views = [standardize_apply(X, standardize_fit(X)) for X in views]
    return median_pairwise_distance(np.hstack(views))


def tune(train: MultiViewDataset, space: SearchSpace, method: str = "aw", k: int = 3,
         base: TrainConfig = None) -> TuneResult:
    """Random search over ``space`` scored by ``kfold_cv``; ties keep the
    earliest trial."""
    check_method(method)
    base = base or TrainConfig()
    med = reference_distance(train, base.standardize)
    trials = []
    best, best_score = 0, -np.inf
    for i, point in enumerate(space.sample()):
        cfg = base.with_(gamma=point["gamma"], rho=point["rho"],
                         kernel=KernelSpec("rbf", point["bandwidth_multiplier"] * med))
        score = kfold_cv(train, cfg, method, k, space.seed)
        trials.append({"index": i, **point, "bandwidth": cfg.kernel.bandwidth, "cv_score": score})
        if score > best_score:
            best, best_score = i, score
    t = trials[best]
    config = base.with_(gamma=t["gamma"], rho=t["rho"], kernel=KernelSpec("rbf", t["bandwidth"]))
    return TuneResult(config=config, best_index=best, trials=trials, median_distance=med)


# ---------------------------------------------------------------------------
# Benchmarking
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitPlan:
    test_fraction: float = 0.2
    seeds: Tuple[int, ...] = (0, 1, 2)

    def __post_init__(self):
        if not 0 < self.test_fraction < 1:
            raise ConfigError(f"test_fraction must lie in (0, 1), got {self.test_fraction}")
        if len(self.seeds) == 0:
            raise ConfigError("at least one split seed is required")
        object.__setattr__(self, "seeds", tuple(int(s) for s in self.seeds))


@dataclass
class BenchmarkReport:
    dataset: str
    method: str
    label: str
    seeds: List[int]
    scores: List[float]
    mean: float
    std: float
    params: List[dict]
    trials: List[List[dict]] = field(default_factory=list)
    search: dict = field(default_factory=dict)
    format_version: str = FORMAT_VERSION

    @classmethod
    def from_scores(cls, dataset, method, label, seeds, scores, params, trials, search):
        scores = [float(s) for s in scores]
        return cls(dataset=dataset, method=method, label=label, seeds=list(seeds), scores=scores,
                   mean=float(np.mean(scores)), std=float(np.std(scores)), params=params,
                   trials=trials, search=search)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "BenchmarkReport":
        return cls(**d)


def benchmark(ds: MultiViewDataset, plan: SplitPlan, methods: Sequence[str], space: SearchSpace,
              k: int = 3, base: TrainConfig = None) -> List[BenchmarkReport]:
    """Split, tune on the training part, refit, and score on the held-out part.

    The search seed for split ``s`` is ``space.seed + s``. Test labels are
    used only for the final score.
    """
    base = base or TrainConfig()
    for m in methods:
        check_method(m)
    splits = [(seed, *stratified_split(ds, plan.test_fraction, seed)) for seed in plan.seeds]
    reports = []
    for method in methods:
        scores, params, trials = [], [], []
        for seed, train, test in splits:
            split_space = SearchSpace(space.gamma_range, space.rho_range, space.bandwidth_range,
                                      space.budget, space.seed + seed)
            result = tune(train, split_space, method, k, base)
            model = fit_method(method, train, result.config, folds=k, seed=split_space.seed)
            pred, _ = predict_any(model, test.views)
            scores.append(balanced_accuracy(test.labels, pred))
            p = result.config.to_dict()
            p["search_seed"] = split_space.seed
            p["median_distance"] = result.median_distance
            if isinstance(model, baselines.BaselineModel) and model.kind == "bsv":
                p["selected_view"] = model.selected_view
            params.append(p)
            trials.append(result.trials)
        search = {"method": SEARCH_METHOD, "folds": k, "test_fraction": plan.test_fraction,
                  **space.to_dict()}
        reports.append(BenchmarkReport.from_scores(ds.name, method, method_label(method, base),
                                                   plan.seeds, scores, params, trials, search))
    return reports


def reports_to_json(reports: Sequence[BenchmarkReport]) -> str:
    doc = {"format_version": FORMAT_VERSION, "reports": [r.to_dict() for r in reports]}
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def reports_from_json(text: str) -> List[BenchmarkReport]:
    doc = json.loads(text)
    return [BenchmarkReport.from_dict(r) for r in doc["reports"]]


def format_cell(mean: float, std: float) -> str:
    """Percent cell such as ``85.44(±4.23)``."""
    return f"{100 * mean:.2f}(±{100 * std:.2f})"


def format_table(reports: Sequence[BenchmarkReport]) -> str:
    """Plain-text table: one row per method, one column per dataset."""
    datasets = list(dict.fromkeys(r.dataset for r in reports))
    methods = list(dict.fromkeys(r.label for r in reports))
    cells = {(r.label, r.dataset): format_cell(r.mean, r.std) for r in reports}
    rows = [["Method", *datasets]]
    for m in methods:
        rows.append([m, *(cells.get((m, d), "n/a") for d in datasets)])
    widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
    lines = ["  ".join(cell.ljust(w) if i == 0 else cell.rjust(w)
                       for i, (cell, w) in enumerate(zip(row, widths))).rstrip()
             for row in rows]
    lines.insert(1, "-" * len(lines[0]))
    return "\n".join(lines) + "\n"
