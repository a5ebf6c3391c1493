"""Reference multi-view baselines built from plain LS-SVMs.

* best single view (``bsv``): per-view LS-SVM, view picked by training-split CV
* early fusion: one LS-SVM on the concatenated features
* late fusion: per-view LS-SVMs combined by majority vote
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np

from . import adaptive
from .adaptive import AwModel, TrainConfig
from .data import MultiViewDataset, stratified_kfold_indices
from .errors import ConfigError, InputShapeError
from .stats import balanced_accuracy

BASELINE_KINDS = ("bsv", "early_fusion", "late_fusion")


def fit_lssvm(train: MultiViewDataset, config: TrainConfig) -> AwModel:
    """Unweighted one-vs-all LS-SVM per view (a single AW-LSSVM round)."""
    return adaptive.fit(train, config.with_(iterations=1))


@dataclass
class BaselineModel:
    kind: str
    models: List[AwModel]
    n_views: int
    selected_view: Optional[int] = None
    cv_scores: Optional[List[float]] = None

    def __post_init__(self):
        if self.kind not in BASELINE_KINDS:
            raise ConfigError(f"unknown baseline kind {self.kind!r}")

    @property
    def num_classes(self) -> int:
        return self.models[0].num_classes

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "n_views": self.n_views,
            "selected_view": self.selected_view,
            "cv_scores": self.cv_scores,
            "models": [m.to_dict() for m in self.models],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "BaselineModel":
        return cls(kind=d["kind"], n_views=int(d["n_views"]), selected_view=d["selected_view"],
                   cv_scores=d["cv_scores"], models=[AwModel.from_dict(m) for m in d["models"]])


def _views_of(views) -> List[np.ndarray]:
    if isinstance(views, MultiViewDataset):
        return views.views
    return [np.asarray(X, dtype=float) for X in views]


def cv_view_scores(train: MultiViewDataset, config: TrainConfig, folds: int = 3,
                   seed: int = 0) -> List[float]:
    """Cross-validated balanced accuracy of a single-view LS-SVM on each view."""
    splits = stratified_kfold_indices(train.require_labels(), folds, seed)
    scores = []
    for v in range(train.n_views):
        single = train.select_views([v])
        fold_scores = []
        for tr, te in splits:
            model = fit_lssvm(single.subset(tr), config)
            pred, _ = adaptive.predict(model, [single.views[0][te]])
            fold_scores.append(balanced_accuracy(single.labels[te], pred))
        scores.append(float(np.mean(fold_scores)))
    return scores


def fit_bsv(train: MultiViewDataset, config: TrainConfig, folds: int = 3, seed: int = 0) -> BaselineModel:
    if folds < 2:
        raise ConfigError(f"folds must be >= 2, got {folds}")
    if train.n_views == 1:
        scores = None
        best = 0
    else:
        scores = cv_view_scores(train, config, folds, seed)
        best = int(np.argmax(scores))
    model = fit_lssvm(train.select_views([best]), config)
    return BaselineModel(kind="bsv", models=[model], n_views=train.n_views,
                         selected_view=best, cv_scores=scores)


def fit_early_fusion(train: MultiViewDataset, config: TrainConfig) -> BaselineModel:
    model = fit_lssvm(train.concatenated(), config)
    return BaselineModel(kind="early_fusion", models=[model], n_views=train.n_views)


def fit_late_fusion(train: MultiViewDataset, config: TrainConfig) -> BaselineModel:
    models = [fit_lssvm(train.select_views([v]), config) for v in range(train.n_views)]
    return BaselineModel(kind="late_fusion", models=models, n_views=train.n_views)


def majority_vote(view_labels, summed_scores) -> np.ndarray:
    """Per-sample majority vote over views.

    Ties go to the tied class with the highest summed soft score, then to
    the lowest class id.
    """
    view_labels = np.asarray(view_labels)
    summed_scores = np.asarray(summed_scores, dtype=float)
    n, C = summed_scores.shape
    votes = np.zeros((n, C), dtype=np.int64)
    for labels in view_labels:
        votes[np.arange(n), labels] += 1
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        tied = np.flatnonzero(votes[i] == votes[i].max())
        out[i] = tied[np.argmax(summed_scores[i, tied])]
    return out


def predict_baseline(model: BaselineModel, views):
    """Labels and soft scores of a baseline on raw multi-view input.

    For late fusion the returned scores are the per-view scores summed over
    views (the vote tie-breaker), which need not agree with the vote.
    """
    views = _views_of(views)
    if len(views) != model.n_views:
        raise InputShapeError(f"model expects {model.n_views} views, got {len(views)}")
    if model.kind == "bsv":
        return adaptive.predict(model.models[0], [views[model.selected_view]])
    if model.kind == "early_fusion":
        return adaptive.predict(model.models[0], [np.hstack(views)])
    per_view = [adaptive.predict(m, [X]) for m, X in zip(model.models, views)]
    summed = np.sum([s for _, s in per_view], axis=0)
    return majority_vote([l for l, _ in per_view], summed), summed
