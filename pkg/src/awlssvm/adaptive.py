"""Adaptive weighted multi-view LS-SVM (AW-LSSVM).

Each view trains its own one-vs-all LS-SVMs. After every round, the
misclassified-sample errors of all views are mixed into per-view sample
weights, so that in the next round each view penalizes errors more heavily
on samples the other views got wrong. Views whose errors differ most from
the receiving view contribute the most. Predictions average the per-view
soft scores.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from .data import MultiViewDataset, Standardization, standardize_apply, standardize_fit
from .errors import ConfigError, DegenerateLabelsError, InputShapeError
from .kernels import KernelSpec, gram_matrix, labeled_kernel
from .lssvm_solver import DualSolution, WeightedProblem, decision_scores, solve_dual


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters shared by all views and iterations."""

    gamma: float = 1.0
    rho: float = 1.0
    beta: float = 0.7
    iterations: int = 2
    kernel: KernelSpec = field(default_factory=KernelSpec)
    standardize: bool = True

    def __post_init__(self):
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise ConfigError(f"gamma must be > 0, got {self.gamma}")
        if not (np.isfinite(self.rho) and self.rho >= 0):
            raise ConfigError(f"rho must be >= 0, got {self.rho}")
        if not 0 < self.beta < 1:
            raise ConfigError(f"beta must lie in (0, 1), got {self.beta}")
        if int(self.iterations) != self.iterations or self.iterations < 1:
            raise ConfigError(f"iterations must be an integer >= 1, got {self.iterations}")
        if not isinstance(self.kernel, KernelSpec):
            raise ConfigError("kernel must be a KernelSpec")

    def with_(self, **changes) -> "TrainConfig":
        return replace(self, **changes)

    def to_dict(self) -> dict:
        return {
            "gamma": float(self.gamma),
            "rho": float(self.rho),
            "beta": float(self.beta),
            "iterations": int(self.iterations),
            "kernel": self.kernel.to_dict(),
            "standardize": bool(self.standardize),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TrainConfig":
        return cls(gamma=float(d["gamma"]), rho=float(d["rho"]), beta=float(d["beta"]),
                   iterations=int(d["iterations"]), kernel=KernelSpec.from_dict(d["kernel"]),
                   standardize=bool(d["standardize"]))


def encode_one_vs_all(labels, num_classes: int) -> np.ndarray:
    """``(N, C)`` matrix whose column ``c`` is +1 on class ``c`` and -1 elsewhere."""
    labels = np.asarray(labels, dtype=np.int64)
    if labels.ndim != 1:
        raise InputShapeError("labels must be a vector")
    if np.any((labels < 0) | (labels >= num_classes)):
        raise DegenerateLabelsError(f"labels outside [0, {num_classes})")
    present = np.bincount(labels, minlength=num_classes)
    if np.any(present == 0):
        raise DegenerateLabelsError(f"class {int(np.argmin(present))} has no samples")
    return np.where(labels[:, None] == np.arange(num_classes)[None, :], 1.0, -1.0)


def mask_misclassified(e) -> np.ndarray:
    """Zero the errors of correctly classified samples.

    ``e_k >= 1`` is equivalent to ``y_k f(x_k) <= 0``; a zero score counts
    as misclassified.
    """
    e = np.asarray(e, dtype=float)
    return np.where(e >= 1.0, e, 0.0)


def view_coupling(sq_errors, v: int) -> Optional[np.ndarray]:
    """Normalized distances between view ``v``'s squared masked errors and
    every view's; ``None`` when all distances vanish."""
    sq_errors = np.asarray(sq_errors, dtype=float)
    dist = np.linalg.norm(sq_errors[v][None, :] - sq_errors, axis=1)
    total = dist.sum()
    if total == 0:
        return None
    return dist / total


def update_weights(masked_sq_errors, s_prev, beta: float, t: int, v: int) -> np.ndarray:
    """Sample weights for view ``v`` to be used in round ``t``.

    Parameters
    ----------
    masked_sq_errors : array of shape (V, N)
        Squared masked errors of every view from round ``t - 1``.
    s_prev : array of shape (N,)
        Weights of view ``v`` used in round ``t - 1``.
    beta : float
        Decay factor; the increment is scaled by ``beta ** (t - 2)``.
    t : int
        Round in which the returned weights are used (``t >= 2``).
    v : int
        Receiving view.
    """
    E = np.asarray(masked_sq_errors, dtype=float)
    s_prev = np.asarray(s_prev, dtype=float)
    if E.ndim != 2 or s_prev.shape != (E.shape[1],):
        raise InputShapeError(f"errors {E.shape} and weights {s_prev.shape} disagree")
    if t < 2:
        raise ConfigError(f"weight updates start at round 2, got t={t}")
    if not 0 <= v < E.shape[0]:
        raise InputShapeError(f"view index {v} out of range for {E.shape[0]} views")
    w = view_coupling(E, v)
    if w is None:
        return s_prev.copy()
    return s_prev + beta ** (t - 2) * (w @ E)


@dataclass
class AwModel:
    """Trained AW-LSSVM: final-round dual solutions for every (view, class)."""

    config: TrainConfig
    num_classes: int
    train_views: List[np.ndarray]
    targets: np.ndarray
    solutions: List[List[DualSolution]]
    scalers: Optional[List[Standardization]] = None
    sample_weights: Optional[np.ndarray] = None
    weight_history: List[np.ndarray] = field(default_factory=list, repr=False)

    @property
    def n_views(self) -> int:
        return len(self.train_views)

    def view_scores(self, views) -> np.ndarray:
        """Per-view soft scores, shape ``(V, N_test, C)``."""
        views = _check_views(self, views)
        out = np.empty((self.n_views, views[0].shape[0], self.num_classes))
        for v, X in enumerate(views):
            if self.scalers is not None:
                X = standardize_apply(X, self.scalers[v])
            K = gram_matrix(self.config.kernel, X, self.train_views[v])
            for c in range(self.num_classes):
                sol = self.solutions[v][c]
                out[v, :, c] = decision_scores(sol.alpha, sol.b, self.targets[:, c], K)
        return out

    def to_dict(self) -> dict:
        return {
            "config": self.config.to_dict(),
            "num_classes": self.num_classes,
            "train_views": [X.tolist() for X in self.train_views],
            "targets": self.targets.tolist(),
            "scalers": None if self.scalers is None else [s.to_dict() for s in self.scalers],
            "solutions": [[sol.to_dict() for sol in row] for row in self.solutions],
        }

    @classmethod
    def from_dict(cls, d: dict) -> "AwModel":
        return cls(
            config=TrainConfig.from_dict(d["config"]),
            num_classes=int(d["num_classes"]),
            train_views=[np.asarray(X, dtype=float) for X in d["train_views"]],
            targets=np.asarray(d["targets"], dtype=float),
            solutions=[[DualSolution.from_dict(s) for s in row] for row in d["solutions"]],
            scalers=None if d["scalers"] is None else [Standardization.from_dict(s) for s in d["scalers"]],
        )


def _check_views(model: AwModel, views) -> List[np.ndarray]:
    if isinstance(views, MultiViewDataset):
        views = views.views
    views = [np.asarray(X, dtype=float) for X in views]
    if len(views) != model.n_views:
        raise InputShapeError(f"model has {model.n_views} views, got {len(views)}")
    for v, (X, T) in enumerate(zip(views, model.train_views)):
        if X.ndim != 2 or X.shape[1] != T.shape[1]:
            raise InputShapeError(f"view {v}: expected {T.shape[1]} features, got shape {X.shape}")
    if len({X.shape[0] for X in views}) != 1:
        raise InputShapeError("views have different numbers of rows")
    return views


def fit(train: MultiViewDataset, config: TrainConfig) -> AwModel:
    """Train AW-LSSVM for ``config.iterations`` rounds.

    Round 1 is a plain LS-SVM per (view, class). Between rounds the sample
    weights of each class subproblem are updated from the masked errors of
    all views on that same class.
    """
    labels = train.require_labels()
    Y = encode_one_vs_all(labels, train.num_classes)
    V, C, N = train.n_views, train.num_classes, train.n_samples

    scalers = None
    views = train.views
    if config.standardize:
        scalers = [standardize_fit(X) for X in views]
        views = [standardize_apply(X, st) for X, st in zip(views, scalers)]
    grams = [gram_matrix(config.kernel, X, X) for X in views]

    s = np.zeros((V, C, N))
    history = []
    solutions: List[List[DualSolution]] = []
    for t in range(1, config.iterations + 1):
        history.append(s.copy())
        solutions = []
        errors = np.empty((V, C, N))
        for v in range(V):
            row = []
            for c in range(C):
                problem = WeightedProblem(labeled_kernel(grams[v], Y[:, c]), Y[:, c],
                                          config.gamma, config.rho, s[v, c])
                sol = solve_dual(problem)
                row.append(sol)
                errors[v, c] = sol.e
            solutions.append(row)
        if t < config.iterations:
            masked_sq = mask_misclassified(errors) ** 2
            s = np.stack([
                np.stack([update_weights(masked_sq[:, c], s[v, c], config.beta, t + 1, v)
                          for c in range(C)])
                for v in range(V)
            ])

    return AwModel(config=config, num_classes=C, train_views=list(views), targets=Y,
                   solutions=solutions, scalers=scalers, sample_weights=history[-1],
                   weight_history=history)


def predict(model: AwModel, views):
    """Fused class labels and scores.

    Returns
    -------
    labels : int array (N_test,)
        Argmax of the averaged scores; ties resolve to the lowest class id.
    scores : array (N_test, C)
        Per-view soft scores averaged over views.
    """
    per_view = model.view_scores(views)
    scores = per_view.sum(axis=0) / model.n_views
    return np.argmax(scores, axis=1), scores
