"""Multi-view datasets: loading, validation, splitting and scaling.

On-disk layout of a dataset directory::

    manifest.json   {"name", "num_samples", "num_classes", "labels_file",
                     "views": [{"name", "file", "dim"}, ...]}
    <view>.csv      headerless CSV, num_samples rows x dim columns
    <labels file>   one integer class id per line
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .errors import (
    AllocationError,
    ConfigError,
    DatasetError,
    InputShapeError,
    LabelRangeError,
    MissingFileError,
    NonFiniteValueError,
    RowCountError,
    StratificationError,
)


@dataclass(frozen=True)
class MultiViewDataset:
    """``N`` samples described by ``V`` feature matrices and shared labels.

    ``labels`` may be ``None`` for unlabeled prediction inputs.
    """

    views: List[np.ndarray]
    labels: Optional[np.ndarray]
    num_classes: int
    name: str = "dataset"
    view_names: List[str] = field(default_factory=list)

    def __post_init__(self):
        views = [np.asarray(v, dtype=float) for v in self.views]
        if not views:
            raise DatasetError("dataset needs at least one view")
        names = list(self.view_names) or [f"view{i}" for i in range(len(views))]
        if len(names) != len(views):
            raise DatasetError("view_names length does not match number of views")
        n = views[0].shape[0] if views[0].ndim == 2 else -1
        for name, v in zip(names, views):
            if v.ndim != 2:
                raise InputShapeError(f"view {name!r} must be a 2-D matrix, got shape {v.shape}")
            if v.shape[0] != n:
                raise RowCountError(f"view {name!r} has {v.shape[0]} rows, expected {n}")
            bad = np.argwhere(~np.isfinite(v))
            if bad.size:
                raise NonFiniteValueError(
                    f"view {name!r} has a non-finite value at row {bad[0][0]}, column {bad[0][1]}")
        labels = self.labels
        if labels is not None:
            labels = np.asarray(labels)
            if labels.shape != (n,):
                raise RowCountError(f"labels have shape {labels.shape}, expected ({n},)")
            if labels.size and not np.issubdtype(labels.dtype, np.integer):
                if not np.all(labels == np.round(labels)):
                    raise LabelRangeError("labels must be integers")
            labels = labels.astype(np.int64)
            out = np.flatnonzero((labels < 0) | (labels >= self.num_classes))
            if out.size:
                raise LabelRangeError(
                    f"label {labels[out[0]]} at row {out[0]} outside [0, {self.num_classes})")
        object.__setattr__(self, "views", views)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "view_names", names)
        object.__setattr__(self, "num_classes", int(self.num_classes))

    @property
    def n_samples(self) -> int:
        return self.views[0].shape[0]

    @property
    def n_views(self) -> int:
        return len(self.views)

    @property
    def dims(self) -> List[int]:
        return [v.shape[1] for v in self.views]

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.require_labels(), minlength=self.num_classes)

    def require_labels(self) -> np.ndarray:
        if self.labels is None:
            raise DatasetError(f"dataset {self.name!r} has no labels")
        return self.labels

    def check_all_classes_present(self) -> None:
        missing = np.flatnonzero(self.class_counts() == 0)
        if missing.size:
            raise LabelRangeError(f"class {missing[0]} has no samples in {self.name!r}")

    def subset(self, idx) -> "MultiViewDataset":
        idx = np.asarray(idx, dtype=np.int64)
        return MultiViewDataset(
            views=[v[idx] for v in self.views],
            labels=None if self.labels is None else self.labels[idx],
            num_classes=self.num_classes,
            name=self.name,
            view_names=list(self.view_names),
        )

    def select_views(self, which: Sequence[int]) -> "MultiViewDataset":
        return MultiViewDataset(
            views=[self.views[i] for i in which],
            labels=self.labels,
            num_classes=self.num_classes,
            name=self.name,
            view_names=[self.view_names[i] for i in which],
        )

    def concatenated(self) -> "MultiViewDataset":
        """Single-view dataset holding all view features side by side."""
        return MultiViewDataset(
            views=[np.hstack(self.views)],
            labels=self.labels,
            num_classes=self.num_classes,
            name=self.name,
            view_names=["+".join(self.view_names)],
        )


# ---------------------------------------------------------------------------
# I/O
# ---------------------------------------------------------------------------

def _read_matrix(path: Path, view: str) -> np.ndarray:
    if not path.is_file():
        raise MissingFileError(f"file for view {view!r} not found: {path}")
    rows = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([float(tok) for tok in line.split(",")])
            except ValueError as exc:
                raise DatasetError(f"view {view!r}, row {lineno}: {exc}") from exc
    widths = {len(r) for r in rows}
    if len(widths) > 1:
        raise InputShapeError(f"view {view!r} has ragged rows in {path}")
    return np.array(rows, dtype=float).reshape(len(rows), widths.pop() if widths else 0)


def load_dataset(path) -> MultiViewDataset:
    """Load and validate a dataset directory against its manifest.

    A ``null`` or absent ``labels_file`` yields an unlabeled dataset.
    """
    root = Path(path)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise MissingFileError(f"manifest not found: {manifest_path}")
    with open(manifest_path, encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DatasetError(f"invalid manifest {manifest_path}: {exc}") from exc
    try:
        n = int(manifest["num_samples"])
        c = int(manifest["num_classes"])
        view_entries = manifest["views"]
        labels_file = manifest.get("labels_file")
        name = str(manifest["name"])
    except (KeyError, TypeError, ValueError) as exc:
        raise DatasetError(f"manifest {manifest_path} is missing or has a bad field: {exc}") from exc

    views, names = [], []
    for entry in view_entries:
        vname, vfile, dim = entry["name"], entry["file"], int(entry["dim"])
        X = _read_matrix(root / vfile, vname)
        if X.shape[0] != n:
            raise RowCountError(f"view {vname!r} ({vfile}) has {X.shape[0]} rows, manifest says {n}")
        if X.shape[1] != dim:
            raise InputShapeError(f"view {vname!r} ({vfile}) has {X.shape[1]} columns, manifest says {dim}")
        bad = np.argwhere(~np.isfinite(X))
        if bad.size:
            raise NonFiniteValueError(f"view {vname!r} has a non-finite value at row {bad[0][0]}")
        views.append(X)
        names.append(vname)

    labels = None
    if labels_file is not None:
        lpath = root / labels_file
        if not lpath.is_file():
            raise MissingFileError(f"labels file not found: {lpath}")
        with open(lpath, encoding="utf-8") as fh:
            tokens = [ln.strip() for ln in fh if ln.strip()]
        try:
            labels = np.array([int(t) for t in tokens], dtype=np.int64)
        except ValueError as exc:
            raise LabelRangeError(f"labels file {lpath}: {exc}") from exc
        if labels.shape[0] != n:
            raise RowCountError(f"labels file has {labels.shape[0]} rows, manifest says {n}")
    return MultiViewDataset(views=views, labels=labels, num_classes=c, name=name, view_names=names)


def save_dataset(ds: MultiViewDataset, path) -> Path:
    """Write ``ds`` in the directory layout understood by :func:`load_dataset`."""
    root = Path(path)
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    for i, (vname, X) in enumerate(zip(ds.view_names, ds.views)):
        fname = f"view{i}.csv"
        with open(root / fname, "w", encoding="utf-8", newline="\n") as fh:
            for row in X:
                fh.write(",".join(repr(float(x)) for x in row) + "\n")
        entries.append({"name": vname, "file": fname, "dim": int(X.shape[1])})
    with open(root / "labels.txt", "w", encoding="utf-8", newline="\n") as fh:
        fh.writelines(f"{int(l)}\n" for l in ds.require_labels())
    manifest = {
        "name": ds.name,
        "num_samples": ds.n_samples,
        "num_classes": ds.num_classes,
        "labels_file": "labels.txt",
        "views": entries,
    }
    with open(root / "manifest.json", "w", encoding="utf-8", newline="\n") as fh:
        json.dump(manifest, fh, indent=2)
        fh.write("\n")
    return root


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def _round_half_up(x: float) -> int:
    return int(math.floor(x + 0.5))


def stratified_split_indices(labels, test_fraction: float, seed: int) -> Tuple[np.ndarray, np.ndarray]:
    """Sorted (train, test) row indices with per-class test counts
    ``round(test_fraction * count)`` clamped to ``[1, count - 1]``."""
    if not 0 < test_fraction < 1:
        raise ConfigError(f"test_fraction must lie in (0, 1), got {test_fraction}")
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    test = []
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        if members.size < 2:
            raise StratificationError(f"class {c} has {members.size} sample(s); need at least 2")
        n_test = min(max(_round_half_up(test_fraction * members.size), 1), members.size - 1)
        test.append(rng.permutation(members)[:n_test])
    test = np.sort(np.concatenate(test))
    train = np.setdiff1d(np.arange(labels.shape[0]), test)
    return train, test


def stratified_split(ds: MultiViewDataset, test_fraction: float, seed: int):
    train, test = stratified_split_indices(ds.require_labels(), test_fraction, seed)
    return ds.subset(train), ds.subset(test)


def stratified_kfold_indices(labels, k: int, seed: int) -> List[Tuple[np.ndarray, np.ndarray]]:
    """Stratified k-fold partition; each class is shuffled and dealt into folds
    as evenly as possible. Every class needs at least ``k`` members."""
    if k < 2:
        raise ConfigError(f"number of folds must be >= 2, got {k}")
    labels = np.asarray(labels)
    rng = np.random.default_rng(seed)
    fold_of = np.empty(labels.shape[0], dtype=np.int64)
    for c in np.unique(labels):
        members = np.flatnonzero(labels == c)
        if members.size < k:
            raise StratificationError(
                f"class {c} has {members.size} sample(s); {k}-fold stratification needs {k}")
        for f, chunk in enumerate(np.array_split(rng.permutation(members), k)):
            fold_of[chunk] = f
    idx = np.arange(labels.shape[0])
    return [(idx[fold_of != f], idx[fold_of == f]) for f in range(k)]


def proportional_allocation(counts, target: int) -> np.ndarray:
    """Largest-remainder apportionment of ``target`` over ``counts``.

    Remainder ties go to the lower class id.
    """
    counts = np.asarray(counts, dtype=np.int64)
    total = int(counts.sum())
    if target > total or target < 1:
        raise AllocationError(f"target {target} not in [1, {total}]")
    quotas = counts * target / total
    alloc = np.floor(quotas).astype(np.int64)
    remainder = quotas - alloc
    order = sorted(range(len(counts)), key=lambda c: (-remainder[c], c))
    for c in order[: target - int(alloc.sum())]:
        alloc[c] += 1
    empty = np.flatnonzero((alloc == 0) & (counts > 0))
    if empty.size:
        raise AllocationError(f"target {target} leaves class {empty[0]} without samples")
    return alloc


def stratified_downsample(ds: MultiViewDataset, target_n: int, seed: int) -> MultiViewDataset:
    labels = ds.require_labels()
    if target_n > ds.n_samples:
        raise AllocationError(f"target {target_n} exceeds dataset size {ds.n_samples}")
    alloc = proportional_allocation(ds.class_counts(), target_n)
    rng = np.random.default_rng(seed)
    keep = []
    for c, m in enumerate(alloc):
        members = np.flatnonzero(labels == c)
        keep.append(rng.permutation(members)[:m])
    return ds.subset(np.sort(np.concatenate(keep)))


def retain_top_classes(ds: MultiViewDataset, k: int) -> MultiViewDataset:
    """Keep the ``k`` most populous classes, relabelled ``0..k-1`` by count
    (ties go to the lower original id)."""
    if k <= 0:
        raise ConfigError(f"k must be positive, got {k}")
    if k > ds.num_classes:
        raise ConfigError(f"k={k} exceeds number of classes {ds.num_classes}")
    counts = ds.class_counts()
    ranked = sorted(range(ds.num_classes), key=lambda c: (-counts[c], c))[:k]
    remap = np.full(ds.num_classes, -1, dtype=np.int64)
    remap[ranked] = np.arange(k)
    new_labels = remap[ds.labels]
    keep = np.flatnonzero(new_labels >= 0)
    return MultiViewDataset(
        views=[v[keep] for v in ds.views],
        labels=new_labels[keep],
        num_classes=k,
        name=ds.name,
        view_names=list(ds.view_names),
    )


# ---------------------------------------------------------------------------
# Feature scaling
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Standardization:
    """Per-feature mean and scale; constant features have ``scale == 0``."""

    mean: np.ndarray
    scale: np.ndarray

    def to_dict(self) -> dict:
        return {"mean": self.mean.tolist(), "scale": self.scale.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "Standardization":
        return cls(np.asarray(d["mean"], dtype=float), np.asarray(d["scale"], dtype=float))


def standardize_fit(X) -> Standardization:
    X = np.asarray(X, dtype=float)
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    # rounding in the mean leaves ~1e-17 spread on constant columns
    constant = std <= 1e-12 * np.maximum(1.0, np.abs(mean))
    std = np.where(constant, 0.0, std)
    return Standardization(mean=mean, scale=std)


def standardize_apply(X, stats: Standardization) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[1] != stats.mean.shape[0]:
        raise InputShapeError(
            f"matrix with shape {X.shape} does not match {stats.mean.shape[0]} fitted features")
    safe = np.where(stats.scale > 0, stats.scale, 1.0)
    Z = (X - stats.mean) / safe
    Z[:, stats.scale == 0] = 0.0
    return Z


def standardize_inverse(Z, stats: Standardization) -> np.ndarray:
    Z = np.asarray(Z, dtype=float)
    return Z * stats.scale + stats.mean


# ---------------------------------------------------------------------------
# Synthetic data
# ---------------------------------------------------------------------------

def make_complementary_views(n_per_class: int = 30, noise: float = 0.4, seed: int = 0,
                             name: str = "complementary") -> MultiViewDataset:
    """Three-class, two-view Gaussian mixture with complementary views.

    View 0 separates class 0 from classes 1 and 2, which share one cluster.
    View 1 separates class 2 from classes 0 and 1, which share one cluster.
    Neither view alone can distinguish every class; together they can.
    Small ``noise`` gives a fully separable problem.
    """
    rng = np.random.default_rng(seed)
    labels = np.repeat(np.arange(3), n_per_class)
    centers0 = np.array([[2.0, 0.0], [-2.0, 0.0], [-2.0, 0.0]])
    centers1 = np.array([[0.0, -2.0], [0.0, -2.0], [0.0, 2.0]])
    v0 = centers0[labels] + noise * rng.standard_normal((labels.size, 2))
    v1 = centers1[labels] + noise * rng.standard_normal((labels.size, 2))
    return MultiViewDataset(views=[v0, v1], labels=labels, num_classes=3, name=name,
                            view_names=["view_a", "view_b"])
