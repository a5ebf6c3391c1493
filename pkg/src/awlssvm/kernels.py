"""Kernel functions and Gram matrix assembly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist, pdist

from .errors import ConfigError, InputShapeError, NumericInputError

KERNEL_FAMILIES = ("rbf", "linear")


@dataclass(frozen=True)
class KernelSpec:
    """Kernel family and its parameters.

    The RBF kernel is ``exp(-||x - z||^2 / (2 * bandwidth^2))``; ``bandwidth``
    is ignored for the linear kernel.
    """

    family: str = "rbf"
    bandwidth: float = 1.0

    def __post_init__(self):
        if self.family not in KERNEL_FAMILIES:
            raise ConfigError(f"unknown kernel family {self.family!r}")
        if self.family == "rbf":
            bw = float(self.bandwidth)
            if not np.isfinite(bw) or bw <= 0:
                raise ConfigError(f"rbf bandwidth must be finite and > 0, got {self.bandwidth}")

    def to_dict(self) -> dict:
        return {"family": self.family, "bandwidth": float(self.bandwidth)}

    @classmethod
    def from_dict(cls, d: dict) -> "KernelSpec":
        return cls(family=d["family"], bandwidth=float(d["bandwidth"]))


def _as_finite(a, ndim: int, what: str) -> np.ndarray:
    arr = np.asarray(a, dtype=float)
    if arr.ndim != ndim:
        raise InputShapeError(f"{what} must be {ndim}-dimensional, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NumericInputError(f"{what} contains non-finite values")
    return arr


def kernel_eval(spec: KernelSpec, x, z) -> float:
    """Evaluate the kernel on a single pair of vectors."""
    x = _as_finite(x, 1, "x")
    z = _as_finite(z, 1, "z")
    if x.shape != z.shape:
        raise InputShapeError(f"dimension mismatch: {x.shape[0]} vs {z.shape[0]}")
    if spec.family == "linear":
        return float(np.dot(x, z))
    d = x - z
    return float(np.exp(-np.dot(d, d) / (2.0 * spec.bandwidth ** 2)))


def gram_matrix(spec: KernelSpec, A, B) -> np.ndarray:
    """Dense kernel matrix with entry ``(i, j) = K(A[i], B[j])``.

    Squared distances come from ``cdist``, which evaluates each pair
    directly, so ``gram_matrix(spec, A, A)`` is exactly symmetric with a
    unit diagonal for the RBF kernel.
    """
    A = _as_finite(A, 2, "A")
    B = _as_finite(B, 2, "B")
    if A.shape[1] != B.shape[1]:
        raise InputShapeError(
            f"feature dimension mismatch: {A.shape[1]} vs {B.shape[1]}")
    same = A is B or (A.shape == B.shape and np.array_equal(A, B))
    if spec.family == "linear":
        if same:
            G = A @ A.T
            return 0.5 * (G + G.T)
        return A @ B.T
    sq = cdist(A, B, "sqeuclidean")
    return np.exp(-sq / (2.0 * spec.bandwidth ** 2))


def labeled_kernel(K, y) -> np.ndarray:
    """Return ``Omega`` with ``Omega[i, j] = y[i] * y[j] * K[i, j]``."""
    K = np.asarray(K, dtype=float)
    y = np.asarray(y, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise InputShapeError(f"kernel matrix must be square, got {K.shape}")
    if y.shape != (K.shape[0],):
        raise InputShapeError(f"label length {y.shape} does not match kernel size {K.shape[0]}")
    return y[:, None] * K * y[None, :]


def median_pairwise_distance(X) -> float:
    """Median Euclidean distance over all distinct row pairs (1.0 if degenerate)."""
    X = _as_finite(X, 2, "X")
    if X.shape[0] < 2:
        return 1.0
    med = float(np.median(pdist(X)))
    return med if med > 0 else 1.0
