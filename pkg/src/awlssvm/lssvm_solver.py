"""Weighted LS-SVM dual solver.

For one binary subproblem the dual is the bordered system::

    [ 0   y^T          ] [b    ]   [0  ]
    [ y   Omega + Lam  ] [alpha] = [1_N]

with ``Lam = diag(1 / (gamma + rho * s_k))``. The block ``H = Omega + Lam``
is symmetric positive definite, so it is Cholesky-factored once and the
border is eliminated with two back-solves.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve

from .errors import DegenerateLabelsError, InputShapeError, NumericInputError, SolverError

log = logging.getLogger(__name__)

JITTER_SCALE = 1e-10


@dataclass(frozen=True)
class WeightedProblem:
    """One binary weighted LS-SVM training problem."""

    omega: np.ndarray
    y: np.ndarray
    gamma: float
    rho: float
    s: np.ndarray

    def __post_init__(self):
        omega = np.asarray(self.omega, dtype=float)
        y = np.asarray(self.y, dtype=float)
        s = np.asarray(self.s, dtype=float)
        n = y.shape[0] if y.ndim == 1 else -1
        if n < 0 or omega.shape != (n, n) or s.shape != (n,):
            raise InputShapeError(
                f"inconsistent shapes: omega {omega.shape}, y {y.shape}, s {s.shape}")
        if not (np.all(np.isfinite(omega)) and np.all(np.isfinite(s))):
            raise NumericInputError("omega and s must be finite")
        if not np.all(np.abs(y) == 1.0):
            raise InputShapeError("y entries must be +1 or -1")
        if not (np.isfinite(self.gamma) and self.gamma > 0):
            raise NumericInputError(f"gamma must be > 0, got {self.gamma}")
        if not (np.isfinite(self.rho) and self.rho >= 0):
            raise NumericInputError(f"rho must be >= 0, got {self.rho}")
        if np.any(s < 0):
            raise NumericInputError("sample weights must be nonnegative")
        object.__setattr__(self, "omega", omega)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "s", s)
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "rho", float(self.rho))

    @property
    def n(self) -> int:
        return self.y.shape[0]

    def regularizer_diagonal(self) -> np.ndarray:
        """Diagonal of ``Lam``: ``1 / (gamma + rho * s)``."""
        return 1.0 / (self.gamma + self.rho * self.s)

    def bordered_matrix(self) -> np.ndarray:
        n = self.n
        M = np.zeros((n + 1, n + 1))
        M[0, 1:] = self.y
        M[1:, 0] = self.y
        M[1:, 1:] = self.omega + np.diag(self.regularizer_diagonal())
        return M


@dataclass(frozen=True)
class DualSolution:
    alpha: np.ndarray
    b: float
    e: np.ndarray

    def to_dict(self) -> dict:
        return {"alpha": self.alpha.tolist(), "b": float(self.b), "e": self.e.tolist()}

    @classmethod
    def from_dict(cls, d: dict) -> "DualSolution":
        return cls(np.asarray(d["alpha"], dtype=float), float(d["b"]),
                   np.asarray(d["e"], dtype=float))


def _factor(H: np.ndarray):
    try:
        return cho_factor(H, lower=True, check_finite=True)
    except (LinAlgError, ValueError):
        pass
    jitter = JITTER_SCALE * np.trace(H) / H.shape[0]
    log.warning("Cholesky failed; retrying with diagonal jitter %.3g", jitter)
    try:
        return cho_factor(H + jitter * np.eye(H.shape[0]), lower=True, check_finite=True)
    except (LinAlgError, ValueError) as exc:
        raise SolverError(f"dual system is singular or non-finite: {exc}") from exc


def solve_dual(p: WeightedProblem) -> DualSolution:
    """Solve the bordered dual system of a weighted LS-SVM.

    Raises
    ------
    DegenerateLabelsError
        If fewer than two samples or only one label sign is present.
    SolverError
        If ``Omega + Lam`` cannot be factored even after one jitter retry.
    """
    y = p.y
    if p.n < 2 or not (np.any(y > 0) and np.any(y < 0)):
        raise DegenerateLabelsError("binary subproblem needs both label signs and N >= 2")
    H = p.omega + np.diag(p.regularizer_diagonal())
    factor = _factor(H)
    nu = cho_solve(factor, y)
    eta = cho_solve(factor, np.ones_like(y))
    denom = y @ nu
    if not np.isfinite(denom) or denom == 0:
        raise SolverError("bias elimination produced a zero pivot")
    b = (y @ eta) / denom
    alpha = eta - b * nu
    if not (np.all(np.isfinite(alpha)) and np.isfinite(b)):
        raise SolverError("dual solution is non-finite")
    e = training_errors(p, alpha, b)
    return DualSolution(alpha=alpha, b=float(b), e=e)


def training_errors(p: WeightedProblem, alpha, b: float) -> np.ndarray:
    """Margin errors ``e_k = 1 - y_k f(x_k) = 1 - (Omega alpha)_k - y_k b``."""
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (p.n,):
        raise InputShapeError(f"alpha has shape {alpha.shape}, expected ({p.n},)")
    return 1.0 - p.omega @ alpha - p.y * b


def decision_scores(alpha, b: float, y_train, K_test_train) -> np.ndarray:
    """Soft scores ``sum_k alpha_k y_k K(x*, x_k) + b`` for each test row."""
    alpha = np.asarray(alpha, dtype=float)
    y_train = np.asarray(y_train, dtype=float)
    K = np.asarray(K_test_train, dtype=float)
    if K.ndim != 2 or K.shape[1] != alpha.shape[0] or y_train.shape != alpha.shape:
        raise InputShapeError(
            f"kernel {K.shape} incompatible with alpha {alpha.shape} / y {y_train.shape}")
    return K @ (alpha * y_train) + b


def bordered_residual(p: WeightedProblem, sol: DualSolution) -> float:
    """Max-norm residual of the bordered system at ``(b, alpha)``."""
    x = np.concatenate(([sol.b], sol.alpha))
    rhs = np.concatenate(([0.0], np.ones(p.n)))
    return float(np.max(np.abs(p.bordered_matrix() @ x - rhs)))
