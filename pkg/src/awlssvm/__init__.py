"""Adaptive weighted least-squares SVMs for multi-view classification."""

from .adaptive import AwModel, TrainConfig, encode_one_vs_all, fit, mask_misclassified, predict, update_weights
from .baselines import BaselineModel, fit_bsv, fit_early_fusion, fit_late_fusion, predict_baseline
from .data import MultiViewDataset, load_dataset, save_dataset, stratified_split
from .evaluation import SearchSpace, SplitPlan, benchmark, kfold_cv, tune
from .kernels import KernelSpec, gram_matrix, kernel_eval, labeled_kernel
from .lssvm_solver import DualSolution, WeightedProblem, decision_scores, solve_dual, training_errors
from .persistence import load_model, save_model
from .stats import balanced_accuracy, wilcoxon_signed_rank

__version__ = "0.1.0"
