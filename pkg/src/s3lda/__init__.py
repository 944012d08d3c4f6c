"""Semi-supervised sparse linear discriminant analysis.

A sparse LDA direction is fitted by least squares on the few labeled points
while a modified hinge loss on the unlabeled points pushes the boundary into
low-density regions. The non-convex objective is minimized by a DC
iteration; ``(C1, C2)`` are picked by a two-part criterion on a partially
labeled tuning set.
"""

from .baselines import (PopulationModel, bayes_error_gaussian, bayes_rule, l1_lda_fit, l1_lda_path,
                        l1_svm_fit, l1_svm_path, population_bayes_rule)
from .data import (Dataset, LinearModel, Standardizer, decision_value, encode_targets, predict,
                   read_dataset, standardize_apply, standardize_fit, write_dataset)
from .losses import SmoothingParams, modified_hinge
from .metrics import MethodResult, misclassification_rate, replicate_experiment, selection_errors
from .simulate import SimSpec, generate_example
from .solver import FitResult, SolverConfig, dc_fit, lasso_least_squares, objective_Q, solve_convex_subproblem
from .theory import TheoryProblem, mc_constrained_minimizer, theorem2_bound, verify_theorem2
from .tuning import Grid, TuneReport, grid_search, margin_halfwidth_eta, oracle_select, tuning_criterion

__version__ = "0.1.0"
