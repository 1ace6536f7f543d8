"""Exact relaxation of permutation matrices via an l1-minus-l2 penalty.

The penalty vanishes on doubly stochastic matrices exactly at the
permutations, so a penalized objective can be driven by projected
gradient steps and rounded to a nearby permutation at the end.  The
package bundles the penalty and its subgradient, the alternating
rescaling projection, assignment-based rounding, a small optimizer,
matching and shuffled-regression problem suites, closed-form
one-dimensional examples, and sklearn-style estimator wrappers.
"""

from .closed_form import (
    TwoLayerTeacher,
    birkhoff_line,
    example1_F,
    example2_F,
    example3_F,
    example3_loss,
    grid_local_minima,
    grid_minimize,
    line_penalty,
    relu_cross_moment,
)
from .core import (
    TraceRecord,
    frobenius_distance,
    matrix_to_permutation,
    permutation_to_matrix,
    random_permutation,
    read_matrix_text,
    write_matrix_text,
)
from .estimators import GraphMatcher, ShuffleRegressor
from .exceptions import (
    CollisionError,
    DimensionMismatchError,
    DomainError,
    NoConvergenceError,
    NotAPermutationError,
    OptimizationError,
    TooLargeError,
    ZeroSumError,
)
from .gradcheck import central_difference, max_relative_error
from .optimizer import (
    ObjectiveProblem,
    OptimizationResult,
    OptimizerConfig,
    OptimizerState,
    initialize,
    run,
    step,
)
from .penalty import PenaltyConfig, penalty_subgradient, penalty_value
from .projection import (
    ProjectionConfig,
    constraint_violation,
    iterate_to_tolerance,
    ras_pass,
    threshold_nonnegative,
)
from .qap import (
    QapInstance,
    brute_force_oracle,
    gm_objective,
    instance_objective,
    project_birkhoff,
    qap_trace_objective,
    read_instance,
    solve_convex_relaxed,
    solve_penalized,
    write_instance,
)
from .rounding import nearest_permutation_lap, round_argmax
from .shuffle import (
    ShuffleTask,
    generate_task,
    lambda_sweep,
    recover_permutation,
    recover_with_details,
    shuffle_objective,
)
from .verify import SUITES, run_suite

__version__ = "0.1.0"

__all__ = [
    "CollisionError",
    "DimensionMismatchError",
    "DomainError",
    "GraphMatcher",
    "NoConvergenceError",
    "NotAPermutationError",
    "ObjectiveProblem",
    "OptimizationError",
    "OptimizationResult",
    "OptimizerConfig",
    "OptimizerState",
    "PenaltyConfig",
    "ProjectionConfig",
    "QapInstance",
    "SUITES",
    "ShuffleRegressor",
    "ShuffleTask",
    "TooLargeError",
    "TraceRecord",
    "TwoLayerTeacher",
    "ZeroSumError",
    "birkhoff_line",
    "brute_force_oracle",
    "central_difference",
    "constraint_violation",
    "example1_F",
    "example2_F",
    "example3_F",
    "example3_loss",
    "frobenius_distance",
    "generate_task",
    "gm_objective",
    "grid_local_minima",
    "grid_minimize",
    "initialize",
    "instance_objective",
    "iterate_to_tolerance",
    "lambda_sweep",
    "line_penalty",
    "matrix_to_permutation",
    "max_relative_error",
    "nearest_permutation_lap",
    "penalty_subgradient",
    "penalty_value",
    "permutation_to_matrix",
    "project_birkhoff",
    "qap_trace_objective",
    "random_permutation",
    "ras_pass",
    "read_instance",
    "read_matrix_text",
    "recover_permutation",
    "recover_with_details",
    "relu_cross_moment",
    "round_argmax",
    "run",
    "run_suite",
    "shuffle_objective",
    "solve_convex_relaxed",
    "solve_penalized",
    "step",
    "threshold_nonnegative",
    "write_instance",
    "write_matrix_text",
]
