"""Projected gradient descent over relaxed permutations.

The driver minimizes  L(w, M_1..M_J) + lam * sum_j P(M_j)  where each
M_j lives on the doubly stochastic polytope.  A step takes plain
gradient updates for the weights and matrices, clamps negatives, and
re-balances with RAS passes.  Rounding to exact permutations happens
once at the end (and along the trace, for diagnostics).
"""

from dataclasses import dataclass, field

import numpy as np

from .core import TraceRecord, permutation_to_matrix
from .exceptions import CollisionError, OptimizationError, ZeroSumError
from .penalty import PenaltyConfig, penalty_subgradient, penalty_value
from .projection import constraint_violation, ras_pass, threshold_nonnegative
from .rounding import nearest_permutation_lap, round_argmax

_SCHEDULES = ("linear", "constant")


class ObjectiveProblem:
    """Interface the optimizer drives.

    Subclasses set `dimensions` (list of matrix sizes) and
    `weight_dimension` (0 when the problem has no auxiliary weights)
    and implement loss / loss_gradient.  Any duck-typed object with the
    same four attributes works too.
    """

    dimensions = ()
    weight_dimension = 0

    def loss(self, weights, matrices):
        raise NotImplementedError

    def loss_gradient(self, weights, matrices):
        raise NotImplementedError


@dataclass(frozen=True)
class OptimizerConfig:
    lam: float = 1e-3
    learning_rate: float = 0.1
    schedule: str = "linear"
    total_iterations: int = 500
    seed: int = 0
    ras_passes_per_step: int = 1
    record_every: int = 10
    momentum: float = 0.0
    norm_guard: float = 1e-12

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if self.learning_rate <= 0:
            raise ValueError(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.schedule not in _SCHEDULES:
            raise ValueError(f"schedule must be one of {_SCHEDULES}, got {self.schedule!r}")
        if self.total_iterations < 1:
            raise ValueError(f"total_iterations must be >= 1, got {self.total_iterations}")
        if self.ras_passes_per_step < 1:
            raise ValueError(f"ras_passes_per_step must be >= 1, got {self.ras_passes_per_step}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError(f"momentum must lie in [0, 1), got {self.momentum}")

    def rate_at(self, iteration):
        if self.schedule == "constant":
            return self.learning_rate
        return self.learning_rate * (1.0 - iteration / self.total_iterations)


@dataclass
class OptimizerState:
    weights: np.ndarray
    matrices: list
    velocity_weights: np.ndarray
    velocity_matrices: list
    iteration: int = 0


@dataclass(frozen=True)
class OptimizationResult:
    final_weights: np.ndarray
    relaxed_matrices: list
    rounded: list
    trace: list = field(repr=False)
    final_penalty: float
    rounding_gap: float


def initialize(problem, cfg):
    """Gaussian weights, |Gaussian| matrices balanced by one RAS pass."""
    rng = np.random.default_rng(cfg.seed)
    weights = rng.standard_normal(problem.weight_dimension)
    matrices = []
    for n in problem.dimensions:
        m = np.abs(rng.standard_normal((n, n)))
        matrices.append(ras_pass(m))
    return OptimizerState(
        weights=weights,
        matrices=matrices,
        velocity_weights=np.zeros_like(weights),
        velocity_matrices=[np.zeros_like(m) for m in matrices],
        iteration=0,
    )


def step(problem, state, cfg):
    """One projected gradient update; returns a fresh state."""
    eta = cfg.rate_at(state.iteration)
    pen_cfg = PenaltyConfig(lam=cfg.lam, norm_guard=cfg.norm_guard)
    gw, gms = problem.loss_gradient(state.weights, state.matrices)
    vw = cfg.momentum * state.velocity_weights + np.asarray(gw, dtype=float)
    weights = state.weights - eta * vw
    matrices = []
    velocities = []
    for m, gm, vm in zip(state.matrices, gms, state.velocity_matrices):
        g = np.asarray(gm, dtype=float) + cfg.lam * penalty_subgradient(m, pen_cfg)
        v = cfg.momentum * vm + g
        m = threshold_nonnegative(m - eta * v)
        for _ in range(cfg.ras_passes_per_step):
            m = ras_pass(m)
        matrices.append(m)
        velocities.append(v)
    return OptimizerState(
        weights=weights,
        matrices=matrices,
        velocity_weights=vw,
        velocity_matrices=velocities,
        iteration=state.iteration + 1,
    )


def _record(problem, state):
    loss = float(problem.loss(state.weights, state.matrices))
    pen = sum(penalty_value(m) for m in state.matrices)
    viol = max(constraint_violation(m) for m in state.matrices)
    perms = [nearest_permutation_lap(m) for m in state.matrices]
    rounded_loss = float(
        problem.loss(state.weights, [permutation_to_matrix(p) for p in perms])
    )
    try:
        matches = all(
            np.array_equal(round_argmax(m), p) for m, p in zip(state.matrices, perms)
        )
    except CollisionError:
        matches = False
    return TraceRecord(
        iteration=state.iteration,
        loss=loss,
        penalty=pen,
        constraint_violation=viol,
        rounding_gap=rounded_loss - loss,
        argmax_matches_lap=matches,
    )


def run(problem, cfg):
    """Full Algorithm-1 style run: init, Tn steps, final rounding."""
    state = initialize(problem, cfg)
    trace = []
    try:
        for _ in range(cfg.total_iterations):
            if state.iteration % cfg.record_every == 0:
                trace.append(_record(problem, state))
            state = step(problem, state, cfg)
    except ZeroSumError as exc:
        raise OptimizationError(
            f"run failed at iteration {state.iteration}: {exc}", trace
        ) from exc
    trace.append(_record(problem, state))
    perms = [nearest_permutation_lap(m) for m in state.matrices]
    rounded_loss = float(
        problem.loss(state.weights, [permutation_to_matrix(p) for p in perms])
    )
    relaxed_loss = float(problem.loss(state.weights, state.matrices))
    return OptimizationResult(
        final_weights=state.weights,
        relaxed_matrices=list(state.matrices),
        rounded=perms,
        trace=trace,
        final_penalty=sum(penalty_value(m) for m in state.matrices),
        rounding_gap=rounded_loss - relaxed_loss,
    )
