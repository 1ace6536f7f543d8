"""Synthetic shuffle recovery: find a permutation hidden between two maps.

A teacher computes y = w2 P* w1 x.  Both linear maps are known; only
the permutation P* is hidden.  The demo relaxes P* to a doubly
stochastic M, minimizes the mean squared error plus the l1-2 penalty
with the projected gradient driver, and checks whether rounding
recovers P* exactly.  This is the smallest setting exhibiting the
penalty-decay and rounding-gap phenomenology of learned channel
shuffles.
"""

from dataclasses import dataclass, replace

import numpy as np

from .core import permutation_to_matrix, random_permutation
from .exceptions import OptimizationError
from .optimizer import ObjectiveProblem, OptimizerConfig, run

_MIN_SAMPLE_FACTOR = 10


@dataclass(frozen=True)
class ShuffleTask:
    n: int
    w1: np.ndarray
    w2: np.ndarray
    p_star: np.ndarray
    samples: int
    noise_std: float

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.samples < _MIN_SAMPLE_FACTOR * self.n:
            raise ValueError(
                f"samples must be >= {_MIN_SAMPLE_FACTOR}*n = {_MIN_SAMPLE_FACTOR * self.n}, "
                f"got {self.samples}"
            )
        if self.noise_std < 0:
            raise ValueError(f"noise_std must be >= 0, got {self.noise_std}")


def generate_task(n, samples, noise_std, seed):
    """Random teacher maps, hidden permutation, and (X, Y) data arrays."""
    rng = np.random.default_rng(seed)
    w1 = rng.standard_normal((n, n))
    w2 = rng.standard_normal((n, n))
    p_star = random_permutation(n, rng)
    task = ShuffleTask(n=n, w1=w1, w2=w2, p_star=p_star, samples=samples, noise_std=noise_std)
    x = rng.standard_normal((samples, n))
    y = x @ w1.T @ permutation_to_matrix(p_star).T @ w2.T
    if noise_std > 0:
        y = y + noise_std * rng.standard_normal(y.shape)
    return task, (x, y)


class ShuffleProblem(ObjectiveProblem):
    """MSE over the dataset as a function of the shuffle matrix M.

    With learn_output_map=True the output map w2 becomes a trainable
    weight vector (flattened) instead of the fixed teacher map.
    """

    def __init__(self, task, dataset, learn_output_map=False):
        x, y = dataset
        self.task = task
        self.dimensions = [task.n]
        self.learn_output_map = learn_output_map
        self.weight_dimension = task.n * task.n if learn_output_map else 0
        # column layout: one data point per column
        self.z = task.w1 @ x.T
        self.targets = y.T
        self.count = x.shape[0]

    def _output_map(self, weights):
        if self.learn_output_map:
            return weights.reshape(self.task.n, self.task.n)
        return self.task.w2

    def loss(self, weights, matrices):
        w2 = self._output_map(weights)
        r = w2 @ (matrices[0] @ self.z) - self.targets
        return float((r * r).sum()) / self.count

    def loss_gradient(self, weights, matrices):
        w2 = self._output_map(weights)
        mz = matrices[0] @ self.z
        r = w2 @ mz - self.targets
        grad_m = (2.0 / self.count) * (w2.T @ r @ self.z.T)
        if self.learn_output_map:
            grad_w = (2.0 / self.count) * (r @ mz.T)
            return grad_w.reshape(-1), [grad_m]
        return np.zeros(0), [grad_m]

    def smoothness_bound(self):
        """Largest curvature of the quadratic loss in M (fixed w2)."""
        s1 = np.linalg.norm(self.task.w2, 2)
        s2 = np.linalg.norm(self.z, 2)
        return 2.0 * s1 * s1 * s2 * s2 / self.count

    def uniform_matrix_loss(self):
        """Loss at the flat matrix (all entries 1/n); a scale reference."""
        n = self.task.n
        return self.loss(np.zeros(self.weight_dimension), [np.full((n, n), 1.0 / n)])


def shuffle_objective(task, dataset, learn_output_map=False):
    return ShuffleProblem(task, dataset, learn_output_map=learn_output_map)


def default_lam(problem):
    """Penalty weight tied to the loss scale at the flat matrix.

    The penalty subgradient has O(1) entries while the loss gradient
    scales with the data, so a fixed weight cannot serve every size;
    one percent of the flat-matrix loss lands inside the window where
    the relaxation still tracks the data but snaps to a vertex.
    """
    return 0.01 * problem.uniform_matrix_loss()


def default_config(problem, seed=0):
    """Steps at the inverse curvature bound, long enough to snap."""
    return OptimizerConfig(
        lam=default_lam(problem),
        learning_rate=1.0 / problem.smoothness_bound(),
        schedule="linear",
        total_iterations=2000,
        seed=seed,
        record_every=500,
    )


def recover_with_details(task, dataset, lam=None, cfg=None, restarts=8):
    """Best run over restarts; returns (permutation, OptimizationResult).

    Runs are ranked by rounded loss, then by final penalty, so among
    equally good roundings the one that actually reached a vertex wins.
    """
    problem = shuffle_objective(task, dataset)
    if cfg is None:
        cfg = default_config(problem)
    if lam is not None:
        cfg = replace(cfg, lam=lam)
    best = None
    best_key = (np.inf, np.inf)
    for k in range(restarts):
        result = run(problem, replace(cfg, seed=cfg.seed + k))
        perm = result.rounded[0]
        val = problem.loss(result.final_weights, [permutation_to_matrix(perm)])
        key = (val, result.final_penalty)
        if key < best_key:
            best, best_key = (perm, result), key
    return best


def recover_permutation(task, dataset, lam=None, cfg=None, restarts=8):
    """Best rounded permutation over restarts."""
    perm, _ = recover_with_details(task, dataset, lam=lam, cfg=cfg, restarts=restarts)
    return perm


def lambda_sweep(task, dataset, lambdas, cfg=None):
    """One optimizer run per lambda; rows mirror the sweep CSV columns.

    Failed runs keep their row with NaN losses so the sweep is never
    silently shorter than the request.
    """
    problem = shuffle_objective(task, dataset)
    if cfg is None:
        cfg = default_config(problem)
    rows = []
    for lam in lambdas:
        row = {"lambda": float(lam)}
        try:
            result = run(problem, replace(cfg, lam=float(lam)))
        except OptimizationError:
            row.update(
                relaxed_loss=float("nan"),
                rounded_loss=float("nan"),
                penalty=float("nan"),
                recovered=False,
            )
            rows.append(row)
            continue
        perm = result.rounded[0]
        row.update(
            relaxed_loss=problem.loss(result.final_weights, result.relaxed_matrices),
            rounded_loss=problem.loss(result.final_weights, [permutation_to_matrix(perm)]),
            penalty=result.final_penalty,
            recovered=bool(np.array_equal(perm, task.p_star)),
        )
        rows.append(row)
    return rows
