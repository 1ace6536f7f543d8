"""Approximate projection onto the doubly stochastic polytope.

The workhorse is a single RAS pass: normalize columns to sum 1, then
rows.  After the row step every row sums to exactly one and columns are
approximately normalized; alternating passes converge for strictly
positive matrices.  A hard nonnegativity threshold runs before the
scaling so the optimizer can take unconstrained gradient steps.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import NoConvergenceError, ZeroSumError
from .validation import as_square_matrix


@dataclass(frozen=True)
class ProjectionConfig:
    ras_passes: int = 1
    epsilon: float = 1e-8
    max_iters: int = 10000

    def __post_init__(self):
        if self.ras_passes < 1:
            raise ValueError(f"ras_passes must be >= 1, got {self.ras_passes}")
        if self.epsilon <= 0:
            raise ValueError(f"epsilon must be > 0, got {self.epsilon}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")


def threshold_nonnegative(m):
    """Clamp negative entries to zero."""
    m = as_square_matrix(m)
    return np.maximum(m, 0.0)


def ras_pass(m):
    """One column-then-row rescaling sweep.

    Raises ZeroSumError if any column (before) or row (after the column
    step) sums to exactly zero, since that line can never be rescaled to
    sum 1 by positive diagonal factors.
    """
    m = as_square_matrix(m)
    col_sums = m.sum(axis=0)
    for j, s in enumerate(col_sums):
        if s == 0.0:
            raise ZeroSumError("column", j)
    m = m / col_sums[None, :]
    row_sums = m.sum(axis=1)
    for i, s in enumerate(row_sums):
        if s == 0.0:
            raise ZeroSumError("row", i)
    return m / row_sums[:, None]


def constraint_violation(m):
    """max deviation of any row or column sum from 1, plus any negative mass.

    Zero exactly on the doubly stochastic polytope.
    """
    m = as_square_matrix(m)
    row_gap = np.abs(m.sum(axis=1) - 1.0).max()
    col_gap = np.abs(m.sum(axis=0) - 1.0).max()
    neg = max(0.0, float(-m.min()))
    return float(max(row_gap, col_gap)) + neg


def iterate_to_tolerance(m, cfg=None):
    """Run RAS passes until constraint_violation <= cfg.epsilon.

    Returns the balanced matrix.  Raises NoConvergenceError carrying the
    best iterate seen if max_iters sweeps are not enough.
    """
    if cfg is None:
        cfg = ProjectionConfig()
    m = threshold_nonnegative(m)
    best = m
    best_violation = constraint_violation(m)
    for it in range(cfg.max_iters):
        if best_violation <= cfg.epsilon:
            return best
        m = ras_pass(m)
        v = constraint_violation(m)
        if v < best_violation:
            best, best_violation = m, v
    if best_violation <= cfg.epsilon:
        return best
    raise NoConvergenceError(best, cfg.max_iters, best_violation)
