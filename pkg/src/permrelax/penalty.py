"""The row/column l1-l2 penalty that vanishes exactly on permutations.

For a matrix M the penalty is

    P(M) = sum_i [ ||row_i||_1 - ||row_i||_2 ] + sum_j [ ||col_j||_1 - ||col_j||_2 ]

Each bracket is nonnegative and zero iff the vector has at most one
nonzero entry, so on the doubly stochastic polytope P(M) = 0 exactly
when M is a permutation matrix.  Unlike the entropic or quadratic
alternatives the penalty is Lipschitz, and a small value certifies that
M sits within O(P(M)) of an exact permutation.
"""

from dataclasses import dataclass

import numpy as np

from .validation import as_square_matrix

_GUARD_CEILING = 1e-6


@dataclass(frozen=True)
class PenaltyConfig:
    """Penalty weight and the norm guard for the subgradient.

    `norm_guard` switches off the 1/||.||_2 terms for rows or columns
    whose l2 norm falls below it, keeping the subgradient finite near
    the zero matrix.
    """

    lam: float = 1e-3
    norm_guard: float = 1e-12

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError(f"lam must be >= 0, got {self.lam}")
        if not 0 < self.norm_guard <= _GUARD_CEILING:
            raise ValueError(
                f"norm_guard must lie in (0, {_GUARD_CEILING}], got {self.norm_guard}"
            )


def penalty_value(m):
    """Total l1-l2 gap over all rows and columns of `m`."""
    m = as_square_matrix(m)
    am = np.abs(m)
    row_l2 = np.sqrt((m * m).sum(axis=1))
    col_l2 = np.sqrt((m * m).sum(axis=0))
    return float((am.sum(axis=1) - row_l2).sum() + (am.sum(axis=0) - col_l2).sum())


def penalty_subgradient(m, cfg=None):
    """A subgradient of penalty_value at `m`.

    Entry (i, j) is 2*sign(m_ij) - m_ij/||row_i||_2 - m_ij/||col_j||_2,
    with sign(0) = 0 and with either norm term dropped when that norm is
    below cfg.norm_guard.
    """
    if cfg is None:
        cfg = PenaltyConfig()
    m = as_square_matrix(m)
    row_l2 = np.sqrt((m * m).sum(axis=1))
    col_l2 = np.sqrt((m * m).sum(axis=0))
    inv_row = np.where(row_l2 > cfg.norm_guard, 1.0 / np.where(row_l2 > 0, row_l2, 1.0), 0.0)
    inv_col = np.where(col_l2 > cfg.norm_guard, 1.0 / np.where(col_l2 > 0, col_l2, 1.0), 0.0)
    return 2.0 * np.sign(m) - m * inv_row[:, None] - m * inv_col[None, :]
