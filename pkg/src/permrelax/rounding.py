"""Snap a relaxed doubly stochastic matrix to an exact permutation.

Two flavours:

  * nearest_permutation_lap solves the assignment problem that
    maximizes the total mass picked up, i.e. the permutation closest to
    M in Frobenius distance.  Ties are broken toward the
    lexicographically smallest permutation array, decided in exact
    rational arithmetic so the result is platform independent.

  * round_argmax takes each row's argmax and refuses (CollisionError)
    when two rows claim the same column.  Cheaper, but only sound when
    the matrix is already close to a vertex.
"""

from fractions import Fraction

import numpy as np
from scipy.optimize import linear_sum_assignment

from .exceptions import CollisionError
from .validation import as_square_matrix

_PRUNE_MARGIN = 1e-9


def _exact_total(m, rows, cols):
    return sum(Fraction(float(m[r, c])) for r, c in zip(rows, cols))


def nearest_permutation_lap(m):
    """Permutation map maximizing sum_i m[i, pi(i)], smallest tie first.

    Returns an int64 array pi with pi[i] the column assigned to row i.
    """
    m = as_square_matrix(m)
    n = m.shape[0]
    rows, cols = linear_sum_assignment(m, maximize=True)
    target = _exact_total(m, rows, cols)
    incumbent = np.asarray(cols).copy()

    perm = np.empty(n, dtype=np.int64)
    available = list(range(n))
    prefix = Fraction(0)
    for i in range(n):
        # Optimistic completion bound per remaining row: best and
        # runner-up over the available columns, so excluding one
        # candidate column stays O(1).
        rest = np.arange(i + 1, n)
        if rest.size:
            sub = m[np.ix_(rest, available)]
            order = np.argsort(sub, axis=1)
            top_idx = order[:, -1]
            top_val = sub[np.arange(rest.size), top_idx]
            second_val = (
                sub[np.arange(rest.size), order[:, -2]] if len(available) > 1 else np.zeros(rest.size)
            )
            top_col = np.asarray(available)[top_idx]
        chosen = None
        for c in sorted(available):
            if c == incumbent[i]:
                chosen = c
                break
            if rest.size:
                bound = float(np.where(top_col == c, second_val, top_val).sum())
            else:
                bound = 0.0
            if float(prefix) + m[i, c] + bound < float(target) - _PRUNE_MARGIN:
                continue
            remaining = [a for a in available if a != c]
            if rest.size:
                sub_rows, sub_cols = linear_sum_assignment(m[np.ix_(rest, remaining)], maximize=True)
                full_cols = [remaining[j] for j in sub_cols]
                total = prefix + Fraction(float(m[i, c])) + _exact_total(m, rest, full_cols)
            else:
                full_cols = []
                total = prefix + Fraction(float(m[i, c]))
            if total == target:
                chosen = c
                incumbent[i] = c
                incumbent[i + 1 :] = full_cols
                break
        perm[i] = chosen
        prefix += Fraction(float(m[i, chosen]))
        available.remove(chosen)
    return perm


def round_argmax(m):
    """Row-wise argmax rounding; raises CollisionError on a clash."""
    m = as_square_matrix(m)
    picks = np.argmax(m, axis=1)
    counts = np.bincount(picks, minlength=m.shape[0])
    clashes = np.nonzero(counts > 1)[0]
    if clashes.size:
        col = int(clashes[0])
        rows = tuple(int(r) for r in np.nonzero(picks == col)[0])
        raise CollisionError(rows, col)
    return picks.astype(np.int64)
