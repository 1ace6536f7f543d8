"""Matrix and permutation primitives shared by every other module.

Square matrices are plain float64 numpy arrays.  Permutations are int64
index maps where ``map[i]`` names the column holding the 1 in row ``i``
of the corresponding 0/1 matrix.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import NotAPermutationError
from .validation import as_permutation_map, as_square_matrix, check_same_shape


def permutation_to_matrix(p):
    """Build the 0/1 matrix with a 1 at (i, p[i]) for each row i."""
    p = as_permutation_map(p)
    n = p.size
    m = np.zeros((n, n))
    m[np.arange(n), p] = 1.0
    return m


def matrix_to_permutation(m, atol=1e-9):
    """Read an index map off a (numerically) exact permutation matrix.

    Every entry must sit within `atol` of 0 or 1, with exactly one 1 per
    row and per column; otherwise NotAPermutationError is raised.
    """
    m = as_square_matrix(m)
    near_one = np.abs(m - 1.0) <= atol
    near_zero = np.abs(m) <= atol
    if not (near_one | near_zero).all():
        raise NotAPermutationError(f"entries stray from {{0,1}} by more than {atol}")
    if not (near_one.sum(axis=1) == 1).all():
        raise NotAPermutationError("some row does not contain exactly one 1")
    if not (near_one.sum(axis=0) == 1).all():
        raise NotAPermutationError("some column does not contain exactly one 1")
    return np.argmax(near_one, axis=1).astype(np.int64)


def frobenius_distance(a, b):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    check_same_shape(a, b)
    return float(np.linalg.norm(a - b))


def random_permutation(n, rng):
    """Uniform random index map drawn from `rng`."""
    return rng.permutation(n).astype(np.int64)


@dataclass
class TraceRecord:
    """One logged optimization iteration.

    `rounding_gap` is loss(rounded) - loss(relaxed) at that iterate;
    `argmax_matches_lap` records whether plain row-argmax rounding
    succeeded and agreed with the assignment-based rounding (None when
    not evaluated).
    """

    iteration: int
    loss: float
    penalty: float
    constraint_violation: float
    rounding_gap: float
    argmax_matches_lap: bool | None = None


def write_matrix_text(path, m):
    """Write a matrix as: first line n, then n whitespace-separated rows."""
    m = as_square_matrix(m)
    lines = [str(m.shape[0])]
    for row in m:
        lines.append(" ".join(repr(float(v)) for v in row))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def read_matrix_text(path):
    with open(path) as fh:
        tokens = [line.strip() for line in fh if line.strip()]
    if not tokens:
        raise ValueError(f"{path}: empty matrix file")
    n = int(tokens[0])
    if len(tokens) != n + 1:
        raise ValueError(f"{path}: expected {n} rows, found {len(tokens) - 1}")
    rows = [[float(v) for v in line.split()] for line in tokens[1:]]
    m = np.array(rows, dtype=float)
    if m.shape != (n, n):
        raise ValueError(f"{path}: rows do not form an {n}x{n} matrix")
    return as_square_matrix(m)
