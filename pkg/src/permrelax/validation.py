"""Input validation helpers used by the numerical routines and estimators."""

import numpy as np

from .exceptions import DimensionMismatchError, NotAPermutationError


def as_square_matrix(m, name="matrix"):
    """Coerce to a float64 square 2-D array, rejecting NaN/Inf."""
    arr = np.asarray(m, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError(f"{name} must be square 2-D, got shape {arr.shape}")
    if arr.shape[0] < 1:
        raise ValueError(f"{name} must be at least 1x1")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite entries")
    return arr


def check_same_shape(a, b, names=("a", "b")):
    if a.shape != b.shape:
        raise DimensionMismatchError(
            f"{names[0]} has shape {a.shape} but {names[1]} has shape {b.shape}"
        )


def check_nonnegative(m, name="matrix"):
    if (np.asarray(m) < 0).any():
        raise ValueError(f"{name} must be entrywise nonnegative")


def as_permutation_map(p, n=None):
    """Coerce to an int64 index map and check it is a bijection."""
    arr = np.asarray(p)
    if arr.ndim != 1:
        raise NotAPermutationError(f"index map must be 1-D, got shape {arr.shape}")
    if arr.size == 0:
        raise NotAPermutationError("index map is empty")
    if not np.issubdtype(arr.dtype, np.integer):
        rounded = np.rint(arr)
        if not np.array_equal(rounded, arr):
            raise NotAPermutationError("index map entries are not integers")
        arr = rounded
    arr = arr.astype(np.int64)
    size = n if n is not None else arr.size
    if arr.size != size:
        raise NotAPermutationError(f"expected {size} indices, got {arr.size}")
    if arr.min() < 0 or arr.max() >= size:
        raise NotAPermutationError("index map entries out of range")
    if np.unique(arr).size != size:
        raise NotAPermutationError("index map repeats a column")
    return arr
