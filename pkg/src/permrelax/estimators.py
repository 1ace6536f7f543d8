"""Scikit-learn style wrappers around the matching and shuffle solvers.

Thin facades: all heavy lifting stays in the functional modules, these
classes only hold hyperparameters, run a fit, and expose the learned
permutation through the usual estimator conventions.
"""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin
from sklearn.utils.validation import check_is_fitted

from .core import permutation_to_matrix
from .qap import QapInstance, instance_objective, solve_penalized
from .shuffle import ShuffleTask, recover_with_details
from .validation import as_square_matrix


class GraphMatcher(BaseEstimator):
    """Learn the permutation aligning two square matrices.

    fit(a, b) minimizes the penalized matching objective and stores the
    rounded result; predict maps node indices through the learned
    permutation.  score is the negative objective, so bigger is better
    as estimator conventions expect.
    """

    def __init__(self, lam=None, cfg=None, restarts=8, kind="graph_matching"):
        self.lam = lam
        self.cfg = cfg
        self.restarts = restarts
        self.kind = kind

    def fit(self, a, b):
        inst = QapInstance(a, b, kind=self.kind)
        self.permutation_ = solve_penalized(
            inst, lam=self.lam, cfg=self.cfg, restarts=self.restarts
        )
        self.matrix_ = permutation_to_matrix(self.permutation_)
        self.objective_ = instance_objective(inst, self.matrix_)
        self.n_features_in_ = inst.n
        return self

    def predict(self, indices):
        check_is_fitted(self, "permutation_")
        indices = np.asarray(indices, dtype=np.int64)
        return self.permutation_[indices]

    def score(self, a, b):
        check_is_fitted(self, "permutation_")
        inst = QapInstance(a, b, kind=self.kind)
        return -instance_objective(inst, self.matrix_)


class ShuffleRegressor(BaseEstimator, RegressorMixin):
    """Linear model with a learned permutation between two fixed maps.

    The prediction is x -> post_map @ P @ pre_map @ x with P the learned
    permutation matrix; pre_map and post_map default to identities so
    the plain usage learns a pure reordering of the columns.
    """

    def __init__(self, pre_map=None, post_map=None, lam=None, cfg=None, restarts=8):
        self.pre_map = pre_map
        self.post_map = post_map
        self.lam = lam
        self.cfg = cfg
        self.restarts = restarts

    def _maps(self, n):
        pre = np.eye(n) if self.pre_map is None else as_square_matrix(self.pre_map, "pre_map")
        post = np.eye(n) if self.post_map is None else as_square_matrix(self.post_map, "post_map")
        return pre, post

    def fit(self, x, y):
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.shape != y.shape or x.ndim != 2:
            raise ValueError(f"x and y must share a 2d shape, got {x.shape} and {y.shape}")
        n = x.shape[1]
        pre, post = self._maps(n)
        task = ShuffleTask(
            n=n, w1=pre, w2=post, p_star=np.arange(n, dtype=np.int64),
            samples=x.shape[0], noise_std=0.0,
        )
        perm, result = recover_with_details(
            task, (x, y), lam=self.lam, cfg=self.cfg, restarts=self.restarts
        )
        self.permutation_ = perm
        self.matrix_ = permutation_to_matrix(perm)
        self.final_penalty_ = result.final_penalty
        self.n_features_in_ = n
        return self

    def predict(self, x):
        check_is_fitted(self, "permutation_")
        x = np.asarray(x, dtype=float)
        pre, post = self._maps(self.n_features_in_)
        return x @ (post @ self.matrix_ @ pre).T
