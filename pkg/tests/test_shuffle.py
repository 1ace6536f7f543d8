import numpy as np
import pytest
from dataclasses import replace

import permrelax.shuffle
from permrelax.core import permutation_to_matrix
from permrelax.exceptions import OptimizationError
from permrelax.gradcheck import central_difference, max_relative_error
from permrelax.shuffle import (
    ShuffleTask,
    default_config,
    default_lam,
    generate_task,
    lambda_sweep,
    recover_permutation,
    recover_with_details,
    shuffle_objective,
)


def test_generate_task_shapes_and_determinism():
    task, (x, y) = generate_task(5, 60, 0.0, 3)
    assert task.n == 5
    assert x.shape == (60, 5)
    assert y.shape == (60, 5)
    assert sorted(task.p_star) == list(range(5))
    task2, (x2, y2) = generate_task(5, 60, 0.0, 3)
    assert np.array_equal(x, x2)
    assert np.array_equal(y, y2)
    assert np.array_equal(task.p_star, task2.p_star)


def test_generate_task_forward_model_is_exact_without_noise():
    task, (x, y) = generate_task(4, 40, 0.0, 0)
    p = permutation_to_matrix(task.p_star)
    manual = x @ task.w1.T @ p.T @ task.w2.T
    assert np.abs(y - manual).max() == 0.0


def test_generate_task_noise_perturbs_targets():
    _, (x0, y0) = generate_task(4, 40, 0.0, 5)
    _, (x1, y1) = generate_task(4, 40, 0.5, 5)
    assert np.array_equal(x0, x1)
    assert np.abs(y1 - y0).max() > 0.01


def test_task_validation():
    w = np.eye(4)
    p = np.arange(4)
    with pytest.raises(ValueError):
        ShuffleTask(n=1, w1=np.eye(1), w2=np.eye(1), p_star=np.zeros(1, dtype=int),
                    samples=20, noise_std=0.0)
    with pytest.raises(ValueError):
        ShuffleTask(n=4, w1=w, w2=w, p_star=p, samples=39, noise_std=0.0)
    with pytest.raises(ValueError):
        ShuffleTask(n=4, w1=w, w2=w, p_star=p, samples=40, noise_std=-0.1)


def test_loss_vanishes_at_true_permutation():
    task, dataset = generate_task(4, 40, 0.0, 1)
    problem = shuffle_objective(task, dataset)
    m = permutation_to_matrix(task.p_star)
    assert problem.loss(np.zeros(0), [m]) <= 1e-24
    assert problem.uniform_matrix_loss() > 0.01


def test_matrix_gradient_matches_finite_differences():
    task, dataset = generate_task(4, 40, 0.0, 2)
    problem = shuffle_objective(task, dataset)
    rng = np.random.default_rng(0)
    for _ in range(5):
        m = rng.uniform(0.1, 0.9, size=(4, 4))
        _, gms = problem.loss_gradient(np.zeros(0), [m])
        num = central_difference(lambda t: problem.loss(np.zeros(0), [t]), m)
        assert max_relative_error(gms[0], num) <= 1e-5


def test_learned_output_map_gradients():
    task, dataset = generate_task(3, 30, 0.0, 4)
    problem = shuffle_objective(task, dataset, learn_output_map=True)
    assert problem.weight_dimension == 9
    rng = np.random.default_rng(1)
    w = rng.normal(size=9)
    m = rng.uniform(0.1, 0.9, size=(3, 3))
    gw, gms = problem.loss_gradient(w, [m])
    num_w = central_difference(lambda t: problem.loss(t, [m]), w)
    assert max_relative_error(gw, num_w) <= 1e-5
    num_m = central_difference(lambda t: problem.loss(w, [t]), m)
    assert max_relative_error(gms[0], num_m) <= 1e-5


def test_smoothness_bound_dominates_loss_curvature():
    # quadratic upper bound: loss(m+d) <= loss(m) + <g, d> + (L/2)|d|^2
    task, dataset = generate_task(4, 40, 0.0, 6)
    problem = shuffle_objective(task, dataset)
    bound = problem.smoothness_bound()
    rng = np.random.default_rng(2)
    for _ in range(20):
        m = rng.uniform(size=(4, 4))
        d = rng.normal(size=(4, 4)) * 0.1
        f0 = problem.loss(np.zeros(0), [m])
        f1 = problem.loss(np.zeros(0), [m + d])
        _, gms = problem.loss_gradient(np.zeros(0), [m])
        linear = f0 + (gms[0] * d).sum()
        assert f1 <= linear + 0.5 * bound * (d * d).sum() + 1e-12


def test_default_lam_tracks_loss_scale():
    task, dataset = generate_task(4, 40, 0.0, 0)
    problem = shuffle_objective(task, dataset)
    assert default_lam(problem) == pytest.approx(
        0.01 * problem.uniform_matrix_loss(), abs=1e-15
    )
    cfg = default_config(problem, seed=3)
    assert cfg.seed == 3
    assert cfg.learning_rate == pytest.approx(1.0 / problem.smoothness_bound())


def test_recover_with_details_noise_free():
    task, dataset = generate_task(4, 60, 0.0, 7)
    perm, result = recover_with_details(task, dataset)
    assert np.array_equal(perm, task.p_star)
    assert result.final_penalty == 0.0
    assert recover_permutation(task, dataset).tolist() == perm.tolist()


def test_lambda_sweep_rows_and_penalty_ordering():
    task, dataset = generate_task(4, 40, 0.0, 2)
    rows = lambda_sweep(task, dataset, [0.0, 1e-3])
    assert len(rows) == 2
    for row in rows:
        assert set(row) == {"lambda", "relaxed_loss", "rounded_loss", "penalty", "recovered"}
        assert row["recovered"] is True
    assert rows[0]["lambda"] == 0.0
    assert rows[0]["penalty"] > rows[1]["penalty"]


def test_lambda_sweep_keeps_failed_rows(monkeypatch):
    task, dataset = generate_task(4, 40, 0.0, 2)

    def always_fails(problem, cfg):
        raise OptimizationError("forced", [])

    monkeypatch.setattr(permrelax.shuffle, "run", always_fails)
    rows = lambda_sweep(task, dataset, [0.0, 1e-3])
    assert len(rows) == 2
    for row in rows:
        assert np.isnan(row["relaxed_loss"])
        assert np.isnan(row["rounded_loss"])
        assert np.isnan(row["penalty"])
        assert row["recovered"] is False
