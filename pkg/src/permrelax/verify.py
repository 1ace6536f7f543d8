"""Named property suites behind the `verify` command.

Each suite returns a list of (check name, passed, detail) tuples so the
CLI can print one line per property and exit nonzero when anything
fails.  The suites are smaller cousins of the acceptance tests: quick
confidence checks, not exhaustive sweeps.
"""

import numpy as np

from .core import permutation_to_matrix, random_permutation
from .exceptions import CollisionError, NoConvergenceError, ZeroSumError
from .gradcheck import central_difference, max_relative_error
from .penalty import penalty_subgradient, penalty_value
from .projection import iterate_to_tolerance, ras_pass, threshold_nonnegative
from .qap import QapInstance, gm_gradient, gm_objective, qap_trace_gradient, qap_trace_objective
from .rounding import nearest_permutation_lap, round_argmax
from .shuffle import generate_task, shuffle_objective

SUITES = ("theorem1", "theorem2", "gradients", "sinkhorn", "rounding")


def perturbed_permutation(n, eps, rng):
    """P* + eps*E with unit-Frobenius E, pushed back to the constraint set.

    Thresholding plus one scaling pass keeps the matrix within O(eps)
    of P*, which is all the stability property needs.
    """
    p_star = random_permutation(n, rng)
    e = rng.standard_normal((n, n))
    e = e / np.linalg.norm(e)
    m = permutation_to_matrix(p_star) + eps * e
    return p_star, ras_pass(threshold_nonnegative(m))


def suite_theorem1(trials=50, seed=0):
    rng = np.random.default_rng(seed)
    checks = []
    worst = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 65))
        p = permutation_to_matrix(random_permutation(n, rng))
        worst = max(worst, penalty_value(p))
    checks.append(("permutation penalty is zero", worst <= 1e-12, f"max {worst:.2e}"))
    smallest = np.inf
    for _ in range(trials):
        n = int(rng.integers(2, 33))
        p1 = random_permutation(n, rng)
        p2 = random_permutation(n, rng)
        while np.array_equal(p1, p2):
            p2 = random_permutation(n, rng)
        theta = float(rng.uniform(0.05, 0.95))
        m = theta * permutation_to_matrix(p1) + (1 - theta) * permutation_to_matrix(p2)
        smallest = min(smallest, penalty_value(m))
    checks.append(("strict convex combination penalty is positive",
                   smallest > 1e-6, f"min {smallest:.2e}"))
    flat_gap = max(
        abs(penalty_value(np.full((n, n), 1.0 / n)) - 2 * n * (1 - 1 / np.sqrt(n)))
        for n in (2, 4, 9, 16)
    )
    checks.append(("flat matrix matches closed form 2n(1-1/sqrt(n))",
                   flat_gap <= 1e-9, f"max gap {flat_gap:.2e}"))
    return checks


def suite_theorem2(pairs=20, seed=0):
    rng = np.random.default_rng(seed)
    checks = []
    for n in (4, 8, 16):
        ratio = 0.0
        recovered = True
        for _ in range(pairs):
            for eps in (1e-3, 1e-2, 1e-1):
                p_star, m = perturbed_permutation(n, eps, rng)
                ratio = max(ratio, penalty_value(m) / eps)
                if not np.array_equal(nearest_permutation_lap(m), p_star):
                    recovered = False
        ok = recovered and ratio <= 4.0 * n
        checks.append((f"n={n}: penalty O(eps) and rounding recovers P*",
                       ok, f"C={ratio:.3f}, recovered={recovered}"))
    return checks


def suite_gradients(points=20, seed=0):
    rng = np.random.default_rng(seed)
    checks = []

    worst = 0.0
    for _ in range(points):
        n = int(rng.integers(3, 8))
        m = rng.uniform(0.1, 1.0, (n, n))
        numeric = central_difference(lambda x: penalty_value(x), m)
        worst = max(worst, max_relative_error(penalty_subgradient(m), numeric))
    checks.append(("penalty subgradient vs central differences",
                   worst <= 1e-5, f"max rel err {worst:.2e}"))

    worst = 0.0
    for _ in range(points):
        n = int(rng.integers(3, 8))
        inst = QapInstance(rng.uniform(0, 1, (n, n)), rng.uniform(0, 1, (n, n)))
        q = rng.uniform(0.1, 1.0, (n, n))
        numeric = central_difference(lambda x: gm_objective(inst, x), q)
        worst = max(worst, max_relative_error(gm_gradient(inst, q), numeric))
    checks.append(("matching gradient vs central differences",
                   worst <= 1e-5, f"max rel err {worst:.2e}"))

    worst = 0.0
    for _ in range(points):
        n = int(rng.integers(3, 8))
        inst = QapInstance(rng.uniform(0, 1, (n, n)), rng.uniform(0, 1, (n, n)),
                           kind="general_qap")
        q = rng.uniform(0.1, 1.0, (n, n))
        numeric = central_difference(lambda x: qap_trace_objective(inst, x), q)
        worst = max(worst, max_relative_error(qap_trace_gradient(inst, q), numeric))
    checks.append(("trace objective gradient vs central differences",
                   worst <= 1e-5, f"max rel err {worst:.2e}"))

    task, dataset = generate_task(4, 60, 0.0, seed=seed)
    problem = shuffle_objective(task, dataset)
    worst = 0.0
    for _ in range(points):
        m = rng.uniform(0.1, 1.0, (4, 4))
        numeric = central_difference(lambda x: problem.loss(np.zeros(0), [x]), m)
        analytic = problem.loss_gradient(np.zeros(0), [m])[1][0]
        worst = max(worst, max_relative_error(analytic, numeric))
    checks.append(("shuffle loss gradient vs central differences",
                   worst <= 1e-5, f"max rel err {worst:.2e}"))
    return checks


def suite_sinkhorn(trials=50, seed=0):
    rng = np.random.default_rng(seed)
    checks = []
    row_gap = 0.0
    for _ in range(trials):
        n = int(rng.integers(2, 61))
        m = ras_pass(rng.uniform(0.1, 2.0, (n, n)))
        row_gap = max(row_gap, float(np.abs(m.sum(axis=1) - 1.0).max()))
    checks.append(("single pass makes row sums exactly one",
                   row_gap <= 1e-12, f"max gap {row_gap:.2e}"))

    converged = True
    detail = ""
    for _ in range(trials):
        n = int(rng.integers(2, 61))
        try:
            iterate_to_tolerance(rng.uniform(0.05, 1.0, (n, n)))
        except NoConvergenceError as exc:
            converged = False
            detail = f"stalled at violation {exc.violation:.2e}"
            break
    checks.append(("strictly positive matrices reach 1e-8", converged, detail or "all converged"))

    target = np.array([[2.0 / 3.0, 1.0 / 3.0], [0.4, 0.6]])
    got = ras_pass(np.array([[1.0, 1.0], [1.0, 3.0]]))
    gap = float(np.abs(got - target).max())
    checks.append(("worked 2x2 scaling example", gap <= 1e-12, f"gap {gap:.2e}"))

    try:
        ras_pass(np.array([[1.0, 0.0], [1.0, 0.0]]))
        zero_ok = False
    except ZeroSumError:
        zero_ok = True
    checks.append(("zero column raises", zero_ok, ""))
    return checks


def suite_rounding(trials=50, seed=0):
    rng = np.random.default_rng(seed)
    checks = []
    agree = True
    for _ in range(trials):
        n = int(rng.integers(2, 17))
        p_star, m = perturbed_permutation(n, 1e-2, rng)
        lap = nearest_permutation_lap(m)
        agree = agree and np.array_equal(lap, p_star) and np.array_equal(round_argmax(m), p_star)
    checks.append(("dominant-entry regime: argmax, assignment, truth all agree",
                   agree, ""))

    lap = nearest_permutation_lap(np.full((3, 3), 1.0 / 3.0))
    checks.append(("uniform tie resolves to lexicographic identity",
                   np.array_equal(lap, np.arange(3)), f"got {lap.tolist()}"))

    try:
        round_argmax(np.array([[0.9, 0.1], [0.8, 0.2]]))
        collided = False
    except CollisionError as exc:
        collided = exc.col == 0
    checks.append(("argmax collision is detected with its column", collided, ""))
    return checks


def run_suite(name, seed=0):
    if name == "theorem1":
        return suite_theorem1(seed=seed)
    if name == "theorem2":
        return suite_theorem2(seed=seed)
    if name == "gradients":
        return suite_gradients(seed=seed)
    if name == "sinkhorn":
        return suite_sinkhorn(seed=seed)
    if name == "rounding":
        return suite_rounding(seed=seed)
    raise ValueError(f"unknown suite {name!r}; choose from {SUITES}")
