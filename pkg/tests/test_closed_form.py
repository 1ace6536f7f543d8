import numpy as np
import pytest

from permrelax.closed_form import (
    TwoLayerTeacher,
    birkhoff_line,
    example1_F,
    example2_F,
    example3_F,
    example3_loss,
    grid_local_minima,
    grid_minimize,
    line_penalty,
    mc_example3_loss,
    relu_cross_moment,
    teacher_square_term,
)
from permrelax.exceptions import DomainError

# frozen landscape values for the two-layer family (see the oracle
# scripts that produced them; the tests only check reproduction)
L1_ARGMIN = 0.5520276657241163
L1_MIN_VALUE = 0.1460652621037104
L1_AT_0 = 0.4240126606198036
L1_AT_1 = 0.5612008692365844
F1_LAM04_SECOND_ARGMIN = 0.8780293532936382
F1_LAM04_SECOND_VALUE = -1.0576289035936348
F1_LAM04_GLOBAL_VALUE = -1.1759873393801965
L0_ARGMIN_LEFT = 0.2905330465082761
L0_ARGMIN_RIGHT = 0.709466953491724
L0_AT_ENDPOINTS = 0.3404706790123455
SQUARE_TERM_M0 = 8113.0 / 5184.0


def test_birkhoff_line_endpoints_and_midpoint():
    q0 = birkhoff_line(0.0)
    q1 = birkhoff_line(1.0)
    assert np.array_equal(q0, np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.array_equal(q1, np.eye(2))
    assert np.array_equal(birkhoff_line(0.5), np.full((2, 2), 0.5))


def test_line_penalty_matches_matrix_penalty():
    # line_penalty is the sqrt shorthand; the matrix penalty restricted
    # to the line is 4 - 4 * line_penalty(q)
    from permrelax.penalty import penalty_value

    for q in np.linspace(0.0, 1.0, 21):
        assert line_penalty(q) == pytest.approx(
            np.sqrt(q * q + (1.0 - q) ** 2), abs=1e-12
        )
        assert penalty_value(birkhoff_line(q)) == pytest.approx(
            4.0 - 4.0 * line_penalty(q), abs=1e-12
        )


def test_example1_quadratic_landscape():
    # at lam=0 the curve is the quadratic 6q^2 - 8q + 2, vertex at 2/3
    x, v = grid_minimize(lambda q: example1_F(q, 0.0), 0.0, 1.0)
    assert x == pytest.approx(2.0 / 3.0, abs=1e-6)
    assert v == pytest.approx(-2.0 / 3.0, abs=1e-9)
    for q in np.linspace(0.0, 1.0, 9):
        assert example1_F(q, 0.0) == pytest.approx(
            6.0 * q * q - 8.0 * q + 2.0, abs=1e-12
        )


def test_example1_penalty_moves_minimum_to_vertex():
    x1, v1 = grid_minimize(lambda q: example1_F(q, 1.0), 0.0, 1.0)
    assert x1 == pytest.approx(1.0, abs=1e-9)
    assert v1 == pytest.approx(-4.0, abs=1e-12)
    x2, v2 = grid_minimize(lambda q: example1_F(q, 2.0), 0.0, 1.0)
    assert x2 == pytest.approx(1.0, abs=1e-9)
    assert v2 == pytest.approx(-8.0, abs=1e-12)


def test_example1_keeps_a_spurious_endpoint_at_high_weight():
    # at lam=2 the other endpoint is still a local minimum, just not
    # the global one
    minima = grid_local_minima(lambda q: example1_F(q, 2.0), 0.0, 1.0)
    xs = [x for x, _ in minima]
    vs = [v for _, v in minima]
    assert len(minima) == 2
    assert xs[0] == pytest.approx(0.0, abs=1e-7)
    assert xs[1] == pytest.approx(1.0, abs=1e-7)
    assert vs[0] == pytest.approx(-6.0, abs=1e-9)
    assert vs[1] == pytest.approx(-8.0, abs=1e-9)


def test_example2_small_weight_keeps_flat_minimum():
    x, v = grid_minimize(lambda q: example2_F(q, 1.0), 0.0, 1.0)
    assert x == pytest.approx(0.5, abs=1e-6)
    assert v == pytest.approx(2.0 - 2.0 * np.sqrt(2.0), abs=1e-12)


@pytest.mark.parametrize("lam", [1.8, 1.9])
def test_example2_interior_pair(lam):
    # for lam between sqrt(2) and 2 the minima split into a symmetric
    # interior pair with value exactly -lam^2
    minima = grid_local_minima(lambda q: example2_F(q, lam), 0.0, 1.0)
    interior = [(x, v) for x, v in minima if 1e-6 < x < 1.0 - 1e-6]
    assert len(interior) == 2
    (x1, v1), (x2, v2) = interior
    root = np.sqrt(lam * lam / 2.0 - 1.0)
    assert x1 == pytest.approx((1.0 - root) / 2.0, abs=1e-7)
    assert x2 == pytest.approx((1.0 + root) / 2.0, abs=1e-7)
    assert abs(x1 + x2 - 1.0) <= 1e-9
    assert v1 == pytest.approx(-lam * lam, abs=1e-9)
    assert v2 == pytest.approx(-lam * lam, abs=1e-9)
    # stationarity of the smooth piece at each minimizer
    for x in (x1, x2):
        h = 1e-6
        d = (example2_F(x + h, lam) - example2_F(x - h, lam)) / (2.0 * h)
        assert abs(d) <= 1e-3


def test_example2_endpoints_tie_at_lam_two():
    assert example2_F(0.0, 2.0) == pytest.approx(-4.0, abs=1e-12)
    assert example2_F(1.0, 2.0) == pytest.approx(-4.0, abs=1e-12)
    assert example2_F(0.0, 2.0) == pytest.approx(example2_F(1.0, 2.0), abs=1e-12)


def test_relu_cross_moment_known_values():
    assert relu_cross_moment(1.0, 0.0, 1.0, 0.0) == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert relu_cross_moment(1.0, 1.0, 1.0, 1.0) == pytest.approx(4.0 / 3.0, abs=1e-12)


def test_relu_cross_moment_symmetry():
    rng = np.random.default_rng(4)
    for _ in range(20):
        q, r, s, t = rng.uniform(0.05, 1.5, size=4)
        a = relu_cross_moment(q, r, s, t)
        b = relu_cross_moment(s, t, q, r)
        assert a == pytest.approx(b, abs=1e-12)


def test_relu_cross_moment_branch_continuity():
    # the closed form splits on q < r and t < s; crossing either seam
    # must not jump
    eps = 1e-9
    on = relu_cross_moment(0.5, 0.5, 0.8, 0.2)
    assert abs(relu_cross_moment(0.5 - eps, 0.5, 0.8, 0.2) - on) <= 1e-6
    assert abs(relu_cross_moment(0.5 + eps, 0.5, 0.8, 0.2) - on) <= 1e-6
    on2 = relu_cross_moment(0.8, 0.2, 0.5, 0.5)
    assert abs(relu_cross_moment(0.8, 0.2, 0.5, 0.5 - eps) - on2) <= 1e-6
    assert abs(relu_cross_moment(0.8, 0.2, 0.5, 0.5 + eps) - on2) <= 1e-6


def test_relu_cross_moment_against_monte_carlo():
    rng = np.random.default_rng(7)
    pts = rng.uniform(-1.0, 1.0, size=(200_000, 2))
    for q, r, s, t in [(1.0, 0.0, 1.0, 0.0), (0.8, 0.3, 0.5, 0.2), (1.3, 0.4, 0.9, 0.6)]:
        samples = np.maximum(q * pts[:, 0] + r * pts[:, 1], 0.0) * np.maximum(
            s * pts[:, 0] + t * pts[:, 1], 0.0
        )
        # plain integral over the square: scale the mean by the area
        est = 4.0 * samples.mean()
        se = 4.0 * samples.std(ddof=1) / np.sqrt(pts.shape[0])
        exact = relu_cross_moment(q, r, s, t)
        assert abs(est - exact) <= 4.0 * se + 1e-12


def test_teacher_square_term_constant():
    teacher = TwoLayerTeacher(m=0.0)
    assert teacher_square_term(teacher) == pytest.approx(SQUARE_TERM_M0, abs=1e-12)
    # the constant is specific to m=0; shifting the teacher moves it
    assert teacher_square_term(TwoLayerTeacher(m=1.0)) != pytest.approx(
        SQUARE_TERM_M0, abs=1e-3
    )


def test_example3_loss_frozen_landscape():
    teacher = TwoLayerTeacher(m=1.0)
    x, v = grid_minimize(lambda p: example3_loss(p, teacher), 0.0, 1.0)
    assert x == pytest.approx(L1_ARGMIN, abs=1e-7)
    assert v == pytest.approx(L1_MIN_VALUE, abs=1e-12)
    assert example3_loss(0.0, teacher) == pytest.approx(L1_AT_0, abs=1e-12)
    assert example3_loss(1.0, teacher) == pytest.approx(L1_AT_1, abs=1e-12)
    # the interior argmin sits past 1/2, so naive rounding picks p=1
    # even though the endpoint losses say p=0 is the better corner
    assert L1_ARGMIN > 0.5
    assert L1_AT_0 < L1_AT_1


def test_example3_loss_symmetric_at_m_zero():
    teacher = TwoLayerTeacher(m=0.0)
    minima = grid_local_minima(lambda p: example3_loss(p, teacher), 0.0, 1.0)
    interior = [(x, v) for x, v in minima if 1e-6 < x < 1.0 - 1e-6]
    assert len(interior) == 2
    (x1, v1), (x2, v2) = interior
    assert x1 == pytest.approx(L0_ARGMIN_LEFT, abs=1e-7)
    assert x2 == pytest.approx(L0_ARGMIN_RIGHT, abs=1e-7)
    assert abs(x1 + x2 - 1.0) <= 1e-7
    assert v1 == pytest.approx(v2, abs=1e-12)
    assert example3_loss(0.0, teacher) == pytest.approx(L0_AT_ENDPOINTS, abs=1e-12)
    assert example3_loss(1.0, teacher) == pytest.approx(L0_AT_ENDPOINTS, abs=1e-12)


def test_example3_F_zero_weight_matches_loss():
    teacher = TwoLayerTeacher(m=1.0)
    for p in np.linspace(0.0, 1.0, 11):
        assert example3_F(p, teacher, 0.0) == pytest.approx(
            example3_loss(p, teacher), abs=1e-12
        )


def test_example3_F_penalty_selects_correct_endpoint():
    teacher = TwoLayerTeacher(m=1.0)
    x, v = grid_minimize(lambda p: example3_F(p, teacher, 0.4), 0.0, 1.0)
    assert x == pytest.approx(0.0, abs=1e-9)
    assert v == pytest.approx(F1_LAM04_GLOBAL_VALUE, abs=1e-12)
    minima = grid_local_minima(lambda p: example3_F(p, teacher, 0.4), 0.0, 1.0)
    others = [(a, b) for a, b in minima if a > 1e-6]
    assert len(others) == 1
    assert others[0][0] == pytest.approx(F1_LAM04_SECOND_ARGMIN, abs=1e-7)
    assert others[0][1] == pytest.approx(F1_LAM04_SECOND_VALUE, abs=1e-12)


def test_domain_errors():
    teacher = TwoLayerTeacher(m=0.0)
    with pytest.raises(DomainError):
        example3_loss(-0.1, teacher)
    with pytest.raises(DomainError):
        example3_loss(1.1, teacher)
    with pytest.raises(DomainError):
        example1_F(1.5, 0.0)
    with pytest.raises(DomainError):
        example3_loss(0.5, TwoLayerTeacher(m=0.0, input_law="gaussian"))


def test_grid_minimize_parabola():
    x, v = grid_minimize(lambda t: (t - 0.3) ** 2 + 1.0, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-9)
    assert v == pytest.approx(1.0, abs=1e-12)


def test_grid_minimize_monotone_returns_endpoint():
    x, v = grid_minimize(lambda t: t, 0.0, 1.0)
    assert x == 0.0
    assert v == 0.0


def test_grid_minimize_rejects_tiny_grids():
    with pytest.raises(ValueError):
        grid_minimize(lambda t: t, 0.0, 1.0, points=2)


def test_grid_local_minima_double_well():
    f = lambda t: (t - 0.2) ** 2 * (t - 0.8) ** 2
    minima = grid_local_minima(f, 0.0, 1.0)
    xs = [x for x, _ in minima]
    assert len(xs) == 2
    assert xs[0] == pytest.approx(0.2, abs=1e-7)
    assert xs[1] == pytest.approx(0.8, abs=1e-7)


def test_mc_example3_loss_batches_and_tracks_exact():
    teacher = TwoLayerTeacher(m=0.0)
    ps = np.array([0.0, 0.5, 1.0])
    means, ses = mc_example3_loss(teacher, ps, samples=200_000, seed=3)
    assert means.shape == (3,)
    assert ses.shape == (3,)
    for p, mean, se in zip(ps, means, ses):
        exact = example3_loss(float(p), teacher)
        assert abs(mean - exact) <= 4.0 * se + 1e-12
