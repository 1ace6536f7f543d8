import numpy as np
import pytest

from permrelax.gradcheck import central_difference, max_relative_error


def test_quadratic_gradient():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((4, 4))
    a = a + a.T
    x = rng.standard_normal(4)
    num = central_difference(lambda v: float(v @ a @ v), x)
    np.testing.assert_allclose(num, 2.0 * a @ x, rtol=1e-6, atol=1e-8)


def test_does_not_mutate_input():
    x = np.array([1.0, 2.0, 3.0])
    saved = x.copy()
    central_difference(lambda v: float((v ** 2).sum()), x)
    assert np.array_equal(x, saved)


def test_preserves_shape():
    x = np.ones((2, 3))
    g = central_difference(lambda v: float(v.sum() ** 2), x)
    assert g.shape == (2, 3)
    np.testing.assert_allclose(g, 2.0 * 6.0 * np.ones((2, 3)), rtol=1e-7)


def test_step_size_is_used():
    # f(x) = x^3 has central difference x^2·3 + step^2, so the error
    # scales with step^2
    f = lambda v: float(v[0] ** 3)
    coarse = central_difference(f, np.array([1.0]), step=1e-2)[0]
    fine = central_difference(f, np.array([1.0]), step=1e-5)[0]
    assert abs(fine - 3.0) < abs(coarse - 3.0)


def test_max_relative_error_zero_for_equal():
    a = np.array([1.0, -2.0, 0.0])
    assert max_relative_error(a, a.copy()) == 0.0


def test_max_relative_error_uses_floor():
    # both tiny: difference 1e-9 over floor 1e-8 gives 0.1
    assert max_relative_error([0.0], [1e-9]) == pytest.approx(0.1)


def test_max_relative_error_scales_by_magnitude():
    assert max_relative_error([100.0], [101.0]) == pytest.approx(1.0 / 101.0)
