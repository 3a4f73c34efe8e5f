"""The Levenberg-Marquardt engine on known problems."""

import numpy as np
import pytest

from bvodmr.leastsq import covariance_diagonal, least_squares


def test_linear_problem_exact():
    # y = 2x + 1 observed exactly; LM must land on the analytic solution
    x = np.linspace(0.0, 5.0, 20)
    y = 2.0 * x + 1.0

    res = least_squares(lambda p: p[0] * x + p[1] - y, np.array([0.5, 0.0]))
    assert res.converged
    assert res.x == pytest.approx([2.0, 1.0], abs=1e-8)
    assert res.cost < 1e-16


def test_rosenbrock_style_valley():
    def residual(p):
        return np.array([10.0 * (p[1] - p[0] ** 2), 1.0 - p[0]])

    res = least_squares(residual, np.array([-1.2, 1.0]), max_iter=200)
    assert res.converged
    assert res.x == pytest.approx([1.0, 1.0], abs=1e-6)


def test_bounds_are_respected():
    # unconstrained optimum at p = 3, box caps it at 2
    res = least_squares(
        lambda p: np.array([p[0] - 3.0]),
        np.array([0.0]),
        bounds=(np.array([-2.0]), np.array([2.0])),
    )
    assert res.x[0] <= 2.0 + 1e-12
    assert res.x[0] == pytest.approx(2.0, abs=1e-9)


def test_deterministic():
    x = np.linspace(0.0, 1.0, 30)
    y = np.exp(-3.0 * x) + 0.2

    def residual(p):
        return np.exp(-p[0] * x) + p[1] - y

    a = least_squares(residual, np.array([1.0, 0.0]))
    b = least_squares(residual, np.array([1.0, 0.0]))
    assert np.array_equal(a.x, b.x)
    assert a.iterations == b.iterations
    assert a.message == b.message


def test_covariance_scales_with_noise():
    rng = np.random.default_rng(0)
    x = np.linspace(0.0, 10.0, 200)
    sigma = 0.05
    y = 1.5 * x + 0.3 + rng.normal(0.0, sigma, x.size)

    res = least_squares(lambda p: p[0] * x + p[1] - y, np.array([1.0, 0.0]))
    var = covariance_diagonal(res)
    # analytic slope variance for a straight-line fit
    sxx = np.sum((x - x.mean()) ** 2)
    assert var[0] == pytest.approx(sigma**2 / sxx, rel=0.35)


def test_x_scale_validation():
    with pytest.raises(ValueError):
        least_squares(lambda p: p, np.array([1.0]), x_scale=np.array([0.0]))
