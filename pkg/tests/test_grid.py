import numpy as np
import pytest

from magnetodisk import build_grid, integrate, l2_norm
from magnetodisk.grid import derivative

from oracles import adaptive_simpson


def test_minimal_uniform_grid():
    g = build_grid(2, 1.0)
    assert np.array_equal(g.nodes, [0.0, 0.5, 1.0])
    assert abs(g.weights.sum() - 0.5) <= 1e-12


@pytest.mark.parametrize("n", [8, 17, 64, 257, 512])
@pytest.mark.parametrize("grading", [1.0, 1.5, 2.0, 3.0])
def test_grid_invariants(n, grading):
    g = build_grid(n, grading)
    assert g.nodes[0] == 0.0 and g.nodes[-1] == 1.0
    assert np.all(np.diff(g.nodes) > 0.0)
    assert np.all(g.weights >= 0.0)
    assert g.weights[0] == 0.0
    assert abs(g.weights.sum() - 0.5) <= 1e-12
    assert np.allclose(g.nodes, (np.arange(n + 1) / n) ** grading, rtol=0, atol=1e-15)


def test_grid_rejects_bad_arguments():
    with pytest.raises(ValueError):
        build_grid(1, 1.0)
    with pytest.raises(ValueError):
        build_grid(64, 0.5)


def test_grid_is_immutable():
    g = build_grid(16, 2.0)
    with pytest.raises(ValueError):
        g.nodes[0] = 1.0
    with pytest.raises(ValueError):
        g.weights[0] = 1.0


def test_integrate_constants():
    g = build_grid(64, 2.0)
    assert integrate(g, np.zeros(65)) == 0.0
    assert abs(integrate(g, np.full(65, 2.0)) - 1.0) <= 1e-14


def test_integrate_linear_is_exact():
    # weights integrate the P1 interpolant exactly, and f(r)=r is P1
    g = build_grid(512, 2.0)
    assert abs(integrate(g, g.nodes) - 1.0 / 3.0) <= 1e-12


def test_integrate_smooth_against_adaptive_oracle():
    g = build_grid(1024, 2.0)
    f = np.empty_like(g.nodes)
    f[0] = np.pi  # limit of sin(pi r)/r
    f[1:] = np.sin(np.pi * g.nodes[1:]) / g.nodes[1:]
    ref = adaptive_simpson(lambda r: np.sin(np.pi * r), 0.0, 1.0, tol=1e-14)
    assert abs(integrate(g, f) - ref) <= 1e-6  # measured 1.8e-7


def test_integrate_is_linear():
    g = build_grid(128, 2.0)
    rng = np.random.default_rng(0)
    f, h = rng.normal(size=129), rng.normal(size=129)
    lhs = integrate(g, 2.5 * f - 0.75 * h)
    rhs = 2.5 * integrate(g, f) - 0.75 * integrate(g, h)
    assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(rhs))


def test_integrate_second_order_refinement():
    ref = adaptive_simpson(lambda r: np.cos(3.0 * r) * r, 0.0, 1.0, tol=1e-14)
    errors = []
    for n in (64, 128, 256):
        g = build_grid(n, 2.0)
        errors.append(abs(np.dot(g.weights, np.cos(3.0 * g.nodes)) - ref))
    assert errors[0] / errors[1] >= 3.0
    assert errors[1] / errors[2] >= 3.0


def test_integrate_length_mismatch():
    g = build_grid(16, 2.0)
    with pytest.raises(ValueError):
        integrate(g, np.zeros(5))


def test_derivative_exactness_classes():
    g = build_grid(64, 1.7)
    assert np.abs(derivative(g, np.full(65, 3.3))).max() <= 1e-12
    assert np.abs(derivative(g, 2.0 * g.nodes - 1.0) - 2.0).max() <= 1e-12
    assert np.abs(derivative(g, g.nodes**2) - 2.0 * g.nodes).max() <= 1e-10


def test_derivative_smooth_accuracy():
    g = build_grid(512, 2.0)
    err = np.abs(derivative(g, np.sin(g.nodes)) - np.cos(g.nodes)).max()
    assert err <= 1e-4  # measured 2.8e-6


def test_derivative_length_mismatch():
    g = build_grid(16, 2.0)
    with pytest.raises(ValueError):
        derivative(g, np.zeros(3))


def test_l2_norm_matches_integrate():
    g = build_grid(128, 2.0)
    f = np.sin(2.0 * g.nodes)
    assert abs(l2_norm(g, f) - np.sqrt(integrate(g, f * f))) <= 1e-15
