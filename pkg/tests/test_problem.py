import numpy as np
import pytest

from imexrbf import (
    ConfigurationError,
    GaussianSourceProblem,
    NeumannMode,
    PolynomialProblem,
    SourceParams,
)


def fd_laplacian(f, x, step=1e-5):
    ex, ey = np.array([step, 0.0]), np.array([0.0, step])
    return (f(x + ex) + f(x - ex) + f(x + ey) + f(x - ey) - 4 * f(x)) / step**2


def fd_directional(f, x, direction, step=1e-6):
    direction = np.asarray(direction)
    return (f(x + step * direction) - f(x - step * direction)) / (2 * step)


@pytest.fixture
def paper_source():
    return GaussianSourceProblem(SourceParams(np.array([0.5, 0.5]), 1000.0))


class TestSourceParams:
    def test_rejects_nonpositive_strength(self):
        with pytest.raises(ConfigurationError):
            SourceParams(np.array([0.0, 0.0]), 0.0)

    def test_rejects_bad_position(self):
        with pytest.raises(ConfigurationError):
            SourceParams(np.array([1.0, 2.0, 3.0]), 1.0)


class TestSolution:
    def test_peak_value_at_source(self, paper_source):
        assert paper_source.solution(np.array([[0.5, 0.5]]))[0] == 1.0

    def test_unit_exponent(self):
        prob = GaussianSourceProblem(SourceParams(np.array([0.0, 0.0]), 4.0))
        x = np.array([[0.5, 0.0]])  # alpha * r^2 = 4 * 0.25 = 1
        assert np.isclose(prob.solution(x)[0], np.exp(-1.0), rtol=1e-15)

    def test_far_corner_value(self, paper_source):
        value = paper_source.solution(np.array([[0.0, 0.0]]))[0]
        assert value == np.exp(-500.0)
        assert value < 1e-200

    def test_bounded_and_maximal_at_source(self, rng):
        prob = GaussianSourceProblem(SourceParams(np.array([0.2, -0.3]), 7.0))
        pts = rng.uniform(-1, 1, (200, 2))
        vals = prob.solution(pts)
        assert np.all(vals > 0.0)
        assert np.all(vals <= 1.0)
        assert vals.max() < prob.solution(np.array([[0.2, -0.3]]))[0]


class TestForcing:
    def test_value_at_source(self, paper_source):
        assert paper_source.laplacian(np.array([[0.5, 0.5]]))[0] == -4000.0

    def test_zero_crossing_radius(self):
        alpha = 1000.0
        prob = GaussianSourceProblem(SourceParams(np.array([0.5, 0.5]), alpha))
        x = np.array([[0.5 + 1.0 / np.sqrt(alpha), 0.5]])
        assert abs(prob.laplacian(x)[0]) <= 1e-9 * alpha

    def test_matches_finite_difference_laplacian(self, rng):
        prob = GaussianSourceProblem(SourceParams(np.array([0.3, -0.1]), 2.5))
        scalar = lambda x: prob.solution(x[None, :])[0]
        for _ in range(100):
            x = rng.uniform(-1, 1, 2)
            exact = prob.laplacian(x[None, :])[0]
            fd = fd_laplacian(scalar, x)
            assert abs(exact - fd) <= 1e-4 * max(abs(exact), 1e-3)


class TestNeumannData:
    def test_orthogonal_offset_gives_zero(self):
        prob = GaussianSourceProblem(SourceParams(np.array([0.5, 0.5]), 1.0))
        x = np.array([[1.5, 0.5]])  # offset (1, 0)
        normal = np.array([[0.0, 1.0]])
        assert prob.normal_derivative(x, normal)[0] == 0.0

    def test_hand_computed_value(self):
        # grad of exp(-r^2) dotted with (-1, 0) at x = (-1, 0), source (0.5, 0.5)
        prob = GaussianSourceProblem(SourceParams(np.array([0.5, 0.5]), 1.0))
        value = prob.normal_derivative(np.array([[-1.0, 0.0]]), np.array([[-1.0, 0.0]]))[0]
        assert np.isclose(value, -3.0 * np.exp(-2.5), rtol=1e-14)

    def test_strong_source_underflows_on_far_boundary(self):
        x = np.array([[-1.0, 0.0]])
        normal = np.array([[-1.0, 0.0]])
        for mode in (NeumannMode.GRADIENT, NeumannMode.LITERAL):
            prob = GaussianSourceProblem(SourceParams(np.array([0.5, 0.5]), 1000.0), mode)
            assert prob.normal_derivative(x, normal)[0] == 0.0

    def test_literal_mode_formula(self, rng):
        params = SourceParams(np.array([0.5, 0.5]), 3.0)
        prob = GaussianSourceProblem(params, NeumannMode.LITERAL)
        x = rng.uniform(-1, 1, (20, 2))
        normals = np.column_stack([np.cos(rng.random(20)), np.sin(rng.random(20))])
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        bump = np.exp(-3.0 * np.sum((x - params.position) ** 2, axis=1))
        expected = -2.0 * 3.0 * bump * np.sum(x * normals, axis=1)
        assert np.allclose(prob.normal_derivative(x, normals), expected, rtol=1e-14)

    def test_gradient_mode_matches_finite_difference(self, rng):
        prob = GaussianSourceProblem(SourceParams(np.array([0.2, 0.1]), 2.0))
        scalar = lambda x: prob.solution(x[None, :])[0]
        for _ in range(100):
            x = rng.uniform(-1, 1, 2)
            angle = rng.random() * 2 * np.pi
            n = np.array([np.cos(angle), np.sin(angle)])
            exact = prob.normal_derivative(x[None, :], n[None, :])[0]
            fd = fd_directional(scalar, x, n)
            assert abs(exact - fd) <= 1e-4 * max(abs(exact), 1e-3)


class TestPolynomialProblem:
    def test_laplacian_of_quadratic(self):
        # u = 1 + 2x - y + 0.5 x^2 + x y - 2 y^2 has constant laplacian -3
        prob = PolynomialProblem({(0, 0): 1.0, (1, 0): 2.0, (0, 1): -1.0,
                                  (2, 0): 0.5, (1, 1): 1.0, (0, 2): -2.0})
        pts = np.array([[0.0, 0.0], [0.3, -0.7], [1.0, 1.0]])
        assert np.allclose(prob.laplacian(pts), -3.0)

    def test_normal_derivative_is_gradient_dot_normal(self, rng):
        prob = PolynomialProblem({(1, 0): 2.0, (0, 2): 1.0})
        x = rng.uniform(-1, 1, (15, 2))
        n = np.tile(np.array([[0.6, 0.8]]), (15, 1))
        expected = 0.6 * 2.0 + 0.8 * 2.0 * x[:, 1]
        assert np.allclose(prob.normal_derivative(x, n), expected, rtol=1e-14)
