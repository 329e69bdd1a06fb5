import numpy as np
import pytest
from sklearn.base import clone

from imexrbf import ConfigurationError, ImexPoissonSolver, RbfFdOperator


class TestRbfFdOperator:
    def test_laplacian_of_quadratic(self, small_nodes):
        op = RbfFdOperator(operator="laplacian", poly_degree=2)
        op.fit(small_nodes.positions)
        u = small_nodes.positions[:, 0] ** 2 + small_nodes.positions[:, 1] ** 2
        assert np.abs(op.transform(u) - 4.0).max() <= 1e-6

    def test_directional_derivative_of_plane(self, small_nodes):
        op = RbfFdOperator(operator="directional", direction=(1.0, 0.0), poly_degree=2)
        op.fit(small_nodes.positions)
        assert np.abs(op.transform(small_nodes.positions[:, 0]) - 1.0).max() <= 1e-7

    def test_transform_multiple_fields(self, small_nodes):
        op = RbfFdOperator().fit(small_nodes.positions)
        fields = np.column_stack(
            [small_nodes.positions[:, 0] ** 2, small_nodes.positions[:, 1] ** 2]
        )
        out = op.transform(fields)
        assert out.shape == fields.shape
        assert np.abs(out - 2.0).max() <= 1e-6

    def test_fitted_attributes(self, small_nodes):
        op = RbfFdOperator(poly_degree=2).fit(small_nodes.positions)
        assert op.stencils_.size == 12
        assert op.weights_.values.shape == (len(small_nodes), 12)
        assert op.matrix_.shape == (len(small_nodes), len(small_nodes))

    def test_custom_stencil_size(self, small_nodes):
        op = RbfFdOperator(poly_degree=2, n_neighbors=15).fit(small_nodes.positions)
        assert op.stencils_.size == 15

    def test_directional_requires_direction(self, small_nodes):
        with pytest.raises(ConfigurationError):
            RbfFdOperator(operator="directional").fit(small_nodes.positions)

    def test_unknown_operator_rejected(self, small_nodes):
        with pytest.raises(ConfigurationError):
            RbfFdOperator(operator="gradient").fit(small_nodes.positions)

    def test_transform_before_fit_rejected(self):
        with pytest.raises(RuntimeError):
            RbfFdOperator().transform(np.zeros(5))

    def test_field_length_checked(self, small_nodes):
        op = RbfFdOperator().fit(small_nodes.positions)
        with pytest.raises(ValueError):
            op.transform(np.zeros(len(small_nodes) + 1))

    def test_clone_roundtrip(self):
        op = RbfFdOperator(operator="directional", direction=(0.0, 1.0), poly_degree=4)
        params = op.get_params()
        assert clone(op).get_params() == params


@pytest.fixture(scope="module")
def fitted(medium_nodes):
    solver = ImexPoissonSolver(alpha=100.0, m_lo=2, m_hi=4)
    return solver.fit(medium_nodes)


class TestImexPoissonSolver:
    def test_fit_exposes_fields(self, fitted, medium_nodes):
        N = len(medium_nodes)
        assert fitted.u_.shape == (N,)
        assert fitted.eps_an_.shape == (N,)
        assert fitted.eps_imex_.shape == (N,)
        assert fitted.solve_report_.converged

    def test_predict_at_nodes_returns_nodal_solution(self, fitted, medium_nodes):
        predictions = fitted.predict(medium_nodes.positions[:50])
        assert np.array_equal(predictions, fitted.u_[:50])

    def test_predict_between_nodes_is_bounded(self, fitted, rng):
        queries = rng.uniform(-0.5, 0.5, (20, 2))
        out = fitted.predict(queries)
        assert np.all(out >= fitted.u_.min() - 1e-12)
        assert np.all(out <= fitted.u_.max() + 1e-12)

    def test_rejects_equal_orders(self, medium_nodes):
        with pytest.raises(ConfigurationError):
            ImexPoissonSolver(m_lo=2, m_hi=2).fit(medium_nodes)

    def test_predict_before_fit_rejected(self):
        with pytest.raises(RuntimeError):
            ImexPoissonSolver().predict(np.zeros((1, 2)))

    def test_clone_and_params(self):
        solver = ImexPoissonSolver(alpha=250.0, m_hi=6, neumann_mode="literal")
        cloned = clone(solver)
        assert cloned.get_params()["alpha"] == 250.0
        assert cloned.get_params()["m_hi"] == 6
        assert cloned.get_params()["neumann_mode"] == "literal"
