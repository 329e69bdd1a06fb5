import numpy as np
import pytest
from scipy import sparse

from imexrbf import (
    GaussianSourceProblem,
    PolynomialProblem,
    SolverBreakdownError,
    SourceParams,
    SparseSystem,
    solve_bicgstab,
    solve_poisson,
)
from imexrbf.domain import NodeSet


def make_system(matrix, rhs):
    return SparseSystem(sparse.csr_matrix(matrix), np.asarray(rhs, dtype=float))


@pytest.fixture(scope="module")
def assembled(small_nodes):
    problem = GaussianSourceProblem(SourceParams(np.array([0.5, 0.5]), 1000.0))
    return solve_poisson(small_nodes, problem), problem


class TestAssembly:
    def test_dirichlet_rows_are_identity(self, small_nodes, assembled):
        implicit, problem = assembled
        A, b = implicit.system.matrix, implicit.system.rhs
        for i in small_nodes.dirichlet_indices:
            row = A.getrow(i)
            assert row.nnz == 1
            assert row.indices[0] == i
            assert row.data[0] == 1.0
            assert b[i] == problem.solution(small_nodes.positions[[i]])[0]

    def test_interior_rows_have_stencil_width_and_annihilate_constants(self, small_nodes, assembled):
        implicit, _ = assembled
        A = implicit.system.matrix
        row_sums = np.asarray(A.sum(axis=1)).ravel()
        scale = np.abs(A.data).max()
        for i in small_nodes.interior_indices:
            assert A.getrow(i).nnz == 12
            assert abs(row_sums[i]) <= 1e-11 * scale

    def test_neumann_rows_have_stencil_width(self, small_nodes, assembled):
        implicit, _ = assembled
        for i in small_nodes.neumann_indices:
            assert implicit.system.matrix.getrow(i).nnz == 12

    def test_rhs_uses_problem_fields(self, small_nodes, assembled):
        implicit, problem = assembled
        b = implicit.system.rhs
        interior = small_nodes.interior_indices
        assert np.array_equal(b[interior], problem.laplacian(small_nodes.positions[interior]))
        neumann = small_nodes.neumann_indices
        assert np.array_equal(
            b[neumann],
            problem.normal_derivative(small_nodes.positions[neumann], small_nodes.normals[neumann]),
        )

    def test_five_node_toy_matches_dense_oracle(self):
        # one interior node ringed by four Dirichlet nodes; the whole cloud is
        # the interior stencil, so first-degree augmentation keeps it solvable
        from imexrbf import (
            DirectionalDerivative,
            Laplacian,
            RbfConfig,
            assemble,
            build_stencils,
            compute_weights,
        )

        h = 0.8
        positions = np.array([[0.0, 0.0], [h, 0.0], [-h, 0.0], [0.0, h], [0.0, -h]])
        kinds = np.array([0, 2, 2, 2, 2])
        normals = np.vstack([[np.nan, np.nan], positions[1:] / h])
        nodes = NodeSet(positions, kinds, normals, spacing=h)
        problem = PolynomialProblem({(2, 0): 1.0, (0, 2): 1.0})  # laplacian 4
        cfg = RbfConfig(poly_degree=1)
        table = build_stencils(nodes, 5, degree=1)
        lap = compute_weights(nodes, table, Laplacian(), cfg, rows=nodes.interior_indices)
        normal = compute_weights(
            nodes, table, DirectionalDerivative(np.zeros((0, 2))), cfg,
            rows=nodes.neumann_indices,
        )
        system = assemble(nodes, lap, normal, problem)
        report = solve_bicgstab(system, tol=1e-13)
        dense = np.linalg.solve(system.matrix.toarray(), system.rhs)
        assert report.converged
        assert np.abs(report.solution - dense).max() <= 1e-8 * np.abs(dense).max()


class TestBicgstab:
    def test_identity_converges_immediately(self, rng):
        b = rng.random(40)
        report = solve_bicgstab(make_system(np.eye(40), b), tol=1e-12)
        assert report.converged
        assert report.iterations <= 1
        assert np.allclose(report.solution, b, rtol=1e-12, atol=0)

    def test_two_by_two_hand_solution(self):
        report = solve_bicgstab(make_system([[4.0, 1.0], [1.0, 3.0]], [1.0, 2.0]), tol=1e-12)
        assert report.converged
        assert np.abs(report.solution - np.array([1.0, 7.0]) / 11.0).max() <= 1e-10

    def test_zero_rhs(self):
        report = solve_bicgstab(make_system(np.eye(3), np.zeros(3)))
        assert report.converged
        assert report.iterations == 0
        assert np.array_equal(report.solution, np.zeros(3))

    @pytest.mark.parametrize("preconditioner", ["ilu", "jacobi", "none"])
    def test_matches_dense_oracle_on_random_systems(self, rng, preconditioner):
        for trial in range(5):
            N = int(rng.integers(20, 120))
            A = rng.standard_normal((N, N)) * 0.3
            A[np.arange(N), np.arange(N)] = np.abs(A).sum(axis=1) + 1.0
            b = rng.standard_normal(N)
            report = solve_bicgstab(make_system(A, b), tol=1e-12, preconditioner=preconditioner)
            oracle = np.linalg.solve(A, b)
            assert report.converged
            assert np.abs(report.solution - oracle).max() <= 1e-6 * np.abs(oracle).max()

    def test_matches_dense_oracle_on_assembled_system(self, assembled):
        implicit, _ = assembled
        A = implicit.system.matrix.toarray()
        oracle = np.linalg.solve(A, implicit.system.rhs)
        scale = np.abs(oracle).max()
        assert np.abs(implicit.report.solution - oracle).max() <= 1e-6 * scale

    def test_residual_contract(self, assembled):
        implicit, _ = assembled
        A, b = implicit.system.matrix, implicit.system.rhs
        recomputed = np.linalg.norm(b - A @ implicit.report.solution) / np.linalg.norm(b)
        assert implicit.report.converged
        assert recomputed <= 2e-10

    def test_nonconvergence_is_reported_not_raised(self, assembled):
        implicit, _ = assembled
        report = solve_bicgstab(implicit.system, tol=1e-10, max_iter=1, preconditioner="jacobi")
        assert not report.converged
        assert report.iterations == 1
        assert report.residual > 1e-10

    def test_double_breakdown_raises(self):
        # rotation matrix: the shadow residual is orthogonal to A r, so the
        # first inner product collapses; the restart reproduces the same state
        system = make_system([[0.0, 1.0], [-1.0, 0.0]], [1.0, 0.0])
        with pytest.raises(SolverBreakdownError):
            solve_bicgstab(system, tol=1e-12, preconditioner="none")

    def test_patch_polynomial_reproduced_through_solve(self, small_nodes):
        problem = PolynomialProblem({(0, 0): 1.0, (1, 0): 2.0, (0, 1): -1.0,
                                     (2, 0): 0.5, (1, 1): 1.0, (0, 2): -2.0})
        implicit = solve_poisson(small_nodes, problem, m_lo=2, tol=1e-12)
        exact = problem.solution(small_nodes.positions)
        assert implicit.report.converged
        rel = np.abs(implicit.report.solution - exact).max() / np.abs(exact).max()
        assert rel <= 1e-6
