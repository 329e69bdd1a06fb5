"""Global sparse system assembly and the preconditioned BiCGSTAB solve."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse
import scipy.sparse.linalg  # noqa: F401  (registers sparse.linalg)

from .domain import NodeSet
from .errors import ConfigurationError, SolverBreakdownError
from .operators import OperatorWeights


@dataclass
class SparseSystem:
    """Collocation matrix in compressed sparse row layout plus its right-hand side."""

    matrix: sparse.csr_matrix
    rhs: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


@dataclass
class SolveReport:
    """Iterative solve outcome; ``residual`` is the true relative residual at exit."""

    solution: np.ndarray
    iterations: int
    residual: float
    converged: bool


def assemble(
    nodes: NodeSet,
    lap_weights: OperatorWeights,
    normal_weights: OperatorWeights,
    problem,
) -> SparseSystem:
    """Build one collocation row per node.

    Interior rows apply the Laplacian weights against the forcing, Neumann rows
    the normal-derivative weights against the flux data, and Dirichlet rows pin
    the nodal value to the boundary data with a unit diagonal.
    """
    interior = nodes.interior_indices
    neumann = nodes.neumann_indices
    dirichlet = nodes.dirichlet_indices
    if not np.array_equal(lap_weights.rows, interior):
        raise ConfigurationError("Laplacian weights must cover exactly the interior nodes")
    if not np.array_equal(normal_weights.rows, neumann):
        raise ConfigurationError("normal-derivative weights must cover exactly the Neumann nodes")

    N = len(nodes)
    n_lo = lap_weights.stencils.size
    rows = np.concatenate(
        [
            np.repeat(interior, n_lo),
            np.repeat(neumann, normal_weights.stencils.size),
            dirichlet,
        ]
    )
    cols = np.concatenate(
        [
            lap_weights.stencils.indices[interior].ravel(),
            normal_weights.stencils.indices[neumann].ravel(),
            dirichlet,
        ]
    )
    data = np.concatenate(
        [lap_weights.values.ravel(), normal_weights.values.ravel(), np.ones(len(dirichlet))]
    )
    matrix = sparse.coo_matrix((data, (rows, cols)), shape=(N, N)).tocsr()

    rhs = np.empty(N)
    rhs[interior] = problem.laplacian(nodes.positions[interior])
    rhs[neumann] = problem.normal_derivative(
        nodes.positions[neumann], nodes.normals[neumann]
    )
    rhs[dirichlet] = problem.solution(nodes.positions[dirichlet])
    return SparseSystem(matrix, rhs)


def _right_preconditioner(system: SparseSystem, kind: str | None):
    """Apply-function for the right preconditioner M^-1.

    "ilu" (default) is an incomplete-LU factorization; the mixed Neumann and
    Dirichlet collocation rows produce spectra that defeat purely diagonal
    schemes. "jacobi" scales by the matrix diagonal and suffices for
    Dirichlet-dominated or well-scaled systems.
    """
    if kind is None or kind == "none":
        return lambda vec: vec
    if kind == "jacobi":
        diag = system.matrix.diagonal().copy()
        diag[diag == 0.0] = 1.0
        inv_diag = 1.0 / diag
        return lambda vec: inv_diag * vec
    if kind == "ilu":
        # Equilibrate rows by the diagonal before factoring: the unit Dirichlet
        # rows sit many orders below the 1/h^2 interior rows and the drop
        # tolerance would otherwise discard whole pivots. The loose drop
        # tolerance is deliberate; tighter ones let unstable fill-in grow on
        # this matrix family and SuperLU aborts with exactly-singular factors.
        diag = system.matrix.diagonal().copy()
        diag[diag == 0.0] = 1.0
        inv_diag = 1.0 / diag
        scaled = sparse.diags(inv_diag) @ system.matrix
        factor = sparse.linalg.spilu(scaled.tocsc(), drop_tol=1e-3, fill_factor=10.0)
        return lambda vec: factor.solve(inv_diag * vec)
    raise ConfigurationError(f"unknown preconditioner {kind!r}")


def solve_bicgstab(
    system: SparseSystem,
    tol: float = 1e-10,
    max_iter: int | None = None,
    x0: np.ndarray | None = None,
    preconditioner: str | None = "ilu",
) -> SolveReport:
    """Right-preconditioned BiCGSTAB.

    Stops once the true relative residual ||b - Au|| / ||b|| drops to ``tol``
    (recurrence convergence is verified against the recomputed residual before
    it is reported). A breakdown of the recurrences triggers one restart from
    the current iterate; a second breakdown raises SolverBreakdownError.
    Non-convergence within ``max_iter`` returns converged=False.
    """
    if not tol > 0:
        raise ConfigurationError(f"tolerance must be positive, got {tol}")
    A = system.matrix
    b = system.rhs
    N = system.n
    if max_iter is None:
        max_iter = 10 * N

    norm_b = np.linalg.norm(b)
    if norm_b == 0.0:
        return SolveReport(np.zeros(N), 0, 0.0, True)

    apply_m = _right_preconditioner(system, preconditioner)

    x = np.zeros(N) if x0 is None else np.array(x0, dtype=np.float64)
    r = b - A @ x if x0 is not None else b.copy()
    r_shadow = r.copy()
    rho = alpha = omega = 1.0
    p = np.zeros(N)
    v = np.zeros(N)
    restarted = False
    iterations = 0

    def true_residual(vec_x):
        return np.linalg.norm(b - A @ vec_x) / norm_b

    def reset():
        # Re-anchor the recurrences on the true residual of the current iterate.
        nonlocal r, r_shadow, rho, alpha, omega, p, v
        r = b - A @ x
        r_shadow = r.copy()
        rho = alpha = omega = 1.0
        p = np.zeros(N)
        v = np.zeros(N)

    def breakdown(reason: str):
        nonlocal restarted
        if restarted:
            raise SolverBreakdownError(
                f"BiCGSTAB broke down after restart ({reason}) at iteration {iterations}"
            )
        restarted = True
        reset()

    while iterations < max_iter:
        iterations += 1
        rho_next = r_shadow @ r
        if rho_next == 0.0 or not np.isfinite(rho_next):
            breakdown("rho vanished")
            continue
        beta = (rho_next / rho) * (alpha / omega)
        rho = rho_next
        p = r + beta * (p - omega * v)
        p_hat = apply_m(p)
        v = A @ p_hat
        rv = r_shadow @ v
        if rv == 0.0 or not np.isfinite(rv):
            breakdown("shadow direction collapsed")
            continue
        alpha = rho / rv
        s = r - alpha * v
        if np.linalg.norm(s) <= tol * norm_b:
            x = x + alpha * p_hat
            residual = true_residual(x)
            if residual <= tol:
                return SolveReport(x, iterations, float(residual), True)
            reset()
            continue
        s_hat = apply_m(s)
        t = A @ s_hat
        tt = t @ t
        if tt == 0.0:
            breakdown("stabilization step vanished")
            continue
        omega = (t @ s) / tt
        if omega == 0.0 or not np.isfinite(omega):
            breakdown("stabilization weight vanished")
            continue
        x = x + alpha * p_hat + omega * s_hat
        r = s - omega * t
        if np.linalg.norm(r) <= tol * norm_b:
            residual = true_residual(x)
            if residual <= tol:
                return SolveReport(x, iterations, float(residual), True)
            reset()

    residual = true_residual(x)
    return SolveReport(x, iterations, float(residual), residual <= tol)
