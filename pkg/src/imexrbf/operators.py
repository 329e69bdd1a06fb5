"""RBF-FD differentiation weights: polyharmonic splines with monomial augmentation.

Weights for a linear differential operator at a node are obtained from the
augmented local interpolation system on that node's stencil,

    [ T  P ] [ w ]   [ rhs_phs  ]
    [ P' 0 ] [ l ] = [ rhs_poly ],

where T holds pairwise basis values phi(||x_i - x_j||), P the monomials of
total degree <= m evaluated at the stencil points, and the right-hand side the
operator applied to each basis function at the stencil center. The Lagrange
multipliers l are discarded. Coordinates are shifted to the center and scaled
by the stencil radius before assembly; the scaling is undone on the weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse
from sklearn.base import BaseEstimator, TransformerMixin

from .errors import ConfigurationError, StencilDegeneracyError
from .stencils import StencilTable, build_stencils, stencil_size
from .validation import check_positions, check_unit_vectors

# Nodes solved per dense batch; bounds the (chunk, n+s, n+s) workspace.
_CHUNK_BUDGET = 2**23


@dataclass(frozen=True)
class RbfConfig:
    """Basis choice: phi(r) = r**phs_exponent plus all monomials of degree <= poly_degree."""

    poly_degree: int = 2
    phs_exponent: int = 3
    dim: int = 2

    def __post_init__(self):
        if self.poly_degree < 0:
            raise ConfigurationError(f"poly_degree must be nonnegative, got {self.poly_degree}")
        if self.phs_exponent < 3 or self.phs_exponent % 2 == 0:
            raise ConfigurationError(
                f"phs_exponent must be an odd integer >= 3, got {self.phs_exponent}"
            )
        if self.dim != 2:
            raise ConfigurationError("only 2-D point clouds are supported")

    @property
    def n_monomials(self) -> int:
        return math.comb(self.poly_degree + self.dim, self.dim)


@dataclass(frozen=True)
class Laplacian:
    """Second-order operator d2/dx2 + d2/dy2."""

    order = 2


@dataclass(frozen=True, eq=False)
class DirectionalDerivative:
    """First-order derivative along a unit direction, one shared or one per node."""

    direction: np.ndarray
    order = 1

    def __post_init__(self):
        object.__setattr__(
            self, "direction", check_unit_vectors(self.direction, name="direction")
        )


LinearOperator = Laplacian | DirectionalDerivative


def monomial_exponents(m: int) -> np.ndarray:
    """Exponent pairs of all 2-D monomials of total degree <= m, graded lexicographic."""
    return np.array(
        [(a, g - a) for g in range(m + 1) for a in range(g, -1, -1)], dtype=np.int64
    )


def _poly_rhs(op: LinearOperator, exps: np.ndarray, batch: int) -> np.ndarray:
    """Operator applied to each monomial, evaluated at the stencil center (the origin)."""
    s = len(exps)
    out = np.zeros((batch, s))
    a, b = exps[:, 0], exps[:, 1]
    if isinstance(op, Laplacian):
        out[:, (a == 2) & (b == 0)] = 2.0
        out[:, (a == 0) & (b == 2)] = 2.0
    else:
        direction = np.broadcast_to(np.atleast_2d(op.direction), (batch, 2))
        mask_x = (a == 1) & (b == 0)
        mask_y = (a == 0) & (b == 1)
        if mask_x.any():
            out[:, mask_x] = direction[:, :1]
        if mask_y.any():
            out[:, mask_y] = direction[:, 1:]
    return out


def _phs_rhs(op: LinearOperator, scaled: np.ndarray, k: int) -> np.ndarray:
    """Operator applied to each PHS basis function, evaluated at the origin.

    ``scaled`` holds the stencil offsets from the center, shape (batch, n, 2).
    """
    r = np.linalg.norm(scaled, axis=2)
    if isinstance(op, Laplacian):
        return float(k * k) * r ** (k - 2)
    direction = np.broadcast_to(np.atleast_2d(op.direction), (scaled.shape[0], 2))
    along = np.einsum("bnd,bd->bn", scaled, direction)
    return -float(k) * r ** (k - 2) * along


def _assemble_batch(
    centers: np.ndarray, points: np.ndarray, op: LinearOperator, cfg: RbfConfig
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Scaled local systems for a batch of nodes: (batch, n+s, n+s), (batch, n+s), scales."""
    batch, n, _ = points.shape
    s = cfg.n_monomials
    k = cfg.phs_exponent

    shifted = points - centers[:, None, :]
    scale = np.sqrt(np.max(np.sum(shifted**2, axis=2), axis=1))
    scale[scale == 0.0] = 1.0
    scaled = shifted / scale[:, None, None]

    pair = scaled[:, :, None, :] - scaled[:, None, :, :]
    dist = np.sqrt(np.sum(pair**2, axis=3))

    exps = monomial_exponents(cfg.poly_degree)
    P = scaled[:, :, 0:1] ** exps[:, 0] * scaled[:, :, 1:2] ** exps[:, 1]

    A = np.zeros((batch, n + s, n + s))
    A[:, :n, :n] = dist**k
    A[:, :n, n:] = P
    A[:, n:, :n] = P.transpose(0, 2, 1)

    b = np.empty((batch, n + s))
    b[:, :n] = _phs_rhs(op, scaled, k)
    b[:, n:] = _poly_rhs(op, exps, batch)
    return A, b, scale


def local_system(
    center: np.ndarray,
    stencil_points: np.ndarray,
    op: LinearOperator,
    cfg: RbfConfig,
) -> tuple[np.ndarray, np.ndarray]:
    """Augmented local system of one node in shifted-and-scaled coordinates."""
    center = np.asarray(center, dtype=np.float64)
    stencil_points = check_positions(stencil_points, "stencil_points")
    if not np.array_equal(stencil_points[0], center):
        raise ConfigurationError("stencil_points[0] must be the center node")
    A, b, _ = _assemble_batch(center[None, :], stencil_points[None, :, :], op, cfg)
    return A[0], b[0]


@dataclass
class OperatorWeights:
    """Differentiation weights for a set of node rows over a shared stencil table."""

    values: np.ndarray
    rows: np.ndarray
    stencils: StencilTable
    operator: LinearOperator
    config: RbfConfig

    def apply(self, u: np.ndarray) -> np.ndarray:
        """Evaluate the operator on nodal values u at the weighted rows."""
        u = np.asarray(u, dtype=np.float64)
        gathered = u[self.stencils.indices[self.rows]]
        if u.ndim == 1:
            return np.einsum("bn,bn->b", self.values, gathered)
        return np.einsum("bn,bnf->bf", self.values, gathered)

    def to_csr(self, n_nodes: int) -> sparse.csr_matrix:
        """Global sparse operator with these weights in their node rows, zeros elsewhere."""
        n = self.stencils.size
        rows = np.repeat(self.rows, n)
        cols = self.stencils.indices[self.rows].ravel()
        mat = sparse.coo_matrix(
            (self.values.ravel(), (rows, cols)), shape=(n_nodes, n_nodes)
        )
        return mat.tocsr()


def compute_weights(
    nodes,
    stencils: StencilTable,
    op: LinearOperator,
    cfg: RbfConfig,
    rows: np.ndarray | None = None,
) -> OperatorWeights:
    """Solve every local system and return the unscaled per-node weight vectors.

    ``rows`` restricts the computation to a subset of nodes (all by default).
    For a DirectionalDerivative, ``op.direction`` may hold one direction per
    row in that subset. Raises StencilDegeneracyError naming the first node
    whose local system is singular.
    """
    positions = nodes.positions if hasattr(nodes, "positions") else nodes
    positions = check_positions(positions, "positions")
    if rows is None:
        rows = np.arange(len(positions))
    rows = np.asarray(rows, dtype=np.int64)
    n = stencils.size
    s = cfg.n_monomials
    if n < s:
        raise ConfigurationError(
            f"stencil size {n} is smaller than the monomial count {s}; "
            "the local system is underdetermined"
        )
    if isinstance(op, DirectionalDerivative) and op.direction.ndim == 2:
        if len(op.direction) != len(rows):
            raise ConfigurationError(
                f"got {len(op.direction)} directions for {len(rows)} rows"
            )

    values = np.empty((len(rows), n))
    chunk = max(1, min(4096, _CHUNK_BUDGET // ((n + s) * (n + s))))
    for start in range(0, len(rows), chunk):
        sel = slice(start, start + chunk)
        sub_rows = rows[sel]
        sub_op = op
        if isinstance(op, DirectionalDerivative) and op.direction.ndim == 2:
            sub_op = DirectionalDerivative(op.direction[sel])
        centers = positions[sub_rows]
        points = positions[stencils.indices[sub_rows]]
        A, b, scale = _assemble_batch(centers, points, sub_op, cfg)
        try:
            sol = np.linalg.solve(A, b[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            sol = _solve_one_by_one(A, b, sub_rows)
        w = sol[:, :n]
        finite = np.isfinite(w).all(axis=1)
        if not finite.all():
            raise StencilDegeneracyError(sub_rows[~finite][0])
        values[sel] = w / scale[:, None] ** op.order
    return OperatorWeights(values, rows, stencils, op, cfg)


def _solve_one_by_one(A: np.ndarray, b: np.ndarray, node_ids: np.ndarray) -> np.ndarray:
    """Fallback when a batched factorization fails: isolate the singular node."""
    sol = np.empty_like(b)
    for i in range(len(A)):
        try:
            sol[i] = np.linalg.solve(A[i], b[i])
        except np.linalg.LinAlgError as exc:
            raise StencilDegeneracyError(node_ids[i], str(exc)) from exc
    return sol


class RbfFdOperator(TransformerMixin, BaseEstimator):
    """Scattered-node differential operator with a scikit-learn surface.

    ``fit`` builds stencils and RBF-FD weights on a 2-D point cloud; ``transform``
    applies the fitted operator to one or more fields sampled at those points.

    Parameters
    ----------
    operator : {"laplacian", "directional"}
        Which derivative to approximate.
    direction : array-like of shape (2,), optional
        Unit direction for the directional derivative.
    poly_degree : int
        Monomial augmentation degree; controls the approximation order.
    phs_exponent : int
        Odd exponent of the polyharmonic basis phi(r) = r**k.
    n_neighbors : int, optional
        Stencil size; defaults to twice the number of augmentation monomials.
    """

    def __init__(
        self,
        operator: str = "laplacian",
        direction=None,
        poly_degree: int = 2,
        phs_exponent: int = 3,
        n_neighbors: int | None = None,
    ):
        self.operator = operator
        self.direction = direction
        self.poly_degree = poly_degree
        self.phs_exponent = phs_exponent
        self.n_neighbors = n_neighbors

    def _make_operator(self) -> LinearOperator:
        if self.operator == "laplacian":
            return Laplacian()
        if self.operator == "directional":
            if self.direction is None:
                raise ConfigurationError("operator='directional' requires a direction")
            return DirectionalDerivative(np.asarray(self.direction, dtype=np.float64))
        raise ConfigurationError(f"unknown operator {self.operator!r}")

    def fit(self, X, y=None):
        X = check_positions(X)
        cfg = RbfConfig(poly_degree=self.poly_degree, phs_exponent=self.phs_exponent)
        op = self._make_operator()
        n = self.n_neighbors or stencil_size(cfg.poly_degree, cfg.dim)
        self.stencils_ = build_stencils(X, n, degree=cfg.poly_degree)
        self.weights_ = compute_weights(X, self.stencils_, op, cfg)
        self.matrix_ = self.weights_.to_csr(len(X))
        self.n_features_in_ = 2
        return self

    def transform(self, u) -> np.ndarray:
        if not hasattr(self, "matrix_"):
            raise RuntimeError("RbfFdOperator must be fitted before transform")
        u = np.asarray(u, dtype=np.float64)
        if u.shape[0] != self.matrix_.shape[1]:
            raise ValueError(
                f"field has {u.shape[0]} values but the operator was fitted on "
                f"{self.matrix_.shape[1]} points"
            )
        return self.matrix_ @ u
