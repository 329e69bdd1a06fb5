"""Exact k-nearest-neighbor stencil selection over the node cloud."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from .errors import ConfigurationError
from .validation import check_positions

# Extra neighbors queried beyond the stencil size so distance ties at the cut
# can be resolved by node index without a second tree query.
_TIE_PAD = 8


def stencil_size(m: int, d: int) -> int:
    """Support size 2*C(m+d, d) for monomial degree m in d dimensions."""
    if m < 0:
        raise ConfigurationError(f"monomial degree must be nonnegative, got {m}")
    if d < 1:
        raise ConfigurationError(f"dimension must be positive, got {d}")
    return 2 * math.comb(m + d, d)


@dataclass
class StencilTable:
    """Per-node neighbor lists of a fixed size.

    Each row starts with the node's own index and is sorted by nondecreasing
    distance to that node, ties broken by smaller node index.
    """

    indices: np.ndarray
    degree: int | None = None
    dim: int = 2

    def __post_init__(self):
        self.indices = np.asarray(self.indices, dtype=np.int64)
        if self.indices.ndim != 2:
            raise ConfigurationError("stencil indices must be a 2-D array")

    @property
    def size(self) -> int:
        return self.indices.shape[1]

    def __len__(self) -> int:
        return len(self.indices)


def _knn_full_scan(positions: np.ndarray, row: int, n: int) -> np.ndarray:
    """Exact kNN of one node by scanning all squared distances."""
    diff = positions - positions[row]
    d2 = diff[:, 0] ** 2 + diff[:, 1] ** 2
    order = np.lexsort((np.arange(len(positions)), d2))
    return order[:n]


def build_stencils(nodes, n: int, degree: int | None = None) -> StencilTable:
    """Find the n nearest nodes (the node itself included) for every node.

    Euclidean metric, ties broken by smaller node index. A kd-tree proposes a
    padded candidate set; squared distances are recomputed and sorted by
    (distance, index) so the result matches a full scan exactly. Rows whose
    tie plateau may extend past the padded set fall back to the full scan.
    """
    positions = nodes.positions if hasattr(nodes, "positions") else nodes
    positions = check_positions(positions, "positions")
    N = len(positions)
    if n < 1:
        raise ConfigurationError(f"stencil size must be at least 1, got {n}")
    if n > N:
        raise ConfigurationError(f"stencil size {n} exceeds node count {N}")

    tree = cKDTree(positions)
    pad = min(N, n + _TIE_PAD)
    _, cand = tree.query(positions, k=pad)
    cand = cand.reshape(N, pad)

    diff = positions[cand] - positions[:, None, :]
    d2 = diff[:, :, 0] ** 2 + diff[:, :, 1] ** 2

    # Sort candidates by index first, then stably by squared distance: the
    # composite order is (distance, index) for every row at once.
    by_index = np.argsort(cand, axis=1)
    cand = np.take_along_axis(cand, by_index, axis=1)
    d2 = np.take_along_axis(d2, by_index, axis=1)
    by_dist = np.argsort(d2, axis=1, kind="stable")
    cand = np.take_along_axis(cand, by_dist, axis=1)
    d2 = np.take_along_axis(d2, by_dist, axis=1)

    indices = cand[:, :n].copy()
    if pad < N:
        # A plateau reaching the last padded candidate may hide a smaller-index
        # tie outside the queried set.
        suspect = np.flatnonzero(d2[:, pad - 1] <= d2[:, n - 1] * (1.0 + 1e-12))
        for row in suspect:
            indices[row] = _knn_full_scan(positions, int(row), n)

    if not (indices[:, 0] == np.arange(N)).all():
        bad = int(np.flatnonzero(indices[:, 0] != np.arange(N))[0])
        raise ConfigurationError(
            f"node {bad} coincides with a lower-index node; stencils are ill-defined"
        )
    return StencilTable(indices, degree=degree)
