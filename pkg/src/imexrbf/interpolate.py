"""Inverse-distance-weighting interpolation and the diagonal line sampler."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree
from sklearn.base import BaseEstimator, RegressorMixin

from .domain import NodeSet
from .errors import ConfigurationError
from .validation import check_positions, check_values


class ShepardInterpolator(RegressorMixin, BaseEstimator):
    """Shepard inverse-distance-weighting regressor on scattered 2-D data.

    Each prediction is the convex combination of the ``n_neighbors`` nearest
    data values with weights proportional to distance**(-power). Queries that
    coincide with a data site (distance below ``coincidence_tol``) return that
    site's value exactly.
    """

    def __init__(
        self,
        n_neighbors: int = 9,
        power: float = 2.0,
        coincidence_tol: float = 1e-12,
    ):
        self.n_neighbors = n_neighbors
        self.power = power
        self.coincidence_tol = coincidence_tol

    def fit(self, X, y):
        X = check_positions(X)
        if len(X) == 0:
            raise ConfigurationError("cannot fit an interpolator on an empty node set")
        if self.n_neighbors < 1:
            raise ConfigurationError(f"n_neighbors must be at least 1, got {self.n_neighbors}")
        if self.n_neighbors > len(X):
            raise ConfigurationError(
                f"n_neighbors={self.n_neighbors} exceeds the {len(X)} data sites"
            )
        self.X_ = X
        self.y_ = check_values(y, len(X))
        self.tree_ = cKDTree(X)
        self.n_features_in_ = 2
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "tree_"):
            raise RuntimeError("ShepardInterpolator must be fitted before predict")
        X = check_positions(X)
        k = self.n_neighbors
        dist, idx = self.tree_.query(X, k=k)
        dist = dist.reshape(len(X), k)
        idx = idx.reshape(len(X), k)

        exact = dist[:, 0] < self.coincidence_tol
        safe = np.where(dist > 0.0, dist, 1.0)
        weights = safe ** (-float(self.power))
        values = self.y_[idx]
        if self.y_.ndim == 1:
            out = np.einsum("qk,qk->q", weights, values) / weights.sum(axis=1)
            out[exact] = self.y_[idx[exact, 0]]
        else:
            out = np.einsum("qk,qkf->qf", weights, values) / weights.sum(axis=1)[:, None]
            out[exact] = self.y_[idx[exact, 0]]
        return out


@dataclass
class LineSample:
    """Fields sampled along the diagonal chord, raw and peak-normalized."""

    t: np.ndarray
    positions: np.ndarray
    values: dict[str, np.ndarray]
    n_neighbors: int

    def normalized(self) -> dict[str, np.ndarray]:
        """Each field divided by its own maximum over the samples (zero fields kept as-is)."""
        out = {}
        for name, field in self.values.items():
            peak = field.max()
            out[name] = field / peak if peak > 0 else field.copy()
        return out


def sample_line(
    nodes: NodeSet,
    fields: dict[str, np.ndarray],
    count: int = 400,
    n_neighbors: int = 9,
    power: float = 2.0,
    center: np.ndarray | None = None,
    radius: float | None = None,
) -> LineSample:
    """Sample nodal fields along the chord y = x of the disk.

    Places ``count`` equally spaced points on the full diagonal chord through
    the disk center and interpolates every field with Shepard weighting from
    ``n_neighbors`` nearest nodes. ``t`` is the x-coordinate of each sample.
    The disk geometry defaults to the circumscribing circle of the node set.
    """
    if count < 2:
        raise ConfigurationError(f"sample count must be at least 2, got {count}")
    if center is None or radius is None:
        boundary = nodes.positions[nodes.boundary_indices]
        if len(boundary) == 0:
            raise ConfigurationError("node set has no boundary nodes to infer the disk from")
        center = boundary.mean(axis=0) if center is None else np.asarray(center, float)
        radius = float(np.linalg.norm(boundary - center, axis=1).mean()) if radius is None else radius

    diag = np.array([1.0, 1.0]) / np.sqrt(2.0)
    span = np.linspace(-radius, radius, count)
    positions = np.asarray(center) + span[:, None] * diag

    names = list(fields)
    stacked = np.column_stack([np.asarray(fields[name], dtype=np.float64) for name in names])
    interp = ShepardInterpolator(n_neighbors=n_neighbors, power=power)
    interp.fit(nodes.positions, stacked)
    sampled = interp.predict(positions)
    values = {name: sampled[:, j] for j, name in enumerate(names)}
    return LineSample(positions[:, 0].copy(), positions, values, n_neighbors)
