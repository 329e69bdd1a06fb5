"""Input validation helpers for the estimator-facing API."""

from __future__ import annotations

import numpy as np


def check_positions(X, name: str = "X") -> np.ndarray:
    """Coerce to a C-contiguous (n_points, 2) float64 array of finite coordinates."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != 2:
        raise ValueError(f"{name} must have shape (n_points, 2), got {X.shape}")
    if not np.all(np.isfinite(X)):
        raise ValueError(f"{name} contains non-finite coordinates")
    return np.ascontiguousarray(X)


def check_values(y, n_points: int, name: str = "y") -> np.ndarray:
    """Coerce to float64 values of shape (n_points,) or (n_points, n_fields)."""
    y = np.asarray(y, dtype=np.float64)
    if y.ndim not in (1, 2) or y.shape[0] != n_points:
        raise ValueError(
            f"{name} must have {n_points} rows matching the fitted points, got shape {y.shape}"
        )
    if not np.all(np.isfinite(y)):
        raise ValueError(f"{name} contains non-finite values")
    return y


def check_unit_vectors(v, tol: float = 1e-12, name: str = "direction") -> np.ndarray:
    """Validate a single 2-vector or an (k, 2) stack of unit vectors."""
    v = np.asarray(v, dtype=np.float64)
    if v.shape != (2,) and not (v.ndim == 2 and v.shape[1] == 2):
        raise ValueError(f"{name} must have shape (2,) or (k, 2), got {v.shape}")
    norms = np.linalg.norm(v, axis=-1)
    if not np.all(np.abs(norms - 1.0) <= tol):
        raise ValueError(f"{name} must have unit norm within {tol:g}")
    return v
