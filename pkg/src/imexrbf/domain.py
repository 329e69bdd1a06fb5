"""Disk domain description and the scattered-node discretization container."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum

import numpy as np

from .errors import ConfigurationError
from .validation import check_positions


class NodeKind(IntEnum):
    """Node classification; integer values match the CSV encoding."""

    INTERIOR = 0
    NEUMANN = 1
    DIRICHLET = 2


@dataclass(frozen=True)
class DomainSpec:
    """Disk domain with a target node spacing and a fill seed.

    The domain is kept behind a signed-distance predicate so that other
    implicitly defined shapes stay a possible extension; only the disk is
    implemented.
    """

    center: np.ndarray = field(default_factory=lambda: np.zeros(2))
    radius: float = 1.0
    spacing: float = 0.0101
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "center", np.asarray(self.center, dtype=np.float64))
        if self.center.shape != (2,):
            raise ConfigurationError(f"center must be a 2-vector, got shape {self.center.shape}")
        if not self.radius > 0:
            raise ConfigurationError(f"radius must be positive, got {self.radius}")
        if not self.spacing > 0:
            raise ConfigurationError(f"spacing must be positive, got {self.spacing}")
        # Any larger spacing cannot place the two boundary nodes a discretization needs.
        if self.spacing > np.pi * self.radius:
            raise ConfigurationError(
                f"spacing {self.spacing} too large for radius {self.radius}"
            )
        if self.seed < 0:
            raise ConfigurationError(f"seed must be a nonnegative integer, got {self.seed}")

    def signed_distance(self, points: np.ndarray) -> np.ndarray:
        """Negative inside the disk, zero on the circle, positive outside."""
        points = np.atleast_2d(np.asarray(points, dtype=np.float64))
        return np.linalg.norm(points - self.center, axis=1) - self.radius


@dataclass
class NodeSet:
    """Scattered discretization: positions, node kinds, outward boundary normals.

    Normals are unit vectors for boundary nodes and NaN for interior ones.
    ``spacing`` is the target spacing the set was generated with; it is None
    for sets read back from CSV without one.
    """

    positions: np.ndarray
    kinds: np.ndarray
    normals: np.ndarray
    spacing: float | None = None

    def __post_init__(self):
        self.positions = check_positions(self.positions, "positions")
        self.kinds = np.asarray(self.kinds, dtype=np.int64)
        self.normals = np.asarray(self.normals, dtype=np.float64)
        n = len(self.positions)
        if self.kinds.shape != (n,):
            raise ConfigurationError(f"kinds must have shape ({n},), got {self.kinds.shape}")
        if self.normals.shape != (n, 2):
            raise ConfigurationError(f"normals must have shape ({n}, 2), got {self.normals.shape}")
        if not np.isin(self.kinds, [k.value for k in NodeKind]).all():
            raise ConfigurationError("kinds contains values outside {0, 1, 2}")

    def __len__(self) -> int:
        return len(self.positions)

    @property
    def interior_indices(self) -> np.ndarray:
        return np.flatnonzero(self.kinds == NodeKind.INTERIOR)

    @property
    def neumann_indices(self) -> np.ndarray:
        return np.flatnonzero(self.kinds == NodeKind.NEUMANN)

    @property
    def dirichlet_indices(self) -> np.ndarray:
        return np.flatnonzero(self.kinds == NodeKind.DIRICHLET)

    @property
    def boundary_indices(self) -> np.ndarray:
        return np.flatnonzero(self.kinds != NodeKind.INTERIOR)
