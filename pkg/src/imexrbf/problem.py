"""Manufactured Poisson benchmark: a Gaussian bump with known Laplacian and boundary data."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ConfigurationError


@dataclass(frozen=True)
class SourceParams:
    """Gaussian source position and strength."""

    position: np.ndarray = field(default_factory=lambda: np.array([0.5, 0.5]))
    strength: float = 1000.0

    def __post_init__(self):
        object.__setattr__(self, "position", np.asarray(self.position, dtype=np.float64))
        if self.position.shape != (2,):
            raise ConfigurationError(
                f"source position must be a 2-vector, got shape {self.position.shape}"
            )
        if not self.strength > 0:
            raise ConfigurationError(f"source strength must be positive, got {self.strength}")


class NeumannMode(Enum):
    """Two readings of the normal-derivative data.

    GRADIENT uses grad(u) . n, consistent with the manufactured solution.
    LITERAL keeps the position vector x in place of the source offset x - x_s;
    the two coincide numerically for strong sources, whose boundary data
    underflows to zero either way.
    """

    GRADIENT = "gradient"
    LITERAL = "literal"


class GaussianSourceProblem:
    """Gaussian bump exp(-alpha*||x - x_s||^2) as exact solution.

    ``solution`` doubles as the Dirichlet data, ``laplacian`` as the interior
    forcing, and ``normal_derivative`` as the Neumann data.
    """

    def __init__(self, params: SourceParams, neumann_mode: NeumannMode = NeumannMode.GRADIENT):
        self.params = params
        self.neumann_mode = NeumannMode(neumann_mode)

    def _bump(self, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        offset = x - self.params.position
        r2 = np.sum(offset**2, axis=1)
        return offset, np.exp(-self.params.strength * r2)

    def solution(self, x: np.ndarray) -> np.ndarray:
        _, bump = self._bump(x)
        return bump

    def laplacian(self, x: np.ndarray) -> np.ndarray:
        offset, bump = self._bump(x)
        alpha = self.params.strength
        r2 = np.sum(offset**2, axis=1)
        return 4.0 * (alpha**2 * r2 - alpha) * bump

    def normal_derivative(self, x: np.ndarray, normals: np.ndarray) -> np.ndarray:
        offset, bump = self._bump(x)
        normals = np.atleast_2d(np.asarray(normals, dtype=np.float64))
        alpha = self.params.strength
        if self.neumann_mode is NeumannMode.GRADIENT:
            radial = offset
        else:
            radial = np.atleast_2d(np.asarray(x, dtype=np.float64))
        return -2.0 * alpha * bump * np.sum(radial * normals, axis=1)


class PolynomialProblem:
    """Bivariate polynomial as exact solution, for patch tests.

    ``coefficients`` maps exponent pairs (a, b) to the coefficient of x**a * y**b.
    """

    def __init__(self, coefficients: dict[tuple[int, int], float]):
        self.coefficients = dict(coefficients)

    def solution(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        out = np.zeros(len(x))
        for (a, b), c in self.coefficients.items():
            out += c * x[:, 0] ** a * x[:, 1] ** b
        return out

    def laplacian(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        out = np.zeros(len(x))
        for (a, b), c in self.coefficients.items():
            if a >= 2:
                out += c * a * (a - 1) * x[:, 0] ** (a - 2) * x[:, 1] ** b
            if b >= 2:
                out += c * b * (b - 1) * x[:, 0] ** a * x[:, 1] ** (b - 2)
        return out

    def gradient(self, x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=np.float64))
        out = np.zeros((len(x), 2))
        for (a, b), c in self.coefficients.items():
            if a >= 1:
                out[:, 0] += c * a * x[:, 0] ** (a - 1) * x[:, 1] ** b
            if b >= 1:
                out[:, 1] += c * b * x[:, 0] ** a * x[:, 1] ** (b - 1)
        return out

    def normal_derivative(self, x: np.ndarray, normals: np.ndarray) -> np.ndarray:
        normals = np.atleast_2d(np.asarray(normals, dtype=np.float64))
        return np.sum(self.gradient(x) * normals, axis=1)
