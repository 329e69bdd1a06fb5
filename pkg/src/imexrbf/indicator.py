"""Implicit-explicit error indication.

The implicit solution is pushed through a higher-order explicit Laplacian and
the reconstructed forcing is compared against the known one; the pointwise gap
flags regions where the implicit solve is least trustworthy. The analytic
error against the manufactured solution is kept alongside for validation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .domain import NodeSet
from .errors import ConfigurationError
from .operators import OperatorWeights


@dataclass
class IndicatorField:
    """Per-node implicit solution and both error fields.

    ``eps_imex`` is defined on interior nodes only; boundary entries are stored
    as zero and excluded from maxima and statistics.
    """

    u_im: np.ndarray
    eps_an: np.ndarray
    eps_imex: np.ndarray
    m_lo: int
    m_hi: int

    def __post_init__(self):
        if self.m_hi <= self.m_lo:
            raise ConfigurationError(
                f"explicit order m_hi={self.m_hi} must exceed implicit order m_lo={self.m_lo}"
            )

    def argmax_eps_an(self) -> int:
        return int(np.argmax(self.eps_an))

    def argmax_eps_imex(self, nodes: NodeSet) -> int:
        masked = np.where(nodes.kinds == 0, self.eps_imex, -np.inf)
        return int(np.argmax(masked))


def explicit_reconstruct(u_im: np.ndarray, hi_lap: OperatorWeights) -> np.ndarray:
    """Apply the high-order explicit Laplacian to the implicit solution.

    Returns the reconstructed forcing at the rows the weights were built for
    (the interior nodes in the standard pipeline).
    """
    u_im = np.asarray(u_im, dtype=np.float64)
    return hi_lap.apply(u_im)


def indicator(
    u_im: np.ndarray,
    a_ex: np.ndarray,
    nodes: NodeSet,
    problem,
    rows: np.ndarray | None = None,
    m_lo: int = 2,
    m_hi: int = 4,
) -> IndicatorField:
    """Pointwise indicator |a_ex - forcing| and validation error |u_im - solution|.

    ``a_ex`` holds the explicit reconstruction at ``rows`` (interior nodes by
    default); everywhere else the indicator is stored as zero.
    """
    u_im = np.asarray(u_im, dtype=np.float64)
    if rows is None:
        rows = nodes.interior_indices
    rows = np.asarray(rows, dtype=np.int64)
    a_ex = np.asarray(a_ex, dtype=np.float64)
    if a_ex.shape != rows.shape:
        raise ConfigurationError(
            f"explicit reconstruction has shape {a_ex.shape}, expected {rows.shape}"
        )
    eps_imex = np.zeros(len(nodes))
    eps_imex[rows] = np.abs(a_ex - problem.laplacian(nodes.positions[rows]))
    eps_an = np.abs(u_im - problem.solution(nodes.positions))
    return IndicatorField(u_im, eps_an, eps_imex, m_lo=m_lo, m_hi=m_hi)
