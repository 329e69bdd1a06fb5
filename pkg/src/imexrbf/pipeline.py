"""End-to-end pipeline: node generation, implicit solve, error indication, line sampling."""

from __future__ import annotations

import dataclasses
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from sklearn.base import BaseEstimator

from .config import RunConfig
from .domain import DomainSpec, NodeSet
from .errors import ConfigurationError, PipelineStageError
from .indicator import IndicatorField, explicit_reconstruct, indicator
from .interpolate import ShepardInterpolator, sample_line
from .linsys import SolveReport, SparseSystem, assemble, solve_bicgstab
from .nodegen import generate_disk_nodes
from .operators import (
    DirectionalDerivative,
    Laplacian,
    OperatorWeights,
    RbfConfig,
    compute_weights,
)
from .problem import GaussianSourceProblem, NeumannMode, SourceParams
from .stencils import build_stencils, stencil_size
from . import io as artifacts


@dataclass
class ImplicitSolve:
    """Everything the implicit stage produces, kept for dumps and diagnostics."""

    report: SolveReport
    system: SparseSystem
    lap_weights: OperatorWeights
    normal_weights: OperatorWeights


def solve_poisson(
    nodes: NodeSet,
    problem,
    m_lo: int = 2,
    phs_exponent: int = 3,
    tol: float = 1e-10,
    max_iter: int | None = None,
) -> ImplicitSolve:
    """Low-order weights, row-per-node assembly, and the preconditioned BiCGSTAB solve."""
    cfg = RbfConfig(poly_degree=m_lo, phs_exponent=phs_exponent)
    stencils = build_stencils(nodes, stencil_size(m_lo, cfg.dim), degree=m_lo)
    lap = compute_weights(nodes, stencils, Laplacian(), cfg, rows=nodes.interior_indices)
    neumann = nodes.neumann_indices
    normal = compute_weights(
        nodes,
        stencils,
        DirectionalDerivative(nodes.normals[neumann]),
        cfg,
        rows=neumann,
    )
    system = assemble(nodes, lap, normal, problem)
    report = solve_bicgstab(system, tol=tol, max_iter=max_iter)
    return ImplicitSolve(report, system, lap, normal)


def reconstruct_indicator(
    nodes: NodeSet,
    u_im: np.ndarray,
    problem,
    m_lo: int = 2,
    m_hi: int = 4,
    phs_exponent: int = 3,
) -> IndicatorField:
    """High-order explicit reconstruction of the forcing and both error fields."""
    cfg = RbfConfig(poly_degree=m_hi, phs_exponent=phs_exponent)
    stencils = build_stencils(nodes, stencil_size(m_hi, cfg.dim), degree=m_hi)
    interior = nodes.interior_indices
    hi = compute_weights(nodes, stencils, Laplacian(), cfg, rows=interior)
    a_ex = explicit_reconstruct(u_im, hi)
    return indicator(u_im, a_ex, nodes, problem, rows=interior, m_lo=m_lo, m_hi=m_hi)


class ImexPoissonSolver(BaseEstimator):
    """Scattered-node Poisson solver with built-in implicit-explicit error indication.

    ``fit`` takes a NodeSet, solves the mixed-boundary Poisson problem
    implicitly at order ``m_lo``, reconstructs the forcing explicitly at order
    ``m_hi``, and exposes the solution and both error fields as attributes.
    ``predict`` interpolates the solution at arbitrary points inside the domain.
    """

    def __init__(
        self,
        alpha: float = 1000.0,
        source_x: float = 0.5,
        source_y: float = 0.5,
        m_lo: int = 2,
        m_hi: int = 4,
        phs_exponent: int = 3,
        tol: float = 1e-10,
        max_iter: int | None = None,
        neumann_mode: str = "gradient",
        interp_neighbors: int = 9,
        interp_power: float = 2.0,
    ):
        self.alpha = alpha
        self.source_x = source_x
        self.source_y = source_y
        self.m_lo = m_lo
        self.m_hi = m_hi
        self.phs_exponent = phs_exponent
        self.tol = tol
        self.max_iter = max_iter
        self.neumann_mode = neumann_mode
        self.interp_neighbors = interp_neighbors
        self.interp_power = interp_power

    def _problem(self) -> GaussianSourceProblem:
        params = SourceParams(np.array([self.source_x, self.source_y]), self.alpha)
        return GaussianSourceProblem(params, NeumannMode(self.neumann_mode))

    def fit(self, nodes: NodeSet, y=None):
        if self.m_hi <= self.m_lo:
            raise ConfigurationError(
                f"m_hi={self.m_hi} must be strictly greater than m_lo={self.m_lo}"
            )
        problem = self._problem()
        implicit = solve_poisson(
            nodes,
            problem,
            m_lo=self.m_lo,
            phs_exponent=self.phs_exponent,
            tol=self.tol,
            max_iter=self.max_iter,
        )
        field = reconstruct_indicator(
            nodes,
            implicit.report.solution,
            problem,
            m_lo=self.m_lo,
            m_hi=self.m_hi,
            phs_exponent=self.phs_exponent,
        )
        self.nodes_ = nodes
        self.solve_report_ = implicit.report
        self.field_ = field
        self.u_ = field.u_im
        self.eps_an_ = field.eps_an
        self.eps_imex_ = field.eps_imex
        return self

    def predict(self, X) -> np.ndarray:
        if not hasattr(self, "u_"):
            raise RuntimeError("ImexPoissonSolver must be fitted before predict")
        interp = ShepardInterpolator(
            n_neighbors=self.interp_neighbors, power=self.interp_power
        )
        interp.fit(self.nodes_.positions, self.u_)
        return interp.predict(X)


def _argmax_entry(nodes: NodeSet, values: np.ndarray, index: int) -> dict:
    return {
        "index": index,
        "x": float(nodes.positions[index, 0]),
        "y": float(nodes.positions[index, 1]),
        "value": float(values[index]),
    }


def _run_stage(name: str, timings: dict, fn):
    start = time.perf_counter()
    try:
        result = fn()
    except Exception as exc:
        raise PipelineStageError(name, exc) from exc
    timings[name] = time.perf_counter() - start
    return result


def run_pipeline(config: RunConfig, out_dir) -> dict:
    """Run every stage, write all artifacts into ``out_dir``, and return the report."""
    config.validate()
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    timings: dict[str, float] = {}

    def generate():
        spec = DomainSpec(
            center=np.array([config.center_x, config.center_y]),
            radius=config.radius,
            spacing=config.h,
            seed=config.seed,
        )
        nodes = generate_disk_nodes(spec)
        artifacts.write_nodes_csv(out / artifacts.NODES_CSV, nodes)
        return nodes

    nodes = _run_stage("generate", timings, generate)

    problem = GaussianSourceProblem(
        SourceParams(np.array([config.source_x, config.source_y]), config.alpha),
        NeumannMode(config.neumann_mode),
    )

    def solve():
        implicit = solve_poisson(
            nodes,
            problem,
            m_lo=config.m_lo,
            phs_exponent=config.phs_exponent,
            tol=config.tol,
            max_iter=config.max_iter or None,
        )
        artifacts.write_u_csv(out / artifacts.U_CSV, nodes, implicit.report.solution)
        return implicit

    implicit = _run_stage("solve", timings, solve)
    u_im = implicit.report.solution

    def indicate():
        field = reconstruct_indicator(
            nodes,
            u_im,
            problem,
            m_lo=config.m_lo,
            m_hi=config.m_hi,
            phs_exponent=config.phs_exponent,
        )
        artifacts.write_solution_csv(out / artifacts.SOLUTION_CSV, nodes, field)
        return field

    field = _run_stage("indicate", timings, indicate)

    def sample():
        line = sample_line(
            nodes,
            {"u_im": field.u_im, "eps_an": field.eps_an, "eps_imex": field.eps_imex},
            count=config.sample_count,
            n_neighbors=config.sample_neighbors,
            power=config.sample_power,
            center=np.array([config.center_x, config.center_y]),
            radius=config.radius,
        )
        artifacts.write_line_csv(out / artifacts.LINE_CSV, line)
        return line

    _run_stage("sample", timings, sample)
    timings["total"] = sum(timings.values())

    report = {
        "config": dataclasses.asdict(config),
        "node_count": len(nodes),
        "interior_count": int(len(nodes.interior_indices)),
        "neumann_count": int(len(nodes.neumann_indices)),
        "dirichlet_count": int(len(nodes.dirichlet_indices)),
        "iterations": implicit.report.iterations,
        "residual": implicit.report.residual,
        "converged": implicit.report.converged,
        "timings_seconds": timings,
        "argmax_eps_an": _argmax_entry(nodes, field.eps_an, field.argmax_eps_an()),
        "argmax_eps_imex": _argmax_entry(
            nodes, field.eps_imex, field.argmax_eps_imex(nodes)
        ),
    }
    artifacts.write_report(out / artifacts.REPORT_JSON, report)
    return report
