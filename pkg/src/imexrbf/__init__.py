"""Meshless RBF-FD Poisson solver with an implicit-explicit a-posteriori error indicator."""

from .config import RunConfig, make_config, read_config_file
from .domain import DomainSpec, NodeKind, NodeSet
from .errors import (
    ConfigurationError,
    CsvFormatError,
    PipelineStageError,
    SolverBreakdownError,
    StencilDegeneracyError,
)
from .indicator import IndicatorField, explicit_reconstruct, indicator
from .interpolate import LineSample, ShepardInterpolator, sample_line
from .linsys import SolveReport, SparseSystem, assemble, solve_bicgstab
from .nodegen import discretize_boundary, fill_interior, generate_disk_nodes
from .operators import (
    DirectionalDerivative,
    Laplacian,
    OperatorWeights,
    RbfConfig,
    RbfFdOperator,
    compute_weights,
    local_system,
    monomial_exponents,
)
from .pipeline import (
    ImexPoissonSolver,
    ImplicitSolve,
    reconstruct_indicator,
    run_pipeline,
    solve_poisson,
)
from .problem import (
    GaussianSourceProblem,
    NeumannMode,
    PolynomialProblem,
    SourceParams,
)
from .stencils import StencilTable, build_stencils, stencil_size

__version__ = "0.1.0"

__all__ = [
    "ConfigurationError",
    "CsvFormatError",
    "DirectionalDerivative",
    "DomainSpec",
    "GaussianSourceProblem",
    "ImexPoissonSolver",
    "ImplicitSolve",
    "IndicatorField",
    "Laplacian",
    "LineSample",
    "NeumannMode",
    "NodeKind",
    "NodeSet",
    "OperatorWeights",
    "PipelineStageError",
    "PolynomialProblem",
    "RbfConfig",
    "RbfFdOperator",
    "RunConfig",
    "ShepardInterpolator",
    "SolveReport",
    "SolverBreakdownError",
    "SourceParams",
    "SparseSystem",
    "StencilDegeneracyError",
    "StencilTable",
    "assemble",
    "build_stencils",
    "compute_weights",
    "discretize_boundary",
    "explicit_reconstruct",
    "fill_interior",
    "generate_disk_nodes",
    "indicator",
    "local_system",
    "make_config",
    "monomial_exponents",
    "read_config_file",
    "reconstruct_indicator",
    "run_pipeline",
    "sample_line",
    "solve_bicgstab",
    "solve_poisson",
    "stencil_size",
]
