"""Command-line runner: the full pipeline or any single stage.

Stages communicate through CSV files in the artifact directory:
generate -> nodes.csv, solve -> u.csv, indicate -> solution.csv,
sample -> line.csv. ``run`` executes all four and writes report.json.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import io as artifacts
from .config import RunConfig, make_config
from .domain import DomainSpec
from .errors import PipelineStageError
from .interpolate import sample_line
from .nodegen import generate_disk_nodes
from .pipeline import reconstruct_indicator, run_pipeline, solve_poisson
from .problem import GaussianSourceProblem, NeumannMode, SourceParams


def _add_common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, default=None, help="key=value config file")
    parser.add_argument("--out", type=Path, default=Path("out"), help="artifact directory")
    parser.add_argument("--m-hi", dest="m_hi", type=int, default=None)
    parser.add_argument("--alpha", type=float, default=None)
    parser.add_argument("--h", type=float, default=None)
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument(
        "--neumann-mode",
        dest="neumann_mode",
        choices=["literal", "gradient"],
        default=None,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="imexrbf",
        description="Meshless Poisson solver with an implicit-explicit error indicator",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("run", "run all stages and write report.json"),
        ("generate", "generate the scattered-node discretization (nodes.csv)"),
        ("solve", "solve the Poisson problem implicitly (u.csv)"),
        ("indicate", "compute both error fields (solution.csv)"),
        ("sample", "sample the fields along the diagonal chord (line.csv)"),
    ]:
        cmd = sub.add_parser(name, help=help_text)
        _add_common_flags(cmd)
        if name == "solve":
            cmd.add_argument(
                "--dump-weights", type=Path, default=None, help="debug CSV of Laplacian weights"
            )
            cmd.add_argument(
                "--dump-matrix", type=Path, default=None, help="Matrix Market dump of the system"
            )
    return parser


def _problem(config: RunConfig) -> GaussianSourceProblem:
    params = SourceParams(np.array([config.source_x, config.source_y]), config.alpha)
    return GaussianSourceProblem(params, NeumannMode(config.neumann_mode))


def _cmd_run(config: RunConfig, args) -> int:
    report = run_pipeline(config, args.out)
    print(
        f"nodes={report['node_count']} iterations={report['iterations']} "
        f"residual={report['residual']:.3e} converged={report['converged']}"
    )
    peak_an = report["argmax_eps_an"]
    peak_imex = report["argmax_eps_imex"]
    print(f"max eps_an {peak_an['value']:.3e} at ({peak_an['x']:.4f}, {peak_an['y']:.4f})")
    print(f"max eps_imex {peak_imex['value']:.3e} at ({peak_imex['x']:.4f}, {peak_imex['y']:.4f})")
    for stage, seconds in report["timings_seconds"].items():
        print(f"time {stage}: {seconds:.3f} s")
    if not report["converged"]:
        print("warning: solver did not reach the requested tolerance", file=sys.stderr)
    return 0


def _cmd_generate(config: RunConfig, args) -> int:
    spec = DomainSpec(
        center=np.array([config.center_x, config.center_y]),
        radius=config.radius,
        spacing=config.h,
        seed=config.seed,
    )
    nodes = generate_disk_nodes(spec)
    args.out.mkdir(parents=True, exist_ok=True)
    artifacts.write_nodes_csv(args.out / artifacts.NODES_CSV, nodes)
    print(f"wrote {len(nodes)} nodes to {args.out / artifacts.NODES_CSV}")
    return 0


def _cmd_solve(config: RunConfig, args) -> int:
    nodes = artifacts.read_nodes_csv(args.out / artifacts.NODES_CSV, spacing=config.h)
    implicit = solve_poisson(
        nodes,
        _problem(config),
        m_lo=config.m_lo,
        phs_exponent=config.phs_exponent,
        tol=config.tol,
        max_iter=config.max_iter or None,
    )
    artifacts.write_u_csv(args.out / artifacts.U_CSV, nodes, implicit.report.solution)
    if args.dump_weights is not None:
        artifacts.write_weights_csv(args.dump_weights, implicit.lap_weights)
    if args.dump_matrix is not None:
        artifacts.write_matrix_market(args.dump_matrix, implicit.system)
    print(
        f"solved {len(nodes)} nodes in {implicit.report.iterations} iterations, "
        f"residual {implicit.report.residual:.3e}"
    )
    if not implicit.report.converged:
        print("warning: solver did not reach the requested tolerance", file=sys.stderr)
    return 0


def _cmd_indicate(config: RunConfig, args) -> int:
    nodes, u_im = artifacts.read_u_csv(args.out / artifacts.U_CSV)
    field = reconstruct_indicator(
        nodes,
        u_im,
        _problem(config),
        m_lo=config.m_lo,
        m_hi=config.m_hi,
        phs_exponent=config.phs_exponent,
    )
    artifacts.write_solution_csv(args.out / artifacts.SOLUTION_CSV, nodes, field)
    print(f"wrote error fields for {len(nodes)} nodes to {args.out / artifacts.SOLUTION_CSV}")
    return 0


def _cmd_sample(config: RunConfig, args) -> int:
    nodes, fields = artifacts.read_solution_csv(args.out / artifacts.SOLUTION_CSV)
    line = sample_line(
        nodes,
        fields,
        count=config.sample_count,
        n_neighbors=config.sample_neighbors,
        power=config.sample_power,
        center=np.array([config.center_x, config.center_y]),
        radius=config.radius,
    )
    artifacts.write_line_csv(args.out / artifacts.LINE_CSV, line)
    print(f"wrote {config.sample_count} line samples to {args.out / artifacts.LINE_CSV}")
    return 0


_HANDLERS = {
    "run": _cmd_run,
    "generate": _cmd_generate,
    "solve": _cmd_solve,
    "indicate": _cmd_indicate,
    "sample": _cmd_sample,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = make_config(
            args.config,
            m_hi=args.m_hi,
            alpha=args.alpha,
            h=args.h,
            seed=args.seed,
            neumann_mode=args.neumann_mode,
        )
    except Exception as exc:
        print(f"error [config]: {exc}", file=sys.stderr)
        return 2
    try:
        return _HANDLERS[args.command](config, args)
    except PipelineStageError as exc:
        print(f"error [{exc.stage}]: {exc.cause}", file=sys.stderr)
        return 1
    except Exception as exc:
        print(f"error [{args.command}]: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
