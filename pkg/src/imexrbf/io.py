"""CSV and JSON artifacts shared between the CLI stages and the plot frontend.

All floats are written with 17 significant digits so files round-trip exactly
and identical runs produce byte-identical output.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np
from scipy import io as scipy_io

from .domain import NodeSet
from .errors import CsvFormatError
from .indicator import IndicatorField
from .interpolate import LineSample
from .linsys import SparseSystem
from .operators import OperatorWeights

NODES_CSV = "nodes.csv"
U_CSV = "u.csv"
SOLUTION_CSV = "solution.csv"
LINE_CSV = "line.csv"
REPORT_JSON = "report.json"


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def write_nodes_csv(path, nodes: NodeSet) -> None:
    lines = ["x,y,kind,nx,ny"]
    for (x, y), kind, (nx, ny) in zip(nodes.positions, nodes.kinds, nodes.normals):
        if kind == 0:
            lines.append(f"{_fmt(x)},{_fmt(y)},{kind},,")
        else:
            lines.append(f"{_fmt(x)},{_fmt(y)},{kind},{_fmt(nx)},{_fmt(ny)}")
    Path(path).write_text("\n".join(lines) + "\n")


def _read_rows(path, expected_header: str):
    """Yield (lineno, row) for every data row, enforcing the header and field count."""
    expected = expected_header.split(",")
    with open(path, newline="") as handle:
        reader = csv.reader(handle)
        try:
            header = next(reader)
        except StopIteration:
            raise CsvFormatError(path, 1, "file is empty") from None
        if header != expected:
            raise CsvFormatError(path, 1, f"expected header {expected_header!r}")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(expected):
                raise CsvFormatError(
                    path, lineno, f"expected {len(expected)} fields, got {len(row)}"
                )
            yield lineno, row


def _parse_float(path, lineno, token, column):
    try:
        return float(token)
    except ValueError:
        raise CsvFormatError(path, lineno, f"column {column!r}: not a number: {token!r}") from None


def read_nodes_csv(path, spacing: float | None = None) -> NodeSet:
    positions, kinds, normals = [], [], []
    for lineno, row in _read_rows(path, "x,y,kind,nx,ny"):
        x = _parse_float(path, lineno, row[0], "x")
        y = _parse_float(path, lineno, row[1], "y")
        try:
            kind = int(row[2])
        except ValueError:
            raise CsvFormatError(path, lineno, f"column 'kind': not an integer: {row[2]!r}") from None
        if kind == 0:
            if row[3] or row[4]:
                raise CsvFormatError(path, lineno, "interior nodes must have empty normals")
            normal = (math.nan, math.nan)
        else:
            normal = (
                _parse_float(path, lineno, row[3], "nx"),
                _parse_float(path, lineno, row[4], "ny"),
            )
        positions.append((x, y))
        kinds.append(kind)
        normals.append(normal)
    if not positions:
        raise CsvFormatError(path, 2, "no node rows")
    return NodeSet(np.array(positions), np.array(kinds), np.array(normals), spacing=spacing)


def write_u_csv(path, nodes: NodeSet, u: np.ndarray) -> None:
    lines = ["x,y,kind,u_im"]
    for (x, y), kind, value in zip(nodes.positions, nodes.kinds, u):
        lines.append(f"{_fmt(x)},{_fmt(y)},{kind},{_fmt(value)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_u_csv(path) -> tuple[NodeSet, np.ndarray]:
    positions, kinds, values = [], [], []
    for lineno, row in _read_rows(path, "x,y,kind,u_im"):
        positions.append(
            (_parse_float(path, lineno, row[0], "x"), _parse_float(path, lineno, row[1], "y"))
        )
        kinds.append(int(row[2]))
        values.append(_parse_float(path, lineno, row[3], "u_im"))
    if not positions:
        raise CsvFormatError(path, 2, "no solution rows")
    normals = np.full((len(positions), 2), math.nan)
    return NodeSet(np.array(positions), np.array(kinds), normals), np.array(values)


def write_solution_csv(path, nodes: NodeSet, field: IndicatorField) -> None:
    lines = ["x,y,kind,u_im,eps_an,eps_imex"]
    for (x, y), kind, u, ea, ei in zip(
        nodes.positions, nodes.kinds, field.u_im, field.eps_an, field.eps_imex
    ):
        lines.append(f"{_fmt(x)},{_fmt(y)},{kind},{_fmt(u)},{_fmt(ea)},{_fmt(ei)}")
    Path(path).write_text("\n".join(lines) + "\n")


def read_solution_csv(path) -> tuple[NodeSet, dict[str, np.ndarray]]:
    positions, kinds = [], []
    fields: dict[str, list] = {"u_im": [], "eps_an": [], "eps_imex": []}
    for lineno, row in _read_rows(path, "x,y,kind,u_im,eps_an,eps_imex"):
        positions.append(
            (_parse_float(path, lineno, row[0], "x"), _parse_float(path, lineno, row[1], "y"))
        )
        kinds.append(int(row[2]))
        fields["u_im"].append(_parse_float(path, lineno, row[3], "u_im"))
        fields["eps_an"].append(_parse_float(path, lineno, row[4], "eps_an"))
        fields["eps_imex"].append(_parse_float(path, lineno, row[5], "eps_imex"))
    if not positions:
        raise CsvFormatError(path, 2, "no solution rows")
    normals = np.full((len(positions), 2), math.nan)
    nodes = NodeSet(np.array(positions), np.array(kinds), normals)
    return nodes, {name: np.array(column) for name, column in fields.items()}


def write_line_csv(path, sample: LineSample) -> None:
    normalized = sample.normalized()
    lines = ["t,x,y,u_im_norm,eps_an_norm,eps_imex_norm"]
    for i in range(len(sample.t)):
        lines.append(
            ",".join(
                [
                    _fmt(sample.t[i]),
                    _fmt(sample.positions[i, 0]),
                    _fmt(sample.positions[i, 1]),
                    _fmt(normalized["u_im"][i]),
                    _fmt(normalized["eps_an"][i]),
                    _fmt(normalized["eps_imex"][i]),
                ]
            )
        )
    Path(path).write_text("\n".join(lines) + "\n")


def write_report(path, report: dict) -> None:
    Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def write_weights_csv(path, weights: OperatorWeights) -> None:
    """Debug dump: one row per (node, neighbor) weight."""
    lines = ["node,neighbor_rank,neighbor_index,weight"]
    for b, node in enumerate(weights.rows):
        stencil = weights.stencils.indices[node]
        for rank, (neighbor, w) in enumerate(zip(stencil, weights.values[b])):
            lines.append(f"{node},{rank},{neighbor},{_fmt(w)}")
    Path(path).write_text("\n".join(lines) + "\n")


def write_matrix_market(path, system: SparseSystem) -> None:
    """Coordinate-format dump of the assembled matrix for external verification."""
    scipy_io.mmwrite(str(path), system.matrix.tocoo())
