"""Quasi-uniform node placement on the disk: boundary arcs plus an advancing-front fill."""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from .domain import DomainSpec, NodeKind, NodeSet
from .errors import ConfigurationError


def discretize_boundary(spec: DomainSpec) -> NodeSet:
    """Place equally spaced boundary nodes with outward normals and typed kinds.

    The arc step is the closest divisor of the circumference to the target
    spacing. Nodes with x <= 0 get the Neumann kind, the rest Dirichlet.
    """
    count = int(round(2.0 * math.pi * spec.radius / spec.spacing))
    if count < 2:
        raise ConfigurationError(
            f"spacing {spec.spacing} leaves fewer than two boundary nodes on radius {spec.radius}"
        )
    theta = 2.0 * math.pi * np.arange(count) / count
    normals = np.column_stack([np.cos(theta), np.sin(theta)])
    positions = spec.center + spec.radius * normals
    kinds = np.where(positions[:, 0] <= 0.0, NodeKind.NEUMANN, NodeKind.DIRICHLET)
    return NodeSet(positions, kinds, normals, spacing=spec.spacing)


def fill_interior(
    spec: DomainSpec, boundary: NodeSet, candidates_per_node: int = 15
) -> NodeSet:
    """Advancing-front Poisson-disk fill of the disk interior.

    Seeds the front with the boundary nodes, then repeatedly expands candidate
    points at distance h from each front node in randomized directions,
    accepting a candidate iff it lies inside the domain (h/2 clear of the
    circle) and no existing node is closer than h. Proximity queries go
    through a background grid of cell size h, so the fill is near-linear in
    the node count. Deterministic for a fixed seed.
    """
    h = spec.spacing
    rng = np.random.default_rng(spec.seed)
    k = int(candidates_per_node)
    if k < 1:
        raise ConfigurationError("candidates_per_node must be at least 1")

    step = 2.0 * math.pi / k
    cos_base = [math.cos(step * j) for j in range(k)]
    sin_base = [math.sin(step * j) for j in range(k)]

    xs = boundary.positions[:, 0].tolist()
    ys = boundary.positions[:, 1].tolist()
    cx0 = float(spec.center[0])
    cy0 = float(spec.center[1])
    r_in = spec.radius - 0.5 * h
    r_in2 = r_in * r_in
    h2 = h * h
    floor = math.floor

    grid: dict[tuple[int, int], list[int]] = {}
    for i in range(len(xs)):
        grid.setdefault((floor(xs[i] / h), floor(ys[i] / h)), []).append(i)

    front = deque(range(len(xs)))
    while front:
        i = front.popleft()
        px = xs[i]
        py = ys[i]
        rot = rng.random() * step
        cr = math.cos(rot)
        sr = math.sin(rot)
        for j in range(k):
            ca = cr * cos_base[j] - sr * sin_base[j]
            sa = sr * cos_base[j] + cr * sin_base[j]
            qx = px + h * ca
            qy = py + h * sa
            dx = qx - cx0
            dy = qy - cy0
            if dx * dx + dy * dy >= r_in2:
                continue
            gi = floor(qx / h)
            gj = floor(qy / h)
            ok = True
            for ii in (gi - 1, gi, gi + 1):
                for jj in (gj - 1, gj, gj + 1):
                    bucket = grid.get((ii, jj))
                    if bucket:
                        for q in bucket:
                            ddx = qx - xs[q]
                            ddy = qy - ys[q]
                            if ddx * ddx + ddy * ddy < h2:
                                ok = False
                                break
                        if not ok:
                            break
                if not ok:
                    break
            if ok:
                idx = len(xs)
                xs.append(qx)
                ys.append(qy)
                grid.setdefault((gi, gj), []).append(idx)
                front.append(idx)

    n_boundary = len(boundary)
    n_total = len(xs)
    positions = np.column_stack([xs, ys])
    kinds = np.concatenate(
        [boundary.kinds, np.full(n_total - n_boundary, NodeKind.INTERIOR, dtype=np.int64)]
    )
    normals = np.vstack(
        [boundary.normals, np.full((n_total - n_boundary, 2), np.nan)]
    )
    return NodeSet(positions, kinds, normals, spacing=h)


def generate_disk_nodes(spec: DomainSpec, candidates_per_node: int = 15) -> NodeSet:
    """Boundary discretization followed by the interior fill."""
    return fill_interior(spec, discretize_boundary(spec), candidates_per_node)
