"""Random instance generation.

Instances are built by sampling source-to-terminal paths on a planar DAG
with small rational weights and summing them up, so feasibility, exactness
and planarity hold by construction and no LP solver is involved.  The PRNG
is Python's Mersenne Twister seeded from the spec, which gives byte-stable
instances across platforms.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from .graph import Graph
from .model import PssufInstance, make_instance
from .rational import ZERO


@dataclass(frozen=True)
class GeneratorSpec:
    """Reproducible description of one generated instance."""

    kind: str = "grid"
    rows: int = 4
    cols: int = 4
    terminal_count: int = 2
    path_samples: int = 10
    demand_low: Fraction = Fraction(1)
    demand_high: Fraction = Fraction(4)
    seed: int = 0
    fixture: str = ""


def rotation_from_layout(
    graph: Graph,
    positions,
    nudges: dict[tuple[int, bool], float] | None = None,
) -> list[list[int]]:
    """Counterclockwise cyclic orders from a straight-line drawing.

    ``positions[v]`` is an (x, y) point.  ``nudges`` optionally adds an angle
    offset in degrees per (arc, at_tail) end, used to encode curved parallel
    arcs: a left-bending arc leaves its tail rotated counterclockwise and
    arrives at its head rotated clockwise.  Raises if two arcs at a vertex
    end up at the same angle, since the order would be ambiguous.
    """
    nudges = nudges or {}
    order: list[list[int]] = []
    for v in range(graph.vertex_count):
        entries: list[tuple[float, int]] = []
        for a in list(graph.out_arcs(v)) + list(graph.in_arcs(v)):
            at_tail = graph.tail(a) == v
            other = graph.head(a) if at_tail else graph.tail(a)
            dx = positions[other][0] - positions[v][0]
            dy = positions[other][1] - positions[v][1]
            angle = math.degrees(math.atan2(dy, dx)) + nudges.get((a, at_tail), 0.0)
            entries.append((angle % 360.0, a))
        entries.sort()
        for i in range(1, len(entries)):
            if entries[i][0] == entries[i - 1][0]:
                raise ValueError(
                    f"ambiguous embedding at vertex {v}: arcs "
                    f"{entries[i - 1][1]} and {entries[i][1]} share an angle"
                )
        order.append([a for _, a in entries])
    return order


def _draw_weight(rng: random.Random, low: Fraction, high: Fraction) -> Fraction:
    """Small random rational in [low, high]."""
    den = rng.randint(1, 6)
    lo = math.ceil(low * den)
    hi = math.floor(high * den)
    if hi < lo:
        return Fraction(low)
    return Fraction(rng.randint(lo, hi), den)


def _grid_skeleton(rows: int, cols: int):
    """Left-to-right, top-to-bottom grid DAG with its drawing."""
    def vid(r: int, c: int) -> int:
        return r * cols + c

    arcs: list[tuple[int, int]] = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                arcs.append((vid(r, c), vid(r, c + 1)))
            if r + 1 < rows:
                arcs.append((vid(r, c), vid(r + 1, c)))
    positions = [(c, -r) for r in range(rows) for c in range(cols)]
    boundary = sorted(
        {
            vid(r, c)
            for r in range(rows)
            for c in range(cols)
            if r in (0, rows - 1) or c in (0, cols - 1)
        }
    )
    return rows * cols, arcs, positions, boundary


def _grid_path(rng: random.Random, cols: int, source: int, target: int) -> list[int]:
    """Uniformly random monotone lattice walk from source to target vertex."""
    r0, c0 = divmod(source, cols)
    r1, c1 = divmod(target, cols)
    steps: list[str] = []
    rights = c1 - c0
    downs = r1 - r0
    while rights or downs:
        if rights and (not downs or rng.randrange(rights + downs) < rights):
            steps.append("R")
            rights -= 1
        else:
            steps.append("D")
            downs -= 1
    return steps


def _fan_skeleton(rows: int, cols: int):
    """Source fanning into ``rows`` layers of ``cols`` vertices."""
    n = 1 + rows * cols
    arcs: list[tuple[int, int]] = []
    for j in range(cols):
        arcs.append((0, 1 + j))
    for layer in range(rows - 1):
        base = 1 + layer * cols
        nxt = base + cols
        for j in range(cols):
            arcs.append((base + j, nxt + j))
            if j + 1 < cols:
                arcs.append((base + j, nxt + j + 1))
    positions = [(0.0, -(cols - 1) / 2.0)]
    for layer in range(rows):
        for j in range(cols):
            positions.append((float(layer + 1), float(-j)))
    last_layer = [1 + (rows - 1) * cols + j for j in range(cols)]
    return n, arcs, positions, last_layer


def generate(spec: GeneratorSpec) -> PssufInstance:
    """Build the instance described by ``spec``.

    Grids route monotone lattice paths from the top-left corner to boundary
    terminals; layered fans route layer-by-layer walks to last-layer
    terminals.  The flow is the weighted sum of the sampled paths and each
    terminal demands the total weight routed to it.
    """
    if spec.kind == "fixture":
        from . import fixtures

        return fixtures.by_name(spec.fixture)
    rng = random.Random(spec.seed)
    if spec.kind == "grid":
        if spec.rows < 1 or spec.cols < 1 or (spec.rows == 1 and spec.cols == 1):
            raise ValueError("grid needs at least two vertices")
        n, arcs, positions, candidates = _grid_skeleton(spec.rows, spec.cols)
        source = 0
    elif spec.kind == "layered_fan":
        if spec.rows < 1 or spec.cols < 1:
            raise ValueError("layered fan needs at least one layer and one column")
        n, arcs, positions, candidates = _fan_skeleton(spec.rows, spec.cols)
        source = 0
    else:
        raise ValueError(f"unknown generator kind {spec.kind!r}")
    if spec.demand_low <= 0 or spec.demand_high < spec.demand_low:
        raise ValueError("demand range must be positive and ordered")
    candidates = [v for v in candidates if v != source]
    if not candidates:
        raise ValueError("no terminal candidates, the graph is too small")
    count = min(spec.terminal_count, len(candidates))
    if count < 1:
        raise ValueError("terminal_count must be at least 1")
    terminals = sorted(rng.sample(candidates, count))

    graph = Graph(n, arcs)
    arc_id = {(graph.tail(a), graph.head(a)): a for a in range(graph.arc_count)}
    flow = [ZERO] * graph.arc_count
    demands = {t: ZERO for t in terminals}
    for _ in range(max(spec.path_samples, 1)):
        t = terminals[rng.randrange(len(terminals))]
        weight = _draw_weight(rng, spec.demand_low, spec.demand_high)
        demands[t] += weight
        if spec.kind == "grid":
            r, c = 0, 0
            for step in _grid_path(rng, spec.cols, source, t):
                if step == "R":
                    nxt = (r, c + 1)
                else:
                    nxt = (r + 1, c)
                a = arc_id[(r * spec.cols + c, nxt[0] * spec.cols + nxt[1])]
                flow[a] += weight
                r, c = nxt
        else:
            target_j = (t - 1) % spec.cols
            last = spec.rows - 1
            j = rng.randint(max(0, target_j - last), target_j)
            flow[arc_id[(0, 1 + j)]] += weight
            for layer in range(last):
                remaining = last - layer
                need = target_j - j
                if need == remaining:
                    step = 1
                elif need == 0:
                    step = 0
                else:
                    step = rng.randint(0, 1)
                u = 1 + layer * spec.cols + j
                v = 1 + (layer + 1) * spec.cols + j + step
                flow[arc_id[(u, v)]] += weight
                j += step
    rotation = rotation_from_layout(graph, positions)
    return make_instance(n, arcs, source, demands, flow, rotation)
