"""Instances of the planar single-source unsplittable flow problem.

An instance bundles an acyclic planar multigraph, a source, terminals with
demands, a nonnegative fractional flow that conserves at every vertex, and a
rotation system realizing a planar embedding.  All numbers are exact
rationals.  Instances are immutable by convention: every operation returns a
new instance plus a small result record describing what changed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .embedding import MalformedRotationError, RotationSystem, validate_planarity
from .graph import Graph
from .rational import ZERO


@dataclass(frozen=True)
class PssufInstance:
    graph: Graph
    source: int
    demands: dict[int, Fraction]
    flow: list[Fraction]
    rotation: RotationSystem

    @property
    def terminals(self) -> list[int]:
        return sorted(self.demands)

    @property
    def d_max(self) -> Fraction:
        if not self.demands:
            return ZERO
        return max(self.demands.values())

    def net_flow(self, v: int) -> Fraction:
        """x(out arcs of v) - x(in arcs of v)."""
        out = sum((self.flow[a] for a in self.graph.out_arcs(v)), ZERO)
        inc = sum((self.flow[a] for a in self.graph.in_arcs(v)), ZERO)
        return out - inc


@dataclass
class ValidationReport:
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


class InvalidInstanceError(ValueError):
    def __init__(self, report: ValidationReport):
        super().__init__("invalid instance: " + "; ".join(report.violations))
        self.report = report


def validate_instance(instance: PssufInstance) -> ValidationReport:
    """Report every violated instance invariant (empty report iff valid).

    Checks: index ranges, no self-loops, source/terminal distinctness,
    nonnegativity of flow and demands, acyclicity, flow conservation at every
    vertex, and that the rotation system is a planar embedding of the graph.
    """
    report = ValidationReport()
    g = instance.graph
    n = g.vertex_count
    if not (0 <= instance.source < n):
        report.add(f"source {instance.source} out of range")
    for t in instance.demands:
        if not (0 <= t < n):
            report.add(f"terminal {t} out of range")
    if instance.source in instance.demands:
        report.add(f"source {instance.source} is also a terminal")
    for a in range(g.arc_count):
        if g.tail(a) == g.head(a):
            report.add(f"self-loop: arc {a} at vertex {g.tail(a)}")
    if len(instance.flow) != g.arc_count:
        report.add(
            f"flow vector has {len(instance.flow)} entries, graph has {g.arc_count} arcs"
        )
        return report
    for a, x in enumerate(instance.flow):
        if x < 0:
            report.add(f"negative flow: arc {a} carries {x}")
    for t, d in instance.demands.items():
        if d < 0:
            report.add(f"negative demand: terminal {t} demands {d}")
    if not g.is_acyclic():
        report.add("acyclicity: graph contains a directed cycle")
    total_demand = sum(instance.demands.values(), ZERO)
    for v in range(n):
        net = instance.net_flow(v)
        if v == instance.source:
            expected = total_demand
        elif v in instance.demands:
            expected = -instance.demands[v]
        else:
            expected = ZERO
        if net != expected:
            report.add(f"conservation: vertex {v} has net flow {net}, expected {expected}")
    problems = instance.rotation.structural_problems(g)
    for p in problems:
        report.add(f"rotation: {p}")
    if not problems:
        try:
            planarity = validate_planarity(g, instance.rotation)
        except MalformedRotationError as exc:
            report.add(f"rotation: {exc}")
        else:
            for p in planarity.violations:
                report.add(f"embedding: {p}")
    return report


@dataclass
class NormalizeResult:
    instance: PssufInstance
    dropped_terminals: list[int]
    terminal_map: dict[int, int]
    auxiliary_arc: dict[int, int]


def normalize_terminals(instance: PssufInstance) -> NormalizeResult:
    """Give every terminal out-degree zero and drop zero-demand terminals.

    A terminal ``t`` with outgoing arcs is replaced by a fresh sink ``t'``
    attached through an arc (t, t') carrying exactly d_t; the new arc is
    appended at the end of the stored cyclic order of ``t``, which keeps the
    embedding planar (the fresh pendant sits in a face incident to ``t``).
    ``terminal_map`` sends each surviving original terminal to its sink in
    the new instance.  Idempotent on already normalized instances.
    """
    g = instance.graph
    dropped = sorted(t for t, d in instance.demands.items() if d == 0)
    kept = {t: d for t, d in instance.demands.items() if d != 0}
    needs_aux = [t for t in sorted(kept) if g.out_arcs(t)]
    if not needs_aux and not dropped:
        return NormalizeResult(
            instance=instance,
            dropped_terminals=[],
            terminal_map={t: t for t in kept},
            auxiliary_arc={},
        )
    arcs = [(g.tail(a), g.head(a)) for a in range(g.arc_count)]
    order = [list(seq) for seq in instance.rotation.order]
    flow = list(instance.flow)
    n = g.vertex_count
    demands: dict[int, Fraction] = {}
    terminal_map: dict[int, int] = {}
    auxiliary_arc: dict[int, int] = {}
    for t in sorted(kept):
        if t not in set(needs_aux):
            demands[t] = kept[t]
            terminal_map[t] = t
            continue
        sink = n
        n += 1
        arc_id = len(arcs)
        arcs.append((t, sink))
        flow.append(kept[t])
        order[t].append(arc_id)
        order.append([arc_id])
        demands[sink] = kept[t]
        terminal_map[t] = sink
        auxiliary_arc[sink] = arc_id
    new_graph = Graph(n, arcs)
    new_instance = PssufInstance(
        graph=new_graph,
        source=instance.source,
        demands=demands,
        flow=flow,
        rotation=RotationSystem(order),
    )
    return NormalizeResult(
        instance=new_instance,
        dropped_terminals=dropped,
        terminal_map=terminal_map,
        auxiliary_arc=auxiliary_arc,
    )


@dataclass
class StripResult:
    instance: PssufInstance
    arc_map: dict[int, int]


def strip_zero_flow(instance: PssufInstance) -> StripResult:
    """Remove all arcs with zero flow; arc ids are remapped densely.

    ``arc_map`` sends surviving old arc ids to their new ids (order
    preserving).  Vertices are kept even if they become isolated.
    """
    g = instance.graph
    keep = [a for a in range(g.arc_count) if instance.flow[a] != 0]
    if len(keep) == g.arc_count:
        return StripResult(instance=instance, arc_map={a: a for a in keep})
    arc_map = {old: new for new, old in enumerate(keep)}
    arcs = [(g.tail(a), g.head(a)) for a in keep]
    flow = [instance.flow[a] for a in keep]
    order = [
        [arc_map[a] for a in seq if a in arc_map] for seq in instance.rotation.order
    ]
    new_instance = PssufInstance(
        graph=Graph(g.vertex_count, arcs),
        source=instance.source,
        demands=dict(instance.demands),
        flow=flow,
        rotation=RotationSystem(order),
    )
    return StripResult(instance=new_instance, arc_map=arc_map)


def make_instance(
    vertex_count: int,
    arcs: Sequence[tuple[int, int]],
    source: int,
    demands: Mapping[int, Fraction],
    flow: Sequence[Fraction],
    rotation: Sequence[Sequence[int]] | RotationSystem,
) -> PssufInstance:
    """Convenience constructor used by generators, fixtures and tests."""
    if not isinstance(rotation, RotationSystem):
        rotation = RotationSystem(rotation)
    return PssufInstance(
        graph=Graph(vertex_count, arcs),
        source=source,
        demands={t: Fraction(d) for t, d in demands.items()},
        flow=[Fraction(x) for x in flow],
        rotation=rotation,
    )
