"""Non-crossing path decomposition of a fractional flow.

The decomposition runs in two stages.  First, every internal vertex gets a
*good wiring*: an ordered pairing of in-arcs with out-arcs, each pair with a
nonnegative load, such that the loads on each incident arc sum to its flow
value and no later pair reaches into the cyclic span of an earlier one.
Wirings are built greedily by repeatedly coupling an in-arc with the out-arc
that follows it immediately in the counterclockwise order of the still-live
arcs; a stack holds the current candidates so each coupling costs O(1).

Second, paths are peeled off the flow one at a time: start at the source on
the first outgoing arc (in a fixed linearization of its cyclic order) that
still carries flow, and extend through each internal vertex along the first
wiring pair of the entering arc that still has positive load, until a
terminal is reached.  The path's weight is the smallest load it consumed.

Each peeled path becomes a run of fresh parallel arcs in the arc-split graph
H.  Copies of the same original arc are placed consecutively, ordered by the
wiring pair that produced them: at the tail counterclockwise in pair order,
at the head clockwise (pure peeling order at the source and at terminals,
where no wiring exists).  Pair order rather than peeling order is what makes
the paths pairwise non-crossing regardless of which outgoing arc of the
source is declared first; the two orders coincide whenever peeling happens
to consume the pairs of each out-arc in sequence.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .discrepancy import is_non_interleaving
from .embedding import RotationSystem, is_progression, paths_cross
from .graph import Graph
from .model import PssufInstance
from .rational import ZERO, common_denominator


class DecompositionError(ValueError):
    """The input flow cannot be decomposed as requested."""


@dataclass
class GoodVWiring:
    """Ordered in/out pairing at one vertex with per-pair loads."""

    vertex: int
    pairs: list[tuple[int, int]]
    loads: list[Fraction]


def _greedy_pairs(order, is_out, values):
    """Pair each live in-arc with its current circular successor out-arc.

    ``order`` indexes positions around the vertex (counterclockwise);
    ``values`` may be Fractions or ints, only arithmetic and comparisons are
    used.  Positions with zero value take part in no pair.  Returns pair and
    load lists over positions, in creation order.
    """
    m = len(order)
    alive = [i for i in range(m) if values[i] > 0]
    if not alive:
        return [], []
    nxt = {}
    prv = {}
    for k, i in enumerate(alive):
        j = alive[(k + 1) % len(alive)]
        nxt[i] = j
        prv[j] = i
    y = list(values)
    live_count = len(alive)
    in_z = [False] * m
    stack = []
    for i in alive:
        if not is_out[i] and is_out[nxt[i]]:
            stack.append(i)
            in_z[i] = True
    pairs: list[tuple[int, int]] = []
    loads = []

    def unlink(i):
        p, q = prv[i], nxt[i]
        nxt[p] = q
        prv[q] = p

    while live_count:
        if not stack:
            raise DecompositionError("flow is not conserved at the vertex being wired")
        i = stack.pop()
        in_z[i] = False
        j = nxt[i]
        mu = min(y[i], y[j])
        pairs.append((i, j))
        loads.append(mu)
        y[i] -= mu
        y[j] -= mu
        drop_i = y[i] == 0
        drop_j = y[j] == 0
        if drop_i and drop_j:
            p = prv[i]
            unlink(i)
            unlink(j)
            live_count -= 2
            if live_count and not is_out[p] and is_out[nxt[p]] and not in_z[p]:
                stack.append(p)
                in_z[p] = True
        elif drop_i:
            p = prv[i]
            unlink(i)
            live_count -= 1
            if not is_out[p] and is_out[nxt[p]] and not in_z[p]:
                stack.append(p)
                in_z[p] = True
        else:
            unlink(j)
            live_count -= 1
            if is_out[nxt[i]]:
                stack.append(i)
                in_z[i] = True
    return pairs, loads


def compute_good_wiring(instance: PssufInstance, v: int) -> GoodVWiring:
    """Good wiring of an internal vertex with positive conserved flow.

    Deterministic given the rotation system: candidates are taken from a
    stack seeded in storage order of the cyclic order, most recent first.
    """
    if v == instance.source or v in instance.demands:
        raise ValueError(f"vertex {v} is the source or a terminal")
    g = instance.graph
    inflow = sum((instance.flow[a] for a in g.in_arcs(v)), ZERO)
    outflow = sum((instance.flow[a] for a in g.out_arcs(v)), ZERO)
    if inflow != outflow:
        raise ValueError(f"flow is not conserved at vertex {v}: in {inflow}, out {outflow}")
    if inflow == 0:
        raise ValueError(f"vertex {v} carries no flow")
    order = instance.rotation.order[v]
    out_set = set(g.out_arcs(v))
    is_out = [a in out_set for a in order]
    values = [instance.flow[a] for a in order]
    pos_pairs, loads = _greedy_pairs(order, is_out, values)
    pairs = [(order[i], order[j]) for i, j in pos_pairs]
    return GoodVWiring(vertex=v, pairs=pairs, loads=list(loads))


@dataclass
class ArcSplitDecomposition:
    """Arc-split graph H with a source-numbered nice path decomposition.

    ``paths[i]`` lists H-arc ids; ``arc_map`` sends each H-arc to the arc of
    the decomposed instance it copies; ``weights[i]`` is the coefficient of
    path i; ``terminal_of[i]`` is the terminal the path ends at.  The paths
    partition the arcs of H, start at the source, are pairwise non-crossing
    under ``split_rotation`` and are numbered counterclockwise around the
    source.
    """

    instance: PssufInstance
    split_graph: Graph
    split_rotation: RotationSystem
    arc_map: list[int]
    paths: list[tuple[int, ...]]
    weights: list[Fraction]
    terminal_of: list[int]

    @property
    def path_count(self) -> int:
        return len(self.paths)

    def terminal_sets(self) -> dict[int, list[int]]:
        """Path indices grouped by terminal, in path order."""
        sets: dict[int, list[int]] = {}
        for i, t in enumerate(self.terminal_of):
            sets.setdefault(t, []).append(i)
        return sets

    def projected_path(self, i: int) -> list[int]:
        """Path i as arc ids of the decomposed instance."""
        return [self.arc_map[f] for f in self.paths[i]]


def split_from_paths(
    graph: Graph,
    rotation: RotationSystem,
    arc_paths: Sequence[Sequence[int]],
    traversal_keys: Sequence[Sequence[tuple[int, int]]] | None = None,
) -> tuple[Graph, RotationSystem, list[int], list[tuple[int, ...]]]:
    """Materialize an arc-split graph from paths given as arcs of ``graph``.

    One fresh parallel copy is created per traversal, path by path.  Copies
    of the same arc appear consecutively in the split rotation.  Their order
    inside the block is controlled by ``traversal_keys``: entry [i][k] gives
    (tail_rank, head_rank) for the k-th arc of path i, and blocks are sorted
    by (rank, creation index), ascending at the tail and descending at the
    head.  Without keys all ranks are equal, which leaves pure creation
    order at the tail and its reverse at the head.
    """
    copies: list[list[tuple[int, int, int]]] = [[] for _ in range(graph.arc_count)]
    split_arcs: list[tuple[int, int]] = []
    arc_map: list[int] = []
    split_paths: list[tuple[int, ...]] = []
    for i, path in enumerate(arc_paths):
        ids = []
        for k, a in enumerate(path):
            f = len(split_arcs)
            split_arcs.append((graph.tail(a), graph.head(a)))
            arc_map.append(a)
            if traversal_keys is None:
                tail_rank = head_rank = 0
            else:
                tail_rank, head_rank = traversal_keys[i][k]
            copies[a].append((f, tail_rank, head_rank))
            ids.append(f)
        split_paths.append(tuple(ids))
    order: list[list[int]] = []
    for v in range(graph.vertex_count):
        seq: list[int] = []
        for a in rotation.order[v]:
            block = copies[a]
            if graph.tail(a) == v:
                seq.extend(f for f, _, _ in sorted(block, key=lambda c: (c[1], c[0])))
            else:
                seq.extend(
                    f
                    for f, _, _ in sorted(
                        block, key=lambda c: (c[2], c[0]), reverse=True
                    )
                )
        order.append(seq)
    split_graph = Graph(graph.vertex_count, split_arcs)
    return split_graph, RotationSystem(order), arc_map, split_paths


def decompose(instance: PssufInstance) -> ArcSplitDecomposition:
    """Source-numbered nice path decomposition of the instance's flow.

    Expects a valid instance that is already normalized (terminals have no
    outgoing arcs) and stripped of zero-flow arcs.  Work is linear in the
    total length of the produced paths; loads are handled as integers over a
    common denominator, so all weights are exact.
    """
    g = instance.graph
    flow = instance.flow
    terminals = set(instance.demands)
    source = instance.source
    for t in terminals:
        if g.out_arcs(t):
            raise ValueError(f"terminal {t} has outgoing arcs, normalize first")
    for a in range(g.arc_count):
        if flow[a] <= 0:
            raise ValueError(f"arc {a} carries no flow, strip zero-flow arcs first")
    if g.in_arcs(source) and any(flow[a] > 0 for a in g.in_arcs(source)):
        raise ValueError("source has incoming flow, instance is not a valid DAG flow")

    if not g.out_arcs(source):
        if terminals:
            raise ValueError("terminals present but the source has no outgoing arcs")
        empty_graph = Graph(g.vertex_count, [])
        empty_rot = RotationSystem([[] for _ in range(g.vertex_count)])
        return ArcSplitDecomposition(
            instance=instance,
            split_graph=empty_graph,
            split_rotation=empty_rot,
            arc_map=[],
            paths=[],
            weights=[],
            terminal_of=[],
        )

    scale = common_denominator(flow)
    int_flow = [int(x * scale) for x in flow]

    # Stage 1: good wirings for every internal vertex that carries flow,
    # with per-in-arc queues over the wiring pairs in creation order.
    pair_out: dict[int, list[int]] = {}
    pair_load: dict[int, list[int]] = {}
    queues: dict[int, dict[int, deque[int]]] = {}
    total_pairs = 0
    for v in range(g.vertex_count):
        if v == source or v in terminals or g.degree(v) == 0:
            continue
        order = instance.rotation.order[v]
        out_set = set(g.out_arcs(v))
        is_out = [a in out_set for a in order]
        values = [int_flow[a] for a in order]
        if sum(values[i] for i in range(len(order)) if is_out[i]) != sum(
            values[i] for i in range(len(order)) if not is_out[i]
        ):
            raise ValueError(f"flow is not conserved at vertex {v}")
        pos_pairs, loads = _greedy_pairs(order, is_out, values)
        outs = [order[j] for _, j in pos_pairs]
        pair_out[v] = outs
        pair_load[v] = list(loads)
        by_in: dict[int, deque[int]] = {}
        for idx, (i, _) in enumerate(pos_pairs):
            by_in.setdefault(order[i], deque()).append(idx)
        queues[v] = by_in
        total_pairs += len(pos_pairs)

    # Stage 2: peel paths off the flow, following the wirings.
    source_order = list(instance.rotation.order[source])
    start = source_order.index(min(source_order))
    linear = source_order[start:] + source_order[:start]
    residual = {a: int_flow[a] for a in linear}
    pointer = 0
    arc_paths: list[list[int]] = []
    path_keys: list[list[tuple[int, int]]] = []
    int_weights: list[int] = []
    terminal_of: list[int] = []
    max_paths = total_pairs + len(linear) + 1
    while pointer < len(linear):
        a = linear[pointer]
        if residual[a] == 0:
            pointer += 1
            continue
        if len(arc_paths) >= max_paths:
            raise DecompositionError("path peeling does not terminate, input flow is inconsistent")
        path = [a]
        used_pairs: list[tuple[int, int]] = []
        current = a
        lam = residual[a]
        while g.head(current) not in terminals:
            v = g.head(current)
            if len(path) > g.arc_count:
                raise DecompositionError("walk exceeds arc count, graph has a directed cycle")
            queue = queues.get(v, {}).get(current)
            if queue is None:
                raise DecompositionError(f"no wiring pair for arc {current} at vertex {v}")
            loads = pair_load[v]
            while queue and loads[queue[0]] == 0:
                queue.popleft()
            if not queue:
                raise DecompositionError(f"wiring at vertex {v} is exhausted")
            idx = queue[0]
            used_pairs.append((v, idx))
            if loads[idx] < lam:
                lam = loads[idx]
            current = pair_out[v][idx]
            path.append(current)
        for v, idx in used_pairs:
            pair_load[v][idx] -= lam
        residual[a] -= lam
        arc_paths.append(path)
        keys: list[tuple[int, int]] = []
        for k in range(len(path)):
            tail_rank = used_pairs[k - 1][1] if k > 0 else 0
            head_rank = used_pairs[k][1] if k < len(used_pairs) else 0
            keys.append((tail_rank, head_rank))
        path_keys.append(keys)
        int_weights.append(lam)
        terminal_of.append(g.head(current))

    split_graph, split_rotation, arc_map, split_paths = split_from_paths(
        g, instance.rotation, arc_paths, path_keys
    )
    weights = [Fraction(w, scale) for w in int_weights]
    return ArcSplitDecomposition(
        instance=instance,
        split_graph=split_graph,
        split_rotation=split_rotation,
        arc_map=arc_map,
        paths=split_paths,
        weights=weights,
        terminal_of=terminal_of,
    )


@dataclass
class NiceDecompositionReport:
    """Independent post-hoc verification of a decomposition."""

    failures: list[str] = field(default_factory=list)
    checked_pairs: int = 0

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, message: str) -> None:
        self.failures.append(message)


def check_nice(decomposition: ArcSplitDecomposition) -> NiceDecompositionReport:
    """Re-verify every property the decomposition promises.

    Checks, from scratch: H is an arc-split of the instance graph (endpoints
    preserved, copies consecutive at both ends), the paths partition the arcs
    of H and run from the source to their terminals, weights are positive,
    the weighted projected paths reconstruct the flow exactly, the paths are
    pairwise non-crossing, the family is source-numbered, and the per
    terminal index sets are non-interleaving.
    """
    report = NiceDecompositionReport()
    dec = decomposition
    inst = dec.instance
    g = inst.graph
    h = dec.split_graph
    rot = dec.split_rotation
    source = inst.source

    if len(dec.arc_map) != h.arc_count:
        report.add("arc map length differs from split graph size")
        return report
    for f, a in enumerate(dec.arc_map):
        if not (0 <= a < g.arc_count):
            report.add(f"arc map sends {f} to unknown arc {a}")
            return report
        if h.tail(f) != g.tail(a) or h.head(f) != g.head(a):
            report.add(f"split arc {f} does not preserve the endpoints of arc {a}")
    for v in range(h.vertex_count):
        seq = rot.order[v]
        if len(seq) != h.degree(v):
            report.add(f"split rotation at vertex {v} misses arcs")
            continue
        blocks = 0
        distinct = set()
        m = len(seq)
        for i, f in enumerate(seq):
            distinct.add(dec.arc_map[f])
            if dec.arc_map[f] != dec.arc_map[seq[(i - 1) % m]]:
                blocks += 1
        if distinct and blocks > max(len(distinct), 1):
            report.add(f"copies of some arc are not consecutive around vertex {v}")

    seen = [0] * h.arc_count
    for i, path in enumerate(dec.paths):
        if not path:
            report.add(f"path {i} is empty")
            continue
        for f in path:
            seen[f] += 1
        if h.tail(path[0]) != source:
            report.add(f"path {i} does not start at the source")
        vertices = [h.tail(path[0])]
        broken = False
        for f in path:
            if h.tail(f) != vertices[-1]:
                report.add(f"path {i} is not a connected directed path")
                broken = True
                break
            vertices.append(h.head(f))
        if broken:
            continue
        if len(set(vertices)) != len(vertices):
            report.add(f"path {i} revisits a vertex")
        if vertices[-1] != dec.terminal_of[i]:
            report.add(f"path {i} does not end at its recorded terminal")
        if dec.weights[i] <= 0:
            report.add(f"path {i} has nonpositive weight {dec.weights[i]}")
    if any(c != 1 for c in seen):
        report.add("paths do not partition the arcs of the split graph")

    reconstructed = [ZERO] * g.arc_count
    for path, w in zip(dec.paths, dec.weights):
        for f in path:
            reconstructed[dec.arc_map[f]] += w
    for a in range(g.arc_count):
        if reconstructed[a] != inst.flow[a]:
            report.add(
                f"flow mismatch on arc {a}: paths give {reconstructed[a]}, instance has {inst.flow[a]}"
            )

    # Pairwise non-crossing, restricted to pairs meeting at an internal vertex.
    through: dict[int, list[int]] = {}
    for i, path in enumerate(dec.paths):
        for f in path[1:]:
            through.setdefault(h.tail(f), []).append(i)
    candidate_pairs = set()
    for v, indices in through.items():
        if len(indices) > 1:
            uniq = sorted(set(indices))
            for x in range(len(uniq)):
                for z in range(x + 1, len(uniq)):
                    candidate_pairs.add((uniq[x], uniq[z]))
    for i, j in sorted(candidate_pairs):
        report.checked_pairs += 1
        try:
            if paths_cross(h, rot, dec.paths[i], dec.paths[j]):
                report.add(f"paths {i} and {j} cross")
        except ValueError as exc:
            report.add(f"paths {i} and {j}: {exc}")

    if dec.paths:
        firsts = [path[0] for path in dec.paths]
        if len(set(firsts)) == len(firsts):
            if not is_progression(rot, source, firsts):
                report.add("paths are not numbered counterclockwise around the source")
        else:
            report.add("two paths share their first arc in the split graph")

    sets = list(dec.terminal_sets().values())
    if not is_non_interleaving(sets):
        report.add("per-terminal index sets interleave")
    return report
