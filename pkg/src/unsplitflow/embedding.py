"""Rotation systems (combinatorial embeddings) and their predicates.

A rotation system stores, for every vertex, the counterclockwise cyclic order
of its incident arcs.  The embedding is always *input* here: we never compute
one, we only validate that a supplied rotation system describes a planar map
(by tracing faces and checking Euler's formula) and answer ordering queries
against it.

Two predicates drive the decomposition machinery:

* ``is_progression``: does a tuple of arcs incident to ``v`` appear as a
  subsequence of one full counterclockwise sweep of the cyclic order starting
  at the tuple's first element?
* ``paths_cross``: do two arc-disjoint directed paths cross at some common
  mutually internal vertex, i.e. do their in/out arcs interleave there?
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .graph import Graph


class MalformedRotationError(ValueError):
    """The rotation system does not structurally match the graph."""


class RotationSystem:
    """Counterclockwise cyclic arc order per vertex.

    ``order[v]`` lists the arc ids incident to ``v``.  An arc appears exactly
    once in the order of its tail and once in the order of its head.
    Position lookups are cached lazily per vertex.
    """

    __slots__ = ("order", "_pos")

    def __init__(self, order: Sequence[Sequence[int]]):
        self.order: list[tuple[int, ...]] = [tuple(seq) for seq in order]
        self._pos: dict[int, dict[int, int]] = {}

    @property
    def vertex_count(self) -> int:
        return len(self.order)

    def positions(self, v: int) -> dict[int, int]:
        pos = self._pos.get(v)
        if pos is None:
            pos = {a: i for i, a in enumerate(self.order[v])}
            self._pos[v] = pos
        return pos

    def structural_problems(self, graph: Graph) -> list[str]:
        """All structural mismatches between this rotation and ``graph``."""
        problems: list[str] = []
        if len(self.order) != graph.vertex_count:
            problems.append(
                f"rotation covers {len(self.order)} vertices, graph has {graph.vertex_count}"
            )
            return problems
        for v in range(graph.vertex_count):
            seq = self.order[v]
            incident = list(graph.out_arcs(v)) + list(graph.in_arcs(v))
            if len(seq) != len(incident):
                problems.append(
                    f"vertex {v}: cyclic order has {len(seq)} arcs, degree is {len(incident)}"
                )
                continue
            if len(set(seq)) != len(seq):
                problems.append(f"vertex {v}: duplicate arc in cyclic order")
                continue
            if set(seq) != set(incident):
                problems.append(f"vertex {v}: cyclic order is not the incident arc set")
        return problems

    def __repr__(self) -> str:
        return f"RotationSystem(vertices={len(self.order)})"


def is_progression(rotation: RotationSystem, v: int, arcs: Sequence[int]) -> bool:
    """True iff ``arcs`` is a subsequence of one counterclockwise sweep of
    the cyclic order at ``v`` starting at ``arcs[0]``."""
    if not arcs:
        return True
    pos = rotation.positions(v)
    m = len(rotation.order[v])
    try:
        indices = [pos[a] for a in arcs]
    except KeyError as exc:
        raise ValueError(f"arc {exc.args[0]} is not incident to vertex {v}") from None
    if len(set(arcs)) != len(arcs):
        raise ValueError("progression arcs must be pairwise distinct")
    base = indices[0]
    rel = [(i - base) % m for i in indices]
    return all(rel[k] < rel[k + 1] for k in range(len(rel) - 1))


@dataclass
class PlanarityReport:
    """Result of face tracing plus the Euler check."""

    face_count: int
    faces: list[list[tuple[int, bool]]]
    component_count: int
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def trace_faces(graph: Graph, rotation: RotationSystem) -> list[list[tuple[int, bool]]]:
    """Face boundaries of the map, as orbits of the next-dart rule.

    A dart is (arc, forward); ``forward`` darts travel tail to head.  After
    arriving at a vertex along a dart, the walk leaves along the clockwise
    neighbour of the reversed dart, which traces each face exactly once.
    """
    problems = rotation.structural_problems(graph)
    if problems:
        raise MalformedRotationError("; ".join(problems))
    m = graph.arc_count
    # dart id: 2*arc for forward (located at tail), 2*arc+1 for backward.
    next_dart = [0] * (2 * m)
    for arc in range(m):
        for forward in (False, True):
            dart = 2 * arc + (0 if forward else 1)
            target = graph.head(arc) if forward else graph.tail(arc)
            pos = rotation.positions(target)
            seq = rotation.order[target]
            i = pos[arc]
            succ_arc = seq[(i - 1) % len(seq)]
            # Leave ``target`` along succ_arc, in the direction away from it.
            if graph.tail(succ_arc) == target:
                next_id = 2 * succ_arc
            else:
                next_id = 2 * succ_arc + 1
            next_dart[dart] = next_id
    seen = [False] * (2 * m)
    faces: list[list[tuple[int, bool]]] = []
    for start in range(2 * m):
        if seen[start]:
            continue
        face: list[tuple[int, bool]] = []
        d = start
        while not seen[d]:
            seen[d] = True
            face.append((d // 2, d % 2 == 0))
            d = next_dart[d]
        faces.append(face)
    return faces


def validate_planarity(graph: Graph, rotation: RotationSystem) -> PlanarityReport:
    """Check that the rotation system describes a planar map.

    Faces are traced per the next-dart rule and Euler's formula is applied in
    the form |V| - |E| + |F| = 1 + #components, which counts the outer face
    shared by all components exactly once.  Raises on structurally malformed
    rotations; genus defects are reported, not raised.
    """
    faces = trace_faces(graph, rotation)
    labels = graph.undirected_components()
    component_count = max(labels) + 1 if labels else 0
    edge_components = {labels[graph.tail(a)] for a in range(graph.arc_count)}
    orbit_count = len(faces)
    # Each component with edges contributes its own outer-face orbit; the
    # geometric outer face is shared, so merge the extras.
    if edge_components:
        face_count = orbit_count - (len(edge_components) - 1)
    else:
        face_count = 1
    violations: list[str] = []
    v, e = graph.vertex_count, graph.arc_count
    if v - e + face_count != component_count + 1:
        violations.append(
            f"euler: |V|-|E|+|F| = {v}-{e}+{face_count} != 1 + {component_count} components"
        )
    return PlanarityReport(
        face_count=face_count,
        faces=faces,
        component_count=component_count,
        violations=violations,
    )


def _walk_path(graph: Graph, path: Sequence[int], name: str) -> list[int]:
    """Vertex sequence of a directed path given as arc ids; validates it."""
    if not path:
        raise ValueError(f"{name} is empty")
    for a in path:
        if not (0 <= a < graph.arc_count):
            raise ValueError(f"{name} references unknown arc {a}")
    vertices = [graph.tail(path[0])]
    for a in path:
        if graph.tail(a) != vertices[-1]:
            raise ValueError(f"{name} is not a connected directed path")
        vertices.append(graph.head(a))
    if len(set(vertices)) != len(vertices):
        raise ValueError(f"{name} revisits a vertex, not a simple path")
    return vertices


def paths_cross(
    graph: Graph,
    rotation: RotationSystem,
    path1: Sequence[int],
    path2: Sequence[int],
) -> bool:
    """True iff the two arc-disjoint directed paths cross.

    They cross when some vertex internal to both witnesses the forbidden
    pattern: with a_i the in-arc and b_i the out-arc of path i at v, either
    (a1, a2, b1, b2) or (a2, a1, b2, b1) is a progression of the cyclic order
    at v.
    """
    if set(path1) & set(path2):
        raise ValueError("paths must be arc-disjoint")
    verts1 = _walk_path(graph, path1, "path1")
    verts2 = _walk_path(graph, path2, "path2")
    through1 = {
        verts1[i]: (path1[i - 1], path1[i]) for i in range(1, len(path1))
    }
    through2 = {
        verts2[i]: (path2[i - 1], path2[i]) for i in range(1, len(path2))
    }
    for v, (a1, b1) in through1.items():
        pair = through2.get(v)
        if pair is None:
            continue
        a2, b2 = pair
        if is_progression(rotation, v, (a1, a2, b1, b2)):
            return True
        if is_progression(rotation, v, (a2, a1, b2, b1)):
            return True
    return False
