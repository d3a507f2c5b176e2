"""Hand-built instances with known exact behaviour.

* ``showcase_instance``: an 11-vertex, 18-arc instance with four terminals
  and fractional flow values like 21/5 and 109/20, drawn planar; the per
  terminal decomposition weight sums are forced to the demands (7, 5, 3, 2).
* ``crossing_gadget``: a three-terminal gadget together with a *crossing*
  path decomposition of its flow.  Each terminal has two candidate paths and
  every one of the eight combinations overloads one arc by 3 = 1.5 * d_max,
  while solving the same instance stays within d_max.  It demonstrates why
  the decomposition must be chosen non-crossing.
* ``disjoint_paths_instance(k)``: one terminal of demand k whose flow splits
  into k unit paths; any single path overloads its arcs by exactly k - 1,
  which shows the d_max deviation bound is tight.
* WPCS fixtures for the selection layer: a half-integral instance whose best
  interval discrepancy is exactly 3/2, and a two-index cost instance where
  the only affordable selection has prefix discrepancy 1 - epsilon.

Geometry comes from explicit coordinates; curved parallel arcs carry angle
nudges so the rotation system matches the intended drawing.
"""

from __future__ import annotations

from fractions import Fraction

from .decomposition import ArcSplitDecomposition, split_from_paths
from .discrepancy import WpcsInstance
from .graph import Graph
from .generators import rotation_from_layout
from .model import PssufInstance, make_instance


def showcase_instance() -> PssufInstance:
    """Four-terminal instance with demands (7, 5, 3, 2) and 18 arcs."""
    positions = [
        (7.16, -9.04),   # 0 source
        (6.60, -15.00),  # 1 terminal, d = 7
        (10.66, -11.74), # 2 terminal, d = 5
        (13.06, -6.56),  # 3 terminal, d = 3
        (3.50, -6.30),   # 4 terminal, d = 2
        (3.68, -11.70),  # 5
        (10.58, -7.66),  # 6
        (13.30, -9.00),  # 7
        (14.40, -15.00), # 8
        (8.00, -4.44),   # 9
        (14.92, -5.38),  # 10
    ]
    arcs_x = [
        (8, 1, Fraction(21, 5)),
        (5, 1, Fraction(14, 5)),
        (6, 2, Fraction(5, 4)),
        (5, 2, Fraction(5, 4)),
        (0, 2, Fraction(5, 2)),
        (0, 4, Fraction(6, 5)),
        (0, 5, Fraction(109, 20)),
        (0, 6, Fraction(113, 20)),
        (0, 9, Fraction(11, 5)),
        (6, 7, Fraction(29, 10)),
        (7, 8, Fraction(7, 5)),
        (5, 8, Fraction(7, 5)),
        (6, 9, Fraction(3, 2)),
        (7, 3, Fraction(3, 2)),
        (9, 4, Fraction(4, 5)),
        (9, 10, Fraction(29, 10)),
        (10, 3, Fraction(3, 2)),
        (10, 8, Fraction(7, 5)),
    ]
    arcs = [(u, v) for u, v, _ in arcs_x]
    flow = [x for _, _, x in arcs_x]
    graph = Graph(len(positions), arcs)
    rotation = rotation_from_layout(graph, positions)
    demands = {1: Fraction(7), 2: Fraction(5), 3: Fraction(3), 4: Fraction(2)}
    return make_instance(len(positions), arcs, 0, demands, flow, rotation)


# Crossing gadget geometry: a source, eight subdivided "shared" arcs in two
# rows, three junction vertices and three terminals.  Bends (+1 left, -1
# right) separate parallel arcs exactly as drawn.
_GADGET_POSITIONS = [
    (0.0, 0.0),      # 0 source
    (1.3, 1.0), (2.6, 1.0), (3.9, 1.0), (5.2, 1.0),      # 1..4   1a 1b 2a 2b
    (6.5, 1.0), (7.8, 1.0), (9.1, 1.0), (10.4, 1.0),     # 5..8   3a 3b 4a 4b
    (1.3, -1.0), (2.6, -1.0), (3.9, -1.0), (5.2, -1.0),  # 9..12  5a 5b 6a 6b
    (6.5, -1.0), (7.8, -1.0), (9.1, -1.0), (10.4, -1.0), # 13..16 7a 7b 8a 8b
    (11.7, 0.0),     # 17 terminal 1
    (13.0, 0.0),     # 18 terminal 2
    (14.3, 0.0),     # 19 terminal 3
    (3.25, 0.0),     # 20 junction
    (5.85, 0.0),     # 21 junction
    (8.45, 0.0),     # 22 junction
]

_GADGET_ARCS = [
    # 0..7: the shared arcs, each carrying all three colour classes
    (1, 2, 0), (3, 4, 0), (5, 6, 0), (7, 8, 0),
    (9, 10, 0), (11, 12, 0), (13, 14, 0), (15, 16, 0),
    # 8..12: first path to terminal 1 (upper row)
    (0, 1, 0), (2, 3, 0), (4, 5, 0), (6, 7, 0), (8, 17, 0),
    # 13..17: second path to terminal 1 (lower row)
    (0, 9, 0), (10, 11, 0), (12, 13, 0), (14, 15, 0), (16, 17, 0),
    # 18..23: first path to terminal 2
    (0, 1, 1), (2, 3, 1), (4, 21, 0), (21, 13, 0), (14, 15, -1), (16, 18, -1),
    # 24..29: second path to terminal 2
    (0, 9, 1), (10, 11, -1), (12, 21, 0), (21, 5, 0), (6, 7, 1), (8, 18, 1),
    # 30..36: first path to terminal 3
    (0, 1, -1), (2, 20, 0), (20, 11, 0), (12, 13, -1), (14, 22, 0), (22, 7, 0), (8, 19, 1),
    # 37..43: second path to terminal 3
    (0, 9, -1), (10, 20, 0), (20, 3, 0), (4, 5, 1), (6, 22, 0), (22, 15, 0), (16, 19, -1),
]

# Paths through the gadget, one per colour class and side, as arc id lists.
_GADGET_PATHS = {
    "t1_first": [8, 0, 9, 1, 10, 2, 11, 3, 12],
    "t1_second": [13, 4, 14, 5, 15, 6, 16, 7, 17],
    "t2_first": [18, 0, 19, 1, 20, 21, 6, 22, 7, 23],
    "t2_second": [24, 4, 25, 5, 26, 27, 2, 28, 3, 29],
    "t3_first": [30, 0, 31, 32, 5, 33, 6, 34, 35, 3, 36],
    "t3_second": [37, 4, 38, 39, 1, 40, 2, 41, 42, 7, 43],
}


def crossing_gadget_instance() -> PssufInstance:
    arcs = [(u, v) for u, v, _ in _GADGET_ARCS]
    graph = Graph(len(_GADGET_POSITIONS), arcs)
    theta = 12.0
    nudges: dict[tuple[int, bool], float] = {}
    for a, (_, _, bend) in enumerate(_GADGET_ARCS):
        if bend:
            nudges[(a, True)] = bend * theta
            nudges[(a, False)] = -bend * theta
    rotation = rotation_from_layout(graph, _GADGET_POSITIONS, nudges)
    flow = [Fraction(3)] * 8 + [Fraction(1)] * (len(arcs) - 8)
    demands = {17: Fraction(2), 18: Fraction(2), 19: Fraction(2)}
    return make_instance(len(_GADGET_POSITIONS), arcs, 0, demands, flow, rotation)


def crossing_gadget() -> tuple[PssufInstance, ArcSplitDecomposition]:
    """The gadget instance plus its crossing decomposition.

    Paths are numbered counterclockwise around the source, which interleaves
    the per-terminal index sets {1, 4}, {2, 5} and {0, 3}; the decomposition
    is a genuine flow decomposition but fails every structural guarantee a
    non-crossing one provides.
    """
    instance = crossing_gadget_instance()
    ordered = [
        _GADGET_PATHS["t3_second"],
        _GADGET_PATHS["t1_second"],
        _GADGET_PATHS["t2_second"],
        _GADGET_PATHS["t3_first"],
        _GADGET_PATHS["t1_first"],
        _GADGET_PATHS["t2_first"],
    ]
    terminal_of = [19, 17, 18, 19, 17, 18]
    split_graph, split_rotation, arc_map, split_paths = split_from_paths(
        instance.graph, instance.rotation, ordered
    )
    weights = [Fraction(1)] * 6
    return instance, ArcSplitDecomposition(
        instance=instance,
        split_graph=split_graph,
        split_rotation=split_rotation,
        arc_map=arc_map,
        paths=split_paths,
        weights=weights,
        terminal_of=terminal_of,
    )


def disjoint_paths_instance(k: int) -> PssufInstance:
    """One terminal of demand k served by k arc-disjoint unit paths."""
    if k < 1:
        raise ValueError("k must be at least 1")
    n = k + 2
    terminal = k + 1
    arcs: list[tuple[int, int]] = []
    for i in range(1, k + 1):
        arcs.append((0, i))
        arcs.append((i, terminal))
    positions = [(0.0, 0.0)]
    positions += [(1.0, i - (k + 1) / 2.0) for i in range(1, k + 1)]
    positions.append((2.0, 0.0))
    graph = Graph(n, arcs)
    rotation = rotation_from_layout(graph, positions)
    flow = [Fraction(1)] * len(arcs)
    return make_instance(n, arcs, 0, {terminal: Fraction(k)}, flow, rotation)


def half_integral_wpcs() -> WpcsInstance:
    """Three nested pairs, demands (2, 1, 2), y = 1/2 everywhere.

    Every integral selection has interval discrepancy at least 3/2, strictly
    above d_max / 2 = 1, so the cost-free prefix guarantee cannot be carried
    over to half-integral instances with costs.
    """
    half = Fraction(1, 2)
    return WpcsInstance(
        6,
        [(0, 5), (1, 4), (2, 3)],
        [Fraction(2), Fraction(1), Fraction(2)],
        [half] * 6,
    )


def cost_tight_wpcs(epsilon: Fraction = Fraction(1, 100)) -> tuple[WpcsInstance, list[Fraction]]:
    """Two indices, one set: costs force the expensive-discrepancy choice.

    The only selection not more expensive than y picks index 0 and has
    prefix discrepancy 1 - epsilon, showing the with-cost prefix bound of
    d_max cannot be improved to d_max / 2.
    """
    epsilon = Fraction(epsilon)
    if not 0 < epsilon <= 1:
        raise ValueError("epsilon must lie in (0, 1]")
    wpcs = WpcsInstance(2, [(0, 1)], [Fraction(1)], [epsilon, 1 - epsilon])
    return wpcs, [Fraction(0), Fraction(1)]


def by_name(name: str) -> PssufInstance:
    """Fixture lookup for the generator and the CLI."""
    if name == "showcase":
        return showcase_instance()
    if name == "crossing-gadget":
        return crossing_gadget_instance()
    if name.startswith("disjoint-paths-"):
        return disjoint_paths_instance(int(name.rsplit("-", 1)[1]))
    raise ValueError(f"unknown fixture {name!r}")
