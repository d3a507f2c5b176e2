"""Directed multigraphs with dense integer arc ids.

Arcs are identified by their position in the construction list, so arc ``k``
is the pair ``(tails[k], heads[k])``.  Parallel arcs are allowed (they are
essential for arc-split graphs); self-loops are representable but rejected by
instance validation.  Graphs are immutable after construction.
"""

from __future__ import annotations

from typing import Iterable, Sequence, Tuple


class Graph:
    __slots__ = ("vertex_count", "tails", "heads", "_out", "_in")

    def __init__(self, vertex_count: int, arcs: Iterable[Tuple[int, int]]):
        if vertex_count < 0:
            raise ValueError("vertex_count must be nonnegative")
        self.vertex_count = vertex_count
        tails: list[int] = []
        heads: list[int] = []
        out: list[list[int]] = [[] for _ in range(vertex_count)]
        inc: list[list[int]] = [[] for _ in range(vertex_count)]
        for k, (u, v) in enumerate(arcs):
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise ValueError(f"arc {k} endpoint out of range: ({u}, {v})")
            tails.append(u)
            heads.append(v)
            out[u].append(k)
            inc[v].append(k)
        self.tails = tails
        self.heads = heads
        self._out = out
        self._in = inc

    @property
    def arc_count(self) -> int:
        return len(self.tails)

    @property
    def arcs(self) -> list[Tuple[int, int, int]]:
        """Arcs as (id, tail, head) triples in id order."""
        return [(k, self.tails[k], self.heads[k]) for k in range(len(self.tails))]

    def tail(self, arc: int) -> int:
        return self.tails[arc]

    def head(self, arc: int) -> int:
        return self.heads[arc]

    def out_arcs(self, v: int) -> Sequence[int]:
        return self._out[v]

    def in_arcs(self, v: int) -> Sequence[int]:
        return self._in[v]

    def degree(self, v: int) -> int:
        return len(self._out[v]) + len(self._in[v])

    def is_acyclic(self) -> bool:
        return self.topological_order() is not None

    def topological_order(self) -> list[int] | None:
        """Kahn's algorithm; None if the graph has a directed cycle."""
        indeg = [len(self._in[v]) for v in range(self.vertex_count)]
        stack = [v for v in range(self.vertex_count) if indeg[v] == 0]
        order: list[int] = []
        while stack:
            v = stack.pop()
            order.append(v)
            for a in self._out[v]:
                w = self.heads[a]
                indeg[w] -= 1
                if indeg[w] == 0:
                    stack.append(w)
        if len(order) != self.vertex_count:
            return None
        return order

    def undirected_components(self) -> list[int]:
        """Component label per vertex, ignoring arc directions."""
        label = [-1] * self.vertex_count
        current = 0
        for start in range(self.vertex_count):
            if label[start] != -1:
                continue
            stack = [start]
            label[start] = current
            while stack:
                v = stack.pop()
                for a in self._out[v]:
                    w = self.heads[a]
                    if label[w] == -1:
                        label[w] = current
                        stack.append(w)
                for a in self._in[v]:
                    w = self.tails[a]
                    if label[w] == -1:
                        label[w] = current
                        stack.append(w)
            current += 1
        return label

    def __repr__(self) -> str:
        return f"Graph(vertices={self.vertex_count}, arcs={self.arc_count})"
