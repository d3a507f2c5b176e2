"""Brute-force oracles used to cross-check the fast implementations.

Everything here is deliberately naive: direct definitions, exhaustive
enumeration, no shared machinery with the code under test.  The caps keep
the state spaces small enough for test runs.
"""

from __future__ import annotations

from fractions import Fraction
from itertools import product
from typing import Sequence

from .discrepancy import Selection, WpcsInstance
from .embedding import RotationSystem, is_progression
from .model import PssufInstance
from .rational import ZERO, common_denominator


def is_non_interleaving_naive(sets: Sequence[Sequence[int]]) -> bool:
    """Quadratic pattern search for a1 < a2 < b1 < b2 across two sets."""
    for x in range(len(sets)):
        for z in range(len(sets)):
            if x == z:
                continue
            s1 = sorted(sets[x])
            s2 = sorted(sets[z])
            for a1 in s1:
                bigger2 = [v for v in s2 if v > a1]
                if not bigger2:
                    continue
                a2 = min(bigger2)
                bigger1 = [v for v in s1 if v > a2]
                if not bigger1:
                    continue
                b1 = min(bigger1)
                if any(v > b1 for v in s2):
                    return False
    return True


def interval_discrepancy_naive(wpcs: WpcsInstance, selection: Selection) -> Fraction:
    """Maximum discrepancy over all circular intervals, by enumeration."""
    n = wpcs.size
    loads_y = wpcs.loads(wpcs.y)
    loads_z = wpcs.loads(selection.values)
    best = ZERO
    for start in range(n):
        diff = ZERO
        for length in range(1, n + 1):
            i = (start + length - 1) % n
            diff += loads_y[i] - loads_z[i]
            if abs(diff) > best:
                best = abs(diff)
    return best


def prefix_discrepancy_naive(wpcs: WpcsInstance, selection: Selection) -> Fraction:
    loads_y = wpcs.loads(wpcs.y)
    loads_z = wpcs.loads(selection.values)
    best = ZERO
    diff = ZERO
    for i in range(wpcs.size):
        diff += loads_y[i] - loads_z[i]
        best = max(best, abs(diff))
    return best


def oracle_selection_minimax(
    wpcs: WpcsInstance, cap: int = 10**6
) -> tuple[Fraction, Selection]:
    """Minimum over all integral selections of the interval discrepancy.

    Exhaustive over the product of per-set choices; raises when that product
    exceeds ``cap``.  Returns the optimum and one witness.
    """
    space = 1
    for s in wpcs.sets:
        space *= len(s)
        if space > cap:
            raise ValueError(f"selection space exceeds cap {cap}")
    scale = common_denominator(wpcs.loads(wpcs.y))
    base = [int(v * scale) for v in wpcs.loads(wpcs.y)]
    set_loads = [int(wpcs.demands[k] * scale) for k in range(len(wpcs.sets))]
    n = wpcs.size
    best_value: Fraction | None = None
    best_choice: tuple[int, ...] | None = None
    for choice in product(*[range(len(s)) for s in wpcs.sets]):
        chosen = {wpcs.sets[k][c] for k, c in enumerate(choice)}
        diff = 0
        hi = 0
        lo = 0
        for i in range(n):
            diff += base[i]
            if i in chosen:
                diff -= set_loads[wpcs.set_of[i]]
            if diff > hi:
                hi = diff
            elif diff < lo:
                lo = diff
        value = Fraction(hi - lo, scale)
        if best_value is None or value < best_value:
            best_value = value
            best_choice = choice
    if best_value is None:
        return ZERO, Selection([])
    values = [ZERO] * n
    for k, c in enumerate(best_choice):
        values[wpcs.sets[k][c]] = Fraction(1)
    return best_value, Selection(values)


def all_simple_paths(instance: PssufInstance, target: int, cap: int = 10**6) -> list[tuple[int, ...]]:
    """Every simple source-to-target directed path, as arc tuples."""
    g = instance.graph
    paths: list[tuple[int, ...]] = []
    stack: list[int] = []
    visited = {instance.source}

    def extend(v: int) -> None:
        if v == target:
            paths.append(tuple(stack))
            if len(paths) > cap:
                raise ValueError(f"more than {cap} paths")
            return
        for a in g.out_arcs(v):
            w = g.head(a)
            if w in visited:
                continue
            visited.add(w)
            stack.append(a)
            extend(w)
            stack.pop()
            visited.remove(w)

    extend(instance.source)
    return paths


def oracle_enumerate_unsplittable(
    instance: PssufInstance, multiplier: Fraction, cap: int = 10**5
) -> bool:
    """Does any family of one path per terminal keep every arc within
    multiplier * d_max of the fractional flow?  Exhaustive check."""
    terminals = [t for t in sorted(instance.demands) if instance.demands[t] > 0]
    per_terminal: list[list[tuple[int, ...]]] = []
    space = 1
    for t in terminals:
        options = all_simple_paths(instance, t, cap)
        if not options:
            return False
        per_terminal.append(options)
        space *= len(options)
        if space > cap:
            raise ValueError(f"path combination space exceeds cap {cap}")
    bound = Fraction(multiplier) * instance.d_max
    m = instance.graph.arc_count
    for combo in product(*per_terminal):
        flow = [ZERO] * m
        for t, path in zip(terminals, combo):
            d = instance.demands[t]
            for a in path:
                flow[a] += d
        if all(abs(instance.flow[a] - flow[a]) <= bound for a in range(m)):
            return True
    return False


def is_good_wiring(
    rotation: RotationSystem,
    vertex: int,
    pairs: Sequence[tuple[int, int]],
    loads: Sequence[Fraction],
    in_arcs: Sequence[int],
    out_arcs: Sequence[int],
    flow: Sequence[Fraction],
) -> bool:
    """Direct check of the wiring conditions.

    Loads must be nonnegative, each incident arc's incident pair loads must
    sum to its flow value, and for i < j neither (f_i, f_j, g_i) nor
    (f_i, g_j, g_i) may be a progression of the cyclic order at the vertex.
    """
    in_set, out_set = set(in_arcs), set(out_arcs)
    per_arc: dict[int, Fraction] = {a: ZERO for a in list(in_arcs) + list(out_arcs)}
    for (f, g), mu in zip(pairs, loads):
        if f not in in_set or g not in out_set:
            return False
        if mu < 0:
            return False
        per_arc[f] += mu
        per_arc[g] += mu
    if len(set(pairs)) != len(pairs):
        return False
    for a, total in per_arc.items():
        if total != flow[a]:
            return False
    for i in range(len(pairs)):
        fi, gi = pairs[i]
        for j in range(i + 1, len(pairs)):
            fj, gj = pairs[j]
            if fj != fi and is_progression(rotation, vertex, (fi, fj, gi)):
                return False
            if gj != gi and is_progression(rotation, vertex, (fi, gj, gi)):
                return False
    return True
