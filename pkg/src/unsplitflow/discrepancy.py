"""Integral selection with bounded interval discrepancy.

A weighted partition-constrained selection instance consists of indices
0..l-1 partitioned into sets, a demand per set, and a fractional selection y
(nonnegative entries summing to one within each set).  The load of index i is
its y value scaled by its set's demand.  For a candidate selection z, the
discrepancy of an index set I is |load_y(I) - load_z(I)|; the interval
discrepancy is the maximum over circular intervals.

On *non-interleaving* partitions (no two sets showing the index pattern
a1 < a2 < b1 < b2 across sets) a single greedy sweep produces an integral
selection whose prefix discrepancy never exceeds half the largest demand,
hence interval discrepancy at most the largest demand.  With costs, rounding
through powers of two and repeatedly resolving half-integral subinstances
yields an integral selection that is no more expensive than y with prefix
discrepancy at most the largest demand and interval discrepancy at most
twice that.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor
from typing import Sequence

from .rational import ZERO, common_denominator


class InterleavingError(ValueError):
    """The partition interleaves; the selection guarantees do not apply."""


def is_non_interleaving(sets: Sequence[Sequence[int]]) -> bool:
    """Stack check: sets must open and close like balanced parentheses.

    Scanning indices in increasing order, a set may only continue while it is
    the most recently still-open set; two sets violating this exhibit the
    forbidden a1 < a2 < b1 < b2 pattern.  Linear in the number of indices.
    """
    owner: dict[int, int] = {}
    for k, s in enumerate(sets):
        for i in s:
            if i in owner:
                raise ValueError(f"index {i} appears in two sets")
            owner[i] = k
    if not owner:
        return True
    last_of = [max(s) if s else -1 for s in sets]
    stack: list[int] = []
    opened: set[int] = set()
    for i in sorted(owner):
        k = owner[i]
        if stack and stack[-1] == k:
            pass
        elif k in opened:
            return False
        else:
            opened.add(k)
            stack.append(k)
        if last_of[k] == i:
            stack.pop()
    return True


@dataclass
class WpcsInstance:
    """Partitioned index range with demands and a fractional selection."""

    size: int
    sets: list[tuple[int, ...]]
    demands: list[Fraction]
    y: list[Fraction]

    def __post_init__(self):
        self.sets = [tuple(sorted(s)) for s in self.sets]
        self.demands = [Fraction(d) for d in self.demands]
        self.y = [Fraction(v) for v in self.y]
        if len(self.demands) != len(self.sets):
            raise ValueError("one demand per set required")
        if len(self.y) != self.size:
            raise ValueError("selection length must equal the instance size")
        covered: list[int] = [-1] * self.size
        for k, s in enumerate(self.sets):
            for i in s:
                if not (0 <= i < self.size):
                    raise ValueError(f"index {i} out of range")
                if covered[i] != -1:
                    raise ValueError(f"index {i} appears in two sets")
                covered[i] = k
        if any(c == -1 for c in covered):
            raise ValueError("sets do not cover every index")
        self.set_of: list[int] = covered
        for d in self.demands:
            if d < 0:
                raise ValueError("demands must be nonnegative")
        for k, s in enumerate(self.sets):
            if sum((self.y[i] for i in s), ZERO) != 1:
                raise ValueError(f"fractional selection does not sum to 1 on set {k}")
        for v in self.y:
            if v < 0 or v > 1:
                raise ValueError("fractional selection entries must lie in [0, 1]")
        self.non_interleaving: bool = is_non_interleaving(self.sets)

    @property
    def d_max(self) -> Fraction:
        if not self.demands:
            return ZERO
        return max(self.demands)

    def load(self, values: Sequence[Fraction], i: int) -> Fraction:
        return self.demands[self.set_of[i]] * values[i]

    def loads(self, values: Sequence[Fraction]) -> list[Fraction]:
        return [self.demands[self.set_of[i]] * values[i] for i in range(self.size)]

    def with_y(self, y: Sequence[Fraction]) -> "WpcsInstance":
        return WpcsInstance(self.size, list(self.sets), list(self.demands), list(y))


@dataclass
class Selection:
    values: list[Fraction]

    def __post_init__(self):
        self.values = [Fraction(v) for v in self.values]

    @property
    def integral(self) -> bool:
        return all(v == 0 or v == 1 for v in self.values)

    def chosen(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v == 1]


def _check_selection(wpcs: WpcsInstance, values: Sequence[Fraction]) -> None:
    if len(values) != wpcs.size:
        raise ValueError("selection length mismatch")
    for k, s in enumerate(wpcs.sets):
        if sum((Fraction(values[i]) for i in s), ZERO) != 1:
            raise ValueError(f"selection does not sum to 1 on set {k}")


class DecompositionInconsistency(ValueError):
    """Decomposition weights do not form a fractional selection."""


def build_wpcs(decomposition) -> WpcsInstance:
    """Selection instance of a decomposition: one set per terminal.

    Index i stands for path i; its set collects the paths ending at the same
    terminal, the set's demand is that terminal's demand, and y_i is the path
    weight divided by the demand.  Sets are ordered by their first path.
    """
    inst = decomposition.instance
    groups = decomposition.terminal_sets()
    sets: list[tuple[int, ...]] = []
    demands: list[Fraction] = []
    y: list[Fraction] = [ZERO] * decomposition.path_count
    for t, indices in sorted(groups.items(), key=lambda kv: kv[1][0]):
        d = inst.demands.get(t)
        if d is None:
            raise DecompositionInconsistency(f"path terminal {t} has no demand")
        if d <= 0:
            raise DecompositionInconsistency(f"terminal {t} has nonpositive demand {d}")
        total = ZERO
        for i in indices:
            w = decomposition.weights[i]
            if w > d:
                raise DecompositionInconsistency(
                    f"path {i} weight {w} exceeds demand {d} of terminal {t}"
                )
            y[i] = w / d
            total += w
        if total != d:
            raise DecompositionInconsistency(
                f"weights into terminal {t} sum to {total}, demand is {d}"
            )
        sets.append(tuple(indices))
        demands.append(d)
    return WpcsInstance(decomposition.path_count, sets, demands, y)


def prefix_greedy_select(wpcs: WpcsInstance) -> Selection:
    """Integral selection with every prefix discrepancy at most d_max / 2.

    One sweep over the indices.  Forced choices first: an index whose set has
    already selected gets 0; the last index of a set none of whose earlier
    indices was selected gets 1.  Otherwise select iff doing so keeps the
    running prefix difference at least -d_max / 2.
    """
    if not wpcs.non_interleaving:
        raise InterleavingError("partition interleaves")
    half = wpcs.d_max / 2
    taken = [False] * len(wpcs.sets)
    last_of = [max(s) for s in wpcs.sets]
    z: list[Fraction] = [ZERO] * wpcs.size
    diff = ZERO
    one = Fraction(1)
    for j in range(wpcs.size):
        k = wpcs.set_of[j]
        d = wpcs.demands[k]
        yd = wpcs.y[j] * d
        if taken[k]:
            zj = ZERO
        elif j == last_of[k]:
            zj = one
        elif diff + yd - d >= -half:
            zj = one
        else:
            zj = ZERO
        if zj:
            taken[k] = True
            diff += yd - d
        else:
            diff += yd
        z[j] = zj
    return Selection(z)


def _prefix_diffs(wpcs: WpcsInstance, values: Sequence[Fraction]) -> list[Fraction]:
    diffs = [ZERO]
    running = ZERO
    for i in range(wpcs.size):
        d = wpcs.demands[wpcs.set_of[i]]
        running += d * (wpcs.y[i] - Fraction(values[i]))
        diffs.append(running)
    return diffs


def prefix_discrepancy(wpcs: WpcsInstance, selection: Selection) -> Fraction:
    """Largest |load_y([j]) - load_z([j])| over prefixes, exact."""
    _check_selection(wpcs, selection.values)
    diffs = _prefix_diffs(wpcs, selection.values)
    return max(abs(v) for v in diffs)


def interval_discrepancy(wpcs: WpcsInstance, selection: Selection) -> Fraction:
    """Largest discrepancy over circular intervals, exact.

    Every circular interval is a difference of two prefixes or the
    complement of one; since selections agree on full sets, the total
    difference is zero and complements change nothing, so the maximum is the
    spread of the prefix differences.
    """
    _check_selection(wpcs, selection.values)
    diffs = _prefix_diffs(wpcs, selection.values)
    return max(diffs) - min(diffs)


def select_half_integral(wpcs: WpcsInstance, costs: Sequence[Fraction]) -> Selection:
    """Cheap integral selection on pair sets with y = 1/2 throughout.

    Runs the greedy sweep, then returns the cheaper of its selection and the
    complement that flips the choice within every pair; both have the same
    prefix discrepancies and their costs average to the fractional cost.
    """
    if len(costs) != wpcs.size:
        raise ValueError("cost vector length mismatch")
    half = Fraction(1, 2)
    for s in wpcs.sets:
        if len(s) != 2:
            raise ValueError("sets must all have size two")
    if any(v != half for v in wpcs.y):
        raise ValueError("fractional selection must be 1/2 everywhere")
    z = prefix_greedy_select(wpcs)
    flipped = Selection([1 - v for v in z.values])
    cost_z = sum((Fraction(c) * v for c, v in zip(costs, z.values)), ZERO)
    cost_f = sum((Fraction(c) * v for c, v in zip(costs, flipped.values)), ZERO)
    return z if cost_z <= cost_f else flipped


def grid_exponent(size: int, epsilon: Fraction) -> int:
    """Smallest k >= 0 with 2**k >= size / epsilon, computed exactly."""
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if size <= 0:
        return 0
    ratio = Fraction(size) / Fraction(epsilon)
    k = 0
    while (1 << k) < ratio:
        k += 1
    return k


def round_to_grid(
    wpcs: WpcsInstance, costs: Sequence[Fraction], epsilon: Fraction
) -> tuple[WpcsInstance, int]:
    """Snap y to the 2**-k grid for k = ceil(log2(size/epsilon)).

    All entries except the cheapest index of each set round down; that index
    absorbs the residual so each set still sums to one.  The result is never
    more expensive and every index set's load moves by at most epsilon times
    the largest demand.  Ties on cost break toward the smallest index.
    """
    if len(costs) != wpcs.size:
        raise ValueError("cost vector length mismatch")
    k = grid_exponent(wpcs.size, Fraction(epsilon))
    step = Fraction(1, 1 << k)
    y = list(wpcs.y)
    for s in wpcs.sets:
        cheapest = min(s, key=lambda i: (Fraction(costs[i]), i))
        total = ZERO
        for i in s:
            if i == cheapest:
                continue
            y[i] = floor(wpcs.y[i] / step) * step
            total += y[i]
        y[cheapest] = 1 - total
    return wpcs.with_y(y), k


def halve_grid(wpcs: WpcsInstance, costs: Sequence[Fraction], k: int) -> WpcsInstance:
    """Coarsen a 2**-k integral fractional selection to the 2**-(k-1) grid.

    The indices that are not already on the coarser grid come in even numbers
    per set; pairing them consecutively inside each set gives a half-integral
    subinstance that is again non-interleaving, and its cheap selection
    decides which index of each pair moves up by 2**-k and which moves down.
    Cost never increases and every prefix load moves by at most 2**-k times
    the largest demand.
    """
    if k < 1:
        raise ValueError("grid exponent must be at least 1")
    if len(costs) != wpcs.size:
        raise ValueError("cost vector length mismatch")
    if not wpcs.non_interleaving:
        raise InterleavingError("partition interleaves")
    fine = Fraction(1, 1 << k)
    coarse = Fraction(1, 1 << (k - 1))
    for v in wpcs.y:
        if v % fine != 0:
            raise ValueError(f"selection entry {v} is not on the 2^-{k} grid")
    moving = [i for i in range(wpcs.size) if wpcs.y[i] % coarse != 0]
    if not moving:
        return wpcs
    position = {i: p for p, i in enumerate(moving)}
    sub_sets: list[tuple[int, int]] = []
    sub_demands: list[Fraction] = []
    for k_set, s in enumerate(wpcs.sets):
        members = [i for i in s if i in position]
        if len(members) % 2 != 0:
            raise ValueError("odd number of off-grid entries in a set")
        for a in range(0, len(members), 2):
            sub_sets.append((position[members[a]], position[members[a + 1]]))
            sub_demands.append(wpcs.demands[k_set])
    if not is_non_interleaving(sub_sets):
        raise AssertionError("consecutive pairing lost non-interleaving structure")
    half = Fraction(1, 2)
    sub = WpcsInstance(len(moving), sub_sets, sub_demands, [half] * len(moving))
    sub_costs = [Fraction(costs[i]) for i in moving]
    z = select_half_integral(sub, sub_costs)
    y = list(wpcs.y)
    for i in moving:
        y[i] = wpcs.y[i] + coarse * (z.values[position[i]] - half)
    return wpcs.with_y(y)


def choose_epsilon(wpcs: WpcsInstance) -> Fraction:
    """Grid offset small enough that the final granularity step is exact.

    Every load and the largest demand are multiples of 1/Q for Q the common
    denominator, so any prefix discrepancy strictly below d_max + 1/Q is
    already at most d_max.  Picking epsilon with epsilon * d_max < 1/Q makes
    the rounding pipeline land under that threshold.
    """
    q = common_denominator(wpcs.loads(wpcs.y) + [wpcs.d_max])
    scale = max(wpcs.d_max, Fraction(1))
    return Fraction(1, 2 * q) / scale


def select_with_costs(wpcs: WpcsInstance, costs: Sequence[Fraction]) -> Selection:
    """Integral selection never more expensive than the fractional one.

    Guarantees, all exact: cost(z) <= cost(y), prefix discrepancy at most
    d_max, interval discrepancy at most 2 * d_max.  Pipeline: snap y to a
    power-of-two grid fine enough for the granularity argument, then halve
    the grid until integral, resolving a half-integral subinstance per round.
    """
    if not wpcs.non_interleaving:
        raise InterleavingError("partition interleaves")
    if len(costs) != wpcs.size:
        raise ValueError("cost vector length mismatch")
    if wpcs.size == 0:
        return Selection([])
    epsilon = choose_epsilon(wpcs)
    current, k = round_to_grid(wpcs, costs, epsilon)
    for level in range(k, 0, -1):
        current = halve_grid(current, costs, level)
    values = current.y
    for v in values:
        if v != 0 and v != 1:
            raise AssertionError("rounding pipeline did not reach an integral selection")
    return Selection(values)


def selection_cost(costs: Sequence[Fraction], values: Sequence[Fraction]) -> Fraction:
    return sum((Fraction(c) * Fraction(v) for c, v in zip(costs, values)), ZERO)
