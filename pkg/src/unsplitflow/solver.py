"""End-to-end pipelines: fractional flow in, unsplittable flow out.

``solve`` guarantees every arc's unsplittable flow within d_max of the
fractional value; ``solve_with_costs`` additionally never exceeds the
fractional cost, at the price of a 2 * d_max deviation bound.  Both run in
time quadratic in the vertex count.  ``verify_solution`` re-checks a claimed
solution from scratch without touching any solver internals.

Cyclic graphs are rejected outright: with lower bounds the problem changes
nature on cycles (walks could cover lower bounds that no path can), so a
cyclic input is an error, never something to repair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .decomposition import decompose
from .discrepancy import (
    Selection,
    build_wpcs,
    prefix_greedy_select,
    select_with_costs,
)
from .model import (
    InvalidInstanceError,
    PssufInstance,
    normalize_terminals,
    strip_zero_flow,
    validate_instance,
)
from .rational import ZERO


@dataclass
class Certificate:
    """Per-arc deviation record for one solved instance."""

    deviation: list[Fraction]
    max_abs_deviation: Fraction
    bound: Fraction
    cost: Fraction | None = None
    cost_bound: Fraction | None = None


@dataclass
class UnsplittableFlow:
    """One source-to-terminal path per terminal with positive demand."""

    paths: dict[int, tuple[int, ...]]
    arc_flow: list[Fraction]
    certificate: Certificate | None
    total_cost: Fraction | None = None


@dataclass(frozen=True)
class SolveOptions:
    """CLI-facing switchboard for the two pipelines."""

    mode: str = "no_cost"
    costs: Sequence[Fraction] | None = None
    emit_certificate: bool = True

    def __post_init__(self):
        if self.mode not in ("no_cost", "with_cost"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if (self.costs is not None) != (self.mode == "with_cost"):
            raise ValueError("costs must be present exactly when mode is with_cost")


def _validated(instance: PssufInstance) -> None:
    report = validate_instance(instance)
    if report.ok:
        return
    if any(v.startswith("acyclicity") for v in report.violations):
        report.add(
            "rejected: on cyclic graphs lower-bounded unsplittable flow changes nature "
            "(walks versus paths) and the deviation guarantees do not transfer"
        )
    raise InvalidInstanceError(report)


def _paths_from_selection(
    instance: PssufInstance,
    decomposition,
    wpcs,
    selection: Selection,
    strip_map: dict[int, int],
    terminal_map: dict[int, int],
    auxiliary_arc: dict[int, int],
) -> dict[int, tuple[int, ...]]:
    """Project selected split-graph paths back onto the original arc ids."""
    unstrip = {new: old for old, new in strip_map.items()}
    sink_to_terminal = {sink: t for t, sink in terminal_map.items()}
    aux_ids = set(auxiliary_arc.values())
    paths: dict[int, tuple[int, ...]] = {}
    for k, s in enumerate(wpcs.sets):
        chosen = [i for i in s if selection.values[i] == 1]
        if len(chosen) != 1:
            raise AssertionError("selection must pick exactly one path per terminal")
        i = chosen[0]
        sink = decomposition.terminal_of[i]
        arcs = [unstrip[a] for a in decomposition.projected_path(i)]
        arcs = [a for a in arcs if a not in aux_ids]
        paths[sink_to_terminal[sink]] = tuple(arcs)
    return paths


def _flow_of_paths(
    instance: PssufInstance, paths: Mapping[int, Sequence[int]]
) -> list[Fraction]:
    flow = [ZERO] * instance.graph.arc_count
    for t, path in paths.items():
        d = instance.demands[t]
        for a in path:
            flow[a] += d
    return flow


def _certificate(
    instance: PssufInstance,
    arc_flow: Sequence[Fraction],
    multiplier: int,
    costs: Sequence[Fraction] | None,
) -> Certificate:
    deviation = [instance.flow[a] - arc_flow[a] for a in range(instance.graph.arc_count)]
    max_abs = max((abs(d) for d in deviation), default=ZERO)
    bound = multiplier * instance.d_max
    if max_abs > bound:
        raise AssertionError(
            f"internal error: deviation {max_abs} exceeds certified bound {bound}"
        )
    cert = Certificate(deviation=deviation, max_abs_deviation=max_abs, bound=bound)
    if costs is not None:
        cert.cost = sum(
            (costs[a] * arc_flow[a] for a in range(len(arc_flow))), ZERO
        )
        cert.cost_bound = sum(
            (costs[a] * instance.flow[a] for a in range(len(arc_flow))), ZERO
        )
        if cert.cost > cert.cost_bound:
            raise AssertionError("internal error: solution cost exceeds fractional cost")
    return cert


def _solve_pipeline(
    instance: PssufInstance,
    costs: Sequence[Fraction] | None,
    emit_certificate: bool,
) -> UnsplittableFlow:
    _validated(instance)
    norm = normalize_terminals(instance)
    stripped = strip_zero_flow(norm.instance)
    working = stripped.instance
    if not working.demands:
        arc_flow = [ZERO] * instance.graph.arc_count
        cert = _certificate(instance, arc_flow, 1 if costs is None else 2, costs)
        return UnsplittableFlow(
            paths={},
            arc_flow=arc_flow,
            certificate=cert if emit_certificate else None,
            total_cost=cert.cost,
        )
    dec = decompose(working)
    wpcs = build_wpcs(dec)
    if costs is None:
        selection = prefix_greedy_select(wpcs)
        multiplier = 1
    else:
        unstrip = {new: old for old, new in stripped.arc_map.items()}
        original_count = instance.graph.arc_count

        def arc_cost(stripped_arc: int) -> Fraction:
            original = unstrip[stripped_arc]
            if original < original_count:
                return costs[original]
            return ZERO

        path_costs = [
            sum((arc_cost(a) for a in dec.projected_path(i)), ZERO)
            for i in range(dec.path_count)
        ]
        selection = select_with_costs(wpcs, path_costs)
        multiplier = 2
    paths = _paths_from_selection(
        instance, dec, wpcs, selection, stripped.arc_map, norm.terminal_map, norm.auxiliary_arc
    )
    arc_flow = _flow_of_paths(instance, paths)
    cert = _certificate(instance, arc_flow, multiplier, costs)
    return UnsplittableFlow(
        paths=paths,
        arc_flow=arc_flow,
        certificate=cert if emit_certificate else None,
        total_cost=cert.cost,
    )


def solve(instance: PssufInstance, emit_certificate: bool = True) -> UnsplittableFlow:
    """Unsplittable flow with |x(a) - flow(a)| <= d_max on every arc.

    The instance is validated, normalized and stripped internally; reported
    paths and flows refer to the arcs of the instance as given.  Terminals
    with zero demand receive no path.
    """
    return _solve_pipeline(instance, None, emit_certificate)


def solve_with_costs(
    instance: PssufInstance,
    costs: Sequence[Fraction],
    emit_certificate: bool = True,
) -> UnsplittableFlow:
    """Unsplittable flow within 2 * d_max per arc and no more expensive
    than the fractional flow, both exact."""
    if len(costs) != instance.graph.arc_count:
        raise ValueError("cost vector length must equal the arc count")
    costs = [Fraction(c) for c in costs]
    for a, c in enumerate(costs):
        if c < 0:
            raise ValueError(f"negative cost on arc {a}")
    return _solve_pipeline(instance, costs, emit_certificate)


def run_solve(instance: PssufInstance, options: SolveOptions) -> UnsplittableFlow:
    if options.mode == "with_cost":
        return solve_with_costs(instance, list(options.costs), options.emit_certificate)
    return solve(instance, options.emit_certificate)


@dataclass
class VerificationReport:
    violations: list[str] = field(default_factory=list)
    max_abs_deviation: Fraction = ZERO
    bound: Fraction = ZERO

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, message: str) -> None:
        self.violations.append(message)


def verify_solution(
    instance: PssufInstance,
    flow: UnsplittableFlow,
    multiplier: int,
    costs: Sequence[Fraction] | None = None,
) -> VerificationReport:
    """Independent re-check of a claimed unsplittable flow.

    Re-derives the per-arc flow from the paths and the demands, validates
    every path as a simple source-to-terminal path, checks the per-arc
    deviation bound at the requested multiplier (1 or 2), and, when costs are
    given, the exact cost inequality.  Nothing is shared with the solver.
    """
    if multiplier not in (1, 2):
        raise ValueError("multiplier must be 1 or 2")
    report = VerificationReport()
    g = instance.graph
    report.bound = multiplier * instance.d_max
    for t in instance.demands:
        if instance.demands[t] > 0 and t not in flow.paths:
            report.add(f"terminal {t} has positive demand but no path")
    derived = [ZERO] * g.arc_count
    for t, path in flow.paths.items():
        if t not in instance.demands:
            report.add(f"path given for unknown terminal {t}")
            continue
        if not path:
            report.add(f"terminal {t}: empty path")
            continue
        ok = True
        for a in path:
            if not (0 <= a < g.arc_count):
                report.add(f"terminal {t}: path uses unknown arc {a}")
                ok = False
                break
        if not ok:
            continue
        vertices = [g.tail(path[0])]
        for a in path:
            if g.tail(a) != vertices[-1]:
                report.add(f"terminal {t}: path is not a connected directed path")
                ok = False
                break
            vertices.append(g.head(a))
        if not ok:
            continue
        if vertices[0] != instance.source:
            report.add(f"terminal {t}: path does not start at the source")
        if vertices[-1] != t:
            report.add(f"terminal {t}: path does not end at the terminal")
        if len(set(vertices)) != len(vertices):
            report.add(f"terminal {t}: path revisits a vertex")
        d = instance.demands[t]
        for a in path:
            derived[a] += d
    if len(flow.arc_flow) != g.arc_count:
        report.add("arc flow vector has the wrong length")
    else:
        for a in range(g.arc_count):
            if flow.arc_flow[a] != derived[a]:
                report.add(
                    f"arc {a}: claimed flow {flow.arc_flow[a]} differs from "
                    f"path-derived flow {derived[a]}"
                )
    worst = ZERO
    for a in range(g.arc_count):
        dev = abs(instance.flow[a] - derived[a])
        if dev > worst:
            worst = dev
        if dev > report.bound:
            report.add(
                f"arc {a}: |x - flow| = {dev} exceeds {multiplier} * d_max = {report.bound}"
            )
    report.max_abs_deviation = worst
    if costs is not None:
        costs = [Fraction(c) for c in costs]
        if len(costs) != g.arc_count:
            report.add("cost vector has the wrong length")
        else:
            sol_cost = sum((costs[a] * derived[a] for a in range(g.arc_count)), ZERO)
            frac_cost = sum(
                (costs[a] * instance.flow[a] for a in range(g.arc_count)), ZERO
            )
            if sol_cost > frac_cost:
                report.add(f"cost {sol_cost} exceeds fractional cost {frac_cost}")
    return report
