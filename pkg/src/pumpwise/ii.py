"""Initiation-interval analysis of data-dependence graphs.

A pipelined loop cannot start iterations faster than its loop-carried
dependence cycles allow: a cycle whose operations take L cycles in total
and whose dependence distances sum to D forces II >= L/D.  ``min_ii``
maximizes that ratio over all cycles of the DDG and ``critical_cycle``
returns one cycle attaining the maximum.

Operator latencies are quantized per clock with no chaining: an operation
occupies max(1, ceil(delay / clock_period)) full cycles.  Latencies grow
with the clock frequency, so the II lower bound is non-decreasing in the
clock, while the II itself never bends to the clock (the II constraint
wins; timing feasibility is expressed through per-task f_max instead).

The II search runs over integer candidates: a candidate II is feasible
iff the DDG has no cycle with sum(latency) - II * sum(dist) > 0, decided
by positive-cycle detection on edge weights latency(src) - II * dist.
The ceiling in the contract makes this integer search exact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Iterable, Sequence, Union

import networkx as nx

from .errors import ValidationError

Rational = Union[int, float, Fraction]


def as_fraction(x: Rational) -> Fraction:
    """Exact rational from an int, Fraction, or decimal-intended float."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool) or not isinstance(x, (int, float)):
        raise ValidationError(f"expected a number, got {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    # str() round-trips the shortest decimal, so 0.1 means 1/10, not the
    # nearest binary double
    return Fraction(str(x))


@dataclass(frozen=True)
class Op:
    """One operation: identifier, class tag (mul, add, load, ...), delay in ns."""

    id: str
    cls: str
    delay_ns: Rational

    def __post_init__(self):
        object.__setattr__(self, "delay_ns", as_fraction(self.delay_ns))


@dataclass(frozen=True)
class Dep:
    """Dependence edge src -> dst carried across ``dist`` loop iterations."""

    src: str
    dst: str
    dist: int


@dataclass(frozen=True)
class Ddg:
    """Data-dependence graph of one task's pipelined loop body."""

    ops: tuple[Op, ...]
    deps: tuple[Dep, ...]

    def __init__(self, ops: Sequence[Op], deps: Sequence[Dep] = ()):
        object.__setattr__(self, "ops", tuple(ops))
        object.__setattr__(self, "deps", tuple(deps))

    def validate(self) -> None:
        if not self.ops:
            raise ValidationError("ddg has no operations")
        ids = [op.id for op in self.ops]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise ValidationError(f"duplicate op id: {dup[0]}")
        known = set(ids)
        for op in self.ops:
            if as_fraction(op.delay_ns) <= 0:
                raise ValidationError(f"op {op.id}: delay_ns must be positive")
        for dep in self.deps:
            if dep.src not in known or dep.dst not in known:
                missing = dep.src if dep.src not in known else dep.dst
                raise ValidationError(f"dependence names unknown op: {missing}")
            if not isinstance(dep.dist, int) or isinstance(dep.dist, bool) or dep.dist < 0:
                raise ValidationError(
                    f"dependence {dep.src}->{dep.dst}: dist must be a nonnegative integer"
                )
        cyc = _dist0_cycle(self)
        if cyc is not None:
            raise ValidationError("combinational cycle: " + "->".join(cyc + cyc[:1]))


def op_latency_cycles(delay_ns: Rational, f_mhz: Rational) -> int:
    """Cycles one operation occupies at the given clock; at least one."""
    delay = as_fraction(delay_ns)
    f = as_fraction(f_mhz)
    if delay <= 0 or f <= 0:
        raise ValidationError("op_latency_cycles requires positive delay and frequency")
    period_ns = Fraction(1000) / f
    return max(1, ceil(delay / period_ns))


def min_ii(ddg: Ddg, f_mhz: Rational) -> int:
    """Smallest feasible initiation interval of the DDG at clock ``f_mhz``."""
    ddg.validate()
    lat = _latencies(ddg, f_mhz)
    edges = _collapsed_edges(ddg)
    if not _has_any_cycle(lat, edges):
        return 1
    hi = sum(lat.values())
    lo = 1
    # smallest integer II with no positive cycle; feasibility is monotone in II
    while lo < hi:
        mid = (lo + hi) // 2
        if _positive_cycle(lat, edges, Fraction(mid))[0]:
            lo = mid + 1
        else:
            hi = mid
    return lo


def critical_cycle(ddg: Ddg, f_mhz: Rational) -> list[str]:
    """One cycle attaining the maximum latency/distance ratio.

    Ties are broken by the lexicographically smallest op-id sequence,
    after rotating each cycle to start at its smallest op id.
    """
    ddg.validate()
    lat = _latencies(ddg, f_mhz)
    edges = _collapsed_edges(ddg)
    if not _has_any_cycle(lat, edges):
        raise ValidationError("acyclic: ddg has no dependence cycle")

    lam = _max_cycle_ratio(lat, edges)
    _, pot = _positive_cycle(lat, edges, lam)
    tight = nx.DiGraph()
    for (u, v), dist in edges.items():
        if pot[u] + lat[u] - lam * dist == pot[v]:
            tight.add_edge(u, v)
    candidates = [_canonical(c) for c in nx.simple_cycles(tight)]
    if not candidates:  # pragma: no cover - the ratio search guarantees one
        raise AssertionError("no cycle attains the computed ratio")
    return min(candidates)


def pipeline_depth(ddg: Ddg, f_mhz: Rational) -> int:
    """Longest latency-weighted path over intra-iteration (dist 0) edges."""
    ddg.validate()
    lat = _latencies(ddg, f_mhz)
    g = nx.DiGraph()
    g.add_nodes_from(lat)
    g.add_edges_from((d.src, d.dst) for d in ddg.deps if d.dist == 0)
    depth = {}
    for v in nx.topological_sort(g):
        depth[v] = lat[v] + max((depth[u] for u in g.predecessors(v)), default=0)
    return max(depth.values())


def _latencies(ddg: Ddg, f_mhz: Rational) -> dict[str, int]:
    return {op.id: op_latency_cycles(op.delay_ns, f_mhz) for op in ddg.ops}


def _collapsed_edges(ddg: Ddg) -> dict[tuple[str, str], int]:
    # parallel dependences collapse to the smallest distance, which
    # dominates both the ratio maximization and positive-cycle detection
    edges: dict[tuple[str, str], int] = {}
    for d in ddg.deps:
        key = (d.src, d.dst)
        if key not in edges or d.dist < edges[key]:
            edges[key] = d.dist
    return edges


def _dist0_cycle(ddg: Ddg) -> list[str] | None:
    g = nx.DiGraph()
    g.add_nodes_from(op.id for op in ddg.ops)
    g.add_edges_from((d.src, d.dst) for d in ddg.deps if d.dist == 0)
    try:
        cyc = nx.find_cycle(g)
    except nx.NetworkXNoCycle:
        return None
    return _canonical([u for u, _ in cyc])


def _has_any_cycle(lat: dict[str, int], edges: dict[tuple[str, str], int]) -> bool:
    g = nx.DiGraph()
    g.add_nodes_from(lat)
    g.add_edges_from(edges)
    return not nx.is_directed_acyclic_graph(g)


def _positive_cycle(
    lat: dict[str, int],
    edges: dict[tuple[str, str], int],
    lam: Fraction,
) -> tuple[bool, dict[str, Fraction]]:
    """Bellman-Ford longest-path pass with weights latency(src) - lam * dist.

    Returns (True, _) when some cycle has positive total weight, i.e. the
    cycle ratio exceeds ``lam``.  When no positive cycle exists the second
    item holds converged potentials with pot[v] >= pot[u] + w(u, v) on
    every edge, so every maximum-ratio cycle is tight under them.
    """
    pot = {v: Fraction(0) for v in lat}
    edge_list = [(u, v, lat[u] - lam * dist) for (u, v), dist in edges.items()]
    for _ in range(len(pot)):
        changed = False
        for u, v, w in edge_list:
            cand = pot[u] + w
            if cand > pot[v]:
                pot[v] = cand
                changed = True
        if not changed:
            return False, pot
    return True, pot


def _max_cycle_ratio(lat: dict[str, int], edges: dict[tuple[str, str], int]) -> Fraction:
    """Exact maximum of sum(latency)/sum(dist) over all cycles.

    Bisects between infeasible and feasible ratios until the interval
    isolates a single rational with denominator <= sum of all distances,
    then recovers it exactly.
    """
    qmax = max(1, sum(edges.values()))
    lo = Fraction(0)
    hi = Fraction(sum(lat.values()))
    if not _positive_cycle(lat, edges, lo)[0]:  # pragma: no cover - caller ensures a cycle
        raise AssertionError("no cycle with positive latency")
    gap = Fraction(1, 2 * qmax * qmax)
    while hi - lo > gap:
        mid = (lo + hi) / 2
        if _positive_cycle(lat, edges, mid)[0]:
            lo = mid
        else:
            hi = mid
    lam = ((lo + hi) / 2).limit_denominator(qmax)
    if _positive_cycle(lat, edges, lam)[0]:  # pragma: no cover - safety net
        raise AssertionError("ratio recovery failed")
    return lam


def _canonical(cycle: Iterable[str]) -> list[str]:
    nodes = list(cycle)
    k = nodes.index(min(nodes))
    return nodes[k:] + nodes[:k]
