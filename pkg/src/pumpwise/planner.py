"""Pump-factor selection, the throughput model, and Pareto sweeps.

A task clocked at f with initiation interval ii sustains f/ii samples
per second; the graph sustains the minimum over its tasks, optionally
clipped by the external memory bandwidth.  Pumping a task scales clock
and II together by the same factor, which preserves its throughput while
letting binding share each functional unit among that many operations.

Three strategies are modeled:

* ``base``    - every task at the base clock, minimum II.
* ``s-pump``  - one shared clock raised by a uniform factor; DSP tasks
  scale their II by the same factor.  The factor is capped by the
  slowest task's f_max because the clock is global.
* ``m-pump``  - per-task clocks: each DSP task takes the largest factor
  its own f_max (and operation count) allows.

Planning arithmetic is exact over rationals so sweeps and reports are
reproducible bit for bit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Union

from .binding import bind, check_plan_coverage
from .dfg import Dfg
from .errors import InfeasibleError, ParseError, ValidationError
from .ii import Rational, as_fraction

STRATEGIES = ("base", "s-pump", "m-pump")


@dataclass(frozen=True)
class TaskPlan:
    """Per-task operating point: pump factor, clock, initiation interval."""

    m: int
    f_mhz: Fraction
    ii: int

    def __post_init__(self):
        object.__setattr__(self, "f_mhz", as_fraction(self.f_mhz))


@dataclass(frozen=True)
class PumpPlan:
    strategy: str
    tasks: Mapping[str, TaskPlan]
    kernel_base_clock_mhz: Fraction

    def __post_init__(self):
        object.__setattr__(
            self, "kernel_base_clock_mhz", as_fraction(self.kernel_base_clock_mhz)
        )

    def validate(self) -> None:
        if self.strategy not in STRATEGIES:
            raise ValidationError(f"unknown strategy: {self.strategy}")
        if as_fraction(self.kernel_base_clock_mhz) <= 0:
            raise ValidationError("kernel_base_clock_mhz must be positive")
        for name, e in self.tasks.items():
            if e.m < 1 or e.ii < 1 or as_fraction(e.f_mhz) <= 0:
                raise ValidationError(f"plan entry for {name} is out of domain")


def task_throughput(f_mhz: Rational, ii: int) -> Fraction:
    """Samples per microsecond a task sustains: clock over initiation interval."""
    f = as_fraction(f_mhz)
    if f <= 0 or ii < 1:
        raise ValidationError("task_throughput requires f > 0 and ii >= 1")
    return f / ii


def compute_throughput(dfg: Dfg, plan: PumpPlan) -> Fraction:
    """Bottleneck compute throughput in msps, ignoring the memory bound."""
    check_plan_coverage(dfg, plan)
    return min(task_throughput(e.f_mhz, e.ii) for e in plan.tasks.values())


def graph_throughput(dfg: Dfg, plan: PumpPlan) -> Fraction:
    """Effective graph throughput in msps, clipped by the memory bound."""
    thr = compute_throughput(dfg, plan)
    if dfg.memory_bound_msps is not None:
        thr = min(thr, as_fraction(dfg.memory_bound_msps))
    return thr


def max_pump_factor(f_max_mhz: Rational, f_base_mhz: Rational, n_op: int) -> int:
    """Largest pump factor for one task: clock headroom capped by its op count.

    A task with no DSP operations is left alone (factor 1).
    """
    f_max = as_fraction(f_max_mhz)
    f_base = as_fraction(f_base_mhz)
    if f_max <= 0 or f_base <= 0:
        raise ValidationError("frequencies must be positive")
    headroom = int(f_max // f_base)
    if headroom < 1:
        raise InfeasibleError(
            f"base clock infeasible: {float(f_base):g} MHz exceeds f_max {float(f_max):g} MHz"
        )
    if n_op == 0:
        return 1
    return min(headroom, n_op)


def max_single_pump_factor(dfg: Dfg, f_base_mhz: Rational) -> int:
    """Largest uniform factor a single shared clock allows: bounded by the slowest task."""
    f_base = as_fraction(f_base_mhz)
    if f_base <= 0:
        raise ValidationError("f_base_mhz must be positive")
    fmin = dfg.min_f_max_mhz
    s = int(fmin // f_base)
    if s < 1:
        raise InfeasibleError(
            f"base clock infeasible: {float(f_base):g} MHz exceeds "
            f"the slowest task's f_max {float(fmin):g} MHz"
        )
    return s


def make_plan(dfg: Dfg, f_base_mhz: Rational, strategy: str) -> PumpPlan:
    """Select per-task factors, clocks, and IIs for one strategy."""
    if strategy not in STRATEGIES:
        raise ValidationError(f"unknown strategy: {strategy}")
    f_base = as_fraction(f_base_mhz)
    if f_base <= 0:
        raise ValidationError("f_base_mhz must be positive")
    for t in dfg.tasks:
        if f_base > as_fraction(t.f_max_mhz):
            raise InfeasibleError(
                f"base clock infeasible: task {t.name} meets timing only up to "
                f"{float(as_fraction(t.f_max_mhz)):g} MHz"
            )

    entries: dict[str, TaskPlan] = {}
    if strategy == "base":
        for t in dfg.tasks:
            entries[t.name] = TaskPlan(1, f_base, t.ii_min_at(f_base))
    elif strategy == "m-pump":
        for t in dfg.tasks:
            ii0 = t.ii_min_at(f_base)
            m = max_pump_factor(t.f_max_mhz, f_base, t.n_op_dsp)
            entries[t.name] = TaskPlan(m, m * f_base, m * ii0)
    else:
        s = max_single_pump_factor(dfg, f_base)
        for t in dfg.tasks:
            ii0 = t.ii_min_at(f_base)
            if t.n_op_dsp > 0:
                entries[t.name] = TaskPlan(s, s * f_base, s * ii0)
            else:
                entries[t.name] = TaskPlan(1, s * f_base, ii0)
    plan = PumpPlan(strategy, entries, f_base)

    # pumping scales f and ii together, so no task loses throughput and the
    # graph bottleneck can only stay or rise
    for t in dfg.tasks:
        e = entries[t.name]
        assert task_throughput(e.f_mhz, e.ii) >= task_throughput(f_base, t.ii_min_at(f_base))
        if e.m > 1 and t.n_op_dsp > 0:
            assert task_throughput(e.f_mhz, e.ii) == task_throughput(f_base, t.ii_min_at(f_base))
    return plan


@dataclass(frozen=True)
class SweepRow:
    """One base-frequency sample of the throughput-vs-DSP tradeoff."""

    f_base_mhz: Fraction
    throughput_msps: Fraction
    dsp_base: int
    dsp_s_pump: int
    dsp_m_pump: int
    dsp_base_pct: Fraction
    dsp_s_pump_pct: Fraction
    dsp_m_pump_pct: Fraction


def sweep(dfg: Dfg, f_lo: Rational, f_hi: Rational, step: Rational) -> list[SweepRow]:
    """Sample base clocks from f_lo to f_hi and bind all three strategies.

    Base clocks above the slowest task's f_max are infeasible for every
    strategy and are omitted rather than clamped.
    """
    lo = as_fraction(f_lo)
    hi = as_fraction(f_hi)
    st = as_fraction(step)
    if not (0 < lo <= hi):
        raise ValidationError("empty range: need 0 < f_lo <= f_hi")
    if st <= 0:
        raise ValidationError("step must be positive")
    fmin = dfg.min_f_max_mhz
    rows = []
    f = lo
    while f <= hi:
        if f <= fmin:
            plans = {s: make_plan(dfg, f, s) for s in STRATEGIES}
            bound = {s: bind(dfg, p) for s, p in plans.items()}
            rows.append(
                SweepRow(
                    f_base_mhz=f,
                    throughput_msps=graph_throughput(dfg, plans["base"]),
                    dsp_base=bound["base"].total_dsp,
                    dsp_s_pump=bound["s-pump"].total_dsp,
                    dsp_m_pump=bound["m-pump"].total_dsp,
                    dsp_base_pct=bound["base"].dsp_pct,
                    dsp_s_pump_pct=bound["s-pump"].dsp_pct,
                    dsp_m_pump_pct=bound["m-pump"].dsp_pct,
                )
            )
        f += st
    return rows


# --- plan files -----------------------------------------------------------


def plan_to_dict(plan: PumpPlan) -> dict:
    return {
        "strategy": plan.strategy,
        "kernel_base_clock_mhz": _num_out(as_fraction(plan.kernel_base_clock_mhz)),
        "tasks": {
            name: {"m": e.m, "f_mhz": _num_out(as_fraction(e.f_mhz)), "ii": e.ii}
            for name, e in plan.tasks.items()
        },
    }


def plan_from_dict(data) -> PumpPlan:
    if not isinstance(data, dict):
        raise ParseError("plan: top level must be an object")
    strategy = data.get("strategy")
    if strategy not in STRATEGIES:
        raise ParseError(f"plan.strategy: expected one of {', '.join(STRATEGIES)}")
    base = data.get("kernel_base_clock_mhz")
    if isinstance(base, bool) or not isinstance(base, (int, float, Fraction)):
        raise ParseError("plan.kernel_base_clock_mhz: expected a number")
    raw = data.get("tasks")
    if not isinstance(raw, dict) or not raw:
        raise ParseError("plan.tasks: expected a non-empty object")
    entries = {}
    for name, rec in raw.items():
        if not isinstance(rec, dict):
            raise ParseError(f"plan.tasks.{name}: expected an object")
        m = rec.get("m")
        ii = rec.get("ii")
        f = rec.get("f_mhz")
        if not isinstance(m, int) or isinstance(m, bool) or m < 1:
            raise ParseError(f"plan.tasks.{name}.m: expected a positive integer")
        if not isinstance(ii, int) or isinstance(ii, bool) or ii < 1:
            raise ParseError(f"plan.tasks.{name}.ii: expected a positive integer")
        if isinstance(f, bool) or not isinstance(f, (int, float, Fraction)):
            raise ParseError(f"plan.tasks.{name}.f_mhz: expected a number")
        entries[name] = TaskPlan(m, as_fraction(f), ii)
    plan = PumpPlan(strategy, entries, as_fraction(base))
    plan.validate()
    return plan


def save_plan(plan: PumpPlan, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(plan_to_dict(plan), indent=2) + "\n")


def load_plan(path: Union[str, Path]) -> PumpPlan:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror or e}") from None
    try:
        data = json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None
    return plan_from_dict(data)


def _num_out(x: Fraction):
    if x.denominator == 1:
        return int(x)
    return float(x)
