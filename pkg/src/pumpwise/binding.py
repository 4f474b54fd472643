"""Resource-sharing model of the HLS binding step.

Sharing is per operation class: a pipeline issuing n_op same-class
operations once every ii cycles needs ceil(n_op / ii) functional units.
DSP operations bind to DSP blocks, memory operations to ports whose
partitioning scales down with the pump factor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING

from .dfg import Dfg
from .errors import ValidationError

if TYPE_CHECKING:  # pragma: no cover
    from .planner import PumpPlan


def fu_count(n_op: int, ii: int) -> int:
    """Functional units for n_op same-class operations at initiation interval ii."""
    if ii < 1:
        raise ValidationError("ii must be >= 1")
    if n_op < 0:
        raise ValidationError("n_op must be >= 0")
    return -(-n_op // ii)


def dsp_constraint(n_dsp_base: int, m: int) -> int:
    """DSP budget handed to synthesis for a task pumped by factor m."""
    if m < 1:
        raise ValidationError("m must be >= 1")
    if n_dsp_base < 0:
        raise ValidationError("n_dsp_base must be >= 0")
    return -(-n_dsp_base // m)


def scaled_partition(base_factor: int, m: int) -> int:
    """Memory partitioning factor after scaling down by the pump factor."""
    if base_factor < 1 or m < 1:
        raise ValidationError("base_factor and m must be >= 1")
    return max(1, -(-base_factor // m))


@dataclass(frozen=True)
class TaskBinding:
    n_fu_dsp: int
    n_mem_ports: int
    partition_factor: int


@dataclass(frozen=True)
class BindingResult:
    per_task: dict[str, TaskBinding]
    total_dsp: int
    dsp_pct: Fraction


def bind(dfg: Dfg, plan: "PumpPlan") -> BindingResult:
    """Functional-unit counts and DSP totals for every task under a plan."""
    check_plan_coverage(dfg, plan)
    per_task = {}
    total = 0
    for t in dfg.tasks:
        entry = plan.tasks[t.name]
        b = TaskBinding(
            n_fu_dsp=fu_count(t.n_op_dsp, entry.ii),
            n_mem_ports=fu_count(t.n_op_mem, entry.ii),
            partition_factor=scaled_partition(t.base_partition_factor, entry.m),
        )
        per_task[t.name] = b
        total += b.n_fu_dsp
    pct = Fraction(100 * total, dfg.device_dsp_total)
    return BindingResult(per_task=per_task, total_dsp=total, dsp_pct=pct)


def check_plan_coverage(dfg: Dfg, plan: "PumpPlan") -> None:
    names = set(dfg.task_names)
    planned = set(plan.tasks)
    missing = sorted(names - planned)
    if missing:
        raise ValidationError(f"plan does not cover task: {missing[0]}")
    extra = sorted(planned - names)
    if extra:
        raise ValidationError(f"plan names unknown task: {extra[0]}")
