"""Discrete-event simulation of multi-clock dataflow graphs.

Each task is a pipelined actor on its own clock; channels are
depth-bounded FIFOs with independent read and write clocks.  A task
starts an iteration at a local clock edge when at least ii local cycles
have passed since its previous start, every input channel holds a token,
and every output channel has a free slot net of reservations.  Inputs
are popped at start, a slot is reserved per output at start, and outputs
are pushed pipeline_depth local cycles later.  Source tasks fire until
they have emitted the configured number of iterations; sink starts are
the consumption times the throughput measurement is taken from.

The timeline is integer picoseconds with clock periods rounded to the
nearest picosecond, and events are processed in a fixed total order
(time, then task index, then completion before start attempt), so a
simulation is deterministic down to the bit.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Union

from .binding import check_plan_coverage
from .dfg import Dfg
from .errors import SimulationError, ValidationError
from .ii import as_fraction
from .planner import PumpPlan, compute_throughput

PS_PER_MICROSECOND = 10**6
MAX_CLOCK_MHZ = 10**6  # 1 THz: faster clocks round to a zero-ps period


@dataclass(frozen=True)
class SimConfig:
    """Measurement window: total tokens to emit and tokens excluded up front.

    The timeline unit is fixed at integer picoseconds.
    """

    iterations: int
    warmup: int = 0


@dataclass(frozen=True)
class ChannelReport:
    src: str
    dst: str
    peak_occupancy: int
    residual_tokens: int


@dataclass(frozen=True)
class SimReport:
    throughput_msps: Fraction
    channels: tuple[ChannelReport, ...]
    firings: dict[str, int]
    stalled: bool
    stall_task: str | None
    stall_time_ps: int | None
    events_processed: int


def clock_period_ps(f_mhz) -> int:
    """Task-local clock period, rounded to the nearest picosecond."""
    f = as_fraction(f_mhz)
    if f <= 0:
        raise ValidationError("clock frequency must be positive")
    if f > MAX_CLOCK_MHZ:
        raise SimulationError(
            f"zero-period clock: {float(f):g} MHz exceeds the "
            f"{MAX_CLOCK_MHZ} MHz picosecond resolution limit"
        )
    return round(Fraction(PS_PER_MICROSECOND) / f)


def default_warmup(dfg: Dfg, plan: PumpPlan) -> int:
    """Tokens to discard before measuring: covers the pipeline fill transient."""
    deepest = max(
        dfg.task(name).pipeline_depth_at(entry.f_mhz) for name, entry in plan.tasks.items()
    )
    return max(100, 10 * deepest)


def simulate(
    dfg: Dfg,
    plan: PumpPlan,
    cfg: SimConfig,
    trace_path: Union[str, Path, None] = None,
) -> SimReport:
    """Run the dataflow graph under a plan and measure steady-state throughput."""
    check_plan_coverage(dfg, plan)
    plan.validate()
    iterations = cfg.iterations
    warmup = cfg.warmup
    if not isinstance(iterations, int) or iterations < 1:
        raise ValidationError("iterations must be a positive integer")
    if not isinstance(warmup, int) or warmup < 0 or warmup >= iterations:
        raise ValidationError("warmup must satisfy 0 <= warmup < iterations")

    ntasks = len(dfg.tasks)
    names = [t.name for t in dfg.tasks]
    index = {n: i for i, n in enumerate(names)}
    period = []
    ii_ps = []
    pd_ps = []
    for t in dfg.tasks:
        entry = plan.tasks[t.name]
        p = clock_period_ps(entry.f_mhz)
        period.append(p)
        ii_ps.append(p * entry.ii)
        pd_ps.append(p * t.pipeline_depth_at(entry.f_mhz))

    nchan = len(dfg.channels)
    prod = [index[c.src] for c in dfg.channels]
    cons = [index[c.dst] for c in dfg.channels]
    depth = [c.depth for c in dfg.channels]
    in_ch = [[] for _ in range(ntasks)]
    out_ch = [[] for _ in range(ntasks)]
    for c in range(nchan):
        out_ch[prod[c]].append(c)
        in_ch[cons[c]].append(c)
    in_ch = [tuple(v) for v in in_ch]
    out_ch = [tuple(v) for v in out_ch]
    is_source = [not in_ch[i] for i in range(ntasks)]
    is_sink = [not out_ch[i] for i in range(ntasks)]

    occ = [0] * nchan
    res = [0] * nchan
    peak = [0] * nchan
    wait_tok = [False] * nchan
    wait_slot = [False] * nchan
    started = [0] * ntasks
    completed = [0] * ntasks
    earliest = [0] * ntasks
    next_attempt = [0] * ntasks
    t_warm = [0] * ntasks
    t_last = [0] * ntasks
    last_i = -1
    last_t = 0
    nevents = 0

    tf = open(trace_path, "w") if trace_path is not None else None
    try:
        if tf:
            tf.write("time_ps,task,kind,iteration\n")
        K = ntasks
        events = [i * 2 + 1 for i in range(ntasks)]  # every task attempts at t = 0
        heapq.heapify(events)
        heappush = heapq.heappush
        heappop = heapq.heappop

        while events:
            ev = heappop(events)
            nevents += 1
            kind = ev & 1
            q = ev >> 1
            t = q // K
            i = q - t * K

            if kind == 0:
                # completion: fill the reserved slot in every output FIFO
                completed[i] += 1
                for c in out_ch[i]:
                    res[c] -= 1
                    o = occ[c] + 1
                    occ[c] = o
                    assert o <= depth[c], "FIFO overflow"
                    if o > peak[c]:
                        peak[c] = o
                    if wait_tok[c]:
                        wait_tok[c] = False
                        j = cons[c]
                        pj = period[j]
                        target = -(-t // pj) * pj
                        ej = earliest[j]
                        if target < ej:
                            target = ej
                        na = next_attempt[j]
                        if na < 0 or target < na:
                            next_attempt[j] = target
                            heappush(events, (target * K + j) * 2 + 1)
                if tf:
                    tf.write(f"{t},{names[i]},complete,{completed[i] - 1}\n")
                continue

            # start attempt
            next_attempt[i] = -1
            if is_source[i] and started[i] >= iterations:
                continue
            est = earliest[i]
            if est > t:
                # woken before the ii spacing expired; re-arm at the edge
                na = next_attempt[i]
                if na < 0 or est < na:
                    next_attempt[i] = est
                    heappush(events, (est * K + i) * 2 + 1)
                continue
            blocked = False
            for c in in_ch[i]:
                if occ[c] == 0:
                    wait_tok[c] = True
                    blocked = True
                    break
            if not blocked:
                for c in out_ch[i]:
                    if occ[c] + res[c] >= depth[c]:
                        wait_slot[c] = True
                        blocked = True
                        break
            if blocked:
                continue

            # fire: pop inputs, reserve output slots, schedule the completion
            for c in in_ch[i]:
                o = occ[c] - 1
                occ[c] = o
                assert o >= 0, "FIFO underflow"
                if wait_slot[c]:
                    wait_slot[c] = False
                    j = prod[c]
                    pj = period[j]
                    target = -(-t // pj) * pj
                    ej = earliest[j]
                    if target < ej:
                        target = ej
                    na = next_attempt[j]
                    if na < 0 or target < na:
                        next_attempt[j] = target
                        heappush(events, (target * K + j) * 2 + 1)
            for c in out_ch[i]:
                res[c] += 1
            k = started[i]
            started[i] = k + 1
            earliest[i] = t + ii_ps[i]
            heappush(events, ((t + pd_ps[i]) * K + i) * 2)
            last_i = i
            last_t = t
            if is_sink[i]:
                sc = started[i]
                if sc == warmup:
                    t_warm[i] = t
                if sc == iterations:
                    t_last[i] = t
            if not (is_source[i] and started[i] >= iterations):
                nt = earliest[i]
                na = next_attempt[i]
                if na < 0 or nt < na:
                    next_attempt[i] = nt
                    heappush(events, (nt * K + i) * 2 + 1)
            if tf:
                tf.write(f"{t},{names[i]},start,{k}\n")
    finally:
        if tf:
            tf.close()

    sinks = [i for i in range(ntasks) if is_sink[i]]
    finished = all(started[i] >= iterations for i in sinks)
    if finished:
        # the graph's k-th iteration is done when its last sink consumes it
        window_end = max(t_last[i] for i in sinks)
        window_start = max(t_warm[i] for i in sinks) if warmup > 0 else 0
        throughput = Fraction(
            (iterations - warmup) * PS_PER_MICROSECOND, window_end - window_start
        )
        stalled = False
        stall_task = None
        stall_time = None
    else:
        throughput = Fraction(0)
        stalled = True
        stall_task = names[last_i] if last_i >= 0 else None
        stall_time = last_t if last_i >= 0 else None

    assert all(r == 0 for r in res), "reserved slots left unfilled"
    channels = tuple(
        ChannelReport(dfg.channels[c].src, dfg.channels[c].dst, peak[c], occ[c])
        for c in range(nchan)
    )
    return SimReport(
        throughput_msps=throughput,
        channels=channels,
        firings={names[i]: started[i] for i in range(ntasks)},
        stalled=stalled,
        stall_task=stall_task,
        stall_time_ps=stall_time,
        events_processed=nevents,
    )


def validate_plan_throughput(dfg: Dfg, plan: PumpPlan, cfg: SimConfig) -> Fraction:
    """Relative error of simulated vs analytic bottleneck throughput.

    The simulator models compute only, so the reference deliberately
    excludes the memory bound.
    """
    analytic = compute_throughput(dfg, plan)
    report = simulate(dfg, plan, cfg)
    if report.stalled:
        raise SimulationError(
            f"simulation stalled at task {report.stall_task} (t={report.stall_time_ps} ps)"
        )
    return abs(report.throughput_msps - analytic) / analytic
