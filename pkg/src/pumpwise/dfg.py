"""Dataflow-graph model: tasks, FIFO channels, and the on-disk description.

A graph is an acyclic set of tasks communicating through point-to-point
FIFO channels, together with the per-task characterization the rest of
the toolkit consumes: DSP/memory operation counts per pipeline iteration,
the maximum implementable clock, the minimum initiation interval at the
base clock (declared, or derived from an attached data-dependence graph),
and the pipeline depth in task-local cycles.

f_max is always an input measured downstream of synthesis; nothing here
estimates timing.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Mapping, Sequence, Union

import networkx as nx

from .errors import ParseError, ValidationError
from .ii import Ddg, Dep, Op, Rational, as_fraction, min_ii
from .ii import pipeline_depth as ddg_pipeline_depth

DEFAULT_CHANNEL_DEPTH = 2


@dataclass(frozen=True)
class Task:
    """One dataflow task and its characterization.

    ``ii_min_base`` may be omitted when ``ddg`` is given (it is then
    derived), and ``pipeline_depth`` may be omitted likewise.  When both
    ``ddg`` and ``ii_min_base`` are present the loader cross-checks them
    at the base clock.
    """

    name: str
    f_max_mhz: Rational
    n_op_dsp: int = 0
    n_op_mem: int = 0
    base_partition_factor: int = 1
    ii_min_base: int | None = None
    pipeline_depth: int | None = None
    ddg: Ddg | None = None

    def __post_init__(self):
        object.__setattr__(self, "f_max_mhz", as_fraction(self.f_max_mhz))

    def validate(self) -> None:
        if not self.name:
            raise ValidationError("task name must be non-empty")
        if as_fraction(self.f_max_mhz) <= 0:
            raise ValidationError(f"task {self.name}: f_max_mhz must be positive")
        for field_name in ("n_op_dsp", "n_op_mem"):
            v = getattr(self, field_name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValidationError(
                    f"task {self.name}: {field_name} must be a nonnegative integer"
                )
        if not isinstance(self.base_partition_factor, int) or self.base_partition_factor < 1:
            raise ValidationError(
                f"task {self.name}: base_partition_factor must be a positive integer"
            )
        if self.ii_min_base is not None and (
            not isinstance(self.ii_min_base, int) or self.ii_min_base < 1
        ):
            raise ValidationError(f"task {self.name}: ii_min_base must be >= 1")
        if self.pipeline_depth is not None and (
            not isinstance(self.pipeline_depth, int) or self.pipeline_depth < 1
        ):
            raise ValidationError(f"task {self.name}: pipeline_depth must be >= 1")
        if self.ddg is None:
            if self.ii_min_base is None:
                raise ValidationError(
                    f"task {self.name}: ii_min_base is required when no ddg is given"
                )
            if self.pipeline_depth is None:
                raise ValidationError(
                    f"task {self.name}: pipeline_depth is required when no ddg is given"
                )
        else:
            try:
                self.ddg.validate()
            except ValidationError as e:
                raise ValidationError(f"task {self.name}: {e}") from None

    def ii_min_at(self, f_mhz: Rational) -> int:
        """Minimum II at the given clock: DDG-derived when one is attached."""
        if self.ddg is not None:
            return min_ii(self.ddg, f_mhz)
        assert self.ii_min_base is not None
        return self.ii_min_base

    def pipeline_depth_at(self, f_mhz: Rational) -> int:
        """Cycles from iteration start to output token at the given clock."""
        if self.pipeline_depth is not None:
            return self.pipeline_depth
        assert self.ddg is not None
        return ddg_pipeline_depth(self.ddg, f_mhz)


@dataclass(frozen=True)
class Channel:
    """FIFO channel from task ``src`` to task ``dst`` with a token capacity."""

    src: str
    dst: str
    depth: int = DEFAULT_CHANNEL_DEPTH


@dataclass(frozen=True)
class Dfg:
    """Validated dataflow graph plus device DSP budget and memory cap."""

    tasks: tuple[Task, ...]
    channels: tuple[Channel, ...]
    device_dsp_total: int
    memory_bound_msps: Rational | None = None

    def __init__(
        self,
        tasks: Sequence[Task],
        channels: Sequence[Channel],
        device_dsp_total: int,
        memory_bound_msps: Rational | None = None,
    ):
        object.__setattr__(self, "tasks", tuple(tasks))
        object.__setattr__(self, "channels", tuple(channels))
        object.__setattr__(self, "device_dsp_total", device_dsp_total)
        object.__setattr__(
            self,
            "memory_bound_msps",
            None if memory_bound_msps is None else as_fraction(memory_bound_msps),
        )

    def task(self, name: str) -> Task:
        for t in self.tasks:
            if t.name == name:
                return t
        raise ValidationError(f"unknown task: {name}")

    @property
    def task_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.tasks)

    @property
    def min_f_max_mhz(self) -> Fraction:
        return min(as_fraction(t.f_max_mhz) for t in self.tasks)

    def validate(self, f_base_mhz: Rational | None = None) -> None:
        if not self.tasks:
            raise ValidationError("empty graph: at least one task is required")
        names = [t.name for t in self.tasks]
        if len(set(names)) != len(names):
            dup = sorted({n for n in names if names.count(n) > 1})
            raise ValidationError(f"duplicate task name: {dup[0]}")
        if (
            not isinstance(self.device_dsp_total, int)
            or isinstance(self.device_dsp_total, bool)
            or self.device_dsp_total < 1
        ):
            raise ValidationError("device_dsp_total must be a positive integer")
        if self.memory_bound_msps is not None and as_fraction(self.memory_bound_msps) <= 0:
            raise ValidationError("memory_bound_msps must be positive")
        for t in self.tasks:
            t.validate()
        known = set(names)
        for c in self.channels:
            if c.src not in known:
                raise ValidationError(f"channel names unknown task: {c.src}")
            if c.dst not in known:
                raise ValidationError(f"channel names unknown task: {c.dst}")
            if c.src == c.dst:
                raise ValidationError(f"channel endpoints must differ: {c.src}")
            if not isinstance(c.depth, int) or isinstance(c.depth, bool) or c.depth < 1:
                raise ValidationError(f"channel {c.src}->{c.dst}: depth must be >= 1")
        g = nx.DiGraph()
        g.add_nodes_from(names)
        g.add_edges_from((c.src, c.dst) for c in self.channels)
        try:
            cyc = [u for u, _ in nx.find_cycle(g)]
        except nx.NetworkXNoCycle:
            cyc = None
        if cyc is not None:
            k = cyc.index(min(cyc))
            cyc = cyc[k:] + cyc[:k]
            raise ValidationError(
                "channel graph must be acyclic: " + "->".join(cyc + cyc[:1])
            )
        if f_base_mhz is not None:
            self._cross_check_ii(as_fraction(f_base_mhz))

    def _cross_check_ii(self, f_base: Fraction) -> None:
        # the declared ii_min_base only makes a claim for clocks the task
        # can implement, so skip tasks whose f_max lies below f_base
        for t in self.tasks:
            if t.ddg is None or t.ii_min_base is None:
                continue
            if f_base > as_fraction(t.f_max_mhz):
                continue
            derived = min_ii(t.ddg, f_base)
            if derived != t.ii_min_base:
                raise ValidationError(
                    f"task {t.name}: declared ii_min_base {t.ii_min_base} disagrees "
                    f"with the DDG-derived value {derived} at {float(f_base):g} MHz"
                )


@dataclass(frozen=True)
class Characterization:
    """Per-task (f_max_mhz, n_op_dsp) overrides measured from implementation."""

    entries: Mapping[str, tuple[Rational, int]]


def merge_characterization(dfg: Dfg, ch: Characterization) -> Dfg:
    """Overwrite f_max_mhz and n_op_dsp of the named tasks; all else untouched."""
    known = set(dfg.task_names)
    for name in ch.entries:
        if name not in known:
            raise ValidationError(f"unknown task: {name}")
    tasks = []
    for t in dfg.tasks:
        if t.name in ch.entries:
            f_max, n_op = ch.entries[t.name]
            if as_fraction(f_max) <= 0:
                raise ValidationError(f"task {t.name}: f_max_mhz must be positive")
            if not isinstance(n_op, int) or isinstance(n_op, bool) or n_op < 0:
                raise ValidationError(f"task {t.name}: n_op_dsp must be a nonnegative integer")
            t = replace(t, f_max_mhz=as_fraction(f_max), n_op_dsp=n_op)
        tasks.append(t)
    return Dfg(tasks, dfg.channels, dfg.device_dsp_total, dfg.memory_bound_msps)


# --- file ingestion -------------------------------------------------------

_MISSING = object()


def load_dfg(path: Union[str, Path], f_base_mhz: Rational | None = None) -> Dfg:
    """Load and validate a graph description file.

    When ``f_base_mhz`` is given, tasks carrying both a ddg and a declared
    ii_min_base are cross-checked at that clock.
    """
    data = _load_json(path)
    dfg = dfg_from_dict(data)
    dfg.validate(f_base_mhz)
    return dfg


def save_dfg(dfg: Dfg, path: Union[str, Path]) -> None:
    Path(path).write_text(json.dumps(dfg_to_dict(dfg), indent=2) + "\n")


def load_characterization(path: Union[str, Path]) -> Characterization:
    data = _load_json(path)
    if not isinstance(data, dict):
        raise ParseError(f"{path}: characterization must be an object")
    entries = {}
    for name, rec in data.items():
        if not isinstance(rec, dict):
            raise ParseError(f"{name}: expected an object with f_max_mhz and n_op_dsp")
        entries[name] = (
            _num(rec, "f_max_mhz", name),
            _int(rec, "n_op_dsp", name),
        )
    return Characterization(entries)


def dfg_from_dict(data) -> Dfg:
    if not isinstance(data, dict):
        raise ParseError("top level must be an object")
    raw_tasks = _field(data, "tasks", list, "$")
    raw_channels = data.get("channels", [])
    if not isinstance(raw_channels, list):
        raise ParseError("channels: expected an array")
    tasks = [_task_from_dict(rec, f"tasks[{i}]") for i, rec in enumerate(raw_tasks)]
    channels = [_channel_from_dict(rec, f"channels[{i}]") for i, rec in enumerate(raw_channels)]
    device = _int(data, "device_dsp_total", "$")
    bound = _num(data, "memory_bound_msps", "$", default=None)
    return Dfg(tasks, channels, device, bound)


def dfg_to_dict(dfg: Dfg) -> dict:
    out: dict = {"tasks": [_task_to_dict(t) for t in dfg.tasks]}
    out["channels"] = [
        {"from": c.src, "to": c.dst, "depth": c.depth} for c in dfg.channels
    ]
    out["device_dsp_total"] = dfg.device_dsp_total
    if dfg.memory_bound_msps is not None:
        out["memory_bound_msps"] = _num_out(as_fraction(dfg.memory_bound_msps))
    return out


def _task_from_dict(rec, where: str) -> Task:
    if not isinstance(rec, dict):
        raise ParseError(f"{where}: expected an object")
    name = _field(rec, "name", str, where)
    ddg = None
    if "ddg" in rec and rec["ddg"] is not None:
        ddg = _ddg_from_dict(rec["ddg"], f"{where}.ddg")
    return Task(
        name=name,
        f_max_mhz=_num(rec, "f_max_mhz", where),
        n_op_dsp=_int(rec, "n_op_dsp", where, default=0),
        n_op_mem=_int(rec, "n_op_mem", where, default=0),
        base_partition_factor=_int(rec, "base_partition_factor", where, default=1),
        ii_min_base=_int(rec, "ii_min_base", where, default=None),
        pipeline_depth=_int(rec, "pipeline_depth", where, default=None),
        ddg=ddg,
    )


def _task_to_dict(t: Task) -> dict:
    out: dict = {
        "name": t.name,
        "n_op_dsp": t.n_op_dsp,
        "n_op_mem": t.n_op_mem,
        "base_partition_factor": t.base_partition_factor,
        "f_max_mhz": _num_out(as_fraction(t.f_max_mhz)),
    }
    if t.ii_min_base is not None:
        out["ii_min_base"] = t.ii_min_base
    if t.pipeline_depth is not None:
        out["pipeline_depth"] = t.pipeline_depth
    if t.ddg is not None:
        out["ddg"] = {
            "ops": [
                {"id": op.id, "class": op.cls, "delay_ns": _num_out(as_fraction(op.delay_ns))}
                for op in t.ddg.ops
            ],
            "deps": [
                {"from": d.src, "to": d.dst, "dist": d.dist} for d in t.ddg.deps
            ],
        }
    return out


def _channel_from_dict(rec, where: str) -> Channel:
    if not isinstance(rec, dict):
        raise ParseError(f"{where}: expected an object")
    return Channel(
        src=_field(rec, "from", str, where),
        dst=_field(rec, "to", str, where),
        depth=_int(rec, "depth", where, default=DEFAULT_CHANNEL_DEPTH),
    )


def _ddg_from_dict(rec, where: str) -> Ddg:
    if not isinstance(rec, dict):
        raise ParseError(f"{where}: expected an object")
    raw_ops = _field(rec, "ops", list, where)
    raw_deps = rec.get("deps", [])
    if not isinstance(raw_deps, list):
        raise ParseError(f"{where}.deps: expected an array")
    ops = []
    for i, o in enumerate(raw_ops):
        w = f"{where}.ops[{i}]"
        if not isinstance(o, dict):
            raise ParseError(f"{w}: expected an object")
        ops.append(Op(_field(o, "id", str, w), _field(o, "class", str, w), _num(o, "delay_ns", w)))
    deps = []
    for i, d in enumerate(raw_deps):
        w = f"{where}.deps[{i}]"
        if not isinstance(d, dict):
            raise ParseError(f"{w}: expected an object")
        deps.append(Dep(_field(d, "from", str, w), _field(d, "to", str, w), _int(d, "dist", w)))
    return Ddg(ops, deps)


def _load_json(path: Union[str, Path]):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as e:
        raise ParseError(f"{path}: {e.strerror or e}") from None
    try:
        # decimal literals become exact rationals instead of binary floats
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as e:
        raise ParseError(f"{path}:{e.lineno}:{e.colno}: {e.msg}") from None


def _field(rec: dict, key: str, typ, where: str):
    if key not in rec:
        raise ParseError(f"{where}.{key}: missing required field")
    v = rec[key]
    if not isinstance(v, typ) or isinstance(v, bool):
        raise ParseError(f"{where}.{key}: expected {typ.__name__}")
    return v


def _int(rec: dict, key: str, where: str, default=_MISSING):
    if key not in rec or rec[key] is None:
        if default is _MISSING:
            raise ParseError(f"{where}.{key}: missing required field")
        return default
    v = rec[key]
    if not isinstance(v, int) or isinstance(v, bool):
        raise ParseError(f"{where}.{key}: expected an integer")
    return v


def _num(rec: dict, key: str, where: str, default=_MISSING):
    if key not in rec or rec[key] is None:
        if default is _MISSING:
            raise ParseError(f"{where}.{key}: missing required field")
        return default
    v = rec[key]
    if isinstance(v, bool) or not isinstance(v, (int, Fraction, float)):
        raise ParseError(f"{where}.{key}: expected a number")
    return as_fraction(v)


def _num_out(x: Fraction):
    """JSON-friendly number: int when integral, float otherwise."""
    if x.denominator == 1:
        return int(x)
    return float(x)
