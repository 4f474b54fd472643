"""Command-line front end: analyze, optimize, sweep, simulate, report.

All commands are deterministic: the same inputs produce byte-identical
output.  Exit codes: 0 success, 1 usage, 2 invalid input, 3 infeasible
operating point, 4 simulation regression.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import datasets
from .binding import bind
from .dfg import Dfg, load_dfg
from .errors import InfeasibleError, ParseError, SimulationError, ValidationError
from .ii import as_fraction
from .planner import (
    STRATEGIES,
    PumpPlan,
    SweepRow,
    compute_throughput,
    graph_throughput,
    load_plan,
    make_plan,
    max_pump_factor,
    max_single_pump_factor,
    save_plan,
    sweep,
)
from .sim import SimConfig, default_warmup, simulate

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_SIM_REGRESSION = 4

SIM_REGRESSION_LIMIT = Fraction(5, 100)
SWEEP_CSV_HEADER = (
    "throughput,dsp_base,dsp_s-pump,dsp_m-pump,"
    "dsp_base_pct,dsp_s-pump_pct,dsp_m-pump_pct"
)


def _fmt_num(x) -> str:
    fx = as_fraction(x)
    if fx.denominator == 1:
        return str(fx.numerator)
    return repr(float(fx))


def _fmt_msps(x) -> str:
    return f"{float(x):.6g}"


def _fmt_pct(x) -> str:
    return f"{float(x):.2f}"


def _resolve(pathstr: str) -> Path:
    p = Path(pathstr)
    if p.exists():
        return p
    try:
        return datasets.path(pathstr)
    except FileNotFoundError:
        raise ParseError(f"{pathstr}: no such file or bundled dataset") from None


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = []
    for cells in [headers] + rows:
        parts = [cells[0].ljust(widths[0])]
        parts += [c.rjust(w) for c, w in zip(cells[1:], widths[1:])]
        lines.append("  ".join(parts).rstrip())
    return "\n".join(lines)


def _sweep_csv(rows: list[SweepRow]) -> str:
    ordered = sorted(rows, key=lambda r: (r.throughput_msps, r.f_base_mhz))
    lines = [SWEEP_CSV_HEADER]
    for r in ordered:
        lines.append(
            ",".join(
                [
                    _fmt_num(r.throughput_msps),
                    str(r.dsp_base),
                    str(r.dsp_s_pump),
                    str(r.dsp_m_pump),
                    _fmt_pct(r.dsp_base_pct),
                    _fmt_pct(r.dsp_s_pump_pct),
                    _fmt_pct(r.dsp_m_pump_pct),
                ]
            )
        )
    return "\n".join(lines) + "\n"


def _plan_table(dfg: Dfg, plan: PumpPlan) -> str:
    binding = bind(dfg, plan)
    rows = []
    for t in dfg.tasks:
        e = plan.tasks[t.name]
        rows.append(
            [
                t.name,
                str(e.m),
                _fmt_num(e.f_mhz),
                str(e.ii),
                str(binding.per_task[t.name].n_fu_dsp),
            ]
        )
    return _table(["task", "factor", "f_mhz", "ii", "dsp"], rows)


# --- commands ---------------------------------------------------------------


def cmd_analyze(args) -> int:
    dfg = load_dfg(_resolve(args.dfg), f_base_mhz=args.f_base)
    rows = []
    for t in dfg.tasks:
        rows.append(
            [
                t.name,
                str(t.ii_min_at(args.f_base)),
                str(t.n_op_dsp),
                _fmt_num(t.f_max_mhz),
                str(max_pump_factor(t.f_max_mhz, args.f_base, t.n_op_dsp)),
            ]
        )
    print(_table(["task", "ii_min", "n_op_dsp", "f_max_mhz", "max_pump"], rows))
    s = max_single_pump_factor(dfg, args.f_base)
    print(f"uniform single-clock pump factor: {s}")
    return EXIT_OK


def cmd_optimize(args) -> int:
    dfg = load_dfg(_resolve(args.dfg), f_base_mhz=args.f_base)
    plan = make_plan(dfg, args.f_base, args.strategy)
    base = make_plan(dfg, args.f_base, "base")
    dsp_before = bind(dfg, base).total_dsp
    dsp_after = bind(dfg, plan).total_dsp
    thr = graph_throughput(dfg, plan)
    out = args.out or f"{Path(args.dfg).stem}.{args.strategy}{_fmt_num(args.f_base)}.plan"
    save_plan(plan, out)
    print(_plan_table(dfg, plan))
    if args.strategy == "s-pump":
        s = max_single_pump_factor(dfg, args.f_base)
        print(f"kernel clock: {_fmt_num(s * args.f_base)} MHz")
    print(f"DSP {dsp_before} -> {dsp_after}, throughput {_fmt_msps(thr)} msps preserved")
    print(f"plan written: {out}")
    return EXIT_OK


def cmd_sweep(args) -> int:
    dfg = load_dfg(_resolve(args.dfg))
    rows = sweep(dfg, args.f_lo, args.f_hi, args.step)
    if not rows:
        print("warning: no feasible base clocks in range", file=sys.stderr)
    csv_text = _sweep_csv(rows)
    if args.out == "-":
        sys.stdout.write(csv_text)
    else:
        Path(args.out).write_text(csv_text)
        print(f"{len(rows)} rows written: {args.out}")
    return EXIT_OK


def cmd_simulate(args) -> int:
    dfg = load_dfg(_resolve(args.dfg))
    plan = load_plan(args.plan)
    warmup = args.warmup if args.warmup is not None else default_warmup(dfg, plan)
    cfg = SimConfig(iterations=args.iterations, warmup=warmup)
    if args.iterations - warmup < 100:
        print(
            f"warning: measurement window too small "
            f"({args.iterations - warmup} samples)",
            file=sys.stderr,
        )
    report = simulate(dfg, plan, cfg, trace_path=args.trace)
    if report.stalled:
        print(
            f"error: simulation stalled at task {report.stall_task} "
            f"(t={report.stall_time_ps} ps)",
            file=sys.stderr,
        )
        return EXIT_INVALID
    analytic = compute_throughput(dfg, plan)
    err = abs(report.throughput_msps - analytic) / analytic
    print(f"throughput: {_fmt_msps(report.throughput_msps)} msps")
    print(f"analytic:   {_fmt_msps(analytic)} msps")
    print(f"relative error: {float(err) * 100:.3f} %")
    print("channel occupancy:")
    for ch in report.channels:
        print(f"  {ch.src}->{ch.dst}: peak {ch.peak_occupancy}")
    print("firings:")
    for name, n in report.firings.items():
        print(f"  {name}: {n}")
    if err > SIM_REGRESSION_LIMIT:
        print(
            f"error: simulated throughput deviates {float(err) * 100:.3f} % "
            f"from the analytic model (limit 5 %)",
            file=sys.stderr,
        )
        return EXIT_SIM_REGRESSION
    return EXIT_OK


def cmd_report(args) -> int:
    dfg = load_dfg(_resolve(args.dfg), f_base_mhz=args.f_base)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)

    plans = {s: make_plan(dfg, args.f_base, s) for s in STRATEGIES}
    for s, plan in plans.items():
        save_plan(plan, outdir / f"plan-{s}.json")

    f_lo = args.f_lo if args.f_lo is not None else args.f_base
    f_hi = args.f_hi if args.f_hi is not None else dfg.min_f_max_mhz
    rows = sweep(dfg, f_lo, f_hi, args.step)
    (outdir / "sweep.csv").write_text(_sweep_csv(rows))

    sim_lines = ["strategy,analytic_msps,simulated_msps,rel_err_pct"]
    sim_rows = []
    for s, plan in plans.items():
        warmup = args.warmup if args.warmup is not None else default_warmup(dfg, plan)
        report = simulate(dfg, plan, SimConfig(args.iterations, warmup))
        analytic = compute_throughput(dfg, plan)
        err = abs(report.throughput_msps - analytic) / analytic
        sim_lines.append(
            f"{s},{_fmt_msps(analytic)},{_fmt_msps(report.throughput_msps)},"
            f"{float(err) * 100:.3f}"
        )
        sim_rows.append(
            [s, _fmt_msps(analytic), _fmt_msps(report.throughput_msps), f"{float(err) * 100:.3f}"]
        )
    (outdir / "simcheck.csv").write_text("\n".join(sim_lines) + "\n")

    summary = []
    summary.append(f"graph: {args.dfg}")
    summary.append(f"base clock: {_fmt_num(args.f_base)} MHz")
    summary.append(f"effective throughput: {_fmt_msps(graph_throughput(dfg, plans['base']))} msps")
    summary.append("")
    for s in STRATEGIES:
        summary.append(f"[{s}]")
        summary.append(_plan_table(dfg, plans[s]))
        summary.append(f"total DSP: {bind(dfg, plans[s]).total_dsp}")
        summary.append("")
    summary.append("simulation cross-check:")
    summary.append(
        _table(["strategy", "analytic_msps", "simulated_msps", "rel_err_pct"], sim_rows)
    )
    summary.append("")
    summary.append(f"sweep rows: {len(rows)} ({_fmt_num(f_lo)}..{_fmt_num(f_hi)} "
                   f"MHz step {_fmt_num(args.step)})")
    text = "\n".join(summary) + "\n"
    (outdir / "summary.txt").write_text(text)
    sys.stdout.write(text)
    return EXIT_OK


# --- argument parsing -------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="pumpwise",
        description="Task-level multi-pumping: model, optimize, and verify dataflow kernels.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("analyze", help="per-task II, op counts, and pump factors")
    p.add_argument("dfg", help="graph description file or bundled dataset name")
    p.add_argument("--f-base", type=_rational, required=True, metavar="MHZ")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("optimize", help="select pump factors and write a plan file")
    p.add_argument("dfg")
    p.add_argument("--f-base", type=_rational, required=True, metavar="MHZ")
    p.add_argument("--strategy", choices=STRATEGIES, default="m-pump")
    p.add_argument("--out", default=None, help="plan file path")
    p.set_defaults(func=cmd_optimize)

    p = sub.add_parser("sweep", help="throughput-vs-DSP sweep over base clocks")
    p.add_argument("dfg")
    p.add_argument("--f-lo", type=_rational, required=True, metavar="MHZ")
    p.add_argument("--f-hi", type=_rational, required=True, metavar="MHZ")
    p.add_argument("--step", type=_rational, required=True, metavar="MHZ")
    p.add_argument("--out", default="-", help="CSV path, - for stdout")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="measure a plan with the discrete-event simulator")
    p.add_argument("dfg")
    p.add_argument("plan", help="plan file produced by optimize")
    p.add_argument("--iterations", type=int, default=10000)
    p.add_argument("--warmup", type=int, default=None)
    p.add_argument("--trace", default=None, help="write a per-event CSV trace")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("report", help="plans, sweep, and simulation cross-check in one bundle")
    p.add_argument("dfg")
    p.add_argument("--f-base", type=_rational, required=True, metavar="MHZ")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--f-lo", type=_rational, default=None, metavar="MHZ")
    p.add_argument("--f-hi", type=_rational, default=None, metavar="MHZ")
    p.add_argument("--step", type=_rational, default=Fraction(5), metavar="MHZ")
    p.add_argument("--iterations", type=int, default=10000)
    p.add_argument("--warmup", type=int, default=None)
    p.set_defaults(func=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code else 0
    if getattr(args, "func", None) is None:
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except ParseError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ValidationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SimulationError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
