"""Throughput-vs-DSP Pareto fronts: step curves over the base clock.

Sweeping the base clock produces piecewise-constant DSP curves whose
steps sit exactly where some floor(f_max / f_base) changes.  The
per-task strategy dominates the shared-clock one everywhere and keeps
its savings up to higher throughputs before degenerating to base.
"""

from pathlib import Path

from pumpwise import datasets, load_dfg, max_pump_factor, max_single_pump_factor, sweep

for name in ("conv2d.json", "optical.json"):
    dfg = load_dfg(datasets.path(name))
    hi = dfg.min_f_max_mhz
    rows = sweep(dfg, 25, hi, 1)
    print(f"{name}: {len(rows)} feasible base clocks up to {hi} MHz")
    if dfg.memory_bound_msps is not None:
        print(f"  memory bound clips reported throughput at {dfg.memory_bound_msps} msps")

    # print one line per step of the m-pump curve
    print("  m-pump steps (throughput msps -> DSPs):")
    prev = None
    for r in rows:
        if prev is None or r.dsp_m_pump != prev.dsp_m_pump:
            print(
                f"    from {float(r.throughput_msps):7.2f} msps: "
                f"{r.dsp_m_pump:3d} DSPs ({float(r.dsp_m_pump_pct):5.2f} %)"
            )
        prev = r

    s_deg = next(f for f in range(25, int(hi) + 1) if max_single_pump_factor(dfg, f) == 1)
    m_deg = next(
        f
        for f in range(25, int(hi) + 1)
        if all(max_pump_factor(t.f_max_mhz, f, t.n_op_dsp) == 1 for t in dfg.tasks)
    )
    print(f"  s-pump degenerates to base at {s_deg} MHz, m-pump at {m_deg} MHz")

    out = Path(f"sweep-{Path(name).stem}.csv")
    lines = ["throughput,dsp_base,dsp_s-pump,dsp_m-pump"]
    for r in rows:
        lines.append(
            f"{float(r.throughput_msps):g},{r.dsp_base},{r.dsp_s_pump},{r.dsp_m_pump}"
        )
    out.write_text("\n".join(lines) + "\n")
    print(f"  wrote {out} (feed it to any plotter)")
    print()
