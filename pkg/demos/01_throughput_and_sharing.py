"""Why pumping a task saves DSPs at equal throughput.

Walks the bundled 2D-convolution graph: the filter task computes 225
multiply-accumulates per pipeline iteration, so at II = 1 binding needs
225 DSP blocks.  Doubling both its clock and its II keeps f/II (the
task's throughput) unchanged while halving the functional units.
"""

from pumpwise import bind, datasets, fu_count, graph_throughput, load_dfg, make_plan, task_throughput

dfg = load_dfg(datasets.path("conv2d.json"))
filt = dfg.task("Filter2D")

print("graph:", " -> ".join(dfg.task_names))
print(f"Filter2D: {filt.n_op_dsp} DSP ops/iteration, f_max {filt.f_max_mhz} MHz")
print()

# One task, by hand: same throughput, half the multipliers.
print("single-clock solution @ 250 MHz, II 1:")
print(f"  throughput {task_throughput(250, 1)} msps, DSPs {fu_count(filt.n_op_dsp, 1)}")
print("double-pumped @ 500 MHz, II 2:")
print(f"  throughput {task_throughput(500, 2)} msps, DSPs {fu_count(filt.n_op_dsp, 2)}")
print()

# The planner does this per task, bounded by each task's f_max.
for strategy in ("base", "s-pump", "m-pump"):
    plan = make_plan(dfg, 250, strategy)
    res = bind(dfg, plan)
    e = plan.tasks["Filter2D"]
    print(
        f"{strategy:7s} @ base 250 MHz: Filter2D x{e.m} "
        f"({e.f_mhz} MHz, II {e.ii}), total {res.total_dsp} DSPs "
        f"({float(res.dsp_pct):.2f} % of device), "
        f"graph throughput {graph_throughput(dfg, plan)} msps"
    )
