"""Where the II lower bound comes from: loop-carried dependence cycles.

An accumulation `a = a + b` produces `a` in one iteration and consumes
it in the next.  That cycle forces the II up to the adder's latency,
and the latency itself grows as the clock tightens (no chaining: every
operation holds at least one full cycle).
"""

from pumpwise import Ddg, Dep, Op, critical_cycle, min_ii, op_latency_cycles, pipeline_depth

# a = a + b, adder delay 11 ns, value carried one iteration
acc = Ddg(
    ops=[Op("load_b", "load", 1.5), Op("acc", "add", 11.0), Op("store_a", "store", 1.5)],
    deps=[Dep("load_b", "acc", 0), Dep("acc", "acc", 1), Dep("acc", "store_a", 0)],
)

print("accumulator loop (adder delay 11 ns):")
for f in (100, 250, 500, 750):
    lat = op_latency_cycles(11.0, f)
    print(
        f"  @ {f:3d} MHz: adder latency {lat} cycles -> min II {min_ii(acc, f)}"
        f"  (critical cycle: {'->'.join(critical_cycle(acc, f))})"
    )
print()

# A filter body with no carried dependence pipelines at II = 1 at any
# clock; only its pipeline gets deeper.
body = Ddg(
    ops=[
        Op("ld0", "load", 1.5), Op("ld1", "load", 1.5),
        Op("mul0", "mul", 3.0), Op("mul1", "mul", 3.0),
        Op("sum", "add", 2.5), Op("st", "store", 1.5),
    ],
    deps=[
        Dep("ld0", "mul0", 0), Dep("ld1", "mul1", 0),
        Dep("mul0", "sum", 0), Dep("mul1", "sum", 0), Dep("sum", "st", 0),
    ],
)
print("filter body (no carried dependence):")
for f in (250, 500, 1000):
    print(
        f"  @ {f:4d} MHz: min II {min_ii(body, f)}, "
        f"pipeline depth {pipeline_depth(body, f)} cycles"
    )
