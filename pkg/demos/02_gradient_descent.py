import numpy as np

from tropfw import DescentConfig, descend, solve

# ### Descent on a piecewise linear objective
#
# The objective is affine on each cell of an arrangement, with an integer
# gradient. On cell walls the descent uses a subgradient built from the
# normalized fine types, and stops when the max-flow oracle certifies the
# point. A constant step usually ends up bouncing between two cells
# around the optimum, which shows up as an alternating pair of values.

rng = np.random.default_rng(1)
V = rng.integers(0, 21, size=(6, 4)).astype(float)
P = solve(V)
print("exact optimum:", P.opt_value)

x0 = rng.uniform(-20, 20, size=4)
for schedule in ("exact-line-search", "diminishing", "constant"):
    trace = descend(V, x0, DescentConfig(schedule=schedule, max_iters=10_000))
    fs = [round(it.f, 4) for it in trace.iterates]
    print(f"{schedule:>18}: status={trace.status} iterations={len(fs)} "
          f"oracle calls={trace.oracle_calls} f={trace.terminal_value:.9g}")
    print("    f values:", fs[:8], "..." if len(fs) > 8 else "")
    print("    terminal in FW set:", P.contains(trace.terminal, 1e-6))

# ### Many starts
#
# Different starts land on different points of the same polytrope.

ends = []
for _ in range(10):
    tr = descend(V, rng.uniform(-20, 20, size=4), DescentConfig(schedule="exact-line-search"))
    ends.append(tr.terminal)
ends = np.array(ends)
print("distinct terminal points:", len(np.unique(ends.round(9), axis=0)))
print("all optimal:", bool(np.all(P.contains(ends, 1e-6))))
