import time

import numpy as np

from tropfw import default_grid, grid_minimize, solve, verify_polytrope

# ### Checking the exact solver against brute force
#
# In dimensions up to 4 the objective can be evaluated on a lattice. Each
# term is 1-Lipschitz for the tropical metric, so the lattice minimum is
# at most n*h above the true optimum. `verify_polytrope` also checks that
# optimal lattice points lie in the computed cell and that lattice points
# of the cell are optimal.

rng = np.random.default_rng(3)
h = 0.25
t0 = time.perf_counter()
worst = 0.0
for k in range(30):
    n, d = rng.integers(2, 9), rng.integers(2, 5)
    V = rng.integers(0, 21, size=(n, d)).astype(float)
    P = solve(V)
    spec = default_grid(V, h)
    value, _ = grid_minimize(V, spec)
    problems = verify_polytrope(V, P, spec)
    worst = max(worst, (value - P.opt_value) / (n * h))
    if problems:
        print(k, problems)
print(f"30 instances checked in {time.perf_counter() - t0:.1f}s")
print(f"largest lattice gap as a fraction of n*h: {worst:.3f}")
