import numpy as np

from tropfw import max_flow_oracle, solve, type_data
from tropfw.tropical import fw_objective

# ### Four points in the tropical projective torus
#
# Points are rows of V. Adding a constant to a row does not change the
# point, so every row is stored with its first coordinate set to 0.

V = np.array([[0, 0, 5], [0, 1, 2], [0, 3, 0], [0, 3, 6]], dtype=float)

# ### The exact Fermat-Weber set
#
# `solve` runs a min-cost flow on a small transshipment network and reads
# the Fermat-Weber set off the shortest paths of its residual graph. The
# result is a polytrope: a cell cut out by inequalities x_k - x_j <= C[j, k].

P = solve(V)
print("optimal value:", P.opt_value)
print("Kleene star C:")
print(P.kleene)
print("min-plus vertices:", [v.tolist() for v in P.min_vertices])
print("max-plus vertices:", [v.tolist() for v in P.max_vertices])

# Every vertex attains the optimum.
print("f at the vertices:", fw_objective(V, np.array(P.vertices())))

# ### Membership and the optimality oracle
#
# The oracle builds the bipartite graph of max and min types at x and
# asks for a flow of value n. (0,2,3.5) is inside, (0,2.5,2.6) is not.

for x in ([0, 2, 3.5], [0, 2.5, 2.6]):
    M, ok = max_flow_oracle(V, x)
    print(f"x={x}: in cell={P.contains(x)}, max flow={M}, certified={ok}")

# The type of a point records which sector of each sample point it lies in.
td = type_data(V, [0, 2.5, 2.6])
print("max types:", [sorted(t) for t in td.max_type])
print("min types:", [sorted(t) for t in td.min_type])
print("gradient #tau - #tau_bar:", td.coarse_max - td.coarse_min)
