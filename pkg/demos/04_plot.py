import sys

import numpy as np

from tropfw import solve
from tropfw.plot import polygon_vertices, render_svg

# ### Drawing a planar example
#
# With d = 3 the torus is a plane with coordinates (x2, x3). Each sample
# point carries a max-plus tropical line (solid) and a min-plus one
# (dashed). The Fermat-Weber set is the shaded polygon.

V = np.array([[0, 0, 5], [0, 1, 2], [0, 3, 0], [0, 3, 6]], dtype=float)
P = solve(V)
print("polygon vertices in (x2, x3):", polygon_vertices(P.cell).tolist())

out = sys.argv[1] if len(sys.argv) > 1 else "four_points.svg"
with open(out, "w") as fh:
    fh.write(render_svg(V, P.cell, title="four points"))
print("wrote", out)
