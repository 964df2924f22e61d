"""Exact Fermat-Weber polytrope via min-cost flow and a Kleene star."""

from dataclasses import dataclass

import numpy as np

from .covector import CellDescription, cell_membership
from .errors import DimensionError, NegativeCycle
from .flow import build_network, condensed_apsp, residual, solve_mcf
from .tropical import EPS_EQ, as_sample, fw_objective


@dataclass(frozen=True)
class FWPolytrope:
    """The set of tropical Fermat-Weber points of a sample.

    The cell is ``{x : x_k - x_j <= kleene[j, k]}``. Rows of ``kleene`` are
    the min-plus tropical vertices and rows of ``-kleene.T`` the max-plus
    ones.
    """

    kleene: np.ndarray
    opt_value: float
    dual: object

    @property
    def d(self):
        return self.kleene.shape[0]

    @property
    def cell(self):
        # x_j - x_k <= kleene[k, j]
        bounds = self.kleene.T.copy()
        np.fill_diagonal(bounds, np.inf)
        return CellDescription(bounds)

    @property
    def min_vertices(self):
        return [row - row[0] for row in self.kleene]

    @property
    def max_vertices(self):
        return [row - row[0] for row in -self.kleene.T]

    def vertices(self, eps=EPS_EQ):
        """Distinct tropical vertices (min-plus first, then max-plus)."""
        out = []
        for v in self.min_vertices + self.max_vertices:
            if not any(np.all(np.abs(v - w) <= eps) for w in out):
                out.append(v)
        return out

    def contains(self, x, eps=1e-9):
        return fw_membership(self, x, eps)

    def sample_points(self, rng, size):
        """Random points of the cell as convex combinations of its min-plus vertices."""
        verts = np.array(self.min_vertices)
        weights = rng.dirichlet(np.ones(len(verts)), size=size)
        return weights @ verts


def solve(V):
    """Fermat-Weber polytrope of the rows of ``V``."""
    net = build_network(V)
    sol = solve_mcf(net)
    kleene = condensed_apsp(residual(net, sol))
    return FWPolytrope(kleene=kleene, opt_value=-sol.cost, dual=sol)


def fw_membership(P, x, eps=1e-9):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != P.d:
        raise DimensionError(f"dimension mismatch: polytrope has d={P.d}, point has {x.shape[-1]}")
    return cell_membership(P.cell, x, eps)


def tropical_vertex_check(P, V, tol=1e-6):
    """List every violated polytrope invariant; an empty list means all hold."""
    V = as_sample(V)
    C = P.kleene
    d = P.d
    problems = []
    if C.shape != (d, d) or V.shape[1] != d:
        return [f"shape mismatch: kleene {C.shape}, sample {V.shape}"]
    if np.any(np.abs(np.diag(C)) > tol):
        problems.append("kleene star has a nonzero diagonal")
    closure = (C[:, :, None] + C[None, :, :]).min(axis=1)
    if np.any(closure < C - tol):
        j, k = np.argwhere(closure < C - tol)[0]
        problems.append(f"kleene star is not min-plus idempotent at ({j}, {k})")
    for kind, verts in (("min", P.min_vertices), ("max", P.max_vertices)):
        for idx, v in enumerate(verts):
            if not fw_membership(P, v, tol):
                problems.append(f"{kind}-plus vertex {idx} lies outside the cell")
            val = fw_objective(V, v)
            if abs(val - P.opt_value) > tol * max(1.0, abs(P.opt_value)):
                problems.append(f"{kind}-plus vertex {idx} has objective {val}, expected {P.opt_value}")
    if P.dual is not None:
        net = build_network(V)
        problems += [f"dual: {p}" for p in P.dual.check(net)]
        if abs(P.dual.cost + P.opt_value) > tol * max(1.0, abs(P.opt_value)):
            problems.append("opt_value is not the negated dual cost")
        try:
            recomputed = condensed_apsp(residual(net, P.dual))
        except NegativeCycle:
            problems.append("stored dual is not optimal (residual has a negative cycle)")
        else:
            if np.any(np.abs(recomputed - C) > tol):
                problems.append("kleene star differs from the residual shortest paths of the dual")
    return problems
