"""Tropical types, fine-type matrices and bi-tropical covector cells.

For a sample ``V`` and a point ``x`` the max-plus type of row ``i`` is the
argmax set of ``x - v_i`` and the min-plus type is its argmin set. Both
are computed with an absolute tie slack ``eps_tie``. All indices are
0-based.
"""

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError

EPS_TIE = 1e-9


@dataclass(frozen=True)
class TypeData:
    """Fine and coarse types of a point with respect to a sample.

    ``fine_max`` is ``n x d`` (row ``i`` marks the max type of ``v_i``);
    ``fine_min`` is ``d x n`` (column ``i`` marks the min type of ``v_i``).
    """

    fine_max: np.ndarray
    fine_min: np.ndarray

    @property
    def n(self):
        return self.fine_max.shape[0]

    @property
    def d(self):
        return self.fine_max.shape[1]

    @property
    def max_type(self):
        return [frozenset(np.flatnonzero(row).tolist()) for row in self.fine_max]

    @property
    def min_type(self):
        return [frozenset(np.flatnonzero(col).tolist()) for col in self.fine_min.T]

    @property
    def coarse_max(self):
        return self.fine_max.sum(axis=0)

    @property
    def coarse_min(self):
        return self.fine_min.sum(axis=1)

    @property
    def dual_coarse_max(self):
        return self.fine_max.sum(axis=1)

    @property
    def dual_coarse_min(self):
        return self.fine_min.sum(axis=0)

    @property
    def covector_max(self):
        """The max covector: for each coordinate j, the rows whose type contains j."""
        return [frozenset(np.flatnonzero(col).tolist()) for col in self.fine_max.T]

    @property
    def covector_min(self):
        return [frozenset(np.flatnonzero(row).tolist()) for row in self.fine_min]

    @property
    def has_ties(self):
        return bool(self.dual_coarse_max.max() > 1 or self.dual_coarse_min.max() > 1)


def _diff(V, x):
    V = np.asarray(V, dtype=float)
    x = np.asarray(x, dtype=float)
    if V.shape[1] != x.shape[-1]:
        raise DimensionError(f"dimension mismatch: sample has d={V.shape[1]}, point has {x.shape[-1]}")
    return x - V


def type_data(V, x, eps_tie=EPS_TIE):
    diff = _diff(V, x)
    fine_max = diff >= diff.max(axis=1, keepdims=True) - eps_tie
    fine_min = diff <= diff.min(axis=1, keepdims=True) + eps_tie
    return TypeData(fine_max.astype(np.int64), fine_min.T.astype(np.int64))


def half_sector(x, u, eps_tie=EPS_TIE):
    """Index sets ``(J, K)`` of the closed half-sectors with apex ``u`` containing ``x``.

    ``J`` is the argmax set of ``x - u`` and ``K`` its argmin set.
    """
    x = np.asarray(x, dtype=float)
    u = np.asarray(u, dtype=float)
    if x.shape != u.shape:
        raise DimensionError(f"dimension mismatch: {x.shape} vs {u.shape}")
    diff = x - u
    J = frozenset(np.flatnonzero(diff >= diff.max() - eps_tie).tolist())
    K = frozenset(np.flatnonzero(diff <= diff.min() + eps_tie).tolist())
    return J, K


@dataclass(frozen=True)
class CellDescription:
    """Polyhedral cell ``{x : x_j - x_k <= bounds[j, k]}``.

    ``bounds`` is a ``d x d`` matrix holding the tightest bound per ordered
    pair, ``+inf`` where there is none; the diagonal is ignored.
    """

    bounds: np.ndarray

    @property
    def d(self):
        return self.bounds.shape[0]

    @property
    def inequalities(self):
        d = self.d
        return [
            (j, k, float(self.bounds[j, k]))
            for j in range(d)
            for k in range(d)
            if j != k and np.isfinite(self.bounds[j, k])
        ]

    @classmethod
    def from_inequalities(cls, d, inequalities):
        bounds = np.full((d, d), np.inf)
        for j, k, b in inequalities:
            if j == k:
                raise ValueError("inequality x_j - x_j is meaningless")
            bounds[j, k] = min(bounds[j, k], b)
        return cls(bounds)

    def contains(self, x, eps=EPS_TIE):
        return cell_membership(self, x, eps)


def cell_inequalities(V, td):
    """Inequality description of the bi-tropical cell carrying the types ``td``.

    A max-type arc ``(i, j)`` contributes ``x_k - x_j <= v_ik - v_ij`` for
    every ``k``; a min-type arc contributes ``x_j - x_k <= v_ij - v_ik``.
    """
    V = np.asarray(V, dtype=float)
    n, d = V.shape
    bounds = np.full((d, d), np.inf)
    # pairwise[i, a, b] = v_ia - v_ib
    pairwise = V[:, :, None] - V[:, None, :]
    for i, j in zip(*np.nonzero(td.fine_max)):
        # bounds[k, j] <= v_ik - v_ij for all k
        bounds[:, j] = np.minimum(bounds[:, j], pairwise[i, :, j])
    for j, i in zip(*np.nonzero(td.fine_min)):
        bounds[j, :] = np.minimum(bounds[j, :], pairwise[i, j, :])
    np.fill_diagonal(bounds, np.inf)
    return CellDescription(bounds)


def cell_membership(cd, x, eps=EPS_TIE):
    """True iff ``x`` satisfies every inequality of ``cd`` within ``eps``.

    Works on a single point or a stack of points with shape ``(..., d)``.
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != cd.d:
        raise DimensionError(f"dimension mismatch: cell has d={cd.d}, point has {x.shape[-1]}")
    gaps = x[..., :, None] - x[..., None, :]
    off = ~np.eye(cd.d, dtype=bool)
    ok = np.all((gaps <= cd.bounds + eps) | ~off, axis=(-2, -1))
    return bool(ok) if ok.ndim == 0 else ok


def arc_counts(td):
    """Number of arcs in the max and min covector graphs."""
    return int(td.fine_max.sum()), int(td.fine_min.sum())


def general_position_arc_check(td, n, d):
    """Both covector graphs have fewer than ``d + n`` arcs."""
    max_arcs, min_arcs = arc_counts(td)
    return max_arcs < d + n and min_arcs < d + n
