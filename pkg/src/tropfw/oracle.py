"""Brute-force grid oracle for small dimensions (d <= 4).

The first coordinate is pinned to 0 and the remaining ``d - 1``
coordinates range over a regular lattice. Each ``f_i`` is 1-Lipschitz
for the tropical metric and every point lies within tropical distance
``h`` of the lattice, so the lattice minimum overshoots the true optimum
by at most ``n * h``.
"""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInput
from .tropical import as_sample

MAX_POINTS = 10**7


@dataclass(frozen=True)
class GridSpec:
    box: tuple   # ((lo, hi), ...) for coordinates 2..d
    h: float

    def __post_init__(self):
        if not self.h > 0:
            raise InvalidInput("grid spacing must be positive")
        for lo, hi in self.box:
            if not lo <= hi:
                raise InvalidInput(f"empty interval [{lo}, {hi}]")

    @property
    def axes(self):
        return [lo + self.h * np.arange(int(np.floor((hi - lo) / self.h + 1e-9)) + 1)
                for lo, hi in self.box]

    @property
    def num_points(self):
        return int(np.prod([len(a) for a in self.axes]))


def default_grid(V, h=None):
    """Bounding box of the normalized sample padded by one cell.

    Default spacing is the box diameter over 64, coarsened if needed so
    that the lattice has at most ``MAX_POINTS`` points.
    """
    V = as_sample(V)
    lo = V[:, 1:].min(axis=0)
    hi = V[:, 1:].max(axis=0)
    if h is None:
        h = max(float((hi - lo).max()) / 64, 1e-3)
        while np.prod(np.floor((hi - lo) / h + 2) + 1) > MAX_POINTS:
            h *= 1.25
    return GridSpec(tuple((float(a - h), float(b + h)) for a, b in zip(lo, hi)), float(h))


def _broadcast_axes(axes):
    m = len(axes)
    return [a.reshape((-1,) + (1,) * (m - 1 - k)) if k == 0 else
            a.reshape((1,) * k + (-1,) + (1,) * (m - 1 - k)) for k, a in enumerate(axes)]


def _coords(axes, first_slice=None):
    axes = list(axes)
    if first_slice is not None:
        axes[0] = axes[0][first_slice]
    return [np.zeros((1,) * len(axes))] + _broadcast_axes(axes)


def _objective_on_grid(V, coords):
    total = 0.0
    for v in V:
        top = coords[0] - v[0]
        bot = top
        for c, vj in zip(coords[1:], v[1:]):
            top = np.maximum(top, c - vj)
            bot = np.minimum(bot, c - vj)
        total = total + (top - bot)
    return total


def _membership_on_grid(bounds, coords, eps):
    d = len(coords)
    ok = True
    for j in range(d):
        for k in range(d):
            if j != k and np.isfinite(bounds[j, k]):
                ok = ok & (coords[j] - coords[k] <= bounds[j, k] + eps)
    return ok


def _chunks(spec):
    axes = spec.axes
    per_row = int(np.prod([len(a) for a in axes[1:]])) if len(axes) > 1 else 1
    step = max(1, 2**21 // per_row)
    for start in range(0, len(axes[0]), step):
        sl = slice(start, start + step)
        yield sl, _coords(axes, sl)


def grid_minimize(V, spec):
    """Minimum of the objective over the lattice, with its lexicographically first argmin."""
    V = as_sample(V)
    if len(spec.box) != V.shape[1] - 1:
        raise InvalidInput(f"grid has {len(spec.box)} axes, sample needs {V.shape[1] - 1}")
    if spec.num_points == 0:
        raise InvalidInput("grid is empty")
    if spec.num_points > MAX_POINTS:
        raise InvalidInput(f"grid has {spec.num_points} points, limit is {MAX_POINTS}")
    axes = spec.axes
    best, arg = np.inf, None
    for sl, coords in _chunks(spec):
        vals = np.broadcast_to(_objective_on_grid(V, coords),
                               (len(axes[0][sl]),) + tuple(len(a) for a in axes[1:]))
        idx = np.unravel_index(np.argmin(vals), vals.shape)
        if vals[idx] < best:
            best = float(vals[idx])
            arg = np.array([0.0] + [axes[0][sl][idx[0]]] + [a[i] for a, i in zip(axes[1:], idx[1:])])
    return best, arg


def verify_polytrope(V, P, spec, tol=1e-9):
    """Cross-check an exact polytrope against the lattice; returns violations.

    (a) lattice minimum lies in ``[opt, opt + n h]``;
    (b) lattice points attaining ``opt`` belong to the cell;
    (c) lattice points of the cell have objective ``opt`` (so the cell is
        not larger than the optimal set).
    """
    V = as_sample(V)
    n = V.shape[0]
    opt = P.opt_value
    atol = tol * max(1.0, abs(opt))
    bounds = P.cell.bounds
    problems = []
    value, _ = grid_minimize(V, spec)
    if not (opt - atol <= value <= opt + n * spec.h + atol):
        problems.append(f"(a) grid minimum {value} outside [{opt}, {opt + n * spec.h}]")
    optimal_outside = 0
    member_suboptimal = 0
    for _, coords in _chunks(spec):
        vals = _objective_on_grid(V, coords)
        inside = _membership_on_grid(bounds, coords, 1e-9)
        vals, inside = np.broadcast_arrays(vals, inside)
        optimal_outside += int(np.count_nonzero((vals <= opt + atol) & ~inside))
        member_suboptimal += int(np.count_nonzero(inside & (vals > opt + atol)))
    if optimal_outside:
        problems.append(f"(b) {optimal_outside} grid points attain the optimum outside the cell")
    if member_suboptimal:
        problems.append(f"(c) {member_suboptimal} grid points of the cell are suboptimal")
    return problems
