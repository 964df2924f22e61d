"""Arithmetic on the tropical projective torus R^d / R1.

Points are plain 1-D float arrays kept in normal form, i.e. with the
first coordinate equal to zero. A sample is an ``(n, d)`` array whose
rows are normalized points.
"""

import numpy as np

from .errors import DimensionError, InvalidInput

EPS_EQ = 1e-9


def normalize(x):
    """Return the representative of ``x`` whose first coordinate is 0.

    >>> normalize([5, 8, 9])
    array([0., 3., 4.])
    """
    x = np.array(x, dtype=float)
    if x.ndim != 1 or x.shape[0] < 2:
        raise DimensionError(f"a point needs at least 2 coordinates, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidInput("point has non-finite entries")
    return x - x[0]


def as_sample(V):
    """Validate a sample matrix and normalize each of its rows."""
    V = np.array(V, dtype=float)
    if V.ndim == 1:
        V = V[None, :]
    if V.ndim != 2 or V.shape[0] < 1:
        raise DimensionError(f"sample must be a non-empty 2-D array, got shape {V.shape}")
    if V.shape[1] < 2:
        raise DimensionError("sample points need at least 2 coordinates")
    if not np.all(np.isfinite(V)):
        raise InvalidInput("sample has non-finite entries")
    return V - V[:, :1]


def _check_same_dim(u, v):
    if u.shape[-1] != v.shape[-1]:
        raise DimensionError(f"dimension mismatch: {u.shape[-1]} vs {v.shape[-1]}")


def trop_distance(u, v):
    """Symmetric tropical distance ``max(u - v) - min(u - v)``.

    Broadcasts over leading axes, so ``trop_distance(X, v)`` with ``X`` of
    shape ``(m, d)`` returns ``m`` distances.
    """
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_same_dim(u, v)
    diff = u - v
    return diff.max(axis=-1) - diff.min(axis=-1)


def fw_objective(V, x):
    """Sum of tropical distances from ``x`` to every row of ``V``.

    ``x`` may also be a stack of points with shape ``(..., d)``.
    """
    V = np.asarray(V, dtype=float)
    x = np.asarray(x, dtype=float)
    _check_same_dim(V, x)
    diff = x[..., None, :] - V
    return (diff.max(axis=-1) - diff.min(axis=-1)).sum(axis=-1)


def points_equal(u, v, eps=EPS_EQ):
    """Equality of projective classes, componentwise after normalization."""
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    _check_same_dim(u, v)
    return bool(np.all(np.abs((u - u[0]) - (v - v[0])) <= eps))


def trop_ball_generators(u, r):
    """The ``d`` tropical vertices ``normalize(u + r e_j)`` of the ball B_r(u).

    Each generator sits at tropical distance exactly ``r`` from ``u``.
    """
    u = normalize(u)
    if not np.isfinite(r) or r <= 0:
        raise InvalidInput(f"radius must be positive, got {r}")
    gens = u + r * np.eye(u.shape[0])
    return [g - g[0] for g in gens]
