"""Gradient descent on the tropical Fermat-Weber objective.

Inside a full-dimensional cell of the bi-tropical covector decomposition
the objective is affine with integer gradient ``#tau - #tau_bar`` (max
minus min coarse types). On cell boundaries the descent uses the
normalized fine-type subgradient and certifies optimality with the
max-flow oracle on the type subgraph.
"""

import logging
from dataclasses import dataclass, field

import numpy as np

from .covector import EPS_TIE, type_data
from .errors import InternalError, InvalidInput, NegativeCycle, TiePresent, UnboundedDirection
from .flow import build_network, condensed_apsp, gamma_max_flow, residual, solve_mcf
from .tropical import as_sample, fw_objective, normalize

log = logging.getLogger(__name__)

SCHEDULES = ("diminishing", "constant", "exact-line-search")


def gradient(V, x, eps_tie=EPS_TIE):
    """Integer gradient ``#tau(x) - #tau_bar(x)``; raises TiePresent on a boundary."""
    td = type_data(V, x, eps_tie)
    if td.has_ties:
        raise TiePresent("gradient is undefined: x lies on a cell boundary")
    return td.coarse_max - td.coarse_min


def sample_point_gradient(V, x, eps_tie=EPS_TIE):
    """Gradient at a sample point computed on the sample with that point removed.

    If it vanishes, zero lies in the subdifferential at ``x``.
    """
    V = as_sample(V)
    x = normalize(x)
    keep = np.abs(V - x).max(axis=1) > eps_tie
    if keep.all():
        raise InvalidInput("x is not a sample point")
    if not keep.any():
        return np.zeros(V.shape[1], dtype=np.int64)
    return gradient(V[keep], x, eps_tie)


def subgradient(V, x, eps_tie=EPS_TIE):
    """Normalized fine-type subgradient.

    Column sums of the row-normalized max fine type minus row sums of the
    column-normalized min fine type. Equals :func:`gradient` when there are
    no ties. At a sample point the point's own row contributes nothing, so
    this reduces to the gradient of the remaining sample.
    """
    td = type_data(V, x, eps_tie)
    T = td.fine_max / td.fine_max.sum(axis=1, keepdims=True)
    Tbar = td.fine_min / td.fine_min.sum(axis=0, keepdims=True)
    return T.sum(axis=0) - Tbar.sum(axis=1)


def directional_derivative(V, x, u, eps_tie=EPS_TIE):
    """One-sided derivative of the objective at ``x`` along ``u``."""
    td = type_data(V, x, eps_tie)
    u = np.asarray(u, dtype=float)
    up = np.where(td.fine_max == 1, u, -np.inf).max(axis=1)
    down = np.where(td.fine_min.T == 1, u, np.inf).min(axis=1)
    return float((up - down).sum())


def line_search_step(V, x, direction, rtol=1e-12):
    """Smallest minimizer ``t >= 0`` of ``t -> f(x - t * direction)``.

    The restriction is convex piecewise linear; its breakpoints are where
    two coordinates of some ``x - t * direction - v_i`` cross, so it is
    enough to evaluate the objective at those.
    """
    V = np.asarray(V, dtype=float)
    x = np.asarray(x, dtype=float)
    b = np.asarray(direction, dtype=float)
    if not np.any(b):
        raise InvalidInput("direction must be nonzero")
    a = x - V                                   # (n, d) intercepts
    da = a[:, :, None] - a[:, None, :]
    db = (b[:, None] - b[None, :])[None, :, :]
    with np.errstate(divide="ignore", invalid="ignore"):
        cross = np.where(db != 0, da / db, np.nan)
    ts = np.unique(cross[np.isfinite(cross) & (cross > 0)])
    ts = np.concatenate([[0.0], ts])
    vals = fw_objective(V, x - ts[:, None] * b)
    tol = rtol * max(1.0, float(np.abs(vals).max()))
    if fw_objective(V, x - (ts[-1] + 1.0) * b) < vals[-1] - tol:
        raise UnboundedDirection("objective decreases without bound along the ray")
    best = vals.min()
    return float(ts[np.flatnonzero(vals <= best + tol)[0]])


@dataclass(frozen=True)
class DescentConfig:
    step0: float = None     # None: first move of tropical length f(x0) / (2n)
    schedule: str = "diminishing"
    max_iters: int = 1000
    eps_tie: float = EPS_TIE
    eps_obj: float = 1e-6
    polish: bool = True     # certified jump onto FW(V) from near-ties (fixed-step schedules)
    polish_scale: float = 0.05  # polish only after moves shorter than this fraction of f / n

    def __post_init__(self):
        if self.schedule not in SCHEDULES:
            raise InvalidInput(f"unknown schedule {self.schedule!r}; choose from {SCHEDULES}")
        if self.step0 is not None and not self.step0 > 0:
            raise InvalidInput("step0 must be positive")
        if self.max_iters < 1:
            raise InvalidInput("max_iters must be at least 1")
        if self.eps_tie < 0 or self.eps_obj <= 0:
            raise InvalidInput("tolerances must be positive")
        if not self.polish_scale > 0:
            raise InvalidInput("polish_scale must be positive")


@dataclass(frozen=True)
class Iterate:
    x: np.ndarray
    f: float
    direction: np.ndarray
    used_oracle: bool


@dataclass
class DescentTrace:
    iterates: list = field(default_factory=list)
    terminal: np.ndarray = None
    terminal_value: float = None
    status: str = "max_iters"

    @property
    def oracle_calls(self):
        return sum(it.used_oracle for it in self.iterates)


def polish_point(V, x, eta):
    """Try to turn a near-optimal ``x`` into an exactly optimal point.

    Solves the min-cost flow restricted to the arcs of the type subgraph
    at tie slack ``eta``. Such a flow picks one half-sector per sample
    point; if it is optimal for the full network (no negative cycle in its
    residual graph) the half-sectors meet in FW(V), and ``x`` is projected
    there with the min-plus map ``p_k = min_j (x_j + C_jk)``. Returns
    ``None`` when that fails.
    """
    td = type_data(V, x, eta)
    if not td.has_ties:
        return None
    net = build_network(V)
    try:
        sol = solve_mcf(net, td.fine_max, td.fine_min)
        C = condensed_apsp(residual(net, sol))
    except (InternalError, NegativeCycle):
        return None
    p = (x[:, None] + C).min(axis=0)
    return p - p[0]


def descend(V, x0, cfg=None):
    """Tropical Fermat-Weber gradient descent from ``x0``.

    Per iteration: if ``x`` has a tie, run the max-flow oracle and stop if
    it certifies optimality, else step along the normalized subgradient;
    without ties, step along the gradient (stop if it is zero). Under the
    exact line search a subgradient that fails to descend is replaced by
    the direction ``-1_S`` read off the oracle's minimum cut ``S``. Under
    fixed step schedules, with ``cfg.polish``, an iterate that failed to
    improve has its near-ties at the scale of the last step handed to
    :func:`polish_point`, provided that step was short (at most
    ``cfg.polish_scale`` times the mean distance ``f / n``). A polished
    point is accepted only if the oracle then certifies it at ``eps_tie``.

    With ``step0=None`` the first move has tropical length ``f(x0) / (2n)``.
    """
    cfg = cfg or DescentConfig()
    V = as_sample(V)
    n = V.shape[0]
    x = normalize(x0)
    if x.shape[0] != V.shape[1]:
        raise InvalidInput(f"x0 has dimension {x.shape[0]}, sample has {V.shape[1]}")
    step0 = cfg.step0
    trace = DescentTrace()
    best_x, best_f = x, np.inf
    last_move = 0.0

    for k in range(cfg.max_iters):
        f = float(fw_objective(V, x))
        stalled = f >= best_f
        if f < best_f:
            best_x, best_f = x, f
        td = type_data(V, x, cfg.eps_tie)
        used_oracle = td.has_ties
        cut = frozenset()
        if used_oracle:
            flow, cut = gamma_max_flow(td)
            if flow == n:
                trace.iterates.append(Iterate(x, f, np.zeros_like(x), True))
                trace.terminal, trace.terminal_value, trace.status = x, f, "converged"
                log.debug("iteration %d: oracle certifies f=%.12g", k, f)
                return trace
            direction = subgradient(V, x, cfg.eps_tie)
        elif (cfg.polish and stalled and cfg.schedule != "exact-line-search"
              and cfg.eps_tie < last_move <= cfg.polish_scale * f / n):
            # the step overshot a kink: look for a certificate among near-ties
            p = polish_point(V, x, last_move)
            if p is not None and gamma_max_flow(type_data(V, p, cfg.eps_tie))[0] == n:
                fp = float(fw_objective(V, p))
                trace.iterates.append(Iterate(x, f, p - x, True))
                trace.iterates.append(Iterate(p, fp, np.zeros_like(p), True))
                trace.terminal, trace.terminal_value, trace.status = p, fp, "converged"
                log.debug("iteration %d: polished onto FW(V), f=%.12g", k, fp)
                return trace
        if not used_oracle:
            direction = (td.coarse_max - td.coarse_min).astype(float)
            if not np.any(direction):
                # zero gradient inside a maximal cell; certify like any terminal point
                flow, _ = gamma_max_flow(td)
                used_oracle = True
                trace.iterates.append(Iterate(x, f, direction, True))
                if flow == n:
                    trace.terminal, trace.terminal_value, trace.status = x, f, "converged"
                    return trace
                break

        if cfg.schedule == "exact-line-search":
            if cut and directional_derivative(V, x, -direction, cfg.eps_tie) >= 0:
                direction = np.zeros_like(x)
                direction[list(cut)] = 1.0
            t = line_search_step(V, x, direction)
            if t == 0.0 and cut:
                direction = np.zeros_like(x)
                direction[list(cut)] = 1.0
                t = line_search_step(V, x, direction)
        else:
            if step0 is None:
                # mean distance to the sample, spread over the first move
                step0 = (f / (2 * n) or 1.0) / float(direction.max() - direction.min())
            t = step0 / np.sqrt(k + 1) if cfg.schedule == "diminishing" else step0
        trace.iterates.append(Iterate(x, f, direction, used_oracle))
        log.debug("iteration %d: f=%.12g step=%.3g oracle=%s", k, f, t, used_oracle)
        last_move = t * float(direction.max() - direction.min())  # tropical length of the step
        x = normalize(x - t * direction)
    else:
        f = float(fw_objective(V, x))
        if f < best_f:
            best_x, best_f = x, f

    # out of iterations: keep the best point and give the oracle a last look
    flow, _ = gamma_max_flow(type_data(V, best_x, cfg.eps_tie))
    trace.iterates.append(Iterate(best_x, best_f, np.zeros_like(best_x), True))
    trace.terminal, trace.terminal_value = best_x, best_f
    trace.status = "converged" if flow == n else "max_iters"
    return trace
