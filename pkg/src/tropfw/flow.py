"""Transshipment network of the Fermat-Weber dual and its flow algorithms.

Node numbering: ``x_j -> j``, ``y_i -> d + i``, ``z_i -> d + n + i``.
Every ``y_i`` supplies one unit, every ``z_i`` demands one unit. Arc
``y_i -> x_j`` costs ``v_ij`` (flow variable ``pi[i, j]``) and arc
``x_j -> z_i`` costs ``-v_ij`` (flow variable ``phi[j, i]``).
"""

import heapq
from collections import deque
from dataclasses import dataclass

import numpy as np

from .covector import EPS_TIE, type_data
from .errors import DimensionError, InternalError, NegativeCycle
from .tropical import as_sample


@dataclass(frozen=True)
class FlowNetwork:
    V: np.ndarray

    @property
    def n(self):
        return self.V.shape[0]

    @property
    def d(self):
        return self.V.shape[1]

    @property
    def num_nodes(self):
        return self.d + 2 * self.n

    def x_node(self, j):
        return j

    def y_node(self, i):
        return self.d + i

    def z_node(self, i):
        return self.d + self.n + i

    @property
    def supplies(self):
        return np.concatenate([np.zeros(self.d), np.ones(self.n), -np.ones(self.n)])

    @property
    def arcs(self):
        """List of ``(tail, head, cost)``; pi arcs first, row-major in (i, j)."""
        n, d, V = self.n, self.d, self.V
        out = [(self.y_node(i), self.x_node(j), V[i, j]) for i in range(n) for j in range(d)]
        out += [(self.x_node(j), self.z_node(i), -V[i, j]) for i in range(n) for j in range(d)]
        return out


@dataclass(frozen=True)
class FlowSolution:
    pi: np.ndarray   # n x d, 0/1
    phi: np.ndarray  # d x n, 0/1
    cost: float

    @property
    def covector_max(self):
        """For each coordinate j, the rows routed into x_j (tau of pi)."""
        return [sorted(np.flatnonzero(col).tolist()) for col in self.pi.T]

    @property
    def covector_min(self):
        """For each coordinate j, the rows served from x_j (tau-bar of phi)."""
        return [sorted(np.flatnonzero(row).tolist()) for row in self.phi]

    def check(self, net=None):
        """Return a list of violated flow constraints (empty if feasible)."""
        problems = []
        if not np.all((self.pi == 0) | (self.pi == 1)) or not np.all((self.phi == 0) | (self.phi == 1)):
            problems.append("flow is not binary")
        if not np.all(self.pi.sum(axis=1) == 1):
            problems.append("some y_i does not send exactly one unit")
        if not np.all(self.phi.sum(axis=0) == 1):
            problems.append("some z_i does not receive exactly one unit")
        if not np.array_equal(self.pi.sum(axis=0), self.phi.sum(axis=1)):
            problems.append("flow is unbalanced at an x node")
        if net is not None:
            cost = float((net.V * self.pi).sum() - (net.V.T * self.phi).sum())
            if abs(cost - self.cost) > 1e-9 * max(1.0, abs(cost)):
                problems.append(f"stored cost {self.cost} differs from recomputed {cost}")
        return problems


def build_network(V):
    return FlowNetwork(as_sample(V))


def _initial_potentials(net, pi_mask, phi_mask):
    # The network is layered y -> x -> z, so one pass in that order is an
    # exact Bellman-Ford. Unreachable nodes never get relaxed; park them at 0.
    V = net.V
    p = np.zeros(net.num_nodes)
    px = np.where(pi_mask, V, np.inf).min(axis=0)
    pz = np.where(phi_mask.T, px[None, :] - V, np.inf).min(axis=1)
    p[: net.d] = np.where(np.isfinite(px), px, 0.0)
    p[net.d + net.n:] = np.where(np.isfinite(pz), pz, 0.0)
    return p, (pz.min() if np.isfinite(pz).any() else 0.0)


def solve_mcf(net, pi_mask=None, phi_mask=None):
    """Min-cost unit flow by successive shortest paths with node potentials.

    A super source ``S`` feeds every y-node and every z-node drains into a
    super sink ``T``; each of the ``n`` augmentations is a Dijkstra search
    from ``S`` to ``T`` on reduced costs. Returns a binary optimal flow.

    ``pi_mask`` (n x d) and ``phi_mask`` (d x n) restrict the usable arcs;
    InternalError is raised if the restricted network has no feasible flow.
    """
    n, d, V = net.n, net.d, net.V
    N = net.num_nodes
    S, T = N, N + 1
    pi_ok = np.ones((n, d), dtype=bool) if pi_mask is None else np.asarray(pi_mask, dtype=bool)
    phi_ok = np.ones((d, n), dtype=bool) if phi_mask is None else np.asarray(phi_mask, dtype=bool)
    pi = np.zeros((n, d), dtype=np.int64)
    phi = np.zeros((d, n), dtype=np.int64)
    y_used = np.zeros(n, dtype=bool)
    z_used = np.zeros(n, dtype=bool)
    pot = np.zeros(N + 2)
    pot[:N], pot[T] = _initial_potentials(net, pi_ok, phi_ok)

    def neighbours(u):
        # residual arcs out of u as (head, cost)
        if u < d:
            for i in range(n):
                if pi[i, u]:
                    yield d + i, -V[i, u]
                if phi_ok[u, i] and not phi[u, i]:
                    yield d + n + i, -V[i, u]
        elif u < d + n:
            i = u - d
            for j in range(d):
                if pi_ok[i, j] and not pi[i, j]:
                    yield j, V[i, j]
            if y_used[i]:
                yield S, 0.0
        elif u < N:
            i = u - d - n
            for j in range(d):
                if phi[j, i]:
                    yield j, V[i, j]
            if not z_used[i]:
                yield T, 0.0
        elif u == S:
            for i in np.flatnonzero(~y_used):
                yield d + i, 0.0
        else:
            for i in np.flatnonzero(z_used):
                yield d + n + i, 0.0

    for _ in range(n):
        dist = np.full(N + 2, np.inf)
        prev = np.full(N + 2, -1, dtype=np.int64)
        dist[S] = 0.0
        heap = [(0.0, S)]
        done = np.zeros(N + 2, dtype=bool)
        while heap:
            du, u = heapq.heappop(heap)
            if done[u]:
                continue
            done[u] = True
            if u == T:
                break
            for w, c in neighbours(u):
                # clamp round-off; exact reduced costs are nonnegative
                rc = max(c + pot[u] - pot[w], 0.0)
                if du + rc < dist[w]:
                    dist[w] = du + rc
                    prev[w] = u
                    heapq.heappush(heap, (dist[w], w))
        if not done[T]:
            raise InternalError("no augmenting path; supplies cannot be balanced")
        pot += np.minimum(dist, dist[T])
        w = T
        while w != S:
            u = prev[w]
            if u == S:
                y_used[w - d] = True
            elif w == T:
                z_used[u - d - n] = True
            elif u >= d + n:          # z_i -> x_j : cancel phi[j, i]
                phi[w, u - d - n] = 0
            elif u >= d:              # y_i -> x_j : push pi[i, j]
                pi[u - d, w] = 1
            elif w < d + n:           # x_j -> y_i : cancel pi[i, j]
                pi[w - d, u] = 0
            else:                     # x_j -> z_i : push phi[j, i]
                phi[u, w - d - n] = 1
            w = u

    cost = float((V * pi).sum() - (V.T * phi).sum())
    return FlowSolution(pi, phi, cost)


@dataclass(frozen=True)
class ResidualGraph:
    """Residual network as parallel arrays ``tail, head, cost``."""

    num_nodes: int
    tail: np.ndarray
    head: np.ndarray
    cost: np.ndarray
    d: int
    n: int

    @property
    def arcs(self):
        return list(zip(self.tail.tolist(), self.head.tolist(), self.cost.tolist()))

    def bellman_ford(self, source, tol=1e-9):
        """Shortest distances from ``source``; raises NegativeCycle if one is reachable."""
        dist = np.full(self.num_nodes, np.inf)
        dist[source] = 0.0
        for _ in range(self.num_nodes - 1):
            cand = dist[self.tail] + self.cost
            new = dist.copy()
            np.minimum.at(new, self.head, cand)
            if np.array_equal(new, dist):
                return dist
            dist = new
        cand = dist[self.tail] + self.cost
        if np.any(cand < dist[self.head] - tol):
            raise NegativeCycle("negative cycle reachable from source")
        return dist


def residual(net, sol):
    """Reverse (and negate) every arc carrying flow; keep the others forward."""
    n, d, V = net.n, net.d, net.V
    tails, heads, costs = [], [], []
    for i in range(n):
        for j in range(d):
            if sol.pi[i, j]:
                tails.append(j); heads.append(d + i); costs.append(-V[i, j])
            else:
                tails.append(d + i); heads.append(j); costs.append(V[i, j])
    for i in range(n):
        for j in range(d):
            if sol.phi[j, i]:
                tails.append(d + n + i); heads.append(j); costs.append(V[i, j])
            else:
                tails.append(j); heads.append(d + n + i); costs.append(-V[i, j])
    return ResidualGraph(
        d + 2 * n, np.array(tails), np.array(heads), np.array(costs, dtype=float), d, n
    )


def condensed_apsp(res, tol=1e-9):
    """Shortest-path weights between x-nodes of a residual graph (the Kleene star).

    Every x -> x route passes through exactly one y- or z-node, so the
    graph is first condensed to ``d`` nodes and then closed with
    Floyd-Warshall.
    """
    d, n = res.d, res.n
    into = {}    # intermediate node -> list of (x_j, cost x_j -> node)
    out = {}     # intermediate node -> list of (x_k, cost node -> x_k)
    for t, h, c in zip(res.tail.tolist(), res.head.tolist(), res.cost.tolist()):
        if t < d and h >= d:
            into.setdefault(h, []).append((t, c))
        elif t >= d and h < d:
            out.setdefault(t, []).append((h, c))
        else:
            raise ValueError("residual graph is not bipartite between x and y/z nodes")
    C = np.full((d, d), np.inf)
    np.fill_diagonal(C, 0.0)
    for mid, ins in into.items():
        for k, c2 in out.get(mid, ()):
            for j, c1 in ins:
                if j != k and c1 + c2 < C[j, k]:
                    C[j, k] = c1 + c2
    C = floyd_warshall(C)
    scale = max(1.0, float(np.abs(C[np.isfinite(C)]).max(initial=0.0)))
    if np.any(np.diag(C) < -tol * scale):
        raise NegativeCycle("residual graph has a negative cycle; the flow is not optimal")
    np.fill_diagonal(C, 0.0)
    return C


def floyd_warshall(C):
    """Min-plus closure of a square weight matrix (``inf`` = no arc)."""
    C = np.array(C, dtype=float)
    for k in range(C.shape[0]):
        np.minimum(C, C[:, k, None] + C[None, k, :], out=C)
    return C


class _Dinic:
    def __init__(self, num_nodes):
        self.graph = [[] for _ in range(num_nodes)]
        # arc records: [head, capacity, index of reverse arc]

    def add_arc(self, u, v, cap):
        self.graph[u].append([v, cap, len(self.graph[v])])
        self.graph[v].append([u, 0, len(self.graph[u]) - 1])
        return u, len(self.graph[u]) - 1

    def _bfs(self, s, t):
        level = [-1] * len(self.graph)
        level[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for v, cap, _ in self.graph[u]:
                if cap > 0 and level[v] < 0:
                    level[v] = level[u] + 1
                    queue.append(v)
        self.level = level
        return level[t] >= 0

    def _dfs(self, u, t, f):
        if u == t:
            return f
        while self.it[u] < len(self.graph[u]):
            arc = self.graph[u][self.it[u]]
            v, cap, rev = arc
            if cap > 0 and self.level[v] == self.level[u] + 1:
                pushed = self._dfs(v, t, min(f, cap))
                if pushed:
                    arc[1] -= pushed
                    self.graph[v][rev][1] += pushed
                    return pushed
            self.it[u] += 1
        return 0

    def max_flow(self, s, t):
        flow = 0
        while self._bfs(s, t):
            self.it = [0] * len(self.graph)
            while True:
                f = self._dfs(s, t, 1 << 30)
                if not f:
                    break
                flow += f
        return flow

    def reachable(self, s):
        seen = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for v, cap, _ in self.graph[u]:
                if cap > 0 and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return seen


def gamma_max_flow(td, return_flow=False):
    """Max flow on the type subgraph Gamma(x) described by ``td``.

    Returns ``(value, cut)`` where ``cut`` is the set of x-node indices on
    the source side of a minimum cut (empty when the flow is perfect).
    With ``return_flow`` the routed flow is appended as a
    :class:`FlowSolution` (cost left as ``nan``) when it is perfect, else
    ``None``.
    """
    n, d = td.n, td.d
    s, t = d + 2 * n, d + 2 * n + 1
    g = _Dinic(d + 2 * n + 2)
    for i in range(n):
        g.add_arc(s, d + i, 1)
        g.add_arc(d + n + i, t, 1)
    pi_arcs = [(i, j, g.add_arc(d + i, j, 1)) for i, j in zip(*np.nonzero(td.fine_max))]
    phi_arcs = [(j, i, g.add_arc(j, d + n + i, 1)) for j, i in zip(*np.nonzero(td.fine_min))]
    value = g.max_flow(s, t)
    cut = frozenset(u for u in g.reachable(s) if u < d) if value < n else frozenset()
    if not return_flow:
        return value, cut
    sol = None
    if value == n:
        pi = np.zeros((n, d), dtype=np.int64)
        phi = np.zeros((d, n), dtype=np.int64)
        for i, j, (u, k) in pi_arcs:
            pi[i, j] = 1 - g.graph[u][k][1]
        for j, i, (u, k) in phi_arcs:
            phi[j, i] = 1 - g.graph[u][k][1]
        sol = FlowSolution(pi, phi, float("nan"))
    return value, cut, sol


def max_flow_oracle(V, x, eps_tie=EPS_TIE):
    """Certify Fermat-Weber optimality of ``x``: returns ``(M, M == n)``."""
    V = np.asarray(V, dtype=float)
    x = np.asarray(x, dtype=float)
    if V.shape[1] != x.shape[-1]:
        raise DimensionError(f"dimension mismatch: sample has d={V.shape[1]}, point has {x.shape[-1]}")
    value, _ = gamma_max_flow(type_data(V, x, eps_tie))
    return value, value == V.shape[0]
