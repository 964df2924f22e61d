"""Acceptance criteria, one test per criterion (seven invariant suites for the last).

Each test prints a PASS/FAIL line and records it for the terminal summary.
"""

import time

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from tropfw.covector import type_data
from tropfw.descent import DescentConfig, descend, gradient, subgradient
from tropfw.flow import build_network, max_flow_oracle, solve_mcf
from tropfw.oracle import default_grid, grid_minimize, verify_polytrope
from tropfw.solver import solve
from tropfw.tropical import as_sample, fw_objective, trop_distance

from conftest import (
    ACCEPTANCE,
    GOLDEN,
    GOLDEN_KLEENE,
    GOLDEN_MAX_VERTICES,
    GOLDEN_MIN_VERTICES,
    random_instance,
    same_point_set,
)

TRIALS = 10_000


def report(key, ok, detail):
    ACCEPTANCE[key] = (bool(ok), detail)
    print(f"{key}: {'PASS' if ok else 'FAIL'}  {detail}")
    assert ok, detail


@pytest.fixture(scope="module")
def solved_instances():
    """TRIALS random integer instances with their polytropes and flows."""
    rng = np.random.default_rng(7007)
    out = []
    for _ in range(TRIALS):
        V = as_sample(random_instance(rng))
        net = build_network(V)
        sol = solve_mcf(net)
        out.append((V, net, sol, solve(V)))
    return out


def test_c1_golden_instance():
    t0 = time.perf_counter()
    P = solve(GOLDEN)
    elapsed = time.perf_counter() - t0
    checks = {
        "opt=12": P.opt_value == 12.0,
        "kleene": np.array_equal(P.kleene, GOLDEN_KLEENE),
        "min vertices": same_point_set(P.min_vertices, GOLDEN_MIN_VERTICES),
        "max vertices": same_point_set(P.max_vertices, GOLDEN_MAX_VERTICES),
        # tau = (4, 1, 23), tau_bar = (2, 3, 14) in 1-based row labels
        "dual covectors": P.dual.covector_max == [[3], [0], [1, 2]] and P.dual.covector_min == [[1], [2], [0, 3]],
        "runtime<1s": elapsed < 1.0,
    }
    bad = [k for k, v in checks.items() if not v]
    report("C1 golden instance", not bad, f"opt={P.opt_value:g} time={elapsed * 1e3:.1f}ms failed={bad}")


def test_c2_gradient_goldens():
    cases = [
        ((0, 2.5, 2.6), (0, 1, -1)),
        ((0, 3.35, 4.7), (-2, 2, 0)),
        ((0, 5, 3.8), (-2, 3, -1)),
        ((0, 1.8, 3.8), (0, 0, 0)),
    ]
    bad = [x for x, g in cases if gradient(GOLDEN, x).tolist() != list(g)]
    sub = subgradient(GOLDEN, [0, 3, 4]).tolist()
    ok = not bad and sub == [-1.0, 1.5, -0.5]
    report("C2 gradient goldens", ok, f"cell mismatches={bad} subgradient(0,3,4)={sub}")


def test_c3_type_goldens():
    td1 = type_data([[0, 0, 0], [0, 3, 1]], [0, 1, 1])
    ok1 = td1.max_type == [frozenset({1, 2}), frozenset({0, 2})]
    td2 = type_data([[0, 0, 1], [0, 3, 2], [0, 2, 5]], [0, 1.7, 2.3])
    ok2 = td2.fine_max.tolist() == [[0, 1, 0], [0, 0, 1], [1, 0, 0]]
    ok3 = td2.covector_max == [frozenset({2}), frozenset({0}), frozenset({1})]
    report("C3 type goldens", ok1 and ok2 and ok3, f"type(0,1,1)={ok1} fine rows={ok2} covector={ok3}")


def test_c4_oracle_certification():
    acc = max_flow_oracle(GOLDEN, [0, 2, 3.5])
    rej = max_flow_oracle(GOLDEN, [0, 2.5, 2.6])
    report("C4 oracle certification", acc == (4, True) and rej == (3, False), f"accept={acc} reject={rej}")


def test_c5_pipeline_equivalence():
    rng = np.random.default_rng(2024)
    h = 0.25
    t0 = time.perf_counter()
    fails = []
    for k in range(200):
        V = as_sample(random_instance(rng))
        n = V.shape[0]
        P = solve(V)
        verts = np.array(P.vertices())
        if np.abs(fw_objective(V, verts) - (-P.dual.cost)).max() > 1e-6:
            fails.append((k, "a"))
        spec = default_grid(V, h)
        value, _ = grid_minimize(V, spec)
        if not P.opt_value - 1e-9 <= value <= P.opt_value + n * h + 1e-9:
            fails.append((k, "b"))
        if verify_polytrope(V, P, spec):
            fails.append((k, "c"))
    elapsed = time.perf_counter() - t0
    report("C5 pipeline equivalence", not fails and elapsed < 60,
           f"200 instances, failures={fails[:5]} time={elapsed:.1f}s")


def _descent_runs(schedule):
    rng = np.random.default_rng(606)
    out = []
    for _ in range(20):
        V = as_sample(random_instance(rng))
        opt = solve(V).opt_value
        for _ in range(50):
            x0 = rng.uniform(-20, 20, V.shape[1])
            tr = descend(V, x0, DescentConfig(schedule=schedule, max_iters=10_000))
            out.append((tr.status, abs(tr.terminal_value - opt), len(tr.iterates)))
    return out


@pytest.mark.parametrize("schedule, tol", [("exact-line-search", 1e-6), ("diminishing", 1e-3)])
def test_c6_descent_convergence(schedule, tol):
    runs = _descent_runs(schedule)
    converged = sum(s == "converged" for s, _, _ in runs)
    within = sum(e <= tol for _, e, _ in runs)
    worst = max(e for _, e, _ in runs)
    report(f"C6 descent {schedule}", converged == len(runs) and within == len(runs),
           f"converged={converged}/{len(runs)} within {tol:g}={within} max err={worst:.2e} "
           f"max iters={max(k for _, _, k in runs)}")


def test_c7_metric_axioms():
    rng = np.random.default_rng(71)
    d = rng.integers(2, 6)
    U, V, W = rng.normal(scale=10, size=(3, TRIALS, d))
    duv, dvu, duw, dvw = trop_distance(U, V), trop_distance(V, U), trop_distance(U, W), trop_distance(V, W)
    ok = (np.all(trop_distance(U, U) == 0) and np.all(duv >= 0) and np.allclose(duv, dvu)
          and np.all(duw <= duv + dvw + 1e-9) and np.all(trop_distance(U, U + rng.normal(size=(TRIALS, 1))) < 1e-9))
    report("C7.1 metric axioms", ok, f"{TRIALS} triples in d={d}")


def test_c7_translation_invariance():
    rng = np.random.default_rng(72)
    worst = 0.0
    for _ in range(TRIALS):
        V = random_instance(rng)
        x = rng.normal(scale=10, size=V.shape[1])
        c = rng.normal(scale=10)
        worst = max(worst, abs(fw_objective(V, x + c) - fw_objective(V, x)),
                    abs(trop_distance(V[0] + c, x) - trop_distance(V[0], x)))
    report("C7.2 translation invariance", worst < 1e-9, f"max deviation={worst:.1e}")


def test_c7_convexity_of_objective():
    rng = np.random.default_rng(73)
    worst = -np.inf
    for _ in range(TRIALS):
        V = random_instance(rng)
        x, y = rng.normal(scale=10, size=(2, V.shape[1]))
        lam = rng.uniform()
        gap = fw_objective(V, lam * x + (1 - lam) * y) - lam * fw_objective(V, x) - (1 - lam) * fw_objective(V, y)
        worst = max(worst, gap)
    report("C7.3 convexity of f", worst <= 1e-9, f"max Jensen gap={worst:.1e}")


def test_c7_directional_derivative_identity():
    # inside a maximal cell f(x + t u) - f(x) = t <grad, u> for t below the tie margin
    rng = np.random.default_rng(74)
    worst = 0.0
    for _ in range(TRIALS):
        V = random_instance(rng)
        x = rng.normal(scale=8, size=V.shape[1]) + 10
        diff = np.sort(x - V, axis=1)
        margin = min(np.diff(diff, axis=1).min(), np.inf)
        u = rng.normal(size=V.shape[1])
        t = 0.4 * margin / (u.max() - u.min())
        g = gradient(V, x)
        lhs = fw_objective(V, x + t * u) - fw_objective(V, x)
        worst = max(worst, abs(lhs - t * (g @ u)) / max(t, 1e-300))
    report("C7.4 directional derivative", worst < 1e-6, f"max relative slope error={worst:.1e}")


def test_c7_gradients_orthogonal_to_ones():
    rng = np.random.default_rng(75)
    worst = 0.0
    for _ in range(TRIALS):
        V = random_instance(rng, high=6)
        d = V.shape[1]
        x_tie = np.concatenate([[0.0], rng.integers(0, 7, d - 1).astype(float)])
        x_gen = rng.normal(scale=5, size=d)
        worst = max(worst, abs(subgradient(V, x_tie).sum()), abs(float(gradient(V, x_gen).sum())))
    report("C7.5 <grad,1>=0 and <g,1>=0", worst < 1e-9, f"max |sum|={worst:.1e}")


def test_c7_kleene_idempotence(solved_instances):
    worst = 0.0
    for _, _, _, P in solved_instances:
        C = P.kleene
        closure = (C[:, :, None] + C[None, :, :]).min(axis=1)
        worst = max(worst, float(np.abs(closure - C).max()), float(np.abs(np.diag(C)).max()))
    report("C7.6 Kleene idempotence", worst < 1e-9, f"{len(solved_instances)} stars, max |C*C - C|={worst:.1e}")


def test_c7_cell_convexity(solved_instances):
    rng = np.random.default_rng(77)
    bad = 0
    for V, _, _, P in solved_instances:
        u, v = P.sample_points(rng, 2)
        a, b = rng.normal(scale=5, size=2)
        lam = rng.uniform()
        for w in (np.maximum(a + u, b + v), np.minimum(a + u, b + v), lam * u + (1 - lam) * v):
            if not P.contains(w - w[0], 1e-9):
                bad += 1
    report("C7.7 bi-tropical and classical convexity", bad == 0, f"{len(solved_instances)} trials, violations={bad}")


def test_c7_binary_dual_integrality(solved_instances):
    bad = 0
    for V, net, sol, _ in solved_instances:
        A = (V[:, None, :] - V[None, :, :]).min(axis=2)
        r, c = linear_sum_assignment(A)
        binary = set(np.unique(sol.pi)) <= {0, 1} and set(np.unique(sol.phi)) <= {0, 1}
        if not binary or sol.check(net) or abs(sol.cost - A[r, c].sum()) > 1e-9:
            bad += 1
    report("C7.8 binary-dual integrality", bad == 0, f"{len(solved_instances)} flows, violations={bad}")


def test_c7_arc_bound_general_position():
    rng = np.random.default_rng(79)
    worst = -np.inf
    for _ in range(TRIALS):
        n, d = int(rng.integers(2, 9)), int(rng.integers(2, 5))
        V = rng.normal(scale=10, size=(n, d))
        td = type_data(V, rng.normal(scale=10, size=d))
        arcs = int(td.fine_max.sum() + td.fine_min.sum())
        worst = max(worst, arcs - 2 * (d + n))
    report("C7.9 arc bound |A(Gamma)| < 2(d+n)", worst < 0, f"max |A| - 2(d+n)={worst}")
