"""Static SVG drawing of a d=3 sample and its Fermat-Weber polygon.

Points are drawn in the chart ``(x2, x3)`` after normalizing ``x1 = 0``.
Each sample point is the apex of a max-plus tropical line (rays left,
down and up-right, solid) and a min-plus one (rays right, up and
down-left, dashed).
"""

import numpy as np

from .errors import DimensionError

PAD = 40.0
SCALE = 40.0


def polygon_vertices(cell, tol=1e-9):
    """Vertices of a d=3 cell in ``(x2, x3)``, counter-clockwise.

    Intersects every pair of bounding lines, keeps the feasible
    intersections and sorts them by angle around their centroid.
    """
    if cell.d != 3:
        raise DimensionError("polygon_vertices needs d = 3")
    # x_j - x_k <= b with x_0 = 0, written as a . (x2, x3) <= b
    lines = []
    for j, k, b in cell.inequalities:
        a = np.zeros(3)
        a[j] += 1.0
        a[k] -= 1.0
        lines.append((a[1:], b))
    pts = []
    for p in range(len(lines)):
        for q in range(p + 1, len(lines)):
            A = np.array([lines[p][0], lines[q][0]])
            if abs(np.linalg.det(A)) < 1e-12:
                continue
            pt = np.linalg.solve(A, [lines[p][1], lines[q][1]])
            if all(a @ pt <= b + tol for a, b in lines):
                if not any(np.allclose(pt, w, atol=tol) for w in pts):
                    pts.append(pt)
    if len(pts) < 3:
        return np.array(pts).reshape(-1, 2)
    pts = np.array(pts)
    c = pts.mean(axis=0)
    order = np.argsort(np.arctan2(pts[:, 1] - c[1], pts[:, 0] - c[0]))
    return pts[order]


def _fmt(v):
    return f"{v:.4f}".rstrip("0").rstrip(".")


def render_svg(V, cell=None, title=None):
    """SVG text for the sample ``V`` (n x 3) and an optional cell."""
    V = np.asarray(V, dtype=float)
    if V.ndim != 2 or V.shape[1] != 3:
        raise DimensionError("plotting needs d = 3")
    P = V[:, 1:] - V[:, :1]
    poly = polygon_vertices(cell) if cell is not None else np.zeros((0, 2))
    allpts = np.vstack([P, poly]) if len(poly) else P
    lo = allpts.min(axis=0)
    hi = allpts.max(axis=0)
    span = max(float((hi - lo).max()), 1.0)
    reach = span   # ray length in data units
    lo = lo - 0.5 * span
    hi = hi + 0.5 * span
    width = (hi[0] - lo[0]) * SCALE + 2 * PAD
    height = (hi[1] - lo[1]) * SCALE + 2 * PAD

    def sx(u):
        return PAD + (u - lo[0]) * SCALE

    def sy(w):
        # y axis points up
        return height - PAD - (w - lo[1]) * SCALE

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_fmt(width)}" height="{_fmt(height)}" '
        f'viewBox="0 0 {_fmt(width)} {_fmt(height)}">',
        f'<rect x="0" y="0" width="{_fmt(width)}" height="{_fmt(height)}" fill="white"/>',
    ]
    if title:
        out.append(f'<title>{title}</title>')
    if len(poly) >= 3:
        path = " ".join(f"{_fmt(sx(u))},{_fmt(sy(w))}" for u, w in poly)
        out.append(f'<polygon class="fw" points="{path}" fill="#9ecae1" fill-opacity="0.6" '
                   f'stroke="#3182bd" stroke-width="1.5"/>')
    elif len(poly):
        for u, w in poly:
            out.append(f'<circle class="fw" cx="{_fmt(sx(u))}" cy="{_fmt(sy(w))}" r="4" fill="#3182bd"/>')
    max_dirs = [(-1, 0), (0, -1), (1, 1)]
    min_dirs = [(1, 0), (0, 1), (-1, -1)]
    for u, w in P:
        for dirs, cls, dash in ((max_dirs, "max", ""), (min_dirs, "min", ' stroke-dasharray="6,4"')):
            for du, dw in dirs:
                out.append(
                    f'<line class="{cls}" x1="{_fmt(sx(u))}" y1="{_fmt(sy(w))}" '
                    f'x2="{_fmt(sx(u + reach * du))}" y2="{_fmt(sy(w + reach * dw))}" '
                    f'stroke="#555" stroke-width="1"{dash}/>'
                )
    for u, w in P:
        out.append(f'<circle class="sample" cx="{_fmt(sx(u))}" cy="{_fmt(sy(w))}" r="4" fill="black"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
