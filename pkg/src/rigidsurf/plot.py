"""Static SVG rendering of an arrangement with its singular points.

Rendering picks an affine chart avoiding all singular points (and all
lines of the arrangement), maps everything into a square viewport and
annotates each blown-up point with its line count.  Floating point is
used for layout only; all geometry decisions are made upstream.
"""

from __future__ import annotations

from .arrangement import Arrangement, singular_points
from .projective import dot

_CHART_CANDIDATES = (
    (1, 1, 3), (2, 3, 7), (1, 2, 5), (3, 1, 11), (5, 2, 13), (1, 7, 17),
)


def _pick_chart(arr: Arrangement, points):
    for w in _CHART_CANDIDATES:
        if any(l.coeffs == w for l in arr.lines):
            continue
        if any(dot(p.coords, w) == 0 for p in points):
            continue
        return w
    raise ValueError("no candidate chart avoids the configuration")


def _affine(p, w):
    s = dot(p.coords, w)
    basis = _complement(w)
    return (
        dot(p.coords, basis[0]) / s,
        dot(p.coords, basis[1]) / s,
    )


def _complement(w):
    # two fixed forms independent from w; w candidates are never multiples
    # of the standard forms below
    return ((1, 0, 0), (0, 1, 0))


def _clip_line(a, b, lo, hi):
    """Clip the infinite line through a, b to the [lo,hi]^2 box."""
    dx, dy = b[0] - a[0], b[1] - a[1]
    candidates = []
    if dx:
        for x in (lo, hi):
            t = (x - a[0]) / dx
            y = a[1] + t * dy
            if lo - 1e-9 <= y <= hi + 1e-9:
                candidates.append((x, y))
    if dy:
        for y in (lo, hi):
            t = (y - a[1]) / dy
            x = a[0] + t * dx
            if lo - 1e-9 <= x <= hi + 1e-9:
                candidates.append((x, y))
    uniq = []
    for c in candidates:
        if all(abs(c[0] - u[0]) + abs(c[1] - u[1]) > 1e-9 for u in uniq):
            uniq.append(c)
    return uniq[:2] if len(uniq) >= 2 else None


def arrangement_svg(arr: Arrangement, size: int = 800) -> str:
    table = singular_points(arr)
    chart = _pick_chart(arr, table.points)
    pts = [_affine(p, chart) for p in table.points]
    xs = [x for x, _ in pts] or [0.0]
    ys = [y for _, y in pts] or [0.0]
    lo = min(min(xs), min(ys)) - 0.5
    hi = max(max(xs), max(ys)) + 0.5
    span = hi - lo

    def to_px(p):
        return (
            (p[0] - lo) / span * (size - 40) + 20,
            size - ((p[1] - lo) / span * (size - 40) + 20),
        )

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
        f'<rect width="{size}" height="{size}" fill="white"/>',
    ]
    for l in arr.lines:
        sample = _two_points_on(l, chart)
        if sample is None:
            continue
        seg = _clip_line(sample[0], sample[1], lo, hi)
        if seg is None:
            continue
        (x1, y1), (x2, y2) = (to_px(seg[0]), to_px(seg[1]))
        parts.append(
            f'<line x1="{x1:.2f}" y1="{y1:.2f}" x2="{x2:.2f}" y2="{y2:.2f}" '
            f'stroke="#335" stroke-width="1"/>'
        )
    for p, mu in zip(table.points, table.mu):
        x, y = to_px(_affine(p, chart))
        parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4" fill="#c22"/>')
        parts.append(
            f'<text x="{x + 6:.2f}" y="{y - 4:.2f}" font-size="11" '
            f'fill="#222">{mu}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _two_points_on(l, chart):
    """Two affine points on the line, skipping points on the chart line."""
    from .projective import ProjectivePoint, cross, normalize_triple

    found = []
    for probe in ((0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1), (1, 2, 3)):
        if l.coeffs == probe:
            continue
        v = cross(l.coeffs, probe)
        if v == (0, 0, 0):
            continue
        p = ProjectivePoint(normalize_triple(v))
        if dot(p.coords, chart) == 0:
            continue
        a = _affine(p, chart)
        if all(abs(a[0] - f[0]) + abs(a[1] - f[1]) > 1e-9 for f in found):
            found.append(a)
        if len(found) == 2:
            return found
    return None


__all__ = ["arrangement_svg"]
