"""Plain-text SVG scatter plots (no rendering dependency, diffable output)."""

from __future__ import annotations

import math
from typing import Mapping, Sequence
from xml.sax.saxutils import escape

WIDTH, HEIGHT, MARGIN = 640, 480, 50


def _scale(lo: float, hi: float, a: float, b: float):
    span = hi - lo or 1.0
    return lambda v: a + (v - lo) / span * (b - a)


def scatter_svg(
    points: Sequence[tuple[str, float, float]],
    x_label: str,
    y_label: str,
    x_range: tuple[float, float] | None = None,
    y_range: tuple[float, float] | None = None,
    groups: Mapping[str, int] | None = None,
    title: str = "",
) -> str:
    """Scatter of labelled points; each circle carries class ``group-k``."""
    xs = [p[1] for p in points]
    ys = [p[2] for p in points]
    x_lo, x_hi = x_range or (min(xs, default=0.0), max(xs, default=1.0))
    y_lo, y_hi = y_range or (min(ys, default=0.0), max(ys, default=1.0))
    sx = _scale(x_lo, x_hi, MARGIN, WIDTH - MARGIN)
    sy = _scale(y_lo, y_hi, HEIGHT - MARGIN, MARGIN)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        "<style>circle{stroke:#000;stroke-width:0.5;fill:#888}"
        ".group-1{fill:#d62728}.group-2{fill:#1f77b4}.group-3{fill:#2ca02c}"
        ".group-4{fill:#ffbf00}.group-5{fill:#9467bd}.group-6{fill:#8c564b}"
        "text{font-family:sans-serif;font-size:10px}</style>",
    ]
    if title:
        out.append(f'<text x="{WIDTH / 2:.2f}" y="20" text-anchor="middle">{escape(title)}</text>')
    out.append(
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" height="{HEIGHT - 2 * MARGIN}" '
        'fill="none" stroke="#000"/>'
    )
    out.append(f'<text x="{WIDTH / 2:.2f}" y="{HEIGHT - 15}" text-anchor="middle">{escape(x_label)}</text>')
    out.append(
        f'<text x="15" y="{HEIGHT / 2:.2f}" text-anchor="middle" '
        f'transform="rotate(-90 15 {HEIGHT / 2:.2f})">{escape(y_label)}</text>'
    )
    for label, tick in ((f"{x_lo:.3f}", MARGIN), (f"{x_hi:.3f}", WIDTH - MARGIN)):
        out.append(f'<text x="{tick}" y="{HEIGHT - MARGIN + 14}" text-anchor="middle">{label}</text>')
    for label, tick in ((f"{y_lo:.3f}", HEIGHT - MARGIN), (f"{y_hi:.3f}", MARGIN)):
        out.append(f'<text x="{MARGIN - 4}" y="{tick}" text-anchor="end">{label}</text>')
    for label, x, y in points:
        cls = f' class="group-{groups[label]}"' if groups and label in groups else ""
        out.append(
            f'<circle cx="{sx(x):.2f}" cy="{sy(y):.2f}" r="4"{cls}>'
            f"<title>{escape(label)}</title></circle>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def angles_svg(points: Sequence[tuple[str, float, float]], groups: Mapping[str, int] | None = None) -> str:
    """Azimuth (x) against zenith (y) for labelled (phi, theta) pairs."""
    return scatter_svg(
        points, "azimuth phi (rad)", "zenith theta (rad)",
        x_range=(-math.pi, math.pi), y_range=(0.0, math.pi), groups=groups,
    )


def reference_svg(rows: Sequence[tuple[str, str, float]]) -> str:
    """One row of points per reference language; x is the distance."""
    refs = sorted({r for _, r, _ in rows})
    dialects = sorted({d for d, _, _ in rows})
    index = {d: k for k, d in enumerate(dialects)}
    pts = [(f"{d} / {r}", v, float(index[d])) for d, r, v in rows]
    groups = {f"{d} / {r}": refs.index(r) + 1 for d, r, _ in rows}
    return scatter_svg(
        pts, "lexical distance", "dialect index",
        y_range=(-0.5, max(len(dialects) - 0.5, 0.5)), groups=groups,
        title="distance to " + ", ".join(refs),
    )
