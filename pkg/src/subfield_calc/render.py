"""SVG rendering of piecewise polynomials on the unit square."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import quoteattr

from .exactfield import DomainError, FieldElement
from .plcalc import PiecewisePoly

__all__ = ["RenderOptions", "render_svg", "continuous_runs", "run_vertices"]


@dataclass(frozen=True)
class RenderOptions:
    width: int = 640
    height: int = 640
    samples_per_piece: int = 16
    stroke_width: float = 1.5
    margin: int = 24

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise DomainError("image dimensions must be positive")
        if self.samples_per_piece < 2:
            raise DomainError("need at least 2 samples per piece")
        if self.stroke_width <= 0:
            raise DomainError("stroke width must be positive")
        if not 0 <= 2 * self.margin < min(self.width, self.height):
            raise DomainError("margin leaves no room to draw")


def continuous_runs(f: PiecewisePoly) -> list[list]:
    """Split the pieces at every jump."""
    runs = [[f.pieces[0]]]
    for left, right in zip(f.pieces, f.pieces[1:]):
        if left.at(right.start) == right.at(right.start):
            runs[-1].append(right)
        else:
            runs.append([right])
    return runs


def run_vertices(run, samples: int) -> list[tuple[FieldElement, FieldElement]]:
    """Exact vertices of one continuous run.

    Linear pieces contribute their breakpoints only; quadratic pieces are
    sampled at ``samples`` equally spaced points.
    """
    first = run[0]
    pts = [(first.start, first.at(first.start))]
    for p in run:
        if p.c2 != 0:
            for j in range(1, samples - 1):
                x = p.start + (p.end - p.start) * j / (samples - 1)
                pts.append((x, p.at(x)))
        pts.append((p.end, p.at(p.end)))
    return pts


def render_svg(f: PiecewisePoly, opts: RenderOptions | None = None) -> str:
    if f is None or not f.pieces:
        raise DomainError("nothing to render")
    opts = opts or RenderOptions()
    w, h, m = opts.width, opts.height, opts.margin
    sx, sy = w - 2 * m, h - 2 * m

    def px(x, y):
        return f"{m + float(x) * sx:.3f},{h - m - float(y) * sy:.3f}"

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}">',
        f'<rect x="{m}" y="{m}" width="{sx}" height="{sy}" fill="none" '
        f'stroke="#999" stroke-width="1"/>',
        f'<line class="axis" x1="{m}" y1="{h - m}" x2="{w - m}" y2="{h - m}" stroke="#000"/>',
        f'<line class="axis" x1="{m}" y1="{h - m}" x2="{m}" y2="{m}" stroke="#000"/>',
    ]
    for run in continuous_runs(f):
        pts = run_vertices(run, opts.samples_per_piece)
        coords = " ".join(px(x, y) for x, y in pts)
        exact = " ".join(f"{x},{y}" for x, y in pts)
        lines.append(
            f'<polyline fill="none" stroke="#1f4e9c" stroke-width="{opts.stroke_width}" '
            f'points="{coords}" data-exact={quoteattr(exact)}/>'
        )
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
