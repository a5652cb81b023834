"""SVG and plain-text rendering of 2-D country maps."""

from __future__ import annotations

import re
import warnings
from dataclasses import dataclass, field
from xml.sax.saxutils import escape, quoteattr

import numpy as np

from .mds import POLE_LABELS, Embedding

# Okabe-Ito palette, one colour per SJR portal region
DEFAULT_PALETTE = {
    "Africa": "#E69F00",
    "Asiatic Region": "#56B4E9",
    "Eastern Europe": "#009E73",
    "Latin America": "#CC79A7",
    "Middle East": "#0072B2",
    "Northern America": "#D55E00",
    "Pacific Region": "#F0E442",
    "Western Europe": "#000000",
}
DEFAULT_POLE_TAGS = {
    "F1": "factor 1 - biomedicine",
    "F2": "factor 2 - basic science & engineering",
    "F3": "factor 3 - agriculture",
}
_HEX = re.compile(r"#[0-9A-Fa-f]{6}\Z")


@dataclass(frozen=True)
class MapStyle:
    width: int = 800
    height: int = 600
    palette: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_PALETTE))
    fallback_color: str = "#999999"
    font_size: int = 11
    marker_radius: float = 4.0
    pole_size: float = 10.0
    pole_color: str = "#444444"
    pole_tags: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_POLE_TAGS))
    margin: float = 0.05

    def __post_init__(self):
        if self.width <= 0 or self.height <= 0:
            raise ValueError("canvas width and height must be positive")
        for name, color in [*self.palette.items(), ("fallback", self.fallback_color),
                            ("pole", self.pole_color)]:
            if not _HEX.match(color):
                raise ValueError(f"{name}: {color!r} is not a #RRGGBB colour")


def canvas_coordinates(x: np.ndarray, width: float, height: float, margin: float) -> np.ndarray:
    """Uniformly scale points into the canvas, keeping a margin on every side.

    The y axis is flipped so larger y is drawn higher.
    """
    x = np.asarray(x, dtype=float)
    lo, hi = x.min(axis=0), x.max(axis=0)
    span = hi - lo
    inner_w, inner_h = width * (1 - 2 * margin), height * (1 - 2 * margin)
    limits = [s for s in (inner_w / span[0] if span[0] > 0 else None,
                          inner_h / span[1] if span[1] > 0 else None) if s is not None]
    scale = min(limits) if limits else 0.0
    mid = (lo + hi) / 2
    px = width / 2 + (x[:, 0] - mid[0]) * scale
    py = height / 2 - (x[:, 1] - mid[1]) * scale
    return np.column_stack([px, py])


def _num(v: float) -> str:
    return f"{v:.3f}".rstrip("0").rstrip(".")


def render_svg(e: Embedding, regions: dict[str, str], style: MapStyle | None = None,
               names: dict[str, str] | None = None, title: str = "") -> str:
    """SVG 1.1 map: one marker and code label per item, poles as tagged squares.

    Items whose label is F1/F2/F3 are drawn as factor poles. Countries missing
    from ``regions`` are drawn in the fallback colour with a warning.
    ``names`` supplies tooltip text (``<title>``) per label.
    """
    if len(e) == 0:
        raise ValueError("nothing to draw: empty embedding")
    style = style or MapStyle()
    names = names or {}
    pts = canvas_coordinates(e.x, style.width, style.height, style.margin)
    missing = [lab for lab in e.labels if lab not in POLE_LABELS and lab not in regions]
    if missing:
        warnings.warn(f"no region for {', '.join(missing)}; drawn in {style.fallback_color}",
                      stacklevel=2)
    w, h = style.width, style.height
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" '
        f'viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="{style.font_size}">',
        f'<rect x="0" y="0" width="{w}" height="{h}" fill="#FFFFFF"/>',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    used = sorted({regions[lab] for lab in e.labels if lab in regions})
    for i, region in enumerate(used):
        color = style.palette.get(region, style.fallback_color)
        y = 14 + 14 * i
        out.append(f'<g class="legend"><rect x="8" y="{y - 8}" width="8" height="8" '
                   f'fill="{color}"/><text x="20" y="{y}">{escape(region)}</text></g>')
    r = style.marker_radius
    for lab, (px, py) in zip(e.labels, pts):
        tip = names.get(lab, DEFAULT_POLE_TAGS.get(lab, lab) if lab in POLE_LABELS else lab)
        if lab in POLE_LABELS:
            s = style.pole_size
            tag = style.pole_tags.get(lab, lab)
            out.append(
                f'<g id={quoteattr("item-" + lab)}><title>{escape(tip)}</title>'
                f'<rect class="marker pole" x="{_num(px - s / 2)}" y="{_num(py - s / 2)}" '
                f'width="{_num(s)}" height="{_num(s)}" fill="{style.pole_color}" '
                f'data-cx="{_num(px)}" data-cy="{_num(py)}"/>'
                f'<text x="{_num(px + s)}" y="{_num(py - s)}" font-weight="bold">'
                f'{escape(tag)}</text></g>')
        else:
            color = style.palette.get(regions.get(lab, ""), style.fallback_color)
            out.append(
                f'<g id={quoteattr("item-" + lab)}><title>{escape(tip)}</title>'
                f'<circle class="marker" cx="{_num(px)}" cy="{_num(py)}" r="{_num(r)}" '
                f'fill="{color}" data-cx="{_num(px)}" data-cy="{_num(py)}"/>'
                f'<text x="{_num(px + r + 1)}" y="{_num(py - r - 1)}">{escape(lab)}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


_CENTER = re.compile(r'class="marker[^"]*"[^>]*?data-cx="([-0-9.]+)" data-cy="([-0-9.]+)"')


def svg_marker_centers(svg: str) -> np.ndarray:
    """Pixel centres of all markers in an SVG produced by :func:`render_svg`."""
    return np.array([[float(a), float(b)] for a, b in _CENTER.findall(svg)])


def ascii_cells(e: Embedding, cols: int = 60, rows: int = 24) -> dict[tuple[int, int], list[str]]:
    """Bin items into a ``rows x cols`` grid; returns ``(row, col) -> sorted labels``."""
    if cols < 10 or rows < 10:
        raise ValueError("grid must be at least 10 x 10")
    x = np.asarray(e.x, dtype=float)
    lo, hi = x.min(axis=0), x.max(axis=0)
    span = hi - lo
    cells: dict[tuple[int, int], list[str]] = {}
    for lab, (a, b) in zip(e.labels, x):
        c = int(round((a - lo[0]) / span[0] * (cols - 1))) if span[0] > 0 else cols // 2
        r = int(round((hi[1] - b) / span[1] * (rows - 1))) if span[1] > 0 else rows // 2
        cells.setdefault((r, c), []).append(lab)
    return {k: sorted(v) for k, v in sorted(cells.items())}


def render_ascii(e: Embedding, cols: int = 60, rows: int = 24) -> str:
    """Text preview; a shared cell shows its smallest code plus ``+n`` for the rest."""
    grid = [[" "] * cols for _ in range(rows)]
    for (r, c), labels in ascii_cells(e, cols, rows).items():
        text = (labels[0] + (f"+{len(labels) - 1}" if len(labels) > 1 else ""))[:cols]
        start = min(c, cols - len(text))
        # slide sideways (at most 3 columns) rather than overwrite a neighbour
        for shift in (0, 1, -1, 2, -2, 3, -3):
            s = start + shift
            if 0 <= s <= cols - len(text) and all(ch == " " for ch in grid[r][s:s + len(text)]):
                start = s
                break
        for i, ch in enumerate(text):
            grid[r][start + i] = ch
    return "\n".join("".join(line).rstrip() for line in grid) + "\n"
