"""SVG pictures of a slice: tinted chambers, wall polylines, labelled axes.  Presentation only."""

from __future__ import annotations

from fractions import Fraction
from xml.sax.saxutils import escape

__all__ = ["render_slice"]

_PALETTE = ["#dbe9f6", "#f6e3db", "#e0f2dc", "#efe0f4", "#f8f1cf", "#d9f1f0", "#f2d9e3", "#e6e6e6"]
_WALL = {"hole": "#c0392b", "numerical": "#1f4e79"}


def render_slice(window, walls, chambers=None, size: int = 480, title: str = "") -> str:
    x0, x1, y0, y1 = (Fraction(c) for c in window)
    pad = 48
    W = H = size
    dx = (x1 - x0) or Fraction(1)
    dy = (y1 - y0) or Fraction(1)

    def px(x):
        return f"{float(pad + (Fraction(x) - x0) / dx * W):.3f}"

    def py(y):
        return f"{float(pad + H - (Fraction(y) - y0) / dy * H):.3f}"

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W + 2 * pad}" height="{H + 2 * pad}" '
        f'viewBox="0 0 {W + 2 * pad} {H + 2 * pad}">',
        f"<title>{escape(title)}</title>",
        '<g id="chambers">',
    ]
    if chambers is not None:
        n = chambers.grid
        for j in range(n):
            for i in range(n):
                lab = chambers.labels[j][i]
                if lab < 0:
                    continue
                cx0, cx1 = x0 + dx * i / n, x0 + dx * (i + 1) / n
                cy0, cy1 = y0 + dy * j / n, y0 + dy * (j + 1) / n
                out.append(
                    f'<rect x="{px(cx0)}" y="{py(cy1)}" width="{float((cx1 - cx0) / dx * W):.3f}" '
                    f'height="{float((cy1 - cy0) / dy * H):.3f}" fill="{_PALETTE[lab % len(_PALETTE)]}" '
                    f'data-chamber="{lab}"/>'
                )
    out.append("</g>")
    out.append('<g id="walls" fill="none" stroke-width="2">')
    for w in walls:
        for line in w.segments:
            if len(line) < 2:
                continue
            d = "M " + " L ".join(f"{px(x)} {py(y)}" for x, y in line)
            out.append(f'<path d="{d}" stroke="{_WALL[w.kind.value]}" data-witness="{escape(str(w.witness))}"/>')
    out.append("</g>")
    out.append('<g id="axes" stroke="#000" font-family="sans-serif" font-size="12">')
    out.append(f'<rect x="{pad}" y="{pad}" width="{W}" height="{H}" fill="none"/>')
    out.append(f'<text x="{pad + W // 2}" y="{H + 2 * pad - 12}" text-anchor="middle" stroke="none">'
               f"x (beta coordinate)</text>")
    out.append(f'<text x="14" y="{pad + H // 2}" text-anchor="middle" stroke="none" '
               f'transform="rotate(-90 14 {pad + H // 2})">y (omega coordinate)</text>')
    for x, anchor in ((x0, "start"), (x1, "end")):
        out.append(f'<text x="{px(x)}" y="{H + pad + 16}" text-anchor="{anchor}" stroke="none">{x}</text>')
    for y in (y0, y1):
        out.append(f'<text x="{pad - 6}" y="{py(y)}" text-anchor="end" stroke="none">{y}</text>')
    out.append("</g>")
    out.append("</svg>")
    return "\n".join(out) + "\n"
