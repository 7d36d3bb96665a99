"""SVG pictures of event words: theta runs left to right, u bottom to top."""

from __future__ import annotations

from dataclasses import dataclass
from xml.sax.saxutils import escape

from .diagram import BIRTH, CROSS, DEATH, BlobDiagram, as_doodle, replay
from .invariants import classify_crossings, classify_tangencies

_SHADES = ("none", "#c6dbef", "#6baed6", "#2171b5", "#08306b")


@dataclass(frozen=True)
class RenderSpec:
    width: int = 640
    height: int = 320
    margin: int = 24
    stroke: str = "#222222"
    stroke_width: float = 1.6
    shade_faces: bool = True
    label_crossings: bool = True
    label_tangencies: bool = True


def _fmt(x: float) -> str:
    return f"{x:.2f}".rstrip("0").rstrip(".")


def render_svg(diagram, spec: RenderSpec = RenderSpec()) -> str:
    d = as_doodle(diagram)
    rep = replay(d)
    n = len(d.events)
    W, H, M = spec.width, spec.height, spec.margin
    dx = (W - 2 * M) / (2 * n + 2)
    # slab k is centred at S(k), event k sits at X(k)
    S = lambda k: M + (2 * k + 1) * dx
    X = lambda k: M + (2 * k + 2) * dx

    def Y(j, s):
        return H - M - (j + 1) * (H - 2 * M) / (s + 1)

    parts = [f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" '
             f'viewBox="0 0 {W} {H}">',
             f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>']
    faces = diagram.faces if isinstance(diagram, BlobDiagram) else None
    if faces is not None and spec.shade_faces:
        for k, slab in enumerate(faces):
            s = len(slab) - 1
            x0, x1 = S(k) - dx / 2, S(k) + dx / 2
            for j in range(1, s):
                m = slab[j]
                if m <= 0:
                    continue
                top, bot = Y(j, s), Y(j - 1, s)
                fill = _SHADES[min(m, len(_SHADES) - 1)]
                parts.append(f'<rect x="{_fmt(x0)}" y="{_fmt(top)}" width="{_fmt(x1 - x0)}" '
                             f'height="{_fmt(bot - top)}" fill="{fill}" stroke="none"/>')
    paths = []
    for k, slab in enumerate(rep.ids):
        s = len(slab)
        for j in range(s):
            y = Y(j, s)
            paths.append(f"M {_fmt(S(k) - dx / 2)} {_fmt(y)} H {_fmt(S(k) + dx / 2)}")
    for k, e in enumerate(d.events):
        if k + 1 >= len(rep.ids):
            break
        left, right = rep.ids[k], rep.ids[k + 1]
        sl, sr = len(left), len(right)
        xl, xr, xe = S(k) + dx / 2, S(k + 1) - dx / 2, X(k)
        pos_r = {a: j for j, a in enumerate(right)}
        for j, a in enumerate(left):
            if a in pos_r and not (e.kind == CROSS and j in (e.slot, e.slot + 1)):
                paths.append(f"M {_fmt(xl)} {_fmt(Y(j, sl))} L {_fmt(xr)} {_fmt(Y(pos_r[a], sr))}")
        i = e.slot
        if e.kind == BIRTH:
            ya, yb = Y(i, sr), Y(i + 1, sr)
            ym = (ya + yb) / 2
            for yy in (ya, yb):
                paths.append(f"M {_fmt(xe)} {_fmt(ym)} Q {_fmt(xe)} {_fmt(yy)} {_fmt(xr)} {_fmt(yy)}")
        elif e.kind == DEATH:
            ya, yb = Y(i, sl), Y(i + 1, sl)
            ym = (ya + yb) / 2
            for yy in (ya, yb):
                paths.append(f"M {_fmt(xl)} {_fmt(yy)} Q {_fmt(xe)} {_fmt(yy)} {_fmt(xe)} {_fmt(ym)}")
        else:
            paths.append(f"M {_fmt(xl)} {_fmt(Y(i, sl))} L {_fmt(xr)} {_fmt(Y(i + 1, sr))}")
            paths.append(f"M {_fmt(xl)} {_fmt(Y(i + 1, sl))} L {_fmt(xr)} {_fmt(Y(i, sr))}")
    parts.append(f'<path d="{" ".join(paths)}" fill="none" stroke="{spec.stroke}" '
                 f'stroke-width="{spec.stroke_width}"/>')
    if rep.structural_ok:
        if spec.label_crossings and d.oriented:
            for rec in classify_crossings(diagram):
                k = rec.event_index
                s = len(rep.ids[k])
                y = (Y(d.events[k].slot, s) + Y(d.events[k].slot + 1, s)) / 2
                parts.append(f'<text x="{_fmt(X(k))}" y="{_fmt(y - 6)}" font-size="11" '
                             f'text-anchor="middle">{escape(rec.type)}</text>')
        if spec.label_tangencies:
            for rec in classify_tangencies(d):
                if not rec.concave:
                    continue
                k = rec.event_index
                s = len(rep.ids[k + 1] if rec.kind == BIRTH else rep.ids[k])
                y = (Y(rec.below_count, s) + Y(rec.below_count + 1, s)) / 2
                sym = "⊕" if rec.polarity == "+" else "⊖"
                parts.append(f'<text x="{_fmt(X(k))}" y="{_fmt(y + 14)}" font-size="12" '
                             f'text-anchor="middle">{sym}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
