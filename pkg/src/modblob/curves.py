"""
Sweep-line ingestion of closed parametric curves.

Curves are closed chains of polynomial segments ``t -> (theta(t), u(t))``,
``t in [0, 1]``, with rational coefficients.  The sweep finds fiber
tangencies (``theta'(t) = 0``) and crossings (Bernstein subdivision followed
by Newton polishing), orders them by ``theta`` and reads slots off the
``u``-order of the monotone arcs.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .diagram import (BIRTH, CROSS, DEATH, BlobDiagram, Event, StrandDiagram, is_fillable,
                      validate)
from .errors import EventCollision, GenericityViolation, InvalidDiagram

SCHEMA = "modblob.curves/1"


@dataclass(frozen=True)
class Segment:
    theta: tuple[Fraction, ...]   # ascending coefficients in t
    u: tuple[Fraction, ...]


@dataclass(frozen=True)
class Curve:
    segments: tuple[Segment, ...]
    orientation: int = 1


@dataclass(frozen=True)
class ParametricCurveSet:
    curves: tuple[Curve, ...]

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "curves": [
            {"orientation": c.orientation,
             "segments": [{"theta": [str(a) for a in s.theta], "u": [str(a) for a in s.u]}
                          for s in c.segments]} for c in self.curves]}

    @classmethod
    def from_json(cls, doc) -> "ParametricCurveSet":
        if doc.get("schema", SCHEMA) != SCHEMA:
            raise ValueError(f"unsupported curve schema {doc.get('schema')!r}")
        curves = []
        for c in doc["curves"]:
            segs = tuple(Segment(tuple(Fraction(a) for a in s["theta"]),
                                 tuple(Fraction(a) for a in s["u"])) for s in c["segments"])
            curves.append(Curve(segs, int(c.get("orientation", 1))))
        return cls(tuple(curves))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class SweepConfig:
    tol: float = 1e-9
    eps_theta: float = 1e-6
    max_depth: int = 60


@dataclass(frozen=True)
class CurveViolation:
    rule: str
    curve: int
    segment: int
    t: float
    message: str


# -- numeric helpers ----------------------------------------------------------------

class _Seg:
    """Float view of one oriented segment."""

    def __init__(self, seg: Segment, reverse: bool):
        th = np.polynomial.Polynomial([float(a) for a in seg.theta])
        uu = np.polynomial.Polynomial([float(a) for a in seg.u])
        if reverse:
            flip = np.polynomial.Polynomial([1.0, -1.0])
            th, uu = th(flip), uu(flip)
        self.th, self.u = th, uu
        self.dth, self.du = th.deriv(), uu.deriv()
        self.ddth = self.dth.deriv()

    def point(self, t):
        return np.array([self.th(t), self.u(t)])

    def velocity(self, t):
        return np.array([self.dth(t), self.du(t)])

    def bernstein(self):
        n = max(len(self.th.coef), len(self.u.coef)) - 1
        n = max(n, 1)
        pts = np.zeros((n + 1, 2))
        for k, poly in enumerate((self.th, self.u)):
            a = np.zeros(n + 1)
            a[:len(poly.coef)] = poly.coef
            for j in range(n + 1):
                pts[j, k] = sum(math.comb(j, i) / math.comb(n, i) * a[i] for i in range(j + 1))
        return pts


def _oriented_segments(curves: ParametricCurveSet):
    out = []
    for ci, c in enumerate(curves.curves):
        segs = list(c.segments)
        rev = c.orientation < 0
        if rev:
            segs = segs[::-1]
        for si, s in enumerate(segs):
            out.append((ci, si, _Seg(s, rev), len(segs)))
    return out


def _split(pts, s=0.5):
    left, right = [pts[0]], [pts[-1]]
    cur = pts
    while len(cur) > 1:
        cur = (1 - s) * cur[:-1] + s * cur[1:]
        left.append(cur[0])
        right.append(cur[-1])
    return np.array(left), np.array(right[::-1])


def _boxes_meet(a, b, pad):
    return not (a[:, 0].max() + pad < b[:, 0].min() or b[:, 0].max() + pad < a[:, 0].min()
                or a[:, 1].max() + pad < b[:, 1].min() or b[:, 1].max() + pad < a[:, 1].min())


def _intersect(sa: _Seg, sb: _Seg, cfg: SweepConfig):
    """Parameter pairs where two segments meet."""
    found = []
    stack = [(sa.bernstein(), 0.0, 1.0, sb.bernstein(), 0.0, 1.0, 0)]
    while stack:
        pa, a0, a1, pb, b0, b1, depth = stack.pop()
        if not _boxes_meet(pa, pb, cfg.tol):
            continue
        size_a = np.ptp(pa, axis=0).max()
        size_b = np.ptp(pb, axis=0).max()
        if max(size_a, size_b) < 1e-4 or depth > cfg.max_depth:
            found.append(((a0 + a1) / 2, (b0 + b1) / 2))
            continue
        if size_a >= size_b:
            l, r = _split(pa)
            m = (a0 + a1) / 2
            stack += [(l, a0, m, pb, b0, b1, depth + 1), (r, m, a1, pb, b0, b1, depth + 1)]
        else:
            l, r = _split(pb)
            m = (b0 + b1) / 2
            stack += [(pa, a0, a1, l, b0, m, depth + 1), (pa, a0, a1, r, m, b1, depth + 1)]
    out = []
    for s, t in found:
        for _ in range(50):
            f = sa.point(s) - sb.point(t)
            J = np.column_stack([sa.velocity(s), -sb.velocity(t)])
            if abs(np.linalg.det(J)) < 1e-14:
                break
            step = np.linalg.solve(J, f)
            s, t = s - step[0], t - step[1]
            if np.abs(step).max() < 1e-15:
                break
        if not (-1e-9 <= s <= 1 + 1e-9 and -1e-9 <= t <= 1 + 1e-9):
            continue
        if np.abs(sa.point(s) - sb.point(t)).max() > 1e-7:
            continue
        if all(abs(s - s2) > 1e-6 or abs(t - t2) > 1e-6 for s2, t2 in out):
            out.append((min(max(s, 0.0), 1.0), min(max(t, 0.0), 1.0)))
    return out


def _folds(seg: _Seg):
    roots = seg.dth.roots() if seg.dth.degree() > 0 else []
    out = []
    for r in roots:
        # a double root of theta' (vertical inflection) shows up twice or as a complex pair
        if abs(r.imag) < 1e-6 and 0 <= r.real < 1:
            t = float(r.real)
            if all(abs(t - t2) > 1e-6 for t2 in out):
                out.append(t)
    return sorted(out)


# -- genericity -----------------------------------------------------------------------

def _scan(curves: ParametricCurveSet, cfg: SweepConfig):
    segs = _oriented_segments(curves)
    violations, folds, crossings = [], [], []
    for idx, (ci, si, s, n) in enumerate(segs):
        for t in np.linspace(0, 1, 33):
            if np.hypot(*s.velocity(t)) < cfg.tol:
                violations.append(CurveViolation("singular", ci, si, float(t), "velocity vanishes"))
        for t in _folds(s):
            acc = s.ddth(t)
            if abs(acc) < 1e-6:
                violations.append(CurveViolation(
                    "order-3", ci, si, t, "fiber tangency of order >= 3 (vertical inflection)"))
                continue
            folds.append((idx, t, acc))
    for i in range(len(segs)):
        for j in range(i + 1, len(segs)):
            ci, si, sa, n = segs[i]
            cj, sj, sb, _ = segs[j]
            for s, t in _intersect(sa, sb, cfg):
                if ci == cj and ((sj == si + 1 and s > 1 - 1e-6 and t < 1e-6)
                                 or (si == 0 and sj == n - 1 and s < 1e-6 and t > 1 - 1e-6)):
                    continue   # shared knot of consecutive segments
                va, vb = sa.velocity(s), sb.velocity(t)
                sin = abs(va[0] * vb[1] - va[1] * vb[0]) / (np.linalg.norm(va) * np.linalg.norm(vb))
                p = sa.point(s)
                if sin < 1e-6:
                    violations.append(CurveViolation(
                        "non-transversal", ci, si, s,
                        f"curves {ci} and {cj} touch at theta={p[0]:.6g}, u={p[1]:.6g}"))
                    continue
                crossings.append((i, s, j, t, p))
    # a fold point may not lie on another branch
    for idx, t, _ in folds:
        ci, si, seg, _ = segs[idx]
        p = seg.point(t)
        for jdx, (cj, sj, other, _) in enumerate(segs):
            if jdx == idx:
                continue
            for tt in _on_segment(other, p, cfg):
                if cj == ci and (abs(tt - 1) < 1e-6 or tt < 1e-6):
                    continue
                violations.append(CurveViolation(
                    "shared-tangency", ci, si, t,
                    f"fiber tangency at theta={p[0]:.6g} lies on curve {cj}"))
    # triple points: two crossings at one spot
    for a in range(len(crossings)):
        for b in range(a + 1, len(crossings)):
            if np.abs(crossings[a][4] - crossings[b][4]).max() < 1e-7:
                i = crossings[a][0]
                violations.append(CurveViolation("triple-point", segs[i][0], segs[i][1],
                                                 crossings[a][1], "three branches meet"))
    return segs, folds, crossings, violations


def _on_segment(seg: _Seg, p, cfg):
    """Parameters where the segment passes within 1e-7 of ``p`` (closest-point test)."""
    dx, dy = seg.th - p[0], seg.u - p[1]
    crit = dx * seg.dth + dy * seg.du
    cands = [0.0, 1.0] + [float(r.real) for r in crit.roots()
                          if abs(r.imag) < 1e-6 and -1e-9 <= r.real <= 1 + 1e-9]
    out = []
    for t in cands:
        if math.hypot(dx(t), dy(t)) < 1e-7 and all(abs(t - t2) > 1e-6 for t2 in out):
            out.append(t)
    return out


def genericity_check_curves(curves: ParametricCurveSet,
                            config: SweepConfig | None = None) -> list[CurveViolation]:
    return _scan(curves, config or SweepConfig())[3]


# -- sweep --------------------------------------------------------------------------

def _arcs(segs, folds):
    """Maximal theta-monotone pieces as (segment index, t0, t1)."""
    cut = {i: [0.0, 1.0] for i in range(len(segs))}
    for idx, t, _ in folds:
        cut[idx].append(t)
    out = []
    for i, ts in cut.items():
        ts = sorted(set(ts))
        out += [(i, a, b) for a, b in zip(ts, ts[1:]) if b - a > 1e-12]
    return out


def _u_at(seg: _Seg, t0, t1, theta):
    """u on the arc at a theta strictly inside its theta-range, else None."""
    a, b = seg.th(t0), seg.th(t1)
    lo, hi = min(a, b), max(a, b)
    if not lo < theta < hi:
        return None
    inc = b > a
    for _ in range(80):
        m = (t0 + t1) / 2
        if (seg.th(m) < theta) == inc:
            t0 = m
        else:
            t1 = m
    return seg.u((t0 + t1) / 2)


def curves_to_diagram(curves: ParametricCurveSet, config: SweepConfig | None = None,
                      fill: bool = True):
    cfg = config or SweepConfig()
    segs, folds, crossings, violations = _scan(curves, cfg)
    if violations:
        raise GenericityViolation(violations)
    arcs = _arcs(segs, folds)
    events = []   # (theta, u, kind, bit, excluded arcs)
    for idx, t, acc in folds:
        seg = segs[idx][2]
        th, uu = seg.point(t)
        kind = BIRTH if acc > 0 else DEATH
        bit = bool(seg.du(t) < 0) if kind == BIRTH else None
        events.append((th, uu, kind, bit))
    for i, s, j, t, p in crossings:
        events.append((p[0], p[1], CROSS, None))
    events.sort(key=lambda e: e[0])
    for a, b in zip(events, events[1:]):
        if b[0] - a[0] < cfg.eps_theta:
            raise EventCollision(a[0], b[0])
    word = []
    for th, uu, kind, bit in events:
        below = 0
        for i, t0, t1 in arcs:
            v = _u_at(segs[i][2], t0, t1, th)
            if v is not None and v < uu - 1e-9:
                below += 1
        word.append(Event(kind, below, Fraction(th).limit_denominator(10 ** 9), bit))
    doodle = StrandDiagram.strip(word, oriented=True)
    rep = validate(doodle)
    if not rep.ok:
        raise InvalidDiagram(rep.violations)
    if fill and is_fillable(doodle):
        return BlobDiagram.fill(doodle)
    return doodle


# -- builders -------------------------------------------------------------------------

def _q(x: float) -> Fraction:
    return Fraction(x).limit_denominator(10 ** 12)


def hermite_closed(points, tangents) -> Curve:
    """Closed cubic Hermite spline through ``points`` with the given derivatives."""
    segs = []
    n = len(points)
    for k in range(n):
        p0, p1 = np.asarray(points[k], float), np.asarray(points[(k + 1) % n], float)
        m0, m1 = np.asarray(tangents[k], float), np.asarray(tangents[(k + 1) % n], float)
        c0, c1 = p0, m0
        c2 = 3 * (p1 - p0) - 2 * m0 - m1
        c3 = 2 * (p0 - p1) + m0 + m1
        segs.append(Segment(tuple(_q(c[0]) for c in (c0, c1, c2, c3)),
                            tuple(_q(c[1]) for c in (c0, c1, c2, c3))))
    return Curve(tuple(segs))


def _sampled(fn, dfn, n, phase):
    phis = [phase + 2 * math.pi * k / n for k in range(n)]
    h = 2 * math.pi / n
    return hermite_closed([fn(p) for p in phis], [h * np.asarray(dfn(p)) for p in phis])


def circle(center, radius, n: int = 4, clockwise: bool = False) -> Curve:
    cx, cy = center
    c = _sampled(lambda p: (cx + radius * math.cos(p), cy + radius * math.sin(p)),
                 lambda p: (-radius * math.sin(p), radius * math.cos(p)), n, math.pi / 4)
    return Curve(c.segments, -1 if clockwise else 1)


def kidney_curve(n: int = 24) -> Curve:
    """Dimpled limacon ``r = 1 + 0.8 cos(phi)`` with a slight shear, dent facing -theta."""
    def xy(p):
        r = 1 + 0.8 * math.cos(p)
        x, y = r * math.cos(p), r * math.sin(p)
        return x - 0.12 * y, y

    def dxy(p):
        r, dr = 1 + 0.8 * math.cos(p), -0.8 * math.sin(p)
        dx = dr * math.cos(p) - r * math.sin(p)
        dy = dr * math.sin(p) + r * math.cos(p)
        return dx - 0.12 * dy, dy

    def fn(p):
        x, y = xy(p)
        return 0.5 + 0.2 * x, 0.2 * y

    def dfn(p):
        dx, dy = dxy(p)
        return 0.2 * dx, 0.2 * dy

    return _sampled(fn, dfn, n, math.pi / n)
