"""Shared test utilities: random word generators, geometric oracles, criterion bookkeeping."""

from __future__ import annotations

import math
import random
import time
from contextlib import contextmanager
from fractions import Fraction

from modblob import B, D, X, BlobDiagram, StrandDiagram

RESULTS: dict[int, tuple[bool, str]] = {}


@contextmanager
def criterion(number: int, title: str, limit: float):
    """Time a block, record PASS/FAIL and print one line for it."""
    t0 = time.perf_counter()
    ok, note = False, ""
    try:
        yield
        elapsed = time.perf_counter() - t0
        ok = elapsed < limit
        note = f"{elapsed:.2f}s (limit {limit:g}s)"
        assert ok, f"criterion {number} took {elapsed:.2f}s, limit {limit}s"
    except AssertionError as exc:
        if not note:
            note = f"assertion: {exc}"
        raise
    except Exception as exc:
        note = f"error: {type(exc).__name__}: {exc}"
        raise
    finally:
        RESULTS[number] = (ok, f"{title}: {note}")
        print(f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}: {note}")


# -- random words -------------------------------------------------------------------

def random_blob_events(rng: random.Random, max_events: int = 12, crosses: bool = True,
                       embedded: bool = False):
    """A fillable oriented word with an even crossing count, built directly (no moves)."""
    while True:
        events, dirs = [], []
        while True:
            faces = [0]
            for d in dirs:
                faces.append(faces[-1] + d)
            opts = []
            closing = len(events) + len(dirs) // 2 >= max_events
            if not closing:
                for i in range(len(dirs) + 1):
                    for d in (1, -1):
                        m = faces[i] + d
                        if m >= 0 and (not embedded or m <= 1):
                            opts.append(B(i, d == 1))
                if crosses and not embedded:
                    for i in range(len(dirs) - 1):
                        if faces[i] + dirs[i + 1] >= 0:
                            opts.append(X(i))
            for i in range(len(dirs) - 1):
                if dirs[i] != dirs[i + 1]:
                    opts.append(D(i))
            if not opts:
                break
            if not dirs and events and (closing or rng.random() < 0.3):
                break
            e = rng.choice(opts)
            events.append(e)
            i = e.slot
            if e.kind == "birth":
                d = 1 if e.orient_bit else -1
                dirs[i:i] = [d, -d]
            elif e.kind == "death":
                del dirs[i:i + 2]
            else:
                dirs[i], dirs[i + 1] = dirs[i + 1], dirs[i]
        if sum(e.kind == "cross" for e in events) % 2 == 0:
            return events


def random_blob(rng, max_events=12, **kw) -> BlobDiagram:
    return BlobDiagram.strip(random_blob_events(rng, max_events, **kw))


def random_doodle(rng: random.Random, max_events: int = 10) -> StrandDiagram:
    """Oriented doodle on the strip: any births, crossings anywhere, deaths of opposite pairs."""
    events, dirs = [], []
    while True:
        closing = len(events) + len(dirs) // 2 >= max_events
        opts = []
        if not closing:
            opts += [B(i, rng.random() < 0.5) for i in range(len(dirs) + 1)]
            opts += [X(i) for i in range(len(dirs) - 1)]
        opts += [D(i) for i in range(len(dirs) - 1) if dirs[i] != dirs[i + 1]]
        if not dirs and (closing or (events and rng.random() < 0.3)):
            break
        e = rng.choice(opts)
        events.append(e)
        i = e.slot
        if e.kind == "birth":
            d = 1 if e.orient_bit else -1
            dirs[i:i] = [d, -d]
        elif e.kind == "death":
            del dirs[i:i + 2]
        else:
            dirs[i], dirs[i + 1] = dirs[i + 1], dirs[i]
    return StrandDiagram.strip(events, oriented=True)


# -- geometric oracle -----------------------------------------------------------------
# The word is drawn as a polygon: slab k spans x in [3k, 3k+1], event k sits at x = 3k+2.
# Everything below is computed from that polygon, without the library's replay.

def _ys(s):
    return [Fraction(2 * j - (s - 1), 2) for j in range(s)]


def polygon(events):
    """Directed segments ((x0, y0), (x1, y1)) of the drawn curve, plus event points."""
    segs, points = [], []
    dirs: list[int] = []

    def add(p, q, d):
        segs.append((p, q) if d == 1 else (q, p))

    for k, e in enumerate(list(events) + [None]):
        ys = _ys(len(dirs))
        x0, x1 = 3 * k, 3 * k + 1
        for y, d in zip(ys, dirs):
            add((x0, y), (x1, y), d)
        if e is None:
            break
        xl, xe, xr = 3 * k + 1, 3 * k + 2, 3 * k + 3
        i = e.slot
        new = list(dirs)
        if e.kind == "birth":
            d = 1 if e.orient_bit else -1
            new[i:i] = [d, -d]
        elif e.kind == "death":
            del new[i:i + 2]
        else:
            new[i], new[i + 1] = new[i + 1], new[i]
        yl, yr = ys, _ys(len(new))
        if e.kind == "birth":
            pos = [j if j < i else j + 2 for j in range(len(dirs))]
            ym = (yr[i] + yr[i + 1]) / 2
            add((xe, ym), (xr, yr[i]), new[i])
            add((xe, ym), (xr, yr[i + 1]), new[i + 1])
            points.append((xe, ym))
        elif e.kind == "death":
            pos = [j if j < i else (None if j <= i + 1 else j - 2) for j in range(len(dirs))]
            ym = (yl[i] + yl[i + 1]) / 2
            add((xl, yl[i]), (xe, ym), dirs[i])
            add((xl, yl[i + 1]), (xe, ym), dirs[i + 1])
            points.append((xe, ym))
        else:
            pos = list(range(len(dirs)))
            pos[i], pos[i + 1] = i + 1, i
            points.append((xe, (yl[i] + yl[i + 1]) / 2))
        for j, d in enumerate(dirs):
            if pos[j] is not None:
                add((xl, yl[j]), (xr, yr[pos[j]]), d)
        dirs = new
    return segs, points


def winding(segs, p) -> int:
    px, py = float(p[0]), float(p[1])
    total = 0.0
    for (x0, y0), (x1, y1) in segs:
        a0 = math.atan2(float(y0) - py, float(x0) - px)
        a1 = math.atan2(float(y1) - py, float(x1) - px)
        da = a1 - a0
        while da > math.pi:
            da -= 2 * math.pi
        while da < -math.pi:
            da += 2 * math.pi
        total += da
    return round(total / (2 * math.pi))


def cycles(segs):
    """Chain directed segments into closed loops."""
    out_of = {}
    for s in segs:
        out_of.setdefault(s[0], []).append(s)
    used, loops = set(), []
    for s in segs:
        if s in used:
            continue
        loop, cur = [], s
        while cur not in used:
            used.add(cur)
            loop.append(cur)
            nxt = [t for t in out_of[cur[1]] if t not in used]
            if not nxt:
                break
            # at a crossing two segments leave the same point only if the curve is degenerate;
            # choose the one continuing straight when ambiguous
            cur = nxt[0]
        loops.append(loop)
    return loops


def turning_number(loop) -> float:
    total = 0.0
    n = len(loop)
    for a, b in zip(loop, loop[1:] + loop[:1]):
        ux, uy = float(a[1][0] - a[0][0]), float(a[1][1] - a[0][1])
        vx, vy = float(b[1][0] - b[0][0]), float(b[1][1] - b[0][1])
        total += math.atan2(ux * vy - uy * vx, ux * vx + uy * vy)
    return total / (2 * math.pi) if n else 0.0


def oracle_faces(events):
    """Face multiplicities from winding numbers of sample points in each slab."""
    segs, _ = polygon(events)
    out, size = [], 0
    for k, e in enumerate(list(events) + [None]):
        ys = _ys(size)
        bounds = [ys[0] - 1] + ys + [ys[-1] + 1] if ys else [Fraction(-1), Fraction(1)]
        xm = Fraction(6 * k + 1, 2)
        if ys:
            samples = [(xm, (bounds[j] + bounds[j + 1]) / 2) for j in range(len(bounds) - 1)]
        else:
            samples = [(xm, Fraction(0))]
        out.append(tuple(winding(segs, p) for p in samples))
        if e is not None:
            size += e.produced - e.consumed
    return tuple(out)


def oracle_components(events) -> int:
    segs, _ = polygon(events)
    parent = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            x = parent[x]
        return x

    for p, q in segs:
        parent[find(p)] = find(q)
    return len({find(p) for s in segs for p in s})


def oracle_J_embedded(events) -> int:
    """Signed count of folds whose point is inside the filled region (embedded blobs)."""
    segs, points = polygon(events)
    total = 0
    for e, (x, y) in zip(events, points):
        if e.kind == "cross":
            continue
        inside = winding(segs, (x, y - Fraction(1, 4))) > 0
        if inside:
            total += 1 if e.kind == "death" else -1
    return total


def oracle_turning_total(events) -> float:
    segs, _ = polygon(events)
    return sum(turning_number(loop) for loop in cycles(segs))
