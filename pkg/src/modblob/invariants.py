"""
Invariants of blobs and oriented doodles read off their event words.

Tangencies: a birth or death with an odd number of strands below it is
*concave* (the fold points into the filled region).  Concave deaths carry
polarity ``+`` and concave births polarity ``-``; ``J`` is their signed count
and ``c_plus`` the unsigned one.

Crossings come in four types I-IV.  For blobs the type is the position of the
sector of highest multiplicity (above, after, below, before).  For oriented
doodles it is read from the two arc directions.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import asdict, dataclass, field
from fractions import Fraction

from .diagram import (BIRTH, CROSS, DEATH, STRIP, BlobDiagram, _UnionFind,
                      _require_structure, as_doodle, fiber_patterns, replay, trace_components)
from .errors import BaseMismatch, NotEmbedded, UnorientedInput

PLUS, MINUS = "+", "-"
TYPES = ("I", "II", "III", "IV")


@dataclass(frozen=True)
class TangencyRecord:
    event_index: int
    kind: str
    below_count: int
    concave: bool
    polarity: str | None


def classify_tangencies(diagram) -> list[TangencyRecord]:
    d = as_doodle(diagram)
    _require_structure(d)
    out = []
    for k, e in enumerate(d.events):
        if e.kind == CROSS:
            continue
        concave = e.slot % 2 == 1
        pol = None
        if concave:
            pol = PLUS if e.kind == DEATH else MINUS
        out.append(TangencyRecord(k, e.kind, e.slot, concave, pol))
    return out


def invariant_J(diagram) -> int:
    c = Counter(r.polarity for r in classify_tangencies(diagram))
    return c[PLUS] - c[MINUS]


def complexity(diagram) -> int:
    c_plus = sum(1 for r in classify_tangencies(diagram) if r.concave)
    assert c_plus >= abs(invariant_J(diagram))
    return c_plus


@dataclass(frozen=True)
class CrossingRecord:
    event_index: int
    type: str
    sector_data: tuple


# (d_up, d_down) -> type
_BLOB_RULE = {(1, 1): "I", (-1, -1): "III", (-1, 1): "II", (1, -1): "IV"}
_DOODLE_RULE = {(1, -1): "I", (-1, 1): "III", (1, 1): "II", (-1, -1): "IV"}


def classify_crossings_blob(blob: BlobDiagram) -> list[CrossingRecord]:
    d = blob.doodle
    rep = _require_structure(d)
    out = []
    for k, e in enumerate(d.events):
        if e.kind != CROSS:
            continue
        i = e.slot
        p, q = rep.dirs[k][i], rep.dirs[k][i + 1]
        m = blob.faces[k][i]
        # below, before, after, above
        sectors = (m, m + p, m + q, m + p + q)
        top = max(sectors)
        where = ("III", "IV", "II", "I")[sectors.index(top)]
        assert where == _BLOB_RULE[(p, q)]
        out.append(CrossingRecord(k, where, sectors))
    return out


def classify_crossings_doodle(doodle) -> list[CrossingRecord]:
    d = as_doodle(doodle)
    if not d.oriented:
        raise UnorientedInput("crossing types need an orientation")
    rep = _require_structure(d)
    out = []
    for k, e in enumerate(d.events):
        if e.kind == CROSS:
            pair = (rep.dirs[k][e.slot], rep.dirs[k][e.slot + 1])
            out.append(CrossingRecord(k, _DOODLE_RULE[pair], pair))
    return out


def classify_crossings(diagram) -> list[CrossingRecord]:
    if isinstance(diagram, BlobDiagram):
        return classify_crossings_blob(diagram)
    return classify_crossings_doodle(diagram)


def rho(records) -> tuple[int, int, int, int]:
    c = Counter(r.type for r in records)
    return tuple(c[t] for t in TYPES)


def iota_rho(diagram) -> tuple[int, int, int]:
    r1, r2, r3, r4 = rho(classify_crossings(diagram))
    return (r1 % 2, r3 % 2, r2 - r4)


def in_M(triple) -> bool:
    """Membership in the index-2 subgroup generated by (1,0,1), (0,1,1), (0,0,2)."""
    a, b, c = triple
    return (a + b + c) % 2 == 0


def rotation_number(diagram) -> Fraction:
    """Total turning number of an oriented doodle, in full turns.

    Each fold turns the tangent by half a turn; the sign is read from the
    direction of the lower strand at the fold.
    """
    d = as_doodle(diagram)
    if not d.oriented:
        raise UnorientedInput("turning number needs an orientation")
    rep = _require_structure(d)
    total = Fraction(0)
    for k, e in enumerate(d.events):
        if e.kind == BIRTH:
            lower = rep.dirs[k + 1][e.slot]
        elif e.kind == DEATH:
            lower = rep.dirs[k][e.slot]
        else:
            continue
        total += Fraction(lower, 2)
    return total


@dataclass(frozen=True)
class ParityReport:
    crossing_count: int
    fiber_degrees_even: bool
    closed: bool

    @property
    def ok(self) -> bool:
        return self.crossing_count % 2 == 0 and self.fiber_degrees_even and self.closed


def parity_audit(diagram) -> ParityReport:
    d = as_doodle(diagram)
    rep = replay(d)
    crossings = sum(1 for e in d.events if e.kind == CROSS)
    closed = rep.complete and not any(v.rule == "final-stack" for v in rep.violations)
    even = all(s % 2 == 0 for s in rep.sizes)
    return ParityReport(crossings, even, closed)


@dataclass(frozen=True)
class InvariantReport:
    J: int
    rho: tuple[int, int, int, int]
    iota_rho: tuple[int, int, int]
    c_plus: int
    crossing_count_parity: int
    max_degree: int
    mode: str = "blob"

    def to_json(self) -> dict:
        doc = asdict(self)
        doc["rho"] = list(self.rho)
        doc["iota_rho"] = list(self.iota_rho)
        return doc

    def table(self) -> str:
        rows = [("J", self.J)]
        rows += [(f"rho_{t}", v) for t, v in zip(TYPES, self.rho)]
        rows += [("iota_rho", "(%d, %d, %d)" % self.iota_rho), ("c_plus", self.c_plus),
                 ("d", self.max_degree), ("parity", self.crossing_count_parity)]
        return "\n".join(f"{k:<9} {v}" for k, v in rows)


def invariant_report(diagram) -> InvariantReport:
    records = classify_crossings(diagram)
    r = rho(records)
    return InvariantReport(
        J=invariant_J(diagram),
        rho=r,
        iota_rho=(r[0] % 2, r[2] % 2, r[1] - r[3]),
        c_plus=complexity(diagram),
        crossing_count_parity=len(records) % 2,
        max_degree=fiber_patterns(diagram).max_degree,
        mode="blob" if isinstance(diagram, BlobDiagram) else "doodle",
    )


# -- topology of embedded blobs --------------------------------------------------

@dataclass(frozen=True)
class RegionComponent:
    euler: int
    boundary_circles: int
    genus: int


@dataclass(frozen=True)
class TopologyReport:
    components: tuple[RegionComponent, ...]
    euler: int
    boundary_circles: int
    counts: dict = field(compare=False)   # V, E, F of the cell complex

    @property
    def genera(self) -> list[int]:
        return [c.genus for c in self.components]


def _fiber_intervals(e, s):
    """For an event fiber: per interval t (below point t) the pre and post face index.

    Points on the fiber are the passing strands plus the event point itself.
    """
    i = e.slot
    npts = s + 1 if e.kind == BIRTH else s - 1
    out = []
    for t in range(npts + 1):
        if t <= i:
            out.append((t, t))
        elif e.kind == BIRTH:
            out.append((t - 1, t + 1) if t > i + 1 else (i, i + 2))
        else:
            out.append((t + 1, t - 1))
    return npts, out


def topology_report(blob: BlobDiagram) -> TopologyReport:
    if not blob.embedded:
        raise NotEmbedded("topology report is defined for embedded blobs")
    d = blob.doodle
    if d.base.kind != STRIP:
        raise BaseMismatch("topology report is implemented on the strip")
    rep = _require_structure(d)
    faces = blob.faces
    sizes = rep.sizes
    uf = _UnionFind()
    cells = [(k, j) for k, slab in enumerate(faces) for j, m in enumerate(slab) if m == 1]
    for c in cells:
        uf.add(c)
    owner_v, owner_e = [], []   # owning cell of each vertex / edge
    for k, s in enumerate(sizes):
        for j in range(s):
            owner_e.append((k, j) if faces[k][j] == 1 else (k, j + 1))
    for k, e in enumerate(d.events):
        s = sizes[k]
        npts, intervals = _fiber_intervals(e, s)
        for t in range(1, npts):
            pre, post = intervals[t]
            if faces[k][pre] == 1:
                uf.union((k, pre), (k + 1, post))
                owner_e.append((k, pre))
        i = e.slot
        for t in range(npts):
            if t == i:
                # the fold point touches the cell between the two folding strands
                if e.kind == BIRTH:
                    owner_v.append((k, i) if faces[k][i] == 1 else (k + 1, i + 1))
                else:
                    owner_v.append((k + 1, i) if faces[k + 1][i] == 1 else (k, i + 1))
                continue
            # a passing strand point sits between intervals t and t+1
            lo, hi = intervals[t][0], intervals[t + 1][0]
            owner_v.append((k, lo) if faces[k][lo] == 1 else (k, hi))
    V, E, F = len(owner_v), len(owner_e), len(cells)
    roots = sorted({uf.find(c) for c in cells})
    chi = Counter()
    for c in owner_v:
        chi[uf.find(c)] += 1
    for c in owner_e:
        chi[uf.find(c)] -= 1
    for c in cells:
        chi[uf.find(c)] += 1
    circles = Counter()
    for comp in trace_components(d):
        a = comp.arcs[0]
        k = next(k for k, slab in enumerate(rep.ids) if a in slab)
        j = rep.ids[k].index(a)
        cell = (k, j) if faces[k][j] == 1 else (k, j + 1)
        circles[uf.find(cell)] += 1
    comps = []
    for r in roots:
        g2 = 2 - chi[r] - circles[r]
        comps.append(RegionComponent(chi[r], circles[r], g2 // 2))
    return TopologyReport(tuple(comps), V - E + F, sum(circles.values()),
                          {"V": V, "E": E, "F": F})
