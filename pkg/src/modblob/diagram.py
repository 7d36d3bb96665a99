"""
Event-word encoding of doodles and blobs.

A doodle in the strip ``R x [0, 1]`` (or the cylinder ``R x S^1``) is swept
by the vertical fibers ``theta = const``.  Between two consecutive events the
curves cut every fiber in a stack of strands ordered by ``u``; the word
records what happens to that stack:

* ``Birth(i)``  -- two new strands appear at positions ``i, i+1`` (a fold of
  the curve whose tangency point faces ``-theta``),
* ``Death(i)``  -- strands ``i, i+1`` meet and vanish (fold facing ``+theta``),
* ``Cross(i)``  -- strands ``i, i+1`` swap (a transversal double point).

Orientation is carried by one bit per birth: ``orient_bit=True`` means the
lower newborn strand runs towards ``+theta``.  Every strand then has a
direction ``+1``/``-1`` (the sign of ``dtheta`` along the curve), constant
between events.

A blob is an oriented doodle together with its face multiplicities: the
bottom face has multiplicity 0 and crossing a strand upwards adds that
strand's direction.  With this convention the blob lies on the left of its
oriented boundary, so a counterclockwise circle encloses multiplicity 1.

Slabs are numbered ``0..n`` for a word with ``n`` events; slab ``k`` sits
just before event ``k``.  Face ``j`` of a slab is the interval between
strands ``j-1`` and ``j``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (BaseMismatch, InvalidDiagram, NotFillable, OrientationInconsistent,
                     UnorientedInput)

BIRTH, DEATH, CROSS = "birth", "death", "cross"
STRIP, CYCLE = "strip", "cycle"
SCHEMA = "modblob.diagram/1"

_CONSUMED = {BIRTH: 0, DEATH: 2, CROSS: 2}
_PRODUCED = {BIRTH: 2, DEATH: 0, CROSS: 2}


@dataclass(frozen=True)
class Event:
    kind: str
    slot: int
    # decorations only: ordering semantics live in the position inside the word
    theta: Fraction | None = field(default=None, compare=False)
    orient_bit: bool | None = None

    @property
    def consumed(self) -> int:
        return _CONSUMED[self.kind]

    @property
    def produced(self) -> int:
        return _PRODUCED[self.kind]

    def short(self) -> str:
        tag = {BIRTH: "B", DEATH: "D", CROSS: "X"}[self.kind]
        bit = "" if self.orient_bit is None else ("+" if self.orient_bit else "-")
        return f"{tag}{self.slot}{bit}"


def B(slot: int, up: bool | None = True, theta=None) -> Event:
    """Birth at ``slot``; ``up`` is the orientation bit (None for unoriented)."""
    return Event(BIRTH, slot, _frac(theta), up)


def D(slot: int, theta=None) -> Event:
    return Event(DEATH, slot, _frac(theta))


def X(slot: int, theta=None) -> Event:
    return Event(CROSS, slot, _frac(theta))


def _frac(value):
    if value is None or isinstance(value, Fraction):
        return value
    return Fraction(value)


@dataclass(frozen=True)
class BaseSpace:
    kind: str = STRIP
    wrap_width: int = 0
    wrap_dirs: tuple[int, ...] | None = None


STRIP_BASE = BaseSpace()


@dataclass(frozen=True)
class StrandDiagram:
    base: BaseSpace
    events: tuple[Event, ...]
    oriented: bool = False

    @classmethod
    def strip(cls, events: Iterable[Event], oriented: bool | None = None) -> "StrandDiagram":
        events = tuple(events)
        if oriented is None:
            oriented = all(e.orient_bit is not None for e in events if e.kind == BIRTH)
        if not oriented:
            events = tuple(replace(e, orient_bit=None) for e in events)
        return cls(STRIP_BASE, events, oriented)

    @classmethod
    def cycle(cls, events: Iterable[Event], wrap_dirs: Sequence[int] | None = None,
              wrap_width: int | None = None) -> "StrandDiagram":
        events = tuple(events)
        if wrap_dirs is not None:
            wrap_dirs = tuple(int(d) for d in wrap_dirs)
            wrap_width = len(wrap_dirs)
        oriented = wrap_dirs is not None and all(
            e.orient_bit is not None for e in events if e.kind == BIRTH)
        base = BaseSpace(CYCLE, wrap_width or 0, wrap_dirs if oriented else None)
        if not oriented:
            events = tuple(replace(e, orient_bit=None) for e in events)
        return cls(base, events, oriented)

    def __len__(self) -> int:
        return len(self.events)

    def word(self) -> str:
        return " ".join(e.short() for e in self.events)

    def with_events(self, events: Iterable[Event]) -> "StrandDiagram":
        return StrandDiagram(self.base, tuple(events), self.oriented)

    def unoriented(self) -> "StrandDiagram":
        base = replace(self.base, wrap_dirs=None)
        return StrandDiagram(base, tuple(replace(e, orient_bit=None) for e in self.events), False)


@dataclass(frozen=True)
class BlobDiagram:
    doodle: StrandDiagram
    faces: tuple[tuple[int, ...], ...]

    @classmethod
    def fill(cls, doodle: StrandDiagram) -> "BlobDiagram":
        return cls(doodle, face_multiplicities(doodle))

    @classmethod
    def strip(cls, events: Iterable[Event]) -> "BlobDiagram":
        return cls.fill(StrandDiagram.strip(events, oriented=True))

    @property
    def base(self) -> BaseSpace:
        return self.doodle.base

    @property
    def events(self) -> tuple[Event, ...]:
        return self.doodle.events

    @property
    def oriented(self) -> bool:
        return True

    def __len__(self) -> int:
        return len(self.doodle.events)

    def word(self) -> str:
        return self.doodle.word()

    @property
    def embedded(self) -> bool:
        return (all(e.kind != CROSS for e in self.events)
                and all(m in (0, 1) for slab in self.faces for m in slab))

    def with_events(self, events: Iterable[Event]) -> "BlobDiagram":
        return BlobDiagram.fill(self.doodle.with_events(events))


def as_doodle(diagram) -> StrandDiagram:
    return diagram.doodle if isinstance(diagram, BlobDiagram) else diagram


# -- replay -----------------------------------------------------------------

@dataclass(frozen=True)
class Violation:
    rule: str
    index: int | None
    message: str

    def __str__(self):
        where = "" if self.index is None else f" at event {self.index}"
        return f"[{self.rule}]{where}: {self.message}"


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def add(self, x):
        self.parent.setdefault(x, x)

    def find(self, x):
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass
class Replay:
    """Strand bookkeeping obtained by sweeping the word from left to right."""
    ids: list[tuple[int, ...]]            # strand (arc) ids per slab, bottom first
    dirs: list[tuple[int, ...]] | None    # directions per slab when oriented
    arc_dir: dict[int, int]
    components: list[tuple[int, ...]]     # arcs grouped into closed curves
    arc_events: dict[int, list[int]]      # event indices touching each arc
    violations: list[Violation]
    complete: bool

    @property
    def sizes(self) -> list[int]:
        return [len(s) for s in self.ids]

    @property
    def structural_ok(self) -> bool:
        return self.complete and not any(v.rule in _STRUCTURAL for v in self.violations)


_STRUCTURAL = {"slot-range", "final-stack", "strip-wrap", "unknown-kind", "wrap-width"}
_ORIENTATION = {"death-orientation", "wrap-orientation", "orient-missing", "orient-misplaced",
                "wrap-dirs"}


def replay(diagram) -> Replay:
    d = as_doodle(diagram)
    base, events, oriented = d.base, d.events, d.oriented
    violations: list[Violation] = []
    if base.kind == STRIP and base.wrap_width != 0:
        violations.append(Violation("strip-wrap", None, "strip diagrams have wrap_width 0"))
    if base.wrap_width < 0:
        violations.append(Violation("wrap-width", None, "negative wrap width"))
    width = base.wrap_width if base.kind == CYCLE else 0
    uf = _UnionFind()
    ids = list(range(max(width, 0)))
    for a in ids:
        uf.add(a)
    next_id = len(ids)
    arc_dir: dict[int, int] = {}
    arc_events: dict[int, list[int]] = {a: [] for a in ids}
    if oriented and base.kind == CYCLE:
        wd = base.wrap_dirs or ()
        if len(wd) != width or any(x not in (1, -1) for x in wd):
            violations.append(Violation("wrap-dirs", None, "wrap_dirs must list +1/-1 per wrap strand"))
            wd = tuple(1 for _ in range(width))
        arc_dir.update(zip(ids, wd))
    slabs = [tuple(ids)]
    complete = True
    last_theta, last_idx = None, None
    for idx, ev in enumerate(events):
        s = len(ids)
        if ev.theta is not None:
            if last_theta is not None and ev.theta <= last_theta:
                violations.append(Violation(
                    "theta-order", idx,
                    f"theta {ev.theta} does not exceed theta {last_theta} of event {last_idx}; "
                    "perturb so that each fiber carries a single event"))
            last_theta, last_idx = ev.theta, idx
        if base.kind == CYCLE and ev.theta is not None and ev.theta in (0, 1):
            violations.append(Violation("wrap-event", idx, "the wrap fiber must carry no event"))
        if ev.kind != BIRTH and ev.orient_bit is not None:
            violations.append(Violation("orient-misplaced", idx, "orient_bit only decorates births"))
        if ev.kind == BIRTH:
            if not 0 <= ev.slot <= s:
                violations.append(Violation("slot-range", idx, f"birth slot {ev.slot} outside 0..{s}"))
                complete = False
                break
            a, b = next_id, next_id + 1
            next_id += 2
            uf.add(a), uf.add(b), uf.union(a, b)
            arc_events[a], arc_events[b] = [idx], [idx]
            if oriented:
                bit = ev.orient_bit
                if bit is None:
                    violations.append(Violation("orient-missing", idx, "oriented birth lacks orient_bit"))
                    bit = True
                arc_dir[a], arc_dir[b] = (1, -1) if bit else (-1, 1)
            ids[ev.slot:ev.slot] = [a, b]
        elif ev.kind in (DEATH, CROSS):
            if not 0 <= ev.slot <= s - 2:
                violations.append(Violation("slot-range", idx,
                                            f"{ev.kind} slot {ev.slot} outside 0..{s - 2}"))
                complete = False
                break
            a, b = ids[ev.slot], ids[ev.slot + 1]
            arc_events[a].append(idx)
            arc_events[b].append(idx)
            if ev.kind == DEATH:
                uf.union(a, b)
                if oriented and arc_dir[a] == arc_dir[b]:
                    violations.append(Violation("death-orientation", idx,
                                                "death joins two strands of equal direction"))
                del ids[ev.slot:ev.slot + 2]
            else:
                ids[ev.slot], ids[ev.slot + 1] = b, a
        else:
            violations.append(Violation("unknown-kind", idx, f"unknown event kind {ev.kind!r}"))
            complete = False
            break
        slabs.append(tuple(ids))
    if complete:
        if len(ids) != width:
            violations.append(Violation("final-stack", len(events),
                                        f"final stack has {len(ids)} strands, expected {width}"))
        else:
            for j, a in enumerate(ids):
                uf.union(a, slabs[0][j])
                if oriented and arc_dir.get(a) != arc_dir.get(slabs[0][j]):
                    violations.append(Violation("wrap-orientation", len(events),
                                                f"strand {j} changes direction across the wrap"))
    groups: dict[int, list[int]] = {}
    for a in sorted(arc_events):
        groups.setdefault(uf.find(a), []).append(a)
    components = sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])
    dirs = None
    if oriented:
        dirs = [tuple(arc_dir[a] for a in slab) for slab in slabs]
    return Replay(slabs, dirs, arc_dir, components, arc_events, violations, complete)


def stack_sizes(events: Sequence[Event], start: int = 0) -> list[int]:
    """Slab sizes of a word assumed valid; cheap version of :func:`replay`."""
    sizes = [start]
    s = start
    for e in events:
        s += e.produced - e.consumed
        sizes.append(s)
    return sizes


def _faces_from_dirs(dirs: Sequence[int]) -> tuple[int, ...]:
    out = [0]
    for x in dirs:
        out.append(out[-1] + x)
    return tuple(out)


def _require_structure(diagram) -> Replay:
    rep = replay(diagram)
    if not rep.structural_ok:
        raise InvalidDiagram(v for v in rep.violations if v.rule in _STRUCTURAL)
    return rep


# -- operations ---------------------------------------------------------------

@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[Violation, ...]

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __iter__(self):
        return iter(self.violations)

    def __len__(self):
        return len(self.violations)


def validate(diagram) -> ValidationReport:
    """Collect every violated well-formedness rule (first failing event per rule)."""
    rep = replay(diagram)
    found: list[Violation] = []
    seen = set()
    for v in rep.violations:
        if v.rule not in seen:
            seen.add(v.rule)
            found.append(v)
    if isinstance(diagram, BlobDiagram) and rep.complete:
        if not diagram.doodle.oriented:
            found.append(Violation("blob-unoriented", None, "blob boundary carries no orientation"))
        elif rep.structural_ok:
            found.extend(_blob_violations(diagram, rep))
    return ValidationReport(tuple(found))


def _blob_violations(blob: BlobDiagram, rep: Replay) -> list[Violation]:
    out = []
    faces = [_faces_from_dirs(d) for d in rep.dirs]
    for k, slab in enumerate(faces):
        if slab[-1] != 0:
            out.append(Violation("top-face", max(k - 1, 0) if k else None,
                                 "face above all strands must have multiplicity 0"))
            break
    for k, slab in enumerate(faces):
        if min(slab) < 0:
            out.append(Violation("face-negative", k - 1 if k else None,
                                 f"slab {k} has a face of multiplicity {min(slab)}"))
            break
    for k, n in enumerate(rep.sizes):
        if n % 2:
            out.append(Violation("odd-fiber", k - 1 if k else None, f"slab {k} meets {n} strands"))
            break
    crosses = [k for k, e in enumerate(blob.events) if e.kind == CROSS]
    if len(crosses) % 2:
        # an immersed oriented surface has a boundary with an even number of double points
        out.append(Violation("odd-crossings", crosses[-1],
                             f"{len(crosses)} crossings; a blob boundary needs an even count"))
    if tuple(faces) != tuple(blob.faces):
        out.append(Violation("face-mismatch", None, "stored faces disagree with the orientation"))
    return out


@dataclass(frozen=True)
class Component:
    arcs: tuple[int, ...]
    events: tuple[int, ...]
    births: int
    deaths: int
    crossings: int   # double points met along the curve (a self-crossing counts twice)


def trace_components(diagram) -> list[Component]:
    d = as_doodle(diagram)
    rep = _require_structure(d)
    bad = [v for v in rep.violations if v.rule in {"death-orientation", "wrap-orientation"}]
    if bad:
        raise OrientationInconsistent(str(bad[0]))
    out = []
    for arcs in rep.components:
        evs = sorted({i for a in arcs for i in rep.arc_events[a]})
        kinds = [d.events[i].kind for i in evs]
        crossings = sum(1 for a in arcs for i in rep.arc_events[a] if d.events[i].kind == CROSS)
        out.append(Component(arcs, tuple(evs), kinds.count(BIRTH), kinds.count(DEATH), crossings))
    return out


def face_multiplicities(diagram) -> tuple[tuple[int, ...], ...]:
    """Face multiplicities per slab, bottom face first; raises NotFillable if any is negative."""
    d = as_doodle(diagram)
    if not d.oriented:
        raise UnorientedInput("face multiplicities need an oriented doodle")
    rep = _require_structure(d)
    bad = [v for v in rep.violations if v.rule in _ORIENTATION]
    if bad:
        raise OrientationInconsistent(str(bad[0]))
    faces = tuple(_faces_from_dirs(x) for x in rep.dirs)
    if any(slab[-1] != 0 for slab in faces):
        raise NotFillable(faces, "top face has nonzero multiplicity")
    if any(m < 0 for slab in faces for m in slab):
        raise NotFillable(faces)
    return faces


def is_fillable(diagram) -> bool:
    try:
        face_multiplicities(diagram)
    except NotFillable:
        return False
    return True


@dataclass(frozen=True)
class FiberPattern:
    entries: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(self.entries)


@dataclass(frozen=True)
class FiberReport:
    patterns: tuple[tuple[tuple[str, int], FiberPattern], ...]
    max_degree: int

    def degrees(self) -> list[int]:
        return [p.degree for _, p in self.patterns]


def fiber_patterns(diagram) -> FiberReport:
    """Tangency patterns along every slab fiber and every event fiber, in theta order."""
    d = as_doodle(diagram)
    sizes = _require_structure(d).sizes
    out = []
    for k, ev in enumerate(d.events):
        s = sizes[k]
        out.append((("slab", k), FiberPattern((1,) * s)))
        tail = s - ev.slot - (0 if ev.kind == BIRTH else 2)
        out.append((("event", k), FiberPattern((1,) * ev.slot + (2,) + (1,) * tail)))
    out.append((("slab", len(d.events)), FiberPattern((1,) * sizes[-1])))
    return FiberReport(tuple(out), max(p.degree for _, p in out))


@dataclass(frozen=True)
class Checkerboard:
    parity: tuple[tuple[int, ...], ...]   # [slab][face] -> 0/1
    conflict: bool                        # True when the top end gets colour 1


def checkerboard(diagram) -> Checkerboard:
    d = as_doodle(diagram)
    sizes = _require_structure(d).sizes
    parity = tuple(tuple(j % 2 for j in range(s + 1)) for s in sizes)
    return Checkerboard(parity, any(s % 2 for s in sizes))


def boundary(blob: BlobDiagram) -> StrandDiagram:
    return blob.doodle


# -- group operations -------------------------------------------------------------

def _same_kind(a, b):
    if isinstance(a, BlobDiagram) != isinstance(b, BlobDiagram):
        raise TypeError("cannot compose a blob with a bare doodle")


def _rewrap(template, doodle: StrandDiagram):
    return BlobDiagram.fill(doodle) if isinstance(template, BlobDiagram) else doodle


def _decorated(events) -> bool:
    return bool(events) and all(e.theta is not None for e in events)


def compose_uplus(a, b):
    """Place ``b`` to the right of ``a`` (strip only)."""
    _same_kind(a, b)
    da, db = as_doodle(a), as_doodle(b)
    if da.base.kind != STRIP or db.base.kind != STRIP:
        raise BaseMismatch("side-by-side composition exists on the strip only")
    _require_structure(da), _require_structure(db)
    oriented = da.oriented and db.oriented
    ea, eb = list(da.events), list(db.events)
    if all(_decorated(x) or not x for x in (ea, eb)):
        half = Fraction(1, 2)
        ea = [replace(e, theta=e.theta * half) for e in ea]
        eb = [replace(e, theta=half + e.theta * half) for e in eb]
    else:
        ea = [replace(e, theta=None) for e in ea]
        eb = [replace(e, theta=None) for e in eb]
    return _rewrap(a, StrandDiagram.strip(ea + eb, oriented=oriented))


def compose_star(a, b):
    """Stack ``b`` above ``a``; events interleave by their theta decorations."""
    _same_kind(a, b)
    da, db = as_doodle(a), as_doodle(b)
    if da.base.kind != db.base.kind:
        raise BaseMismatch("cannot stack diagrams over different bases")
    _require_structure(da), _require_structure(db)
    oriented = da.oriented and db.oriented
    ea, eb = da.events, db.events
    if _decorated(ea) and _decorated(eb):
        order, i, j = [], 0, 0
        while i < len(ea) or j < len(eb):
            if j == len(eb) or (i < len(ea) and ea[i].theta <= eb[j].theta):
                order.append(("a", i))
                i += 1
            else:
                order.append(("b", j))
                j += 1
    else:
        order = [("a", i) for i in range(len(ea))] + [("b", j) for j in range(len(eb))]
    size_a = da.base.wrap_width
    merged = []
    for side, i in order:
        if side == "a":
            e = ea[i]
            size_a += e.produced - e.consumed
            merged.append(e)
        else:
            e = eb[i]
            merged.append(replace(e, slot=e.slot + size_a))
    thetas = [e.theta for e in merged]
    if None in thetas or any(x >= y for x, y in zip(thetas, thetas[1:])):
        merged = [replace(e, theta=None) for e in merged]
    if not oriented:
        merged = [replace(e, orient_bit=None) for e in merged]
    if da.base.kind == STRIP:
        out = StrandDiagram.strip(merged, oriented=oriented)
    else:
        wd = (da.base.wrap_dirs or ()) + (db.base.wrap_dirs or ()) if oriented else None
        base = BaseSpace(CYCLE, da.base.wrap_width + db.base.wrap_width, wd)
        out = StrandDiagram(base, tuple(merged), oriented)
    return _rewrap(a, out)


def negate(a):
    """Mirror in the middle fiber ``theta = 1/2``.

    The word is reversed with births and deaths exchanged.  Positional strand
    directions are kept, which is what keeps every face multiplicity in place
    (the curve orientation is reversed together with the reflection).
    """
    d = as_doodle(a)
    if d.base.kind != STRIP:
        raise BaseMismatch("negation is the flip of the strip")
    rep = _require_structure(d)
    out = []
    n = len(d.events)
    for k in range(n - 1, -1, -1):
        e = d.events[k]
        theta = None if e.theta is None else 1 - e.theta
        if e.kind == BIRTH:
            out.append(Event(DEATH, e.slot, theta))
        elif e.kind == DEATH:
            bit = (rep.dirs[k][e.slot] == 1) if d.oriented else None
            out.append(Event(BIRTH, e.slot, theta, bit))
        else:
            out.append(Event(CROSS, e.slot, theta))
    return _rewrap(a, StrandDiagram.strip(out, oriented=d.oriented))


EMPTY = StrandDiagram.strip(())


# -- JSON ---------------------------------------------------------------------------

def to_json(diagram) -> dict:
    d = as_doodle(diagram)
    events = []
    for e in d.events:
        item = {"kind": e.kind, "slot": e.slot}
        if e.theta is not None:
            item["theta"] = str(e.theta)
        if e.orient_bit is not None:
            item["orient_bit"] = e.orient_bit
        events.append(item)
    doc = {"schema": SCHEMA, "base": d.base.kind, "wrap_width": d.base.wrap_width,
           "oriented": d.oriented, "events": events,
           "type": "blob" if isinstance(diagram, BlobDiagram) else "doodle"}
    if d.base.wrap_dirs is not None:
        doc["wrap_dirs"] = list(d.base.wrap_dirs)
    if isinstance(diagram, BlobDiagram):
        doc["faces"] = [list(slab) for slab in diagram.faces]
    return doc


def from_json(doc: dict):
    if not isinstance(doc, dict) or "events" not in doc:
        raise ValueError("diagram document needs an 'events' list")
    events = []
    for item in doc["events"]:
        kind = item["kind"]
        if kind not in _CONSUMED:
            raise ValueError(f"unknown event kind {kind!r}")
        theta = item.get("theta")
        events.append(Event(kind, int(item["slot"]), None if theta is None else Fraction(theta),
                            item.get("orient_bit")))
    kind = doc.get("base", STRIP)
    if kind not in (STRIP, CYCLE):
        raise ValueError(f"unknown base {kind!r}")
    oriented = doc.get("oriented")
    if oriented is None:
        oriented = all(e.orient_bit is not None for e in events if e.kind == BIRTH)
    wrap_dirs = doc.get("wrap_dirs")
    base = BaseSpace(kind, int(doc.get("wrap_width", 0)),
                     tuple(wrap_dirs) if wrap_dirs is not None else None)
    doodle = StrandDiagram(base, tuple(events), bool(oriented))
    if doc.get("type") == "blob" or "faces" in doc:
        faces = doc.get("faces")
        if faces is None:
            return BlobDiagram.fill(doodle)
        return BlobDiagram(doodle, tuple(tuple(int(m) for m in slab) for slab in faces))
    return doodle


def dumps(diagram) -> str:
    return json.dumps(to_json(diagram), sort_keys=True, indent=2) + "\n"


def loads(text: str):
    return from_json(json.loads(text))
