"""
Local rewrites of event words and the searches built on them.

Moves act on two consecutive events (or insert two):

    M1  slide: swap two events whose strand supports are disjoint
    M2  insert / delete ``[Birth(i), Death(i)]``        (small disk or hole)
    M4  insert / delete ``[Death(i), Birth(i)]``        (saddle)
    M6  insert / delete ``[Cross(i), Cross(i)]``        (crossing pair)
    M5  macro: delete / insert two adjacent kidneys of opposite polarity

Index remap for M1 with ``e1`` at slot ``i1`` consuming ``a1`` and producing
``b1`` strands, followed by ``e2`` at ``i2`` (``a2``, ``b2``):

    below:  i2 + a2 <= i1   ->  [e2 @ i2,                e1 @ i1 + b2 - a2]
    above:  i2 >= i1 + b1   ->  [e2 @ i2 - b1 + a1,      e1 @ i1]

Both apply only to ``Death(i), Birth(i)``; the variant is part of the move.

Internally words are tuples of ``(kind, slot, bit)`` with kind in ``"BDX"``.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

from .diagram import (BIRTH, CROSS, DEATH, STRIP, BlobDiagram, Event, StrandDiagram, as_doodle,
                      from_json, to_json)
from .errors import (BaseMismatch, DepthExceeded, IllegalMove, NormalizationStuck, NotEmbedded)
from .invariants import invariant_J, iota_rho

M1, M2, M4, M5, M6 = "M1", "M2", "M4", "M5", "M6"
FORWARD, INVERSE = "forward", "inverse"

_A = {"B": 0, "D": 2, "X": 2}
_B = {"B": 2, "D": 0, "X": 2}
_TO_KIND = {"B": BIRTH, "D": DEATH, "X": CROSS}
_FROM_KIND = {v: k for k, v in _TO_KIND.items()}


@dataclass(frozen=True)
class Move:
    kind: str
    position: int
    slot: int
    direction: str = FORWARD
    variant: object = None   # M1: "below"/"above"; M2 insert: orient bit; M5: "+-"/"-+"

    def to_json(self) -> dict:
        return {"kind": self.kind, "position": self.position, "slot": self.slot,
                "direction": self.direction, "variant": self.variant}

    @classmethod
    def from_json(cls, doc) -> "Move":
        return cls(doc["kind"], doc["position"], doc["slot"], doc["direction"], doc.get("variant"))


# -- raw word engine -------------------------------------------------------------

def _raw(diagram):
    d = as_doodle(diagram)
    word = tuple((_FROM_KIND[e.kind], e.slot, e.orient_bit if e.kind == BIRTH else None)
                 for e in d.events)
    if isinstance(diagram, BlobDiagram):
        mode = "blob"
    else:
        mode = "oriented" if d.oriented else "plain"
    if mode == "plain":
        start = (0,) * d.base.wrap_width
    else:
        start = tuple(d.base.wrap_dirs or ())
    return word, start, mode


def _cook(template, word):
    d = as_doodle(template)
    events = tuple(Event(_TO_KIND[k], s, None, b) for k, s, b in word)
    doodle = StrandDiagram(d.base, events, d.oriented)
    return BlobDiagram.fill(doodle) if isinstance(template, BlobDiagram) else doodle


def _slabs(word, start, mode):
    cur = list(start)
    out = [tuple(cur)]
    for k, s, b in word:
        if k == "B":
            cur[s:s] = [0, 0] if mode == "plain" else ([1, -1] if b else [-1, 1])
        elif k == "D":
            del cur[s:s + 2]
        else:
            cur[s], cur[s + 1] = cur[s + 1], cur[s]
        out.append(tuple(cur))
    return out


def _faces(dirs):
    out = [0]
    for x in dirs:
        out.append(out[-1] + x)
    return out


def _step(dirs, ev, mode):
    k, s, b = ev
    cur = list(dirs)
    if k == "B":
        cur[s:s] = [0, 0] if mode == "plain" else ([1, -1] if b else [-1, 1])
    elif k == "D":
        del cur[s:s + 2]
    else:
        cur[s], cur[s + 1] = cur[s + 1], cur[s]
    return cur


def _m1_variants(e1, e2):
    (k1, i1, _), (k2, i2, _) = e1, e2
    a1, b1, a2, b2 = _A[k1], _B[k1], _A[k2], _B[k2]
    out = []
    if i2 + a2 <= i1:
        out.append(("below", ((k2, i2, e2[2]), (k1, i1 + b2 - a2, e1[2]))))
    if i2 >= i1 + b1:
        out.append(("above", ((k2, i2 - b1 + a1, e2[2]), (k1, i1, e1[2]))))
    return out


def _ok_slab(dirs, mode, embedded):
    if mode != "blob":
        return True
    f = _faces(dirs)
    if min(f) < 0:
        return False
    return not embedded or max(f) <= 1


def _insertions(S, p, mode, kinds, embedded):
    """Legal pair insertions in front of event ``p`` whose pre-slab is ``S``."""
    F = _faces(S) if mode == "blob" else None
    s = len(S)
    out = []
    if M2 in kinds:
        for i in range(s + 1):
            bits = (None,) if mode == "plain" else (True, False)
            for bit in bits:
                if mode == "blob":
                    m = F[i] + (1 if bit else -1)
                    if m < 0 or (embedded and m > 1):
                        continue
                out.append((Move(M2, p, i, FORWARD, bit), (("B", i, bit), ("D", i, None))))
    if M4 in kinds:
        for i in range(s - 1):
            if mode != "plain" and S[i] == S[i + 1]:
                continue
            bit = None if mode == "plain" else S[i] == 1
            out.append((Move(M4, p, i, FORWARD), (("D", i, None), ("B", i, bit))))
    if M6 in kinds and not embedded:
        for i in range(s - 1):
            if mode == "blob" and F[i] + S[i + 1] < 0:
                continue
            out.append((Move(M6, p, i, FORWARD), (("X", i, None), ("X", i, None))))
    return out


def _patches(word, start, mode, kinds=(M1, M2, M4, M6), insertions=True, embedded=False,
             max_events=None):
    """All legal moves in deterministic order, each with a patch ``(p, q, ins)``.

    The rewritten word is ``word[:p] + ins + word[q:]``.
    """
    slabs = _slabs(word, start, mode)
    n = len(word)
    grow = insertions and (max_events is None or n + 2 <= max_events)
    out = []
    for p in range(n + 1):
        S = slabs[p]
        if p < n - 1:
            e1, e2 = word[p], word[p + 1]
            if M1 in kinds:
                for variant, pair in _m1_variants(e1, e2):
                    if mode == "blob" and not _ok_slab(_step(S, pair[0], mode), mode, embedded):
                        continue
                    out.append((Move(M1, p, e1[1], FORWARD, variant), (p, p + 2, pair)))
            if e1[1] == e2[1]:
                i = e1[1]
                if M2 in kinds and e1[0] == "B" and e2[0] == "D":
                    out.append((Move(M2, p, i, INVERSE), (p, p + 2, ())))
                if M4 in kinds and e1[0] == "D" and e2[0] == "B":
                    if mode == "plain" or e2[2] == (S[i] == 1):
                        out.append((Move(M4, p, i, INVERSE), (p, p + 2, ())))
                if M6 in kinds and e1[0] == "X" and e2[0] == "X" and not embedded:
                    out.append((Move(M6, p, i, INVERSE), (p, p + 2, ())))
        if grow:
            out += [(m, (p, p, ins)) for m, ins in _insertions(S, p, mode, kinds, embedded)]
    return out


def _patch(word, patch):
    p, q, ins = patch
    return word[:p] + ins + word[q:]


def _sites(word, start, mode, kinds=(M1, M2, M4, M6), insertions=True, embedded=False,
           max_events=None):
    """All legal moves in deterministic order, paired with the resulting words."""
    return [(m, _patch(word, pt))
            for m, pt in _patches(word, start, mode, kinds, insertions, embedded, max_events)]


def _apply_raw(word, start, mode, move: Move):
    p, i = move.position, move.slot
    if move.kind == M5:
        return _apply_m5(word, start, mode, move)
    if move.direction == FORWARD and move.kind != M1:
        if not 0 <= p <= len(word):
            raise IllegalMove(f"position {p} out of range")
        S = _slabs(word[:p], start, mode)[-1]
        for m, ins in _insertions(S, p, mode, (move.kind,), False):
            if m.slot == i and m.variant == move.variant:
                return word[:p] + ins + word[p:]
        raise IllegalMove(f"no legal {move.kind} insertion at position {p}, slot {i}"
                          f" (stack {len(S)})")
    if not 0 <= p < len(word) - 1:
        raise IllegalMove(f"position {p} out of range")
    window = word[p:p + 2]
    local_start = _slabs(word[:p], start, mode)[-1]
    for m, w in _sites(window, local_start, mode, kinds=(move.kind,), insertions=False):
        if m.position == 0 and m.direction == move.direction and m.variant == move.variant \
                and m.slot == i:
            return word[:p] + w + word[p + 2:]
    raise IllegalMove(f"{move.kind} {move.direction} does not apply at position {p}")


# -- kidneys and the M5 macro -------------------------------------------------------

K_PLUS = (("B", 0, True), ("B", 2, True), ("D", 1, None), ("D", 0, None))
K_MINUS = (("B", 0, True), ("B", 1, False), ("D", 2, None), ("D", 0, None))


def _shift(word, o):
    return tuple((k, s + o, b) for k, s, b in word)


def _m5_window(variant, o):
    first, second = (K_PLUS, K_MINUS) if variant == "+-" else (K_MINUS, K_PLUS)
    return _shift(first + second, o)


def _apply_m5(word, start, mode, move):
    p, o = move.position, move.slot
    slabs = _slabs(word[:p], start, mode)
    S = slabs[-1]
    if o % 2 or o > len(S) or (mode != "plain" and _faces(S)[o] != 0):
        raise IllegalMove("kidney pair must sit at an even slot inside a 0-face")
    win = _m5_window(move.variant, o)
    if move.direction == INVERSE:
        if word[p:p + 8] != win:
            raise IllegalMove(f"no {move.variant} kidney pair at position {p}")
        return word[:p] + word[p + 8:]
    return word[:p] + win + word[p:]


@lru_cache(maxsize=None)
def m5_expansion(variant: str) -> tuple[Move, ...]:
    """Elementary moves deleting a standalone kidney pair (shortest found by BFS)."""
    start = _m5_window(variant, 0)
    parent = {start: None}
    queue = deque([start])
    while queue:
        w = queue.popleft()
        if not w:
            break
        for m, nw in _sites(w, (), "blob", kinds=(M1, M2, M4), max_events=len(start) + 2):
            if nw not in parent:
                parent[nw] = (w, m)
                queue.append(nw)
    moves = []
    w = ()
    while parent[w] is not None:
        w, m = parent[w]
        moves.append(m)
    return tuple(reversed(moves))


def _expand_m5(move: Move) -> list[Move]:
    moves = [replace(m, position=m.position + move.position, slot=m.slot + move.slot)
             for m in m5_expansion(move.variant)]
    if move.direction == FORWARD:
        raise NotImplementedError("expanding kidney-pair insertions is not supported")
    return moves


def kidney(n: int) -> BlobDiagram:
    if n == 0:
        raise ValueError("kidney(n) needs n != 0")
    word = (K_PLUS if n > 0 else K_MINUS) * abs(n)
    total = len(word) + 1
    events = tuple(Event(_TO_KIND[k], s, Fraction(j + 1, total), b)
                   for j, (k, s, b) in enumerate(word))
    return BlobDiagram.strip(events)


def canonical_word(J: int) -> tuple:
    return (K_PLUS if J > 0 else K_MINUS) * abs(J)


# -- public move API ---------------------------------------------------------------------

def enumerate_moves(diagram, insertions: bool = True, kinds=(M1, M2, M4, M6),
                    embedded: bool = False, max_events: int | None = None) -> list[Move]:
    word, start, mode = _raw(diagram)
    return [m for m, _ in _sites(word, start, mode, kinds, insertions, embedded, max_events)]


def apply_move(diagram, move: Move):
    word, start, mode = _raw(diagram)
    return _cook(diagram, _apply_raw(word, start, mode, move))


@dataclass(frozen=True)
class MoveTrace:
    moves: tuple[Move, ...]
    start: object
    end: object

    def replay(self):
        word, start, mode = _raw(self.start)
        for m in self.moves:
            word = _apply_raw(word, start, mode, m)
        return _cook(self.start, word)

    def check(self) -> bool:
        return _raw(self.replay())[0] == _raw(self.end)[0]

    def expanded(self) -> "MoveTrace":
        """Same trace with kidney-pair deletions unfolded into elementary moves."""
        out = []
        for m in self.moves:
            out.extend(_expand_m5(m) if m.kind == M5 else [m])
        return MoveTrace(tuple(out), self.start, self.end)

    def __len__(self):
        return len(self.moves)

    def to_json(self) -> dict:
        return {"schema": "modblob.trace/1", "start": to_json(self.start),
                "end": to_json(self.end), "moves": [m.to_json() for m in self.moves]}

    @classmethod
    def from_json(cls, doc) -> "MoveTrace":
        return cls(tuple(Move.from_json(m) for m in doc["moves"]),
                   from_json(doc["start"]), from_json(doc["end"]))


# -- normalization -------------------------------------------------------------------------

class _Recorder:
    def __init__(self, word, start, mode):
        self.word, self.start, self.mode = word, start, mode
        self.moves: list[Move] = []

    def do(self, move):
        self.word = _apply_raw(self.word, self.start, self.mode, move)
        self.moves.append(move)


def _arc_table(word):
    """Arc ids per slab plus, per arc pair born together, the events of its curve."""
    ids, nxt = [], 0
    slabs = [()]
    born = {}
    curve_events = {}
    parent = {}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for k, (kind, s, _) in enumerate(word):
        if kind == "B":
            a, b = nxt, nxt + 1
            nxt += 2
            parent[a], parent[b] = a, a
            ids[s:s] = [a, b]
            curve_events[a] = [k]
            born[a] = k
        else:
            a, b = ids[s], ids[s + 1]
            ra, rb = find(a), find(b)
            if kind == "D":
                if ra != rb:
                    parent[rb] = ra
                    curve_events[ra].extend(curve_events.pop(rb))
                curve_events[ra].append(k)
                del ids[s:s + 2]
            else:
                curve_events[ra].append(k)
                if rb != ra:
                    curve_events[rb].append(k)
                ids[s], ids[s + 1] = b, a
        slabs.append(tuple(ids))
    return slabs, curve_events


def _find_bubble(word, lo=0, hi=None):
    hi = len(word) if hi is None else hi
    slabs, curves = _arc_table(word)
    best = None
    for root, evs in curves.items():
        if len(evs) != 2:
            continue
        b, d = sorted(evs)
        if not (lo <= b and d < hi) or word[b][0] != "B" or word[d][0] != "D":
            continue
        a1 = slabs[b + 1][word[b][1]]
        a2 = a1 + 1
        ok = all(a1 in slabs[k] and slabs[k].index(a2) == slabs[k].index(a1) + 1
                 for k in range(b + 1, d + 1))
        if ok and (best is None or d - b < best[1] - best[0]):
            best = (b, d)
    return best


def _remove_bubbles(rec: _Recorder, lo=0, hi=None):
    while True:
        cur_hi = None if hi is None else hi(rec)
        bub = _find_bubble(rec.word, lo, cur_hi)
        if bub is None:
            return
        b, d = bub
        while d > b + 1:
            e1, e2 = rec.word[d - 1], rec.word[d]
            variants = _m1_variants(e1, e2)
            rec.do(Move(M1, d - 1, e1[1], FORWARD, variants[0][0]))
            d -= 1
        rec.do(Move(M2, b, rec.word[b][1], INVERSE))


@lru_cache(maxsize=None)
def _m1_route(word, target):
    """Shortest M1-only path between two short words, or None."""
    parent = {word: None}
    queue = deque([word])
    while queue:
        w = queue.popleft()
        if w == target:
            break
        for m, nw in _sites(w, (), "blob", kinds=(M1,), insertions=False):
            if nw not in parent:
                parent[nw] = (w, m)
                queue.append(nw)
    if target not in parent:
        return None
    moves, w = [], target
    while parent[w] is not None:
        w, m = parent[w]
        moves.append(m)
    return tuple(reversed(moves))


def normalize_embedded(blob: BlobDiagram):
    """Reduce an embedded strip blob to ``|J|`` kidneys of sign ``J``; returns (blob, trace)."""
    if not isinstance(blob, BlobDiagram) or not blob.embedded:
        raise NotEmbedded("normalization needs an embedded blob")
    if blob.base.kind != STRIP:
        raise NotEmbedded("normalization is implemented on the strip")
    word, start, mode = _raw(blob)
    rec = _Recorder(word, start, mode)
    _remove_bubbles(rec)
    # cut every occupied slab with saddles so each piece holds one original event
    sizes = [len(s) for s in _slabs(rec.word, start, mode)]
    for k in range(len(rec.word) - 1, 0, -1):
        for j in range(sizes[k] // 2):
            rec.do(Move(M4, k + j, 0, FORWARD))
    # pieces are delimited by empty slabs; handle them right to left
    sizes = [len(s) for s in _slabs(rec.word, start, mode)]
    cuts = [k for k, s in enumerate(sizes) if s == 0]
    for lo, hi in reversed(list(zip(cuts, cuts[1:]))):
        tail = len(rec.word) - hi
        _remove_bubbles(rec, lo, lambda r, tail=tail: len(r.word) - tail)
        piece = rec.word[lo:len(rec.word) - tail]
        if not piece:
            continue
        target = K_PLUS if piece.count(("B", 0, True)) == 2 or ("D", 1, None) in piece else K_MINUS
        route = _m1_route(piece, target) if len(piece) == 4 else None
        if route is None:
            raise NormalizationStuck(f"piece {piece} is not a kidney")
        for m in route:
            rec.do(replace(m, position=m.position + lo))
    # cancel adjacent kidneys of opposite polarity
    while True:
        w = rec.word
        blocks = [w[j:j + 4] for j in range(0, len(w), 4)]
        hit = None
        for j in range(len(blocks) - 1):
            if {blocks[j], blocks[j + 1]} == {K_PLUS, K_MINUS}:
                hit = j
                break
        if hit is None:
            break
        variant = "+-" if blocks[hit] == K_PLUS else "-+"
        rec.do(Move(M5, 4 * hit, 0, INVERSE, variant))
    J = invariant_J(blob)
    if rec.word != canonical_word(J):
        raise NormalizationStuck(f"greedy normalization ended at {rec.word}")
    out = _cook(blob, rec.word)
    return out, MoveTrace(tuple(rec.moves), blob, out)


def normalize(blob: BlobDiagram) -> BlobDiagram:
    return normalize_embedded(blob)[0]


# -- random scrambling ----------------------------------------------------------------------

def scramble(diagram, seed: int, steps: int, kinds=(M1, M2, M4, M6), keep_embedded=None,
             max_events: int | None = None):
    """Apply ``steps`` random legal moves: a kind uniformly among those with sites, then a site."""
    rng = random.Random(seed)
    word, start, mode = _raw(diagram)
    if keep_embedded is None:
        keep_embedded = isinstance(diagram, BlobDiagram) and diagram.embedded
    for _ in range(steps):
        by_kind = {}
        for m, pt in _patches(word, start, mode, kinds, True, keep_embedded, max_events):
            by_kind.setdefault(m.kind, []).append(pt)
        if not by_kind:
            break
        kind = rng.choice(sorted(by_kind))
        word = _patch(word, rng.choice(by_kind[kind]))
    return _cook(diagram, word)


def random_move(diagram, rng: random.Random, kinds=(M1, M2, M4, M6), max_events=None):
    word, start, mode = _raw(diagram)
    by_kind = {}
    for m, _ in _patches(word, start, mode, kinds, True, False, max_events):
        by_kind.setdefault(m.kind, []).append(m)
    kind = rng.choice(sorted(by_kind))
    return rng.choice(by_kind[kind])


# -- bounded equivalence -----------------------------------------------------------------------

class _Ball:
    """BFS layers around one word, grown on demand."""

    def __init__(self, word, start, mode, cap, kinds):
        self.start, self.mode, self.cap, self.kinds = start, mode, cap, kinds
        self.parent = {word: None}
        self.depth = {word: 0}
        self.frontier = [word]
        self.radius = 0

    def grow(self):
        nxt = []
        for w in self.frontier:
            for m, nw in _sites(w, self.start, self.mode, self.kinds, max_events=self.cap):
                if nw not in self.parent:
                    self.parent[nw] = (w, m)
                    self.depth[nw] = self.radius + 1
                    nxt.append(nw)
        nxt.sort()
        self.frontier = nxt
        self.radius += 1

    def path(self, w):
        out = []
        while self.parent[w] is not None:
            w, m = self.parent[w]
            out.append((w, m))
        return out[::-1]


_BALLS: dict = {}


def _ball(word, start, mode, cap, kinds):
    key = (word, start, mode, cap, kinds)
    if key not in _BALLS:
        if len(_BALLS) > 64:
            _BALLS.clear()
        _BALLS[key] = _Ball(word, start, mode, cap, kinds)
    return _BALLS[key]


def _reverse_move(w_from, w_to, start, mode, kinds):
    for m, nw in _sites(w_from, start, mode, kinds):
        if nw == w_to:
            return m
    raise AssertionError("move graph is not symmetric")


def bounded_equivalence(a, b, depth: int, max_events: int | None = None, prefilter: bool = True,
                        kinds=(M1, M2, M4, M6)):
    """Search for a move sequence of length <= depth from ``a`` to ``b``.

    Returns a MoveTrace, or None when the invariant pre-check already separates
    the two inputs.  Raises DepthExceeded when the bounded search finds nothing.
    """
    if isinstance(a, BlobDiagram) != isinstance(b, BlobDiagram):
        a, b = (x if isinstance(x, BlobDiagram) else BlobDiagram.fill(x) for x in (a, b))
    if as_doodle(a).base != as_doodle(b).base:
        raise BaseMismatch("diagrams live over different bases")
    wa, start, mode = _raw(a)
    wb, start_b, mode_b = _raw(b)
    if mode != mode_b:
        return None
    if prefilter and (invariant_J(a) != invariant_J(b) or iota_rho(a) != iota_rho(b)):
        return None
    cap = max_events if max_events is not None else max(len(wa), len(wb)) + 4
    kinds = tuple(kinds)
    ba, bb = _ball(wa, start, mode, cap, kinds), _ball(wb, start, mode, cap, kinds)
    ra, rb = (depth + 1) // 2, depth // 2
    while True:
        meet = _meet(ba, bb, ra, rb)
        if meet is not None:
            break
        grew = False
        if ba.radius < ra and ba.frontier:
            ba.grow()
            grew = True
        if bb.radius < rb and bb.frontier:
            bb.grow()
            grew = True
        if not grew:
            raise DepthExceeded(f"no trace within depth {depth} (cap {cap} events)")
    moves = [m for _, m in ba.path(meet)]
    w = meet
    for prev, _ in reversed(bb.path(meet)):
        moves.append(_reverse_move(w, prev, start, mode, kinds))
        w = prev
    return MoveTrace(tuple(moves), a, b)


def _meet(ba, bb, ra, rb):
    small, big = (ba, bb) if len(ba.parent) <= len(bb.parent) else (bb, ba)
    hits = [w for w in small.depth if w in big.depth
            and ba.depth[w] <= ra and bb.depth[w] <= rb]
    if not hits:
        return None
    return min(hits, key=lambda w: (ba.depth[w] + bb.depth[w], w))
