"""
One-parameter families of real polynomials ``p(u; theta)`` and their zero loci.

A family is piecewise polynomial in ``theta`` with rational breakpoints; in
every cell each ``u``-coefficient is a polynomial in ``theta`` with rational
coefficients.  The zero set ``{p = 0}`` is a closed curve system in the
``(theta, u)`` strip and the sublevel set ``{p <= 0}`` is an embedded blob.

Exact work (discriminants, resultants, Sturm counts, isolating intervals) goes
through sympy.  The only floating step is locating the double root at an
event, done with mpmath at high precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import sympy as sp

from .diagram import (CYCLE, STRIP, BaseSpace, BlobDiagram, Event, StrandDiagram, BIRTH,
                      DEATH)
from .errors import (BasepointViolation, NonTransversalDiscriminantCrossing, PrecisionExhausted,
                     TripleRootDetected)
from .invariants import invariant_J

U, T = sp.symbols("u theta")
SCHEMA = "modblob.family/1"


@dataclass(frozen=True)
class SweepConfig:
    tol: float = 1e-12          # root clustering / imaginary-part tolerance
    eps_theta: float = 1e-9     # minimal separation of two events
    max_depth: int = 80         # bisection cap when refining event locations
    dps: int = 60


@dataclass(frozen=True)
class PolynomialFamily:
    """``cells[c][j]`` lists the theta-coefficients (ascending) of ``u**j`` in cell ``c``."""
    base: str
    breakpoints: tuple[Fraction, ...]
    cells: tuple[tuple[tuple[Fraction, ...], ...], ...]

    @property
    def degree(self) -> int:
        return len(self.cells[0]) - 1

    @property
    def edges(self) -> list[Fraction]:
        return [Fraction(0), *self.breakpoints, Fraction(1)]

    def cell_poly(self, c: int) -> sp.Expr:
        return sum(sum(sp.Rational(a.numerator, a.denominator) * T ** k for k, a in enumerate(co))
                   * U ** j for j, co in enumerate(self.cells[c]))

    def cell_of(self, theta) -> int:
        for c, hi in enumerate(self.edges[1:]):
            if theta <= hi:
                return c
        return len(self.cells) - 1

    def at(self, theta) -> sp.Poly:
        th = sp.Rational(theta.numerator, theta.denominator) if isinstance(theta, Fraction) else theta
        return sp.Poly(self.cell_poly(self.cell_of(theta)).subs(T, th), U)

    # -- construction helpers --
    @classmethod
    def constant(cls, coeffs, base=STRIP) -> "PolynomialFamily":
        return cls(base, (), (tuple((Fraction(a),) for a in coeffs),))

    @classmethod
    def from_expr(cls, exprs, breakpoints=(), base=STRIP) -> "PolynomialFamily":
        """Build from sympy expressions in ``u`` and ``theta`` (one per cell)."""
        polys = [sp.Poly(sp.expand(e), U, T) for e in exprs]
        deg = max(p.degree(U) for p in polys)
        cells = []
        for p in polys:
            rows = []
            for j in range(deg + 1):
                row = sp.Poly(p.as_expr().coeff(U, j), T)
                co = [Fraction(int(sp.numer(x)), int(sp.denom(x))) for x in reversed(row.all_coeffs())]
                rows.append(tuple(co) or (Fraction(0),))
            cells.append(tuple(rows))
        return cls(base, tuple(Fraction(b) for b in breakpoints), tuple(cells))

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "base": self.base,
                "breakpoints": [str(b) for b in self.breakpoints],
                "cells": [[[str(a) for a in co] for co in cell] for cell in self.cells]}

    @classmethod
    def from_json(cls, doc) -> "PolynomialFamily":
        if doc.get("schema", SCHEMA) != SCHEMA:
            raise ValueError(f"unsupported family schema {doc.get('schema')!r}")
        cells = tuple(tuple(tuple(Fraction(a) for a in co) for co in cell) for cell in doc["cells"])
        fam = cls(doc.get("base", STRIP), tuple(Fraction(b) for b in doc.get("breakpoints", ())),
                  cells)
        if len(fam.cells) != len(fam.breakpoints) + 1:
            raise ValueError("need one cell per breakpoint interval")
        if len({len(c) for c in fam.cells}) != 1:
            raise ValueError("all cells must share the u-degree")
        return fam

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2) + "\n"


@dataclass(frozen=True)
class FamilyEvent:
    theta: Fraction          # rational point inside the isolating interval of the event
    kind: str                # birth / death
    slot: int
    interval: tuple[Fraction, Fraction] = field(compare=False)


@dataclass(frozen=True)
class FamilyReport:
    events: tuple[FamilyEvent, ...]
    wrap_width: int
    degree: int

    @property
    def ok(self) -> bool:
        return True


def _real_count(poly: sp.Poly) -> int:
    return poly.count_roots() if poly.degree() > 0 else 0


def _check_shape(fam: PolynomialFamily):
    d = fam.degree
    if d < 2 or d % 2:
        raise ValueError("family degree must be even and positive")
    edges = fam.edges
    if any(a >= b for a, b in zip(edges, edges[1:])):
        raise ValueError("breakpoints must increase strictly inside (0, 1)")
    for c in range(len(fam.cells)):
        lead = sp.Poly(fam.cell_poly(c).coeff(U, d), T)
        lo, hi = edges[c], edges[c + 1]
        for x in (lo, hi, (lo + hi) / 2):
            if lead.eval(sp.Rational(x.numerator, x.denominator)) <= 0:
                raise ValueError("leading coefficient must stay positive")
        for r in lead.real_roots():
            if sp.Rational(lo.numerator, lo.denominator) <= r <= sp.Rational(hi.numerator, hi.denominator):
                raise ValueError("leading coefficient must stay positive")
    for c, b in enumerate(fam.breakpoints):
        bb = sp.Rational(b.numerator, b.denominator)
        left = sp.expand(fam.cell_poly(c).subs(T, bb))
        right = sp.expand(fam.cell_poly(c + 1).subs(T, bb))
        if sp.expand(left - right) != 0:
            raise ValueError(f"coefficients jump at breakpoint {b}")


def _candidates(fam: PolynomialFamily):
    """Real zeros of the u-discriminant in each cell, as (theta, cell, multiplicity)."""
    out = []
    edges = fam.edges
    for c in range(len(fam.cells)):
        P = fam.cell_poly(c)
        disc = sp.Poly(sp.discriminant(sp.Poly(P, U), U).as_expr(), T)
        lo = sp.Rational(edges[c].numerator, edges[c].denominator)
        hi = sp.Rational(edges[c + 1].numerator, edges[c + 1].denominator)
        if disc.is_zero:
            raise NonTransversalDiscriminantCrossing(float(lo), "repeated root along a whole cell")
        _, factors = sp.sqf_list(disc)
        for f, mult in factors:
            f = sp.Poly(f, T)
            if f.degree() < 1:
                continue
            for r in f.real_roots():
                if lo <= r <= hi:
                    out.append((r, c, mult, f))
    # merge duplicates at shared breakpoints
    out.sort(key=lambda x: float(x[0]))
    merged = []
    for item in out:
        if merged and sp.simplify(merged[-1][0] - item[0]) == 0:
            continue
        merged.append(item)
    return merged


def _interval(root, f: sp.Poly, eps: float):
    """Rational isolating interval for a real root of f, narrower than eps."""
    if root.is_Rational:
        q = Fraction(int(root.p), int(root.q))
        return q, q
    for (a, b), _ in f.intervals(eps=sp.Rational(1, 10 ** 12)):
        a, b = sp.Rational(a), sp.Rational(b)
        if a <= root <= b:
            return Fraction(int(a.p), int(a.q)), Fraction(int(b.p), int(b.q))
    raise PrecisionExhausted("could not isolate a discriminant zero")


def _numeric_roots(fam, c, root, cfg: SweepConfig):
    """All complex zeros of the cell-``c`` polynomial at an exact theta, in high precision."""
    P = sp.Poly(fam.cell_poly(c), U)
    th = sp.N(root, cfg.dps)
    with mpmath.workdps(cfg.dps):
        coeffs = [mpmath.mpf(str(sp.N(cf.subs(T, th), cfg.dps))) for cf in P.all_coeffs()]
        return mpmath.polyroots(coeffs, maxsteps=400, extraprec=4 * cfg.dps)


def _triple_gcd(fam, c):
    P = sp.Poly(fam.cell_poly(c), U)
    Pu, Puu = P.diff(U), P.diff(U).diff(U)
    r1 = sp.resultant(P.as_expr(), Pu.as_expr(), U)
    r2 = sp.resultant(Pu.as_expr(), Puu.as_expr(), U)
    return sp.Poly(sp.gcd(r1, r2), T)


def validate_family(fam: PolynomialFamily, config: SweepConfig | None = None) -> FamilyReport:
    cfg = config or SweepConfig()
    _check_shape(fam)
    if fam.base == STRIP:
        for end in (Fraction(0), Fraction(1)):
            if _real_count(fam.at(end)) > 0:
                raise BasepointViolation(f"real zeros at the strip end theta={end}")
        width = 0
    else:
        if sp.expand(fam.at(Fraction(0)).as_expr() - fam.at(Fraction(1)).as_expr()) != 0:
            raise ValueError("cycle family must close up: p(u, 0) != p(u, 1)")
        width = _real_count(fam.at(Fraction(0)))
    cands = _candidates(fam)
    # samples between candidates decide the real-root counts on each side
    bounds = []
    for r, c, mult, f in cands:
        bounds.append((_interval(r, f, cfg.eps_theta), r, c, mult))
    events = []
    for n, ((a, b), r, c, mult) in enumerate(bounds):
        left = bounds[n - 1][0][1] if n else Fraction(0)
        right = bounds[n + 1][0][0] if n + 1 < len(bounds) else Fraction(1)
        if a - left < Fraction(cfg.eps_theta) / 4 and n or right - b < Fraction(cfg.eps_theta) / 4 \
                and n + 1 < len(bounds):
            raise PrecisionExhausted("discriminant zeros closer than eps_theta")
        before = fam.at((left + a) / 2) if a > 0 else None
        after = fam.at((b + right) / 2) if b < 1 else None
        nb = _real_count(before) if before is not None else None
        na = _real_count(after) if after is not None else None
        roots = _numeric_roots(fam, c, r, cfg)
        real = sorted((z.real for z in roots if abs(z.imag) < cfg.tol ** 0.5), key=float)
        gaps = [real[k + 1] - real[k] for k in range(len(real) - 1)]
        tight = [k for k, g in enumerate(gaps) if g < cfg.tol ** 0.5]
        tg = _triple_gcd(fam, c)
        if tg.degree() > 0 and sp.simplify(tg.as_expr().subs(T, r)) == 0:
            # exact test says u-multiplicity 3 is possible here; confirm with the numeric cluster
            if len(tight) >= 2 and tight[1] == tight[0] + 1:
                raise TripleRootDetected(float(r))
        if len(tight) >= 2:
            raise NonTransversalDiscriminantCrossing(float(r), "two double roots at once")
        if not tight:
            # complex roots collide off the real axis: invisible in the zero locus
            continue
        if mult > 1 or nb is None or na is None or abs(na - nb) != 2:
            raise NonTransversalDiscriminantCrossing(float(r))
        slot = tight[0]
        kind = BIRTH if na > nb else DEATH
        mid = (a + b) / 2
        events.append(FamilyEvent(mid, kind, slot, (a, b)))
    return FamilyReport(tuple(events), width, fam.degree)


def extract_diagram(fam: PolynomialFamily, config: SweepConfig | None = None) -> BlobDiagram:
    """Sublevel set ``{p <= 0}`` of the family as an embedded blob."""
    rep = validate_family(fam, config)
    events = []
    for e in rep.events:
        if e.kind == BIRTH:
            # an even slot opens a component of {p < 0}, an odd one a hole
            events.append(Event(BIRTH, e.slot, e.theta, e.slot % 2 == 0))
        else:
            events.append(Event(DEATH, e.slot, e.theta))
    if fam.base == STRIP:
        doodle = StrandDiagram(BaseSpace(), tuple(events), True)
    else:
        dirs = tuple(1 if j % 2 == 0 else -1 for j in range(rep.wrap_width))
        doodle = StrandDiagram(BaseSpace(CYCLE, rep.wrap_width, dirs), tuple(events), True)
    return BlobDiagram.fill(doodle)


def family_class(fam: PolynomialFamily, config: SweepConfig | None = None) -> int:
    if fam.base != STRIP:
        raise ValueError("family_class is defined for strip families")
    return invariant_J(extract_diagram(fam, config))


def event_count_J(fam: PolynomialFamily, config: SweepConfig | None = None) -> int:
    """Signed count of interior double-root events, read straight off the event list."""
    total = 0
    for e in validate_family(fam, config).events:
        if e.slot % 2:
            total += 1 if e.kind == DEATH else -1
    return total


# -- operations on families ---------------------------------------------------------------

def _lift(fam: PolynomialFamily, degree: int) -> PolynomialFamily:
    if degree == fam.degree:
        return fam
    k = (degree - fam.degree) // 2
    exprs = [sp.expand(fam.cell_poly(c) * (U ** 2 + 1) ** k) for c in range(len(fam.cells))]
    return PolynomialFamily.from_expr(exprs, fam.breakpoints, fam.base)


def _reparam(expr, lo, hi):
    """Cell expression on [0, 1] pulled back to theta in [lo, hi]."""
    lo, hi = sp.Rational(lo.numerator, lo.denominator), sp.Rational(hi.numerator, hi.denominator)
    return sp.expand(expr.subs(T, (T - lo) / (hi - lo)))


def concatenate(f: PolynomialFamily, g: PolynomialFamily) -> PolynomialFamily:
    """Run ``f`` then ``g``; a straight leg through positive polynomials joins them."""
    if f.base != STRIP or g.base != STRIP:
        raise ValueError("concatenation is defined for strip families")
    d = max(f.degree, g.degree)
    f, g = _lift(f, d), _lift(g, d)
    third = Fraction(1, 3)
    exprs, bps = [], []
    for c in range(len(f.cells)):
        exprs.append(_reparam(f.cell_poly(c), Fraction(0), third))
    bps += [b * third for b in f.breakpoints] + [third]
    end_f = f.at(Fraction(1)).as_expr()
    start_g = g.at(Fraction(0)).as_expr()
    s = (T - sp.Rational(1, 3)) * 3
    exprs.append(sp.expand((1 - s) * end_f + s * start_g))
    bps.append(2 * third)
    for c in range(len(g.cells)):
        exprs.append(_reparam(g.cell_poly(c), 2 * third, Fraction(1)))
    bps += [2 * third + b * third for b in g.breakpoints]
    return PolynomialFamily.from_expr(exprs, bps, STRIP)


# -- reference families ----------------------------------------------------------------------

def constant_family() -> PolynomialFamily:
    return PolynomialFamily.constant([1, 0, 0, 0, 1])


def lens_family() -> PolynomialFamily:
    return PolynomialFamily.from_expr([U ** 2 + (T - sp.Rational(1, 4)) * (T - sp.Rational(3, 4))])


def kappa_family() -> PolynomialFamily:
    """``u^4 - 2u^2 + c u + e`` with ``(c, e)`` running around a square loop.

    The loop starts and ends at (1, 3), where the quartic is positive, and
    winds once around the cusp of the swallowtail discriminant.
    """
    c = [1, 8 * T - 1, 3, 9 - 8 * T]
    e = [3 - 16 * T, -1, 24 * T - 13, 11 - 8 * T]
    exprs = [U ** 4 - 2 * U ** 2 + ci * U + ei for ci, ei in zip(c, e)]
    return PolynomialFamily.from_expr(exprs, [Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)])


def triple_root_family() -> PolynomialFamily:
    return PolynomialFamily.from_expr([U ** 3 * (U - 1) + (T - sp.Rational(1, 2)) ** 2 + 0 * U ** 4])


def sample_real_counts(fam: PolynomialFamily, n: int = 400) -> list[int]:
    """Number of real zeros on a uniform theta grid (independent check for extraction)."""
    return [_real_count(fam.at(Fraction(k, n))) for k in range(n + 1)]
