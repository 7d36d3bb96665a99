"""Acceptance criteria, one test each; every test prints a PASS/FAIL line with its timing."""

import random

from helpers import criterion, random_blob
from modblob import (BlobDiagram, classify_crossings_blob, classify_crossings_doodle,
                     classify_tangencies, compose_star, compose_uplus, fiber_patterns, in_M,
                     invariant_J, invariant_report, iota_rho, kidney, normalize_embedded, rho,
                     topology_report)
from modblob.errors import DepthExceeded
from modblob.families import (SweepConfig, concatenate, constant_family, extract_diagram,
                              family_class, kappa_family, lens_family)
from modblob.fixtures import build
from modblob.rewriting import (FORWARD, M1, M2, M4, M6, apply_move, bounded_equivalence,
                               random_move, scramble)

EMPTY = BlobDiagram.strip([])
SEEDS_FIXTURES = ["disk", "annulus", "kidney+1", "kidney-1", "alpha1", "alpha2", "alpha3",
                  "alpha4", "torus"]
PAIR_TYPES = {("I", "I"), ("III", "III"), ("II", "IV"), ("IV", "II")}


def triple(x):
    r = rho(classify_crossings_blob(x))
    return r[0], r[2], r[1] - r[3]


def blob_walk(rng, samples, max_events=16):
    """Blobs reached from the fixtures by random legal moves and compositions."""
    x = build(rng.choice(SEEDS_FIXTURES))
    for _ in range(samples):
        roll = rng.random()
        if len(x) > max_events:
            x = build(rng.choice(SEEDS_FIXTURES))
        elif roll < 0.05:
            x = compose_uplus(x, build(rng.choice(SEEDS_FIXTURES)))
        elif roll < 0.1:
            x = compose_star(x, build(rng.choice(SEEDS_FIXTURES)))
        else:
            x = apply_move(x, random_move(x, rng, max_events=max_events + 2))
        yield x


def test_criterion_1_generator_calibration():
    with criterion(1, "generator calibration", 1.0):
        k = kidney(1)
        concave = [r for r in classify_tangencies(k) if r.concave]
        assert invariant_J(k) == 1
        assert len(concave) == 1 and concave[0].polarity == "+"
        assert invariant_J(compose_uplus(k, k)) == 2


def test_criterion_2_rho_tables():
    table = {
        "alpha1": (1, 0, 1),
        "alpha2": (1, 0, -1),
        "alpha3": (0, 1, 1),
        "alpha4": (0, 1, -1),
    }
    with criterion(2, "rho tables", 1.0):
        for name, expected in table.items():
            assert triple(build(name)) == expected, name
        torus = build("torus")
        assert rho(classify_crossings_blob(torus)) == (1, 1, 1, 1)
        assert invariant_J(torus) == 0
        assert fiber_patterns(torus).max_degree <= 6


def test_criterion_3_doodle_generators():
    expected = {"beta+": (1, 0, 0), "beta-": (0, 1, 0), "beta~": (0, 0, 1), "beta-bar": (0, 0, -1)}
    with criterion(3, "doodle generators and eight cosets", 1.0):
        for name, value in expected.items():
            r = rho(classify_crossings_doodle(build(name)))
            assert (r[0], r[2], r[1] - r[3]) == value, name
        gens = [build("beta+"), build("beta-"), build("beta~")]
        cosets = set()
        for mask in range(8):
            x = EMPTY.doodle
            for bit, g in enumerate(gens):
                if mask >> bit & 1:
                    x = compose_uplus(x, g)
            t = iota_rho(x)
            cosets.add((t[0] % 2, t[1] % 2, t[2] % 2))
        assert len(cosets) == 8


def test_criterion_4_blob_index_two_law():
    with criterion(4, "blob index-2 law over 10^4 blobs", 60.0):
        rng = random.Random(4)
        n = 0
        for x in blob_walk(rng, 10_000):
            assert in_M(iota_rho(x)), x.word()
            assert sum(e.kind == "cross" for e in x.events) % 2 == 0
            n += 1
        assert n >= 10_000


def test_criterion_5_move_invariance():
    with criterion(5, "move invariance over 10^4 (diagram, move) pairs", 60.0):
        rng = random.Random(5)
        x = build("alpha1")
        pairs = m6 = 0
        while pairs < 10_000:
            if len(x) > 16:
                x = build(rng.choice(SEEDS_FIXTURES))
            m = random_move(x, rng, max_events=18)
            y = apply_move(x, m)
            assert invariant_J(y) == invariant_J(x)
            assert iota_rho(y) == iota_rho(x)
            assert all(p.degree % 2 == 0 for _, p in fiber_patterns(y).patterns)
            if m.kind == M6 and m.direction == FORWARD:
                types = {r.event_index: r.type for r in classify_crossings_blob(y)}
                assert (types[m.position], types[m.position + 1]) in PAIR_TYPES
                m6 += 1
            x = y
            pairs += 1
        assert m6 > 100


def test_criterion_6_normalization_soundness():
    with criterion(6, "normalization of 7 x 100 scrambled kidney stacks", 120.0):
        for n in range(-3, 4):
            start = kidney(n) if n else EMPTY
            for seed in range(100):
                x = scramble(start, seed, 50, kinds=(M1, M2, M4))
                assert x.embedded
                out, trace = normalize_embedded(x)
                assert out.events == start.events, (n, seed)
                assert trace.check(), (n, seed)
        out, trace = normalize_embedded(compose_uplus(kidney(1), kidney(-1)))
        assert out.events == () and trace.check()


def test_criterion_7_uplus_commutes():
    with criterion(7, "commutativity of side-by-side composition on 10^3 pairs", 60.0):
        rng = random.Random(7)
        embedded = 0
        for _ in range(1000):
            emb = rng.random() < 0.5
            a = random_blob(rng, 8, embedded=emb)
            b = random_blob(rng, 8, embedded=emb)
            ab, ba = compose_uplus(a, b), compose_uplus(b, a)
            assert invariant_report(ab) == invariant_report(ba)
            if emb:
                assert normalize_embedded(ab)[0].events == normalize_embedded(ba)[0].events
                embedded += 1
        assert embedded > 300


def test_criterion_8_analytic_round_trip():
    with criterion(8, "analytic round trip, stable under tolerance halving", 30.0):
        base = SweepConfig()
        half = SweepConfig(tol=base.tol / 2, eps_theta=base.eps_theta / 2)
        kappa = kappa_family()
        square = concatenate(kappa, kappa)
        for cfg in (base, half):
            assert family_class(constant_family(), cfg) == 0
            assert family_class(kappa, cfg) == 1
            assert family_class(square, cfg) == 2
            assert [e.short() for e in extract_diagram(lens_family(), cfg).events] == ["B0+", "D0"]
        for fam in (kappa, square, lens_family()):
            assert extract_diagram(fam, base).events == extract_diagram(fam, half).events


def test_criterion_9_topology():
    with criterion(9, "topology of 10^4 embedded blobs", 60.0):
        t = topology_report(build("disk"))
        assert (t.euler, t.genera) == (1, [0])
        t = topology_report(build("annulus"))
        assert (t.euler, t.genera) == (0, [0])
        rng = random.Random(9)
        for _ in range(10_000):
            x = random_blob(rng, 12, embedded=True)
            assert all(g == 0 for g in topology_report(x).genera), x.word()


def test_criterion_10_distinctness():
    with criterion(10, "no trace between distinct kidney stacks to depth 8", 300.0):
        values = [-2, -1, 1, 2]
        for i, m in enumerate(values):
            for n in values[i + 1:]:
                assert bounded_equivalence(kidney(m), kidney(n), 8) is None
        for i, m in enumerate(values):
            for n in values[i + 1:]:
                try:
                    bounded_equivalence(kidney(m), kidney(n), 8, prefilter=False)
                except DepthExceeded:
                    continue
                raise AssertionError(f"trace found between kidney({m}) and kidney({n})")
