import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from helpers import oracle_J_embedded, oracle_turning_total, random_blob, random_doodle
from modblob import (B, D, X, BlobDiagram, StrandDiagram, boundary, classify_crossings_blob,
                     classify_crossings_doodle, classify_tangencies, complexity, compose_star,
                     compose_uplus, in_M, invariant_J, invariant_report, iota_rho, kidney, negate,
                     parity_audit, rho, rotation_number, topology_report)
from modblob.errors import NotEmbedded, UnorientedInput
from modblob.fixtures import build

seeds = st.integers(0, 2**32 - 1)


def types(records):
    return sorted(r.type for r in records)


# -- tangencies ---------------------------------------------------------------------------

def test_convex_disk_tangencies():
    recs = classify_tangencies(build("disk"))
    assert len(recs) == 2
    assert not any(r.concave for r in recs)
    assert all(r.polarity is None for r in recs)


def test_kidney_plus_has_one_concave_death():
    recs = [r for r in classify_tangencies(kidney(1)) if r.concave]
    assert len(recs) == 1
    (r,) = recs
    assert (r.kind, r.below_count, r.polarity) == ("death", 1, "+")


def test_kidney_minus_has_one_concave_birth():
    recs = [r for r in classify_tangencies(kidney(-1)) if r.concave]
    assert [(r.kind, r.polarity) for r in recs] == [("birth", "-")]


def test_literal_kidney_minus_word():
    # this word draws the same dented disk with the dent on the other side
    blob = BlobDiagram.strip([B(0), B(1, False), D(0), D(0)])
    recs = [r for r in classify_tangencies(blob) if r.concave]
    assert [(r.kind, r.polarity) for r in recs] == [("birth", "-")]
    assert invariant_J(blob) == -1


def test_concavity_is_odd_below_count():
    for name in ("kidney+1", "annulus", "torus", "alpha1"):
        for r in classify_tangencies(build(name)):
            assert r.concave == (r.below_count % 2 == 1)
            assert (r.polarity is not None) == r.concave


# -- J ---------------------------------------------------------------------------------------

def test_J_examples():
    assert invariant_J(kidney(1)) == 1
    assert invariant_J(compose_uplus(kidney(1), kidney(1))) == 2
    assert invariant_J(build("torus")) == 0


@given(seeds)
def test_J_matches_geometric_fold_count(seed):
    blob = random_blob(random.Random(seed), 14, embedded=True)
    assert invariant_J(blob) == oracle_J_embedded(blob.events)


@given(seeds)
def test_complexity_bounds_J(seed):
    blob = random_blob(random.Random(seed), 12)
    assert complexity(blob) >= abs(invariant_J(blob))


def test_complexity_examples():
    assert complexity(kidney(1)) == complexity(kidney(-1)) == 1
    assert complexity(build("disk")) == 0
    pair = compose_uplus(kidney(1), kidney(-1))
    assert (complexity(pair), invariant_J(pair)) == (2, 0)


# -- crossings ----------------------------------------------------------------------------------

def test_alpha1_crossings():
    recs = classify_crossings_blob(build("alpha1"))
    assert types(recs) == ["I", "II"]
    assert iota_rho(build("alpha1")) == (1, 0, 1)


def test_blob_sector_shape():
    for name in ("alpha1", "alpha3", "torus"):
        for r in classify_crossings_blob(build(name)):
            below, before, after, above = r.sector_data
            m = min(r.sector_data)
            assert sorted(r.sector_data) == [m, m + 1, m + 1, m + 2]
            assert below + above == before + after == 2 * m + 2


@pytest.mark.parametrize("name, expected", [
    ("beta+", ["I"]), ("beta-", ["III"]), ("beta~", ["II"]), ("beta-bar", ["IV"]),
])
def test_doodle_generators(name, expected):
    assert types(classify_crossings_doodle(build(name))) == expected


def test_doodle_mode_needs_orientation():
    with pytest.raises(UnorientedInput):
        classify_crossings_doodle(StrandDiagram.strip([B(0), X(0), D(0)], oriented=False))


def test_alpha3_triple():
    assert iota_rho(build("alpha3")) == (0, 1, 1)


def test_torus_triple():
    x = build("torus")
    assert rho(classify_crossings_blob(x)) == (1, 1, 1, 1)
    assert iota_rho(x) == (1, 1, 0)
    assert in_M(iota_rho(x))


def test_embedded_blob_triple_is_zero():
    assert iota_rho(kidney(2)) == (0, 0, 0)


def test_blob_and_doodle_types_differ_by_a_fixed_permutation():
    relation = {}
    for name in ("alpha1", "alpha2", "alpha3", "alpha4", "torus"):
        x = build(name)
        pairs = zip([r.type for r in classify_crossings_blob(x)],
                    [r.type for r in classify_crossings_doodle(boundary(x))])
        for b, d in pairs:
            assert relation.setdefault(b, d) == d
    assert sorted(relation) == sorted(relation.values()) == ["I", "II", "III", "IV"]


@given(seeds)
def test_permutation_holds_on_random_blobs(seed):
    blob = random_blob(random.Random(seed), 12)
    perm = {"I": "II", "II": "III", "III": "IV", "IV": "I"}
    b = [r.type for r in classify_crossings_blob(blob)]
    d = [r.type for r in classify_crossings_doodle(boundary(blob))]
    assert [perm[t] for t in b] == d


# -- M and the blob image ---------------------------------------------------------------------------

def test_M_membership():
    assert in_M((1, 0, 1)) and in_M((0, 1, 1)) and in_M((0, 0, 2)) and in_M((1, 1, 0))
    assert not in_M((1, 0, 0)) and not in_M((0, 1, 0)) and not in_M((0, 0, 1))


@given(seeds)
def test_valid_blobs_land_in_M(seed):
    blob = random_blob(random.Random(seed), 14)
    assert in_M(iota_rho(blob))


# -- negation and additivity ------------------------------------------------------------------------

@given(seeds)
def test_negation_laws(seed):
    blob = random_blob(random.Random(seed), 12)
    a, n = iota_rho(blob), iota_rho(negate(blob))
    assert n == (a[0], a[1], -a[2])
    swap = {"I": "I", "III": "III", "II": "IV", "IV": "II"}
    assert types(classify_crossings_blob(negate(blob))) == sorted(
        swap[r.type] for r in classify_crossings_blob(blob))


@given(seeds)
def test_uplus_additivity(seed):
    rng = random.Random(seed)
    a, b = random_blob(rng, 10), random_blob(rng, 10)
    ab = compose_uplus(a, b)
    assert invariant_J(ab) == invariant_J(a) + invariant_J(b)
    ra, rb = rho(classify_crossings_blob(a)), rho(classify_crossings_blob(b))
    assert rho(classify_crossings_blob(ab)) == tuple(x + y for x, y in zip(ra, rb))


@given(seeds)
def test_star_additivity_of_J(seed):
    rng = random.Random(seed)
    a, b = random_blob(rng, 10), random_blob(rng, 10)
    assert invariant_J(compose_star(a, b)) == invariant_J(a) + invariant_J(b)


@given(seeds)
def test_doodle_uplus_additivity(seed):
    rng = random.Random(seed)
    a, b = random_doodle(rng, 8), random_doodle(rng, 8)
    ra = rho(classify_crossings_doodle(a))
    rb = rho(classify_crossings_doodle(b))
    rab = rho(classify_crossings_doodle(compose_uplus(a, b)))
    assert rab == tuple(x + y for x, y in zip(ra, rb))


# -- rotation number --------------------------------------------------------------------------------

@given(seeds)
def test_rotation_number_matches_polygon_turning(seed):
    blob = random_blob(random.Random(seed), 12)
    assert abs(float(rotation_number(blob)) - oracle_turning_total(blob.events)) < 1e-9


def test_rotation_numbers_of_fixtures():
    got = {n: rotation_number(build(n)) for n in ("disk", "annulus", "alpha1", "torus")}
    assert got == {"disk": 1, "annulus": 0, "alpha1": 2, "torus": -1}


# -- parity ------------------------------------------------------------------------------------------

def test_parity_audit():
    assert parity_audit(kidney(2)).ok
    assert parity_audit(build("alpha1")).ok
    assert parity_audit(build("alpha1")).crossing_count == 2
    truncated = StrandDiagram.strip(list(build("alpha1").events)[:-1], oriented=True)
    assert not parity_audit(truncated).ok


def test_parity_audit_flags_limacon():
    lim = BlobDiagram.strip([B(0), B(1), X(1), D(0), D(0)])
    assert not parity_audit(lim).ok


# -- reports -------------------------------------------------------------------------------------

def test_report_of_kidney():
    rep = invariant_report(kidney(1))
    assert (rep.J, rep.rho, rep.c_plus, rep.crossing_count_parity, rep.max_degree) == (
        1, (0, 0, 0, 0), 1, 0, 4)


def test_report_table_order():
    lines = invariant_report(build("alpha1")).table().splitlines()
    assert [ln.split()[0] for ln in lines] == [
        "J", "rho_I", "rho_II", "rho_III", "rho_IV", "iota_rho", "c_plus", "d", "parity"]


def test_torus_degree_bound():
    assert invariant_report(build("torus")).max_degree <= 6


# -- topology -----------------------------------------------------------------------------------------

def test_disk_topology():
    t = topology_report(build("disk"))
    assert (t.euler, len(t.components), t.boundary_circles, t.genera) == (1, 1, 1, [0])


def test_annulus_topology():
    blob = build("annulus")
    assert blob.faces[2] == (0, 1, 0, 1, 0)
    t = topology_report(blob)
    assert (t.euler, t.boundary_circles, t.genera) == (0, 2, [0])


def test_kidney_topology():
    t = topology_report(kidney(1))
    assert (t.euler, t.genera) == (1, [0])


def test_topology_needs_embedding():
    with pytest.raises(NotEmbedded):
        topology_report(build("alpha1"))


@given(seeds)
def test_euler_characteristic_is_total_turning(seed):
    # for a planar region, chi equals the summed turning numbers of its boundary
    blob = random_blob(random.Random(seed), 16, embedded=True)
    t = topology_report(blob)
    assert t.euler == round(oracle_turning_total(blob.events))
    assert all(g == 0 for g in t.genera)
    assert t.counts["V"] - t.counts["E"] + t.counts["F"] == t.euler


def test_rotation_half_integers_sum_to_integer():
    for n in range(-3, 4):
        if n:
            assert rotation_number(kidney(n)) == Fraction(abs(n))


def test_iota_rho_hits_small_lattice_points():
    # evidence only: every point of M in a small box is realized by a side-by-side sum
    from itertools import product
    from modblob.fixtures import build
    gens = [build(n) for n in ("alpha1", "alpha2", "alpha3", "alpha4", "torus")]
    reached = {(0, 0, 0): BlobDiagram.strip([])}
    frontier = list(reached.items())
    for _ in range(4):
        nxt = []
        for key, x in frontier:
            for g in gens:
                y = compose_uplus(x, g)
                k = iota_rho(y)
                if k not in reached:
                    reached[k] = y
                    nxt.append((k, y))
        frontier = nxt
    for a, b, c in product((0, 1), (0, 1), range(-3, 4)):
        if in_M((a, b, c)):
            assert (a, b, c) in reached, (a, b, c)
