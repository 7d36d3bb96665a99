"""Walk through the invariants of a few small blobs.

Run with ``python3 demos/kidney_invariants.py``.
"""
# %%
from modblob import (classify_crossings_blob, classify_tangencies, compose_uplus, invariant_J,
                     invariant_report, kidney, topology_report)
from modblob.fixtures import build

# %% A disk has no concave tangencies, so J vanishes.
disk = build("disk")
print("disk   ", disk.word(), " J =", invariant_J(disk))

# %% The kidney has one dent; the dent closes on the inside of the region.
k = kidney(1)
print("kidney ", k.word(), " J =", invariant_J(k))
for t in classify_tangencies(k):
    print("   event", t.event_index, "concave" if t.concave else "convex", t.polarity)

# %% J adds under side-by-side composition.
for n in range(-2, 3):
    x = kidney(n) if n else build("disk")
    print(f"kidney({n:+d}) J = {invariant_J(x):+d}")
print("kidney(1) + kidney(1):", invariant_J(compose_uplus(k, k)))

# %% Crossing types on the alpha generators and the torus.
for name in ("alpha1", "alpha3", "torus"):
    x = build(name)
    types = [r.type for r in classify_crossings_blob(x)]
    print(f"{name:7s}", types, invariant_report(x).iota_rho)

# %% Embedded regions are planar: the annulus has Euler characteristic zero.
for name in ("disk", "annulus", "kidney+2"):
    t = topology_report(build(name))
    print(f"{name:8s} euler={t.euler} genera={[c.genus for c in t.components]}")
