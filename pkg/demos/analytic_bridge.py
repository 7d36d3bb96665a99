"""From polynomial families and curves to diagrams.

Run with ``python3 demos/analytic_bridge.py``; writes ``kidney.svg`` in the working directory.
"""
from modblob import invariant_J
from modblob.curves import ParametricCurveSet, curves_to_diagram, kidney_curve
from modblob.families import (SweepConfig, concatenate, constant_family, extract_diagram,
                              family_class, kappa_family, lens_family)
from modblob.render import render_svg

# %% Zero sets of a family of polynomials sweep out a blob.
cfg = SweepConfig()
for name, fam in [("constant", constant_family()), ("lens", lens_family()),
                  ("kappa", kappa_family())]:
    blob = extract_diagram(fam, cfg)
    print(f"{name:9s}", blob.word() or "(empty)", " class", family_class(fam, cfg))

# %% Concatenating loops adds their classes.
kk = concatenate(kappa_family(), kappa_family())
print("kappa * kappa  class", family_class(kk, cfg))

# %% The same dent drawn as a closed parametric curve.
blob = curves_to_diagram(ParametricCurveSet((kidney_curve(),)))
print("kidney curve", blob.word(), " J =", invariant_J(blob))
with open("kidney.svg", "w") as fh:
    fh.write(render_svg(blob))
print("wrote kidney.svg")
