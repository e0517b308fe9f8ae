"""Spectra, assembly data, layer categories, and the layer reports.

The finite poset side of the story: validated Balmer posets with derived
dimensions, assembly retractions (including the identity-component map
on a sampled torus subgroup poset), the index categories that shape the
torsion model, and the per-dimension layer reports that generalize local
cohomology and monochromatic layers.

Run:  python demos/04_posets_layers_reports.py
"""

from fractions import Fraction as F

from adeltors import (ChainComplex, Site, build_iminus, build_ifull,
                      iminus_count, to_dot, torus_poset, validate_poset)
from adeltors.posets import coarsest, dim_filtration, preimage_family
from adeltors.torsion import chromatic_report, cousin_report

print("== a fan poset with derived dimensions ==")
fan = validate_poset([("m", f"p{i}") for i in range(1, 4)]
                     + [(f"p{i}", "g") for i in range(1, 4)])
print(f"  dims: { {e: fan.dim[e] for e in fan.elements} }")
print(f"  filtration <=1: {sorted(dim_filtration(fan, 1).members)}")
C = coarsest(fan)
print(f"  coarsest assembly chain: {sorted(C.subposet)}")
print(f"  preimage of the bottom class: {sorted(preimage_family(C, {'m'}).members)}")

print("\n== sampled torus subgroup posets ==")
P1, A1 = torus_poset(1, 3)
print(f"  rank 1, three cyclic samples: {P1.elements}")
P2, A2 = torus_poset(2, 2)
print(f"  rank 2, two samples per stratum: {P2.elements}")
print(f"  identity-component retraction: {A2.alpha}")

print("\n== layer index categories ==")
for d in range(1, 7):
    got = len(build_iminus(d).vertices)
    print(f"  d={d}: {got} plain vertices (formula gives {iminus_count(d)})")
print(f"  dummies of I(3): "
      f"{[v.name for v in build_ifull(3).vertices if v.dummy]}")
print("\n" + to_dot(build_iminus(1)))

print("== layer reports ==")
site = Site("zint", T=(2, 3))
print("cousin layers of Z (dimension 0 carries the divisible torsion):")
rep = cousin_report(site, site.unit())
for dim, layer in rep["layers"].items():
    print(f"  dim {dim}: {layer}")
z8 = cousin_report(site, ChainComplex.two_term(site.base, F(8)))
print(f"cousin layers of Z/8: {z8['layers']}")
print("\nchromatic chain labels at height 2 (formal indexing only):")
print(f"  {chromatic_report(2)['slots']}")
