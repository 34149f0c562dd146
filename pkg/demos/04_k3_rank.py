"""
Picard rank and the K3 cover
============================

For a valid T the surface S has Picard rank |T| - 1, and the exceptional
lattice on the canonical K3 cover has rank 17 - |T|; the two always add to 16.
"""
from collections import Counter

from logenriques.enumeration import enumerate_catalog
from logenriques.models import ModelCase

records = enumerate_catalog(ModelCase.I22)
by_rho = Counter(r.rho for r in records if r.valid)
for rho in sorted(by_rho):
    print(f"rho={rho:2d}  rank={16 - rho:2d}  subsets={by_rho[rho]}")

smallest = min(len(r.t) for r in records if r.valid)
print("smallest valid T has", smallest, "circles")
