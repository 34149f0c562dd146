"""
Which circle subsets give a log Enriques surface?
=================================================

Contract everything except the boundary and the chosen circles T; the
result is a surface exactly when that set of curves is negative definite.
"""
from logenriques.enumeration import (
    SubsetT,
    catalog_summary,
    enumerate_catalog,
    is_valid_surface,
    verify_theorem,
)
from logenriques.models import ModelCase

# single subsets first
for labels in ([8, 12], [9, 10], [3, 11, 14], range(1, 16)):
    r = is_valid_surface(ModelCase.A26, SubsetT.of(labels))
    print(f"a26 T={r.t}: valid={r.valid} reason={r.reason} C1^2={r.c1_sq} C2^2={r.c2_sq}")

# all 2^15 subsets, then the comparison with the decision table (~15 s per case)
for case in ModelCase:
    records = enumerate_catalog(case)
    print(case.value, catalog_summary(case, records))
    report = verify_theorem(case, records=records)
    print(report)
