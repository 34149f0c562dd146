"""
The two 47-curve configurations
===============================

Starting from the minimal resolution of each model on P(1,2,3) we extract
all 15 discrepancy-zero curves and compare with the hand-transcribed graph.
"""
from logenriques.dual_graph import Kind
from logenriques.models import (
    ModelCase,
    maximal_extraction,
    minimal_resolution_graph,
    validate_golden,
)

for case in ModelCase:
    small = minimal_resolution_graph(case).graph
    print(f"{case.value}: minimal resolution")
    for v in small:
        print(f"   {v.id:5s} self-int {str(v.self_int):>3s}  coeff {v.coeff}  nodes {v.nodes}")

    big = maximal_extraction(case).graph
    kinds = {k.value: len(big.of_kind(k)) for k in Kind}
    print(f"   after extraction: {len(big)} curves {kinds}")

    # crepancy, circle weights, -14 boundary, blow-down, index 7
    print(validate_golden(case))
    print()
