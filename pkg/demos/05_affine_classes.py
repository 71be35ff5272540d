"""Affine functions on the unit ball: exact shattering witnesses and unions of halfspaces."""

import itertools

from fatmax import check_certificate, simplex_shatter_witness
from fatmax.affine import (WITNESS_ATOL, halfspace_union_shatter_search, union_certificate,
                           union_feasible, union_shatters)

for d in (1, 2, 3):
    X, F, cert = simplex_shatter_witness(d, 0.5)
    ok = check_certificate(F, cert, "zero", atol=WITNESS_ATOL)
    print(f"d={d}: simplex of {len(X)} points shattered at margin 0.5 with zero shift: {ok}")

pts = [[-0.5], [0.0], [0.5]]
print("\non a line, (-, +, -) needs a bounded interval:",
      "union of 2 rays works" if union_feasible(pts, [-1, 1, -1], 2) else "no union of 2 rays")
print("  while (+, -, +) is", "fine" if union_feasible(pts, [1, -1, 1], 2) else "impossible")

for d, k in ((1, 1), (1, 2), (2, 1), (2, 2)):
    r = halfspace_union_shatter_search(d, k, m_max=6)
    print(f"d={d}, k={k}: largest shattered set found has {r.size} points ({r.pool}, {r.lp_calls} LPs)")
    if d == 2 and k == 2:
        F, cert = union_certificate(r.points, union_shatters(r.points, k), k, 1.0)
        print("  converted to a zero-shift certificate for the max class:",
              check_certificate(F, cert, "zero", atol=WITNESS_ATOL))
