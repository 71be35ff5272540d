"""Discretizing a real class at margin gamma gives a partial 0/1 class.

Its VC dimension equals the zero-shift fat dimension.  Filling in the
undefined entries (disambiguation) can only raise the VC dimension; here we
see by how much.
"""

import numpy as np

from fatmax import PartialClass, SampledClass, discretize_class, faat_dim, vc_dim_partial
from fatmax.disambig import (disambiguation_vc, greedy_disambiguation, min_vc_disambiguation_exact,
                             size_check)
from fatmax.generators import random_partial_class

rng = np.random.default_rng(3)
F = SampledClass(rng.integers(-3, 4, size=(6, 4)).astype(float))
P = discretize_class(F, 1.0)
print("discretized class ('*' = inside the margin band):")
for row in P.to_lists():
    print("  ", row)
print(f"zero-shift fat_1 = {faat_dim(F, 1.0).dimension}, vc of the partial class = {vc_dim_partial(P).dimension}")

Q = PartialClass([[0, "*"], ["*", 1]])
D, vc = min_vc_disambiguation_exact(Q)
print(f"\n{Q.to_lists()} completes to {D.total.tolist()} with vc {vc}")

print("\nrandom partial classes on 4 points:")
print(" vc(P)  exact  greedy  distinct rows")
for _ in range(8):
    P = random_partial_class(rng, 4, 6, 0.4)
    D, vc = min_vc_disambiguation_exact(P)
    G = greedy_disambiguation(P)
    print(f"   {vc_dim_partial(P).dimension}      {vc}      {disambiguation_vc(G)}       {D.size}")

while True:
    P = random_partial_class(rng, 4, 6, 0.3)
    if vc_dim_partial(P).dimension >= 1:
        break
sc = size_check(P)
print(f"\nsize check: {sc.size} distinct rows against |X|^(5 d log2|X|) = {sc.bound:.3g}")
