"""How wide a margin can a finite class realize every sign pattern with?

Builds a few small classes, computes fat and zero-shift fat exactly, and
inspects the certificates the searches return.
"""

import numpy as np

from fatmax import SampledClass, check_certificate, faat_dim, fat_dim, fat_via_shift_scan
from fatmax.compose import shift_class
from fatmax.dims import zero_shift_certificate
from fatmax.generators import cube_class

# The sign cube {-1, 1}^4 realizes all 16 patterns at margin exactly 1.
F = cube_class(4)
r = fat_dim(F, 1.0)
print(f"cube: fat_1 = {r.dimension}, zero-shift fat_1 = {faat_dim(F, 1.0).dimension}")
print(f"  subsets examined: {r.stats.subsets_examined}, search nodes: {r.stats.nodes}")

# At margin slightly above 1 nothing is shattered any more.
print(f"cube: fat_1.01 = {fat_dim(F, 1.01).dimension}")

# Shifting every column moves the zero-shift answer but not the shifted one.
G = shift_class(F, [5.0, -3.0, 0.0, 2.0])
print(f"shifted cube: fat_1 = {fat_dim(G, 1.0).dimension}, zero-shift fat_1 = {faat_dim(G, 1.0).dimension}")
cert = fat_dim(G, 1.0).certificate
print(f"  the certificate recovers the shift: r = {cert.shift}")
assert check_certificate(G, cert)

# A random grid class, checked against a scan over explicit shift vectors.
rng = np.random.default_rng(1)
H = SampledClass(rng.integers(-3, 4, size=(8, 5)).astype(float))
for gamma in (0.5, 1.0, 2.0):
    a, b = fat_dim(H, gamma), fat_via_shift_scan(H, gamma)
    print(f"random 8x5, gamma={gamma}: gap search {a.dimension}, shift scan {b.dimension}, set {a.subset}")

# Half-differences of opposite witnesses realize the same patterns with zero shift.
z = zero_shift_certificate(G, cert)
print(f"half-difference witnesses valid at zero shift: {check_certificate(z.functions, z.certificate, 'zero')}")
print(f"  how many of them were already in the class: {sum(z.membership)} of {len(z.membership)}")
