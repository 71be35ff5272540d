"""Nets for the absolutely convex hull of a few vectors from short signed averages."""

import numpy as np

from fatmax.covering import maurey_cover, maurey_size_bound, net_coverage, sample_absconv

for m in (2, 5, 10):
    X = np.eye(m)
    for t in (1.0, 0.8, 0.6):
        net = maurey_cover(X, 1.0, t)
        Z = sample_absconv(X, 2000, seed=m)
        far = net_coverage(net, Z).max()
        bound = maurey_size_bound(m, 1.0, t)
        print(f"m={m:2d} t={t}: {net.terms}-term averages, {net.size:6d} points "
              f"(formula {bound:9.0f}), farthest sample {far:.3f}")
