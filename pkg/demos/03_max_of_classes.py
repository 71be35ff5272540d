"""Fat dimension of k-fold maxima compared with the sum of component dimensions."""

import numpy as np

from fatmax import SampledClass, fat_dim, k_fold_max
from fatmax.bounds import BoundParams, bound_report, report_csv
from fatmax.generators import cube_class

# Two one-point cubes: each shatters one point, their max shatters one too.
comps = [cube_class(1), cube_class(1)]
print("max of two 1-point cubes:", fat_dim(k_fold_max(comps), 1.0).dimension)

# Three copies of the cube on two points.
comps = [cube_class(2)] * 3
G = k_fold_max(comps)
print(f"max of three 2-point cubes: {G.n_functions} tuples, fat_1 = {fat_dim(G, 1.0).dimension}")

rng = np.random.default_rng(11)
instances = []
for i in range(12):
    comps = [SampledClass(rng.integers(-2, 3, size=(3, 4)).astype(float)) for _ in range(3)]
    G = k_fold_max(comps)
    instances.append((f"r{i}", fat_dim(G, 1.0), [fat_dim(F, 1.0) for F in comps]))

rows = bound_report(instances, BoundParams(gamma=1.0), ("THM1",))
print("\nslack table (fat of the max over the explicit bound; probe column is never asserted):")
print(report_csv(rows, ("THM1",)))
