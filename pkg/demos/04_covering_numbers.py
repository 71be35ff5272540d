"""Proper covering numbers of finite classes and how they behave under maxima."""

import math

import numpy as np

from fatmax import MetricSpec, SampledClass, covering_number, verify_product_bound
from fatmax.core import Measure
from fatmax.generators import grid_packing_count, cube_grid_class

F = SampledClass(np.array([[0.0, 0], [1, 1], [2, 2]]))
for t in (0.5, 1.0, 2.0):
    r = covering_number(F, MetricSpec(), t)
    print(f"diagonal class, sup metric, t={t}: N = {r.size}, centers {r.members}")

rng = np.random.default_rng(2)
A = SampledClass(rng.integers(-3, 4, size=(6, 4)).astype(float))
B = SampledClass(rng.integers(-3, 4, size=(6, 4)).astype(float))
mu = Measure(rng.dirichlet(np.ones(4)))
print("\nN(max(A,B), t) against the product of component numbers at t / k^(1/p):")
for p in (1.0, 2.0, math.inf):
    rep = verify_product_bound([A, B], MetricSpec(p, mu), 1.5, max_rows=64)
    print(f"  p={p}: {rep.n_max} <= {rep.component_numbers[0]} * {rep.component_numbers[1]} = {rep.product}")

print("\ncovering numbers never decrease as p grows:")
for p in (1.0, 2.0, 4.0, math.inf):
    print(f"  p={p}: N = {covering_number(A, MetricSpec(p), 1.0).size}")

print("\ngrids on [-1, 1]^n: the sup-metric cover is at least an explicit packing")
for n, step, t in ((1, 0.125, 0.2), (2, 0.25, 0.3), (3, 0.5, 0.3)):
    G = cube_grid_class(n, step)
    N = covering_number(G, MetricSpec(), t, max_rows=G.n_functions).size
    print(f"  n={n} step={step} t={t}: N = {N}, packing = {grid_packing_count(n, step, t)}")
