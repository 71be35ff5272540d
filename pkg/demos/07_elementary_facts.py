"""Numeric checks of the log inequalities used to solve for dimension bounds.

The log^(1+eps) Jensen step only holds where x log^(1+eps)(u/x) is concave,
which is where log(u/x) >= eps.  Sampling outside that region finds
counterexamples; inside it, none.
"""

import math

import numpy as np

from fatmax.bounds import check_elementary_facts

r = check_elementary_facts(10_000, seed=0)
for key in ("log2x", "log2y", "xlog", "xlog_eps"):
    print(f"{key:9s} max relative violation {r[key]['max_violation']:.2e}")
print(f"tuples drawn from all of [1, u] that break the log^(1+eps) step: "
      f"{r['xlog_eps']['full_domain_violations']} of 10000")

# one explicit counterexample outside the concave region
u, eps = 4.0, 0.6
v = np.array([1.0, u])
lhs = float(np.sum(v * np.log(u / v) ** (1 + eps)))
s = v.sum()
rhs = s * math.log(u * 2 / s) ** (1 + eps)
print(f"v=(1, {u}), u={u}, eps={eps}: lhs {lhs:.4f} vs rhs {rhs:.4f}")
