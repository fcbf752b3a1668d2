"""
Sums of independent indicators
==============================

Exact count distributions, distances between them, and how much of a
distribution is pinned down by its first few power sums.
"""

import numpy as np

from approxnash.experiments import matched_moment_max_tv
from approxnash.indicators import pbd_pmf, power_sums, roos_bound, roos_expansion, tv_distance

# the count distribution of two coins with heads probabilities 0.2 and 0.3
a = pbd_pmf([0.2, 0.3])
print("pmf of {0.2, 0.3}:", a)

# same mean, different spread
b = pbd_pmf([0.25, 0.25])
print("pmf of {0.25, 0.25}:", b)
print("total variation:", tv_distance(a, b))

# the binomial expansion around the average probability is exact when run to full length
probs = np.random.default_rng(0).uniform(size=8)
err = np.abs(roos_expansion(probs) - pbd_pmf(probs)).max()
print(f"full expansion error for 8 random indicators: {err:.1e}")

# two collections that agree on sum p and sum p^2 have very close count distributions
x, y = [1 / 8, 4 / 8, 4 / 8], [2 / 8, 2 / 8, 5 / 8]
print("power sums:", power_sums(x, 2), power_sums(y, 2))
print("distance:", tv_distance(pbd_pmf(x), pbd_pmf(y)))

# largest distance between matched collections on a 1/20 grid, by depth
print("\n d  max_tv     bound")
for d in (1, 2, 3):
    worst = max(matched_moment_max_tv(n, 20, d)["max_tv"] for n in range(2, 6))
    print(f"{d:2d}  {worst:.5f}  {roos_bound(d):8.3f}")
first = next(d for d in range(1, 50) if roos_bound(d) < 1)
print(f"the bound drops below 1 at d = {first}")
