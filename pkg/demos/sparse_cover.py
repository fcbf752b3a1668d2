"""
A small cover of count distributions
====================================

Every collection of n indicators on the 1/k^2 grid is represented by one
stored collection with the same low-side and high-side power sums, plus a
few binomial-like collections for the heavy cases.
"""

import numpy as np

from approxnash.cover import build_cover, cover_check, sparse_count_bound

for n in (2, 3, 4, 6):
    cover = build_cover(n, 2, 2)
    print(f"n={n}: {cover.binomial_count} binomial + {cover.sparse_count} sparse "
          f"(counting bound {sparse_count_bound(n, 2, 2):.2e})")

cover = build_cover(4, 2, 2)
rng = np.random.default_rng(5)
print("\nnearest stored element for random collections:")
for _ in range(5):
    probs = rng.uniform(size=4).round(2)
    elem, tv = cover_check(cover, probs)
    print(f"  {probs} -> {elem.probs(4)} at tv {tv:.4f}")
