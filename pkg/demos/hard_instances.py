"""
Games that resist simple search
===============================

The first family hides a set S of rows: near-equilibria must put almost
uniform weight on S, and there are many nearly disjoint such targets. The
second is an anonymous game whose near-equilibria pin each main player
close to a chosen probability.
"""

import numpy as np

from approxnash.games import MixedPair, anonymous_regret, bimatrix_regret
from approxnash.instances import gen_gp_game, gen_gs_game, gs_equilibrium
from approxnash.moment_search import brute_force_grid_nash

game = gen_gs_game(4)
print("row payoffs for |S| = 4 (n = 6):")
print(game.R.astype(int))
print("regret of (uniform on S, uniform):", bimatrix_regret(game, gs_equilibrium(4)))

# moving weight around inside S is punished by the column player
for shift in (0.02, 0.05, 0.1):
    x = np.array([0.25 + shift, 0.25 - shift, 0.25, 0.25, 0, 0])
    print(f"shift {shift}: regret", np.round(bimatrix_regret(game, MixedPair(x, np.full(6, 1 / 6))), 4))

gp = gen_gp_game(2, (0.4, 0.6), 0.05)
print("\nprescribed profile regret:", anonymous_regret(gp, gp.prescribed_profile()).max())
found = brute_force_grid_nash(gp, 20, 0.02)
qa = np.array([f.q[:2] for f in found])
print(f"{len(found)} grid profiles within 0.02")
print("type-A ranges:", qa.min(axis=0), "to", qa.max(axis=0))
