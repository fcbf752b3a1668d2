"""
Two-player games: sparse payoffs and random small supports
==========================================================

A game where every row and column has at most k nonzero payoffs is solved
by both players mixing uniformly. A game with a spread-out equilibrium can
be approximated by sampling small uniform multisets without looking at it.
"""

import numpy as np

from approxnash.bimatrix import lmm_sample_count, oblivious_sampler, solve_sparse, sparsity
from approxnash.games import bimatrix_regret
from approxnash.instances import gen_random_sparse, matching_pennies

print(" n  k  regret   bound")
for n in (32, 64, 128):
    for k in (1, 2, 3):
        game = gen_random_sparse(n, k, seed=n + k)
        pair, bound = solve_sparse(game)
        regret = max(bimatrix_regret(game, pair))
        print(f"{n:3d} {sparsity(game):2d}  {regret:.4f}  {bound:.4f}")

# the sampler only reads the game to check candidates
game = matching_pennies(2)
print("\nmultiset size for n=2, eps=0.6:", lmm_sample_count(2, 0.6))
for seed in range(3):
    rep = oblivious_sampler(game, 0.6, 200, seed=seed, stop_at_first=False, t=4)
    print(f"seed {seed}: {rep.successes}/{rep.trials} candidates within 0.6")

rep = oblivious_sampler(game, 0.6, 200, seed=0, t=4)
print("first success at trial", rep.first_success_trial, "row mix", np.round(rep.first_success.x, 3))
