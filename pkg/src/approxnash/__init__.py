"""Approximate Nash equilibria for bimatrix games and two-strategy anonymous games."""

from approxnash.bimatrix import lmm_sample_count, oblivious_sampler, sample_from_equilibrium, solve_sparse, sparsity
from approxnash.cover import build_cover, cover_check, enumerate_binomial_forms, enumerate_sparse_profiles
from approxnash.errors import BudgetExceeded, ConsistencyError
from approxnash.games import (
    AnonymousGame,
    AnonymousProfile,
    BimatrixGame,
    MixedPair,
    anonymous_regret,
    bimatrix_regret,
    max_regret,
    others_count_distribution,
)
from approxnash.indicators import (
    complement,
    moment_profile,
    pbd_pmf,
    power_sums,
    raw_moments,
    roos_bound,
    roos_expansion,
    tv_distance,
)
from approxnash.moment_search import (
    SearchParams,
    brute_force_grid_nash,
    case2_search,
    moment_search,
    structural_params,
)
from approxnash.moment_system import MomentSystem, solve_moment_system

__version__ = "0.1.0"
