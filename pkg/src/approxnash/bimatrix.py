"""Two bimatrix approximation schemes.

* Sparse games: the uniform pair is a well-supported (2k/n)-equilibrium when
  every row and column has at most k nonzero payoffs.
* Small-probability games: an oblivious sampler that draws uniformly random
  multisets of size ``t = ceil(16 ln n / eps^2)`` for both players and keeps
  the first pair of uniform distributions that passes the regret check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from approxnash.games import BimatrixGame, MixedPair, bimatrix_regret

RNG_ALGORITHM = "numpy.random.PCG64"


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def sparsity(game: BimatrixGame) -> int:
    """Largest number of nonzero entries in any row or column of R or C."""
    counts = [0]
    for M in (game.R, game.C):
        nz = M != 0.0
        counts.append(int(nz.sum(axis=1).max()))
        counts.append(int(nz.sum(axis=0).max()))
    return max(counts)


def solve_sparse(game: BimatrixGame) -> tuple[MixedPair, float]:
    """The uniform pair together with its certified regret bound 2k/n."""
    n = game.n
    return MixedPair.uniform(n), 2.0 * sparsity(game) / n


def lmm_sample_count(n: int, eps: float) -> int:
    """t = ceil(16 ln n / eps^2)."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    return math.ceil(16.0 * math.log(n) / eps**2)


def sample_multiset_pair(n: int, t: int, rng: np.random.Generator) -> tuple[np.ndarray, np.ndarray]:
    """Two ordered multisets of t indices, each drawn uniformly from range(n)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if t < 1:
        raise ValueError("multiset size must be >= 1")
    A = rng.integers(0, n, size=t)
    B = rng.integers(0, n, size=t)
    return A, B


def uniform_over(items: np.ndarray, n: int) -> np.ndarray:
    """The uniform distribution over a multiset, as a length-n vector."""
    return np.bincount(items, minlength=n) / len(items)


@dataclass
class SamplerReport:
    trials: int
    successes: int
    first_success: Optional[MixedPair]
    seed: int
    t: int
    eps: float
    rng_algorithm: str = RNG_ALGORITHM
    first_success_trial: Optional[int] = None
    first_regret: Optional[float] = None

    def to_json(self) -> dict:
        return {
            "trials": self.trials,
            "successes": self.successes,
            "first_success": None if self.first_success is None else self.first_success.to_json(),
            "first_success_trial": self.first_success_trial,
            "first_regret": self.first_regret,
            "seed": self.seed,
            "rng_algorithm": self.rng_algorithm,
            "t": self.t,
            "eps": self.eps,
        }


def oblivious_sampler(game: BimatrixGame, eps: float, max_trials: int, seed: int = 0,
                      stop_at_first: bool = True, mode: str = "well_supported",
                      t: Optional[int] = None) -> SamplerReport:
    """Sample uniform-over-multiset pairs until one is an eps-equilibrium.

    The candidate sequence depends only on (n, t, seed); the game is used
    only to test candidates. ``stop_at_first=False`` runs every trial and
    counts all successes.
    """
    if max_trials < 1:
        raise ValueError("max_trials must be >= 1")
    n = game.n
    if t is None:
        t = lmm_sample_count(max(n, 2), eps)
    rng = make_rng(seed)
    report = SamplerReport(trials=0, successes=0, first_success=None, seed=seed, t=t, eps=eps)
    for trial in range(max_trials):
        A, B = sample_multiset_pair(n, t, rng)
        pair = MixedPair(uniform_over(A, n), uniform_over(B, n))
        report.trials += 1
        regret = max(bimatrix_regret(game, pair, mode=mode))
        if regret <= eps:
            report.successes += 1
            if report.first_success is None:
                report.first_success = pair
                report.first_success_trial = trial
                report.first_regret = regret
            if stop_at_first:
                break
    return report


def sample_from_equilibrium(pair: MixedPair, t: int, rng: np.random.Generator) -> MixedPair:
    """Uniform distributions over t independent draws from x and from y."""
    if t < 1:
        raise ValueError("sample size must be >= 1")
    n = pair.x.size
    A = rng.choice(n, size=t, p=pair.x)
    B = rng.choice(pair.y.size, size=t, p=pair.y)
    return MixedPair(uniform_over(A, n), uniform_over(B, pair.y.size))


def payoff_deviation(game: BimatrixGame, sampled: MixedPair, pair: MixedPair) -> tuple[float, float]:
    """max_i |(R Y)_i - (R y)_i| and max_j |(X^T C)_j - (x^T C)_j|."""
    row = float(np.abs(game.R @ sampled.y - game.R @ pair.y).max())
    col = float(np.abs(sampled.x @ game.C - pair.x @ game.C).max())
    return row, col
