"""Moment Search for two-strategy anonymous games.

The search first tries profiles where every mixing player uses one common
probability on the 1/(kn) grid. Otherwise it guesses aggregates of an
equilibrium on the 1/k^2 grid: how many players play 0, 1, a low mix
(0, 1/2] or a high mix (1/2, 1), plus the first ``d`` power sums of each
mixing half. For each guess it classifies which grid strategies every player
may use and then solves the exact assignment problem by dynamic programming.

All grid probabilities are integer numerators over K = k^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product
from typing import Iterator, Optional

import numpy as np
from scipy.optimize import linear_sum_assignment

from approxnash.errors import BudgetExceeded
from approxnash.games import AnonymousGame, AnonymousProfile, anonymous_regret, regrets_from_payoffs
from approxnash.indicators import pbd_pmf
from approxnash.moment_system import (
    MomentSystem,
    high_values,
    is_high,
    is_low,
    low_values,
    moment_table,
    power_numerators,
    solve_moment_system,
)

# added to the 3*eps/4 classifier thresholds on the inclusive side
UTILITY_SLACK = 1e-9


@dataclass(frozen=True)
class SearchParams:
    eps: float
    k: int
    d: int
    c: float = 1.0
    verify_output: bool = True

    def __post_init__(self):
        if not 0.0 < self.eps <= 1.0:
            raise ValueError("eps must lie in (0, 1]")
        if self.k < 2:
            raise ValueError("k must be >= 2")
        if self.d < 1:
            raise ValueError("d must be >= 1")

    @property
    def K(self) -> int:
        return self.k * self.k


def structural_params(eps: float, c: float = 1.0, k: Optional[int] = None, d: Optional[int] = None,
                      verify_output: bool = True) -> SearchParams:
    """k = 2*ceil(c/eps) and d = ceil(3 log2(320/eps)) unless overridden."""
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must lie in (0, 1]")
    if c <= 0:
        raise ValueError("c must be positive")
    if k is None:
        k = 2 * math.ceil(c / eps)
    if d is None:
        d = math.ceil(3 * math.log2(320.0 / eps))
    return SearchParams(eps=eps, k=k, d=d, c=c, verify_output=verify_output)


@dataclass(frozen=True)
class AggregateGuess:
    """Counts plus power-sum numerators (over K**l) of the low and high mixers."""

    t0: int
    t1: int
    ts: int
    tb: int
    mu: tuple
    mu_high: tuple

    @property
    def n(self) -> int:
        return self.t0 + self.t1 + self.ts + self.tb

    def to_json(self, K: int) -> dict:
        return {
            "t0": self.t0, "t1": self.t1, "ts": self.ts, "tb": self.tb,
            "mu": [{"num": v, "den": K**ell} for ell, v in enumerate(self.mu, start=1)],
            "mu_high": [{"num": v, "den": K**ell} for ell, v in enumerate(self.mu_high, start=1)],
        }


@dataclass(frozen=True)
class PermittedSets:
    K: int
    sets: tuple

    def values(self, i: int) -> list:
        return [j / self.K for j in sorted(self.sets[i])]


def guess_from_profile(numerators, K: int, d: int) -> AggregateGuess:
    """The aggregate guess realised by a grid profile (numerators over K)."""
    nums = [int(j) for j in numerators]
    low = [j for j in nums if is_low(j, K)]
    high = [j for j in nums if is_high(j, K)]
    return AggregateGuess(
        t0=sum(1 for j in nums if j == 0),
        t1=sum(1 for j in nums if j == K),
        ts=len(low),
        tb=len(high),
        mu=power_numerators(low, d),
        mu_high=power_numerators(high, d),
    )


def _moment_ranges(t: int, lo: int, hi: int, d: int) -> list:
    return [range(t * lo**ell, t * hi**ell + 1) for ell in range(1, d + 1)]


def enumerate_guesses(n: int, params: SearchParams, realizable_only: bool = True) -> Iterator[AggregateGuess]:
    """Aggregate guesses in search order: increasing ts+tb, then counts, then moments.

    With ``realizable_only`` the moment vectors are restricted to those some
    multiset of grid values attains; every other guess fails at the classifier
    anyway. Without it the full numerator ranges are produced.
    """
    K, d = params.K, params.d
    lo_min, lo_max = 1, K // 2
    hi_min, hi_max = K // 2 + 1, K - 1
    for s in range(0, min(params.k**3, n) + 1):
        for ts in range(s, -1, -1):
            tb = s - ts
            if realizable_only:
                lows = sorted(moment_table(K, "low", ts, d))
                highs = sorted(moment_table(K, "high", tb, d))
            else:
                lows = list(product(*_moment_ranges(ts, lo_min, lo_max, d)))
                highs = list(product(*_moment_ranges(tb, hi_min, hi_max, d)))
            for t0 in range(n - s, -1, -1):
                t1 = n - s - t0
                for mu in lows:
                    for mu_high in highs:
                        yield AggregateGuess(t0, t1, ts, tb, tuple(mu), tuple(mu_high))


def _shifted(pmf: np.ndarray, shift: int, size: int) -> np.ndarray:
    out = np.zeros(size)
    out[shift : shift + pmf.size] = pmf
    return out


def classifier_distributions(guess: AggregateGuess, params: SearchParams) -> Optional[dict]:
    """Distribution Y of the others' count assumed for each candidate strategy.

    Returns a dict numerator -> pmf over {0..n-1}, omitting candidates whose
    residual moment system has no solution, or None if the guess itself is
    unrealisable.
    """
    K, d, n = params.K, params.d, guess.n
    low_tab = moment_table(K, "low", guess.ts, d)
    high_tab = moment_table(K, "high", guess.tb, d)
    base_low = low_tab.get(guess.mu)
    base_high = high_tab.get(guess.mu_high)
    if base_low is None or base_high is None:
        return None

    def others(values, shift):
        return _shifted(pbd_pmf([v / K for v in values]), shift, n)

    dists = {}
    if guess.t0 >= 1:
        dists[0] = others(base_low + base_high, guess.t1)
    if guess.t1 >= 1:
        dists[K] = others(base_low + base_high, guess.t1 - 1)
    if guess.ts >= 1:
        rest = moment_table(K, "low", guess.ts - 1, d)
        for j in low_values(K):
            w = rest.get(tuple(m - j**ell for ell, m in enumerate(guess.mu, start=1)))
            if w is not None:
                dists[j] = others(w + base_high, guess.t1)
    if guess.tb >= 1:
        rest = moment_table(K, "high", guess.tb - 1, d)
        for j in high_values(K):
            w = rest.get(tuple(m - j**ell for ell, m in enumerate(guess.mu_high, start=1)))
            if w is not None:
                dists[j] = others(base_low + w, guess.t1)
    return dists


def permitted_strategies(game: AnonymousGame, guess: AggregateGuess, params: SearchParams) -> Optional[PermittedSets]:
    """Grid strategies each player may use at 3*eps/4 regret given the guess.

    Returns None when the guess is infeasible.
    """
    if guess.n != game.n:
        raise ValueError("guess does not match the number of players")
    dists = classifier_distributions(guess, params)
    if dists is None:
        return None
    K = params.K
    threshold = 0.75 * params.eps + UTILITY_SLACK
    sets = [set() for _ in range(game.n)]
    for j, pmf in dists.items():
        U0 = game.u0 @ pmf
        U1 = game.u1 @ pmf
        if j == 0:
            ok = U0 >= U1 - threshold
        elif j == K:
            ok = U1 >= U0 - threshold
        else:
            ok = np.abs(U0 - U1) <= threshold
        for i in np.flatnonzero(ok):
            sets[i].add(j)
    return PermittedSets(K, tuple(frozenset(s) for s in sets))


def assignment_dp(sets: PermittedSets, guess: AggregateGuess, d: int) -> Optional[AnonymousProfile]:
    """A profile drawn from the permitted sets meeting the guess exactly, or None."""
    if any(len(s) == 0 for s in sets.sets):
        return None
    system = MomentSystem(sets.K, guess.mu, guess.mu_high, sets.sets,
                          guess.t0, guess.t1, guess.ts, guess.tb)
    witness = solve_moment_system(system, d)
    if witness is None:
        return None
    return AnonymousProfile(np.array(witness, dtype=float) / sets.K)


def _hall_feasible(allowed: np.ndarray, caps: np.ndarray) -> bool:
    slots = [s for s in range(len(caps)) if caps[s] > 0]
    for r in range(1, len(slots) + 1):
        for T in combinations(slots, r):
            reach = np.any(allowed[:, list(T)], axis=1).sum()
            if reach < caps[list(T)].sum():
                return False
    return True


def _assign(allowed: np.ndarray, caps: np.ndarray) -> np.ndarray:
    columns = np.repeat(np.arange(len(caps)), caps)
    cost = np.where(allowed[:, columns], 0.0, 1.0)
    rows, cols = linear_sum_assignment(cost)
    if cost[rows, cols].sum() > 0:
        raise AssertionError("Hall's condition held but no assignment was found")
    slot = np.empty(allowed.shape[0], dtype=int)
    slot[rows] = columns[cols]
    return slot


def case2_search(game: AnonymousGame, k: int, eps: float) -> Optional[AnonymousProfile]:
    """Profiles where all mixers share one probability i/(kn).

    Enumerates the number of mixers t, the number of zeros t0 and the common
    mix q; for each, computes exact regrets of every player in each slot and
    checks whether players can fill the slots (Hall's condition over the slot
    types). Returns the first feasible profile.
    """
    n = game.n
    for t in range(0, n + 1):
        qs = [None] if t == 0 else [i / (k * n) for i in range(1, k * n)]
        for t0 in range(n - t, -1, -1):
            t1 = n - t - t0
            caps = np.array([t0, t, t1])
            for q in qs:
                allowed = np.zeros((n, 3), dtype=bool)
                for s in range(3):
                    if caps[s] == 0:
                        continue
                    mixers = t - (s == 1)
                    base = pbd_pmf([q] * mixers) if mixers > 0 else np.ones(1)
                    pmf = _shifted(base, t1 - (s == 2), n)
                    U0 = game.u0 @ pmf
                    U1 = game.u1 @ pmf
                    if s == 0:
                        regret = np.maximum(U1 - U0, 0.0)
                    elif s == 2:
                        regret = np.maximum(U0 - U1, 0.0)
                    else:
                        regret = np.abs(U0 - U1)
                    allowed[:, s] = regret <= eps
                if not _hall_feasible(allowed, caps):
                    continue
                slot = _assign(allowed, caps)
                values = np.array([0.0, q if q is not None else 0.0, 1.0])
                return AnonymousProfile(values[slot])
    return None


@dataclass(frozen=True)
class MomentSearchResult:
    profile: AnonymousProfile
    max_regret: float
    guess: Optional[AggregateGuess]
    source: str


def moment_search(game: AnonymousGame, params: SearchParams, run_case2: bool = True) -> Optional[MomentSearchResult]:
    """Search for an eps-Nash equilibrium; None if every guess fails.

    ``run_case2=False`` skips the common-mix search (useful to exercise the
    moment guesses on their own).

    With ``params.verify_output`` each candidate is re-checked with exact
    regrets and returned only if its maximum regret is at most eps.
    """

    def accept(profile):
        r = float(anonymous_regret(game, profile).max())
        return r, (not params.verify_output) or r <= params.eps

    profile = case2_search(game, params.k, params.eps) if run_case2 else None
    if profile is not None:
        r, ok = accept(profile)
        if ok:
            return MomentSearchResult(profile, r, None, "case2")

    for guess in enumerate_guesses(game.n, params):
        sets = permitted_strategies(game, guess, params)
        if sets is None:
            continue
        profile = assignment_dp(sets, guess, params.d)
        if profile is None:
            continue
        r, ok = accept(profile)
        if ok:
            return MomentSearchResult(profile, r, guess, "moments")
    return None


MAX_ORACLE_PROFILES = 2_000_000


def brute_force_grid_nash(game, grid_denominator: int, eps: float, max_profiles: int = MAX_ORACLE_PROFILES,
                          chunk: int = 100_000) -> list:
    """Every profile with entries in {0, 1/G, ..., 1} whose max regret is <= eps.

    Profiles are listed in lexicographic order of their numerators.
    """
    G, n = int(grid_denominator), game.n
    total = (G + 1) ** n
    if total > max_profiles:
        raise BudgetExceeded(f"{total} grid profiles exceed the budget of {max_profiles}")
    weights = (G + 1) ** np.arange(n - 1, -1, -1)
    found = []
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk))
        Q = (idx[:, None] // weights[None, :]) % (G + 1) / G
        U0, U1 = game.expected_payoffs(Q)
        regret = regrets_from_payoffs(Q, U0, U1).max(axis=1)
        for row in np.flatnonzero(regret <= eps):
            found.append(AnonymousProfile(Q[row]))
    return found
