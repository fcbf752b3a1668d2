"""Parameter sweeps that back the ``sweep`` command and the demos."""

from __future__ import annotations

import os
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from itertools import combinations, combinations_with_replacement
from typing import Iterable, Sequence

from approxnash.bimatrix import oblivious_sampler
from approxnash.indicators import pbd_pmf, roos_bound, tv_distance

THREADS_ENV = "APPROXNASH_THREADS"

TV_COLUMNS = ["side", "n", "grid", "d", "groups", "pairs", "max_tv", "roos_bound"]
SAMPLER_COLUMNS = ["n", "eps", "seed", "t", "trials", "successes", "success_rate"]


def thread_count() -> int:
    value = os.environ.get(THREADS_ENV, "1")
    try:
        count = int(value)
    except ValueError:
        raise ValueError(f"{THREADS_ENV} must be an integer, got {value!r}") from None
    return max(1, count)


def grid_collections(n: int, grid: int, side: str = "low") -> Iterable[tuple]:
    """Sorted numerator tuples of size n, values in (0, grid/2] or [grid/2, grid)."""
    if side == "low":
        values = range(1, grid // 2 + 1)
    elif side == "high":
        values = range((grid + 1) // 2, grid)
    else:
        raise ValueError("side must be 'low' or 'high'")
    return combinations_with_replacement(values, n)


def matched_moment_max_tv(n: int, grid: int, d: int, side: str = "low") -> dict:
    """Largest TV between two size-n grid collections whose first d power sums agree."""
    groups = defaultdict(list)
    for c in grid_collections(n, grid, side):
        key = tuple(sum(v**ell for v in c) for ell in range(1, d + 1))
        groups[key].append(c)
    max_tv, pairs, multi = 0.0, 0, 0
    for members in groups.values():
        if len(members) < 2:
            continue
        multi += 1
        pmfs = [pbd_pmf([v / grid for v in c]) for c in members]
        for a, b in combinations(range(len(members)), 2):
            pairs += 1
            max_tv = max(max_tv, tv_distance(pmfs[a], pmfs[b]))
    return {"side": side, "n": n, "grid": grid, "d": d, "groups": multi, "pairs": pairs,
            "max_tv": max_tv, "roos_bound": roos_bound(d)}


def tv_sweep(ns: Sequence[int], grid: int, ds: Sequence[int], sides: Sequence[str] = ("low",)) -> list:
    cells = [(side, n, d) for side in sides for n in ns for d in ds]
    with ThreadPoolExecutor(thread_count()) as pool:
        return list(pool.map(lambda c: matched_moment_max_tv(c[1], grid, c[2], c[0]), cells))


def sampler_sweep(game, epsilons: Sequence[float], seeds: Sequence[int], trials: int) -> list:
    """One row per (eps, seed); all trials are run so the success rate is meaningful."""
    cells = [(eps, seed) for eps in epsilons for seed in seeds]

    def run(cell):
        eps, seed = cell
        rep = oblivious_sampler(game, eps, trials, seed=seed, stop_at_first=False)
        return {"n": game.n, "eps": eps, "seed": seed, "t": rep.t, "trials": rep.trials,
                "successes": rep.successes, "success_rate": rep.successes / rep.trials}

    with ThreadPoolExecutor(thread_count()) as pool:
        return list(pool.map(run, cells))
