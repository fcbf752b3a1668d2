"""Exact power-sum systems over the grid {0, 1/K, ..., 1}.

Grid values are integer numerators j (value j/K). The l-th power sum of a
set of grid values is stored as the integer sum of j**l, i.e. as a numerator
over K**l, so every state comparison is exact.

A value j is "low" when 0 < 2j <= K and "high" when K < 2j < 2K; 0 and K
are the deterministic values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence

from approxnash.errors import BudgetExceeded


def is_low(j: int, K: int) -> bool:
    return 0 < 2 * j <= K


def is_high(j: int, K: int) -> bool:
    return K < 2 * j < 2 * K


def low_values(K: int) -> range:
    return range(1, K // 2 + 1)


def high_values(K: int) -> range:
    return range(K // 2 + 1, K)


def power_numerators(values: Iterable[int], d: int) -> tuple:
    values = list(values)
    return tuple(sum(v**ell for v in values) for ell in range(1, d + 1))


def to_numerator(value, K: int, ell: int) -> int:
    """Numerator of ``value`` over K**ell; raises if it is not on that grid."""
    frac = Fraction(value).limit_denominator(10**15) if isinstance(value, float) else Fraction(value)
    num = frac * K**ell
    if num.denominator != 1:
        raise ValueError(f"{value} is not an integer multiple of (1/{K})^{ell}")
    return int(num)


@dataclass(frozen=True)
class MomentSystem:
    """Variables p_1..p_m with p_i/K in grids[i]; exact counts and power sums."""

    K: int
    low: tuple
    high: tuple
    grids: tuple
    m0: int = 0
    m1: int = 0
    ms: int = 0
    mb: int = 0

    def __post_init__(self):
        object.__setattr__(self, "low", tuple(int(v) for v in self.low))
        object.__setattr__(self, "high", tuple(int(v) for v in self.high))
        object.__setattr__(self, "grids", tuple(frozenset(int(v) for v in g) for g in self.grids))
        if len(self.low) != len(self.high):
            raise ValueError("low and high targets must have the same depth")
        if self.m0 + self.m1 + self.ms + self.mb != len(self.grids):
            raise ValueError("counts must add up to the number of variables")
        for g in self.grids:
            if any(not 0 <= v <= self.K for v in g):
                raise ValueError("grid values must lie in 0..K")

    @property
    def d(self) -> int:
        return len(self.low)

    @classmethod
    def from_values(cls, K: int, low: Sequence, high: Sequence, grids: Sequence, m0=0, m1=0, ms=0, mb=0):
        """Build from real-valued targets (floats or Fractions) and grids of values in [0, 1]."""
        low_num = tuple(to_numerator(v, K, ell) for ell, v in enumerate(low, start=1))
        high_num = tuple(to_numerator(v, K, ell) for ell, v in enumerate(high, start=1))
        grid_num = tuple(frozenset(to_numerator(v, K, 1) for v in g) for g in grids)
        return cls(K, low_num, high_num, grid_num, m0, m1, ms, mb)


def _contribution(j: int, K: int, d: int) -> tuple:
    zeros = (0,) * d
    if j == 0:
        return (1, 0, 0, 0) + zeros + zeros
    if j == K:
        return (0, 1, 0, 0) + zeros + zeros
    powers = tuple(j**ell for ell in range(1, d + 1))
    if is_low(j, K):
        return (0, 0, 1, 0) + powers + zeros
    return (0, 0, 0, 1) + zeros + powers


def _add(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: tuple, b: tuple) -> tuple:
    return tuple(x - y for x, y in zip(a, b))


def _fits(state: tuple, target: tuple) -> bool:
    return all(s <= t for s, t in zip(state, target))


def solve_moment_system(system: MomentSystem, d: Optional[int] = None) -> Optional[tuple]:
    """Lexicographically smallest assignment (p_1..p_m numerators) solving the system.

    Layered reachability over (counts; low sums; high sums), filled from the
    last variable backwards so the witness can be read off greedily from the
    first variable. Returns None when no assignment exists.
    """
    if d is not None and d != system.d:
        raise ValueError(f"system has depth {system.d}, not {d}")
    K, d, m = system.K, system.d, len(system.grids)
    target = (system.m0, system.m1, system.ms, system.mb) + system.low + system.high
    contrib = {j: _contribution(j, K, d) for g in system.grids for j in g}

    zero = (0,) * len(target)
    # suffix[i]: partial sums reachable using variables i..m-1
    suffix = [set() for _ in range(m + 1)]
    suffix[m].add(zero)
    for i in range(m - 1, -1, -1):
        layer = suffix[i]
        for state in suffix[i + 1]:
            for j in system.grids[i]:
                nxt = _add(state, contrib[j])
                if _fits(nxt, target):
                    layer.add(nxt)
        if not layer:
            return None
    if target not in suffix[0]:
        return None

    witness = []
    prefix = zero
    for i in range(m):
        for j in sorted(system.grids[i]):
            nxt = _add(prefix, contrib[j])
            if _fits(nxt, target) and _sub(target, nxt) in suffix[i + 1]:
                witness.append(j)
                prefix = nxt
                break
    return tuple(witness)


MAX_TABLE_MULTISETS = 2_000_000


@lru_cache(maxsize=None)
def moment_table(K: int, side: str, size: int, d: int) -> dict:
    """Map power-sum numerators -> lexicographically smallest sorted multiset.

    Covers every multiset of ``size`` values from the low (``side="low"``) or
    high half of the grid. Built layer by layer keeping one witness per key,
    which preserves lexicographic minimality.
    """
    if side not in ("low", "high"):
        raise ValueError("side must be 'low' or 'high'")
    values = list(low_values(K) if side == "low" else high_values(K))
    layer = {(0,) * d: ()}
    for _ in range(size):
        nxt: dict = {}
        for key, wit in layer.items():
            for v in values:
                cand = tuple(sorted(wit + (v,)))
                k2 = tuple(a + v**ell for ell, a in enumerate(key, start=1))
                old = nxt.get(k2)
                if old is None or cand < old:
                    nxt[k2] = cand
        layer = nxt
        if len(layer) > MAX_TABLE_MULTISETS:
            raise BudgetExceeded("moment table exceeds the enumeration budget")
    return layer
