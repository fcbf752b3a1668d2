"""Sparse epsilon-cover of sums of n independent indicators.

The cover has two parts:

* heavy Binomial forms: ``ell`` indicators with a common expectation q on
  the 1/(kn) grid, ``ones`` deterministic ones and the rest zeros, kept only
  when the Binomial part has large mean and variance;
* sparse forms: at most k^3 indicators on the 1/k^2 grid strictly inside
  (0, 1), plus ``ones`` deterministic ones. One collection is kept per exact
  moment profile (low power sums, high power sums, count of ones).

Power sums are keyed by integer numerators over K**l with K = k^2.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

import numpy as np

from approxnash.errors import BudgetExceeded
from approxnash.indicators import pbd_pmf, tv_distance
from approxnash.moment_system import MomentSystem, high_values, low_values, solve_moment_system

MAX_COVER_CANDIDATES = 2_000_000


def _rational(num: int, den: int) -> dict:
    return {"num": int(num), "den": int(den)}


@dataclass(frozen=True)
class SparseForm:
    """Grid numerators (over K) of the mixing indicators, sorted, plus a count of ones."""

    K: int
    values: tuple
    ones: int

    def probs(self, n: int) -> np.ndarray:
        out = np.zeros(n)
        m = len(self.values)
        if m + self.ones > n:
            raise ValueError("form has more indicators than n")
        out[:m] = np.array(self.values, dtype=float) / self.K
        out[m : m + self.ones] = 1.0
        return out

    def to_json(self) -> dict:
        return {"form": "sparse", "K": self.K, "values": [_rational(v, self.K) for v in self.values], "ones": self.ones}


@dataclass(frozen=True)
class BinomialForm:
    """``ell`` indicators with expectation q = q_num/q_den, plus ``ones`` ones."""

    ell: int
    q_num: int
    q_den: int
    ones: int

    @property
    def q(self) -> Fraction:
        return Fraction(self.q_num, self.q_den)

    def probs(self, n: int) -> np.ndarray:
        if self.ell + self.ones > n:
            raise ValueError("form has more indicators than n")
        out = np.zeros(n)
        out[: self.ell] = self.q_num / self.q_den
        out[self.ell : self.ell + self.ones] = 1.0
        return out

    def to_json(self) -> dict:
        return {"form": "binomial", "ell": self.ell, "q": _rational(self.q_num, self.q_den), "ones": self.ones}


CoverElement = Union[SparseForm, BinomialForm]


def element_from_json(obj: dict) -> CoverElement:
    if obj["form"] == "sparse":
        vals = obj["values"]
        dens = {int(v["den"]) for v in vals}
        if "K" in obj:
            dens.add(int(obj["K"]))
        if len(dens) > 1:
            raise ValueError("sparse form values must share one denominator")
        K = dens.pop() if dens else 1
        return SparseForm(K, tuple(int(v["num"]) for v in vals), int(obj["ones"]))
    if obj["form"] == "binomial":
        q = obj["q"]
        return BinomialForm(int(obj["ell"]), int(q["num"]), int(q["den"]), int(obj["ones"]))
    raise ValueError(f"unknown cover element form {obj['form']!r}")


def binomial_form_ok(ell: int, q: Fraction, k: int) -> bool:
    """ell q >= k^2 - 1/k and ell q (1 - q) >= k^2 - k - 1 - 3/k, compared exactly."""
    k = Fraction(k)
    mean = ell * q
    return mean >= k * k - 1 / k and mean * (1 - q) >= k * k - k - 1 - 3 / k


def enumerate_binomial_forms(n: int, k: int) -> list:
    if n < 1 or k < 2:
        raise ValueError("need n >= 1 and k >= 2")
    den = k * n
    out = []
    for ell in range(n + 1):
        for i in range(1, den):
            if binomial_form_ok(ell, Fraction(i, den), k):
                out.extend(BinomialForm(ell, i, den, ones) for ones in range(n - ell + 1))
    return out


def _vectors(size: int, lo: int, hi: int, d: int) -> Iterator[tuple]:
    """Numerator vectors in range with a_{l+1} between lo*a_l and hi*a_l."""
    if size == 0:
        yield (0,) * d
        return

    def extend(prefix):
        ell = len(prefix) + 1
        a, b = size * lo**ell, size * hi**ell
        if prefix:
            a, b = max(a, lo * prefix[-1]), min(b, hi * prefix[-1])
        for v in range(a, b + 1):
            if ell == d:
                yield prefix + (v,)
            else:
                yield from extend(prefix + (v,))

    yield from extend(())


def _side_solutions(K: int, side: str, size: int, d: int, budget: list) -> dict:
    """Realisable power-sum vectors of ``size`` values on one side -> lex-min witness."""
    values = list(low_values(K) if side == "low" else high_values(K))
    if size and not values:
        return {}
    lo, hi = (values[0], values[-1]) if values else (0, 0)
    found = {}
    zeros = (0,) * d
    for vec in _vectors(size, lo, hi, d):
        budget[0] -= 1
        if budget[0] < 0:
            raise BudgetExceeded("cover enumeration exceeds the candidate budget")
        if side == "low":
            system = MomentSystem(K, vec, zeros, [values] * size, ms=size)
        else:
            system = MomentSystem(K, zeros, vec, [values] * size, mb=size)
        witness = solve_moment_system(system)
        if witness is not None:
            found[vec] = witness
    return found


def enumerate_sparse_profiles(n: int, k: int, d: int,
                              max_candidates: int = MAX_COVER_CANDIDATES) -> Iterator[tuple]:
    """Yield (profile_key, SparseForm) for every realisable sparse moment profile once.

    profile_key is (low numerators, high numerators, ones). Order: number of
    low mixers, number of high mixers, ones, then the low and high vectors in
    increasing order. A profile is yielded the first time it is realised.
    """
    if n < 1 or k < 2 or d < 1:
        raise ValueError("need n >= 1, k >= 2 and d >= 1")
    K = k * k
    cap = min(k**3, n)
    budget = [max_candidates]
    low = {s: _side_solutions(K, "low", s, d, budget) for s in range(cap + 1)}
    high = {s: _side_solutions(K, "high", s, d, budget) for s in range(cap + 1)}
    seen = set()
    for ls in range(cap + 1):
        for hs in range(min(cap, n - ls) + 1):
            for ones in range(n - ls - hs + 1):
                for lv, lw in low[ls].items():
                    for hv, hw in high[hs].items():
                        key = (lv, hv, ones)
                        if key in seen:
                            continue
                        seen.add(key)
                        yield key, SparseForm(K, tuple(sorted(lw + hw)), ones)


@dataclass
class Cover:
    n: int
    k: int
    d: int
    elements: list
    profile_index: dict

    def pmf_matrix(self) -> np.ndarray:
        return np.array([pbd_pmf(e.probs(self.n)) for e in self.elements]).reshape(len(self.elements), self.n + 1)

    @property
    def sparse_count(self) -> int:
        return sum(isinstance(e, SparseForm) for e in self.elements)

    @property
    def binomial_count(self) -> int:
        return sum(isinstance(e, BinomialForm) for e in self.elements)

    def to_json(self) -> dict:
        return {"n": self.n, "k": self.k, "d": self.d, "elements": [e.to_json() for e in self.elements]}

    @classmethod
    def from_json(cls, obj: dict) -> "Cover":
        n, k, d = int(obj["n"]), int(obj["k"]), int(obj["d"])
        elements = [element_from_json(e) for e in obj["elements"]]
        index = {}
        for pos, e in enumerate(elements):
            if isinstance(e, SparseForm):
                index[sparse_profile_key(e.values, e.K, d, e.ones)] = pos
        return cls(n, k, d, elements, index)


def sparse_profile_key(values: Sequence[int], K: int, d: int, ones: int = 0) -> tuple:
    """Exact moment profile of grid numerators in (0, K): (low sums, high sums, ones)."""
    low = [v for v in values if 0 < 2 * v <= K]
    high = [v for v in values if K < 2 * v < 2 * K]
    ones += sum(1 for v in values if v == K)
    return (
        tuple(sum(v**ell for v in low) for ell in range(1, d + 1)),
        tuple(sum(v**ell for v in high) for ell in range(1, d + 1)),
        ones,
    )


def build_cover(n: int, k: int, d: int, max_candidates: int = MAX_COVER_CANDIDATES) -> Cover:
    """Binomial forms followed by one sparse form per realisable moment profile."""
    elements: list = list(enumerate_binomial_forms(n, k))
    index = {}
    for key, form in enumerate_sparse_profiles(n, k, d, max_candidates):
        index[key] = len(elements)
        elements.append(form)
    return Cover(n, k, d, elements, index)


def cover_check(cover: Cover, probs: Sequence[float]) -> tuple:
    """(element, tv) for the cover element whose count distribution is closest to that of ``probs``."""
    probs = np.asarray(probs, dtype=float)
    if probs.size != cover.n:
        raise ValueError(f"collection has {probs.size} entries, cover is for n={cover.n}")
    if not cover.elements:
        raise ValueError("cover is empty")
    target = pbd_pmf(probs)
    tvs = [tv_distance(target, row) for row in cover.pmf_matrix()]
    best = int(np.argmin(tvs))
    return cover.elements[best], float(tvs[best])


def sparse_count_bound(n: int, k: int, d: int) -> int:
    """(k^3+1)^2 (n+1) prod_t (k^(2t) k^3 + 1)^2."""
    out = (k**3 + 1) ** 2 * (n + 1)
    for t in range(1, d + 1):
        out *= (k ** (2 * t) * k**3 + 1) ** 2
    return out


def binomial_count_bound(n: int, k: int) -> int:
    return (n + 1) ** 2 * n * k
