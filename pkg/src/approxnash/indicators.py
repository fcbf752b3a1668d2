"""Sums of independent indicators (Poisson binomial distributions).

Exact pmf by incremental convolution, total variation distance, power sums,
raw moments, the Roos expansion around a binomial, and moment profiles used
to deduplicate collections.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Optional, Sequence

import numpy as np

PMF_CLIP = 1e-15


class ConsistencyError(RuntimeError):
    """Raised when a computed distribution is numerically inconsistent."""


def _as_probs(probs: Sequence[float]) -> np.ndarray:
    p = np.asarray(probs, dtype=float).reshape(-1)
    if p.size and (np.any(p < 0.0) or np.any(p > 1.0) or not np.all(np.isfinite(p))):
        raise ValueError("indicator expectations must lie in [0, 1]")
    return p


def _clean(pmf: np.ndarray) -> np.ndarray:
    if np.any(pmf < -PMF_CLIP):
        raise ConsistencyError(f"pmf has negative mass {pmf.min():.3e}")
    if np.any(pmf < 0.0):
        pmf = np.clip(pmf, 0.0, None)
        pmf = pmf / pmf.sum(axis=-1, keepdims=True)
    return pmf


def pbd_pmf_batch(probs: np.ndarray) -> np.ndarray:
    """Row-wise pmf for a batch of collections of shape (N, m) -> (N, m + 1)."""
    probs = np.asarray(probs, dtype=float)
    N, m = probs.shape
    pmf = np.zeros((N, m + 1))
    pmf[:, 0] = 1.0
    for j in range(m):
        p = probs[:, j : j + 1]
        head = pmf[:, : j + 2].copy()
        pmf[:, : j + 2] = head * (1.0 - p)
        pmf[:, 1 : j + 2] += head[:, : j + 1] * p
    return _clean(pmf)


def pbd_pmf(probs: Sequence[float]) -> np.ndarray:
    """Exact distribution of the number of successes, a vector over {0..n}."""
    p = _as_probs(probs)
    pmf = np.zeros(p.size + 1)
    pmf[0] = 1.0
    for j, pj in enumerate(p):
        pmf[1 : j + 2] = pmf[1 : j + 2] * (1.0 - pj) + pmf[: j + 1] * pj
        pmf[0] *= 1.0 - pj
    return _clean(pmf)


def tv_distance(a: Sequence[float], b: Sequence[float]) -> float:
    """Total variation distance; the shorter vector is zero padded."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    size = max(a.size, b.size)
    diff = np.zeros(size)
    diff[: a.size] += a
    diff[: b.size] -= b
    return float(min(1.0, 0.5 * np.abs(diff).sum()))


def power_sums(probs: Sequence[float], d: int) -> np.ndarray:
    """Vector (sum p_i, sum p_i^2, ..., sum p_i^d)."""
    if d < 1:
        raise ValueError("depth must be >= 1")
    p = _as_probs(probs)
    return np.array([np.sum(p**ell) for ell in range(1, d + 1)])


def raw_moments(pmf: Sequence[float], d: int) -> np.ndarray:
    """E[S^l] for l = 1..d of a distribution over {0..n}."""
    if d < 1:
        raise ValueError("depth must be >= 1")
    pmf = np.asarray(pmf, dtype=float)
    support = np.arange(pmf.size, dtype=float)
    return np.array([np.dot(pmf, support**ell) for ell in range(1, d + 1)])


def binomial_pmf_value(m: int, n: int, p: float) -> float:
    """b(m, n, p), defined as 0 outside 0 <= m <= n."""
    if n < 0 or m < 0 or m > n:
        return 0.0
    return comb(n, m) * p**m * (1.0 - p) ** (n - m)


def centered_elementary(probs: Sequence[float], p: float, L: int) -> np.ndarray:
    """alpha_0..alpha_L: elementary symmetric polynomials of (p_i - p)."""
    x = _as_probs(probs) - p
    alpha = np.zeros(L + 1)
    alpha[0] = 1.0
    for xi in x:
        alpha[1:] = alpha[1:] + xi * alpha[:-1]
    return alpha


def binomial_derivative(n: int, p: float, ell: int) -> np.ndarray:
    """The signed measure ((n-l)!/n!) d^l/dp^l B_{n,p} over {0..n}.

    Uses d/dp b(m, n, p) = n (b(m-1, n-1, p) - b(m, n-1, p)) iterated l times;
    the falling factorial cancels the normalisation.
    """
    out = np.zeros(n + 1)
    for m in range(n + 1):
        out[m] = sum(
            (-1) ** (ell - j) * comb(ell, j) * binomial_pmf_value(m - j, n - ell, p)
            for j in range(ell + 1)
        )
    return out


def roos_expansion(probs: Sequence[float], p: Optional[float] = None, L: Optional[int] = None) -> np.ndarray:
    """Truncated Krawtchouk-type expansion of the pmf around Binomial(n, p).

    ``p`` defaults to the mean expectation and ``L`` to ``n`` (exact).
    """
    probs = _as_probs(probs)
    n = probs.size
    if p is None:
        p = float(probs.mean()) if n else 0.5
    if not 0.0 < p < 1.0:
        raise ValueError("base point p must lie in (0, 1)")
    if L is None:
        L = n
    if not 0 <= L <= n:
        raise ValueError("truncation order must satisfy 0 <= L <= n")
    alpha = centered_elementary(probs, p, L)
    values = np.zeros(n + 1)
    for ell in range(L + 1):
        if alpha[ell] != 0.0:
            values += alpha[ell] * binomial_derivative(n, p, ell)
    return values


def roos_bound(d: int) -> float:
    """20 (d+1)^(1/4) 2^(-(d+1)/2): TV bound when d power sums agree."""
    if d < 0:
        raise ValueError("depth must be >= 0")
    return 20.0 * (d + 1) ** 0.25 * 2.0 ** (-(d + 1) / 2.0)


def complement(probs: Sequence[float]) -> np.ndarray:
    return 1.0 - _as_probs(probs)


@dataclass(frozen=True)
class MomentProfile:
    """Power sums of the low half (0, 1/2], of the high half (1/2, 1), and #ones."""

    d: int
    low: tuple
    high: tuple
    ones: int


def moment_profile(probs: Sequence[float], d: int) -> MomentProfile:
    if d < 1:
        raise ValueError("depth must be >= 1")
    p = _as_probs(probs)
    low = p[(p > 0.0) & (p <= 0.5)]
    high = p[(p > 0.5) & (p < 1.0)]
    return MomentProfile(
        d=d,
        low=tuple(float(np.sum(low**t)) for t in range(1, d + 1)),
        high=tuple(float(np.sum(high**t)) for t in range(1, d + 1)),
        ones=int(np.sum(p == 1.0)),
    )
