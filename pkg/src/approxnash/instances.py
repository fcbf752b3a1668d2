"""Game generators: lower-bound constructions plus random and textbook games.

``gen_gs_game`` builds the bimatrix game whose approximate equilibria force
the row player near the uniform distribution on a hidden set S.
``GpGame`` is the three-type anonymous game whose approximate equilibria pin
each type-A player near a prescribed probability.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from typing import Optional, Sequence

import numpy as np

from approxnash.bimatrix import make_rng
from approxnash.games import AnonymousGame, BimatrixGame, MixedPair
from approxnash.indicators import pbd_pmf_batch


def gs_size(ell: int) -> int:
    if ell < 2 or ell % 2:
        raise ValueError("ell must be an even integer >= 2")
    return comb(ell, ell // 2)


def gs_columns(ell: int, S: Sequence[int]) -> list:
    """Size ell/2 subsets of S in lexicographic order; column j is subsets[j]."""
    return list(combinations(sorted(S), ell // 2))


def _check_S(ell: int, S: Optional[Sequence[int]]) -> tuple:
    n = gs_size(ell)
    if S is None:
        return n, tuple(range(ell))
    S = tuple(sorted(int(i) for i in S))
    if len(set(S)) != ell:
        raise ValueError(f"S must contain exactly {ell} distinct indices")
    if S[0] < 0 or S[-1] >= n:
        raise ValueError(f"S must be a subset of range({n})")
    return n, S


def gen_gs_game(ell: int, S: Optional[Sequence[int]] = None) -> BimatrixGame:
    """The n x n game with n = C(ell, ell/2) indexed by the hidden set S (0-based).

    Rows outside S pay (-1, 1). Row i in S pays (1, 0) against column j when
    i belongs to the j-th subset and (0, 1) otherwise.
    """
    n, S = _check_S(ell, S)
    R = np.full((n, n), -1.0)
    C = np.ones((n, n))
    for j, sub in enumerate(gs_columns(ell, S)):
        for i in S:
            if i in sub:
                R[i, j], C[i, j] = 1.0, 0.0
            else:
                R[i, j], C[i, j] = 0.0, 1.0
    return BimatrixGame(R, C)


def gs_equilibrium(ell: int, S: Optional[Sequence[int]] = None) -> MixedPair:
    """Uniform over S for the row player, uniform over all columns for the column player."""
    n, S = _check_S(ell, S)
    x = np.zeros(n)
    x[list(S)] = 1.0 / ell
    return MixedPair(x, np.full(n, 1.0 / n))


@dataclass(frozen=True, eq=False)
class GpGame:
    """Anonymous game with k type-A players followed by one B and one C player.

    Player indices: 0..k-1 are type A, k is B, k+1 is C. Type-A payoffs
    depend on which of B and C play 1, so expectations are taken over the
    four (B, C) outcomes times the type-A count distribution.
    """

    k: int
    p: tuple
    delta: float

    def __post_init__(self):
        p = tuple(float(v) for v in self.p)
        object.__setattr__(self, "p", p)
        if self.k < 1 or len(p) != self.k:
            raise ValueError("p must list one probability per type-A player")
        if self.delta <= 0:
            raise ValueError("delta must be positive")
        if any(not 3 * self.delta * self.k - 1e-12 <= v <= 1.0 for v in p):
            raise ValueError("every p_i must lie in [3*delta*k, 1]")

    @property
    def n(self) -> int:
        return self.k + 2

    @property
    def mu(self) -> float:
        return float(sum(self.p))

    def prescribed_profile(self) -> np.ndarray:
        return np.array(self.p + (0.0, 0.0))

    # pure payoffs; tA counts type-A players playing 1 (excluding i for u_A)
    def u_A(self, i: int, s: int, tA_others, b: int, c: int):
        k, d = self.k, self.delta
        both0 = (1 - b) * (1 - c)
        tA_others = np.asarray(tA_others, dtype=float)
        if s == 0:
            return np.full(tA_others.shape, ((self.mu - self.p[i]) * both0 - d * k * c) / k)
        return (tA_others * both0 - d * k * b) / k

    def u_B(self, s: int, tA):
        tA = np.asarray(tA, dtype=float)
        return (tA - self.mu) / self.k if s == 1 else np.full(tA.shape, 2 * self.delta)

    def u_C(self, s: int, tA):
        tA = np.asarray(tA, dtype=float)
        return (self.mu - tA) / self.k if s == 1 else np.full(tA.shape, 2 * self.delta)

    def expected_payoffs(self, Q) -> tuple[np.ndarray, np.ndarray]:
        """(U0, U1) of shape (N, k+2) for a batch of product profiles."""
        Q = np.atleast_2d(np.asarray(Q, dtype=float))
        N, n = Q.shape
        if n != self.n:
            raise ValueError("profile length does not match the game")
        k = self.k
        qA, qB, qC = Q[:, :k], Q[:, k], Q[:, k + 1]
        U0 = np.zeros((N, n))
        U1 = np.zeros((N, n))
        outcomes = [(b, c, np.where(b, qB, 1 - qB) * np.where(c, qC, 1 - qC)) for b in (0, 1) for c in (0, 1)]
        for i in range(k):
            pmf = pbd_pmf_batch(np.delete(qA, i, axis=1))
            counts = np.arange(k)
            for b, c, w in outcomes:
                U0[:, i] += w * (pmf @ self.u_A(i, 0, counts, b, c))
                U1[:, i] += w * (pmf @ self.u_A(i, 1, counts, b, c))
        pmfA = pbd_pmf_batch(qA)
        counts = np.arange(k + 1)
        U0[:, k] = pmfA @ self.u_B(0, counts)
        U1[:, k] = pmfA @ self.u_B(1, counts)
        U0[:, k + 1] = pmfA @ self.u_C(0, counts)
        U1[:, k + 1] = pmfA @ self.u_C(1, counts)
        return U0, U1

    def to_json(self) -> dict:
        return {"type": "gp", "n": self.n, "k": self.k, "delta": self.delta, "p": list(self.p)}

    @classmethod
    def from_json(cls, obj: dict) -> "GpGame":
        game = cls(int(obj["k"]), tuple(obj["p"]), float(obj["delta"]))
        if "n" in obj and int(obj["n"]) != game.n:
            raise ValueError("declared n does not match k + 2")
        return game


def gen_gp_game(k: int, p: Sequence[float], delta: float) -> GpGame:
    return GpGame(k, tuple(p), delta)


def gen_random_sparse(n: int, k: int, seed: int = 0) -> BimatrixGame:
    """Each matrix is supported on a union of k random permutation matrices."""
    if not 0 <= k <= n:
        raise ValueError("need 0 <= k <= n")
    rng = make_rng(seed)
    mats = []
    for _ in range(2):
        M = np.zeros((n, n))
        for _ in range(k):
            perm = rng.permutation(n)
            M[np.arange(n), perm] = rng.uniform(-1.0, 1.0, size=n)
        mats.append(M)
    return BimatrixGame(*mats)


def gen_random_anonymous(n: int, seed: int = 0) -> AnonymousGame:
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = make_rng(seed)
    return AnonymousGame(rng.uniform(-1.0, 1.0, size=(n, n)), rng.uniform(-1.0, 1.0, size=(n, n)))


def dominant_game(n: int) -> AnonymousGame:
    """Strategy 1 pays 1 and strategy 0 pays 0 for everyone."""
    return AnonymousGame(np.zeros((n, n)), np.ones((n, n)))


def anti_coordination_game(n: int) -> AnonymousGame:
    """Playing 1 pays the fraction of others playing 0, and vice versa."""
    if n < 2:
        raise ValueError("n must be >= 2")
    frac = np.arange(n) / (n - 1)
    return AnonymousGame(np.tile(frac, (n, 1)), np.tile(1.0 - frac, (n, 1)))


def matching_pennies(n: int) -> BimatrixGame:
    """R = 2I - 1 and C = -R; the uniform pair is the equilibrium."""
    R = 2.0 * np.eye(n) - 1.0
    return BimatrixGame(R, -R)


def prescribed_mix_game(targets: Sequence[float]) -> AnonymousGame:
    """Two players; player 0 is indifferent iff q_1 = targets[1], player 1 iff q_0 = targets[0].

    Player 0 wants to match player 1 and player 1 wants to avoid player 0,
    so the unique equilibrium is the mixed profile ``targets``.
    """
    a, b = (float(v) for v in targets)
    if not (0.0 < a < 1.0 and 0.0 < b < 1.0):
        raise ValueError("targets must lie strictly inside (0, 1)")
    u0 = np.zeros((2, 2))
    u1 = np.array([[-b, 1.0 - b], [a, a - 1.0]])
    return AnonymousGame(u0, u1)
