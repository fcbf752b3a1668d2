"""Bimatrix and two-strategy anonymous games, mixed profiles, and regret.

Regret is the well-supported notion by default: every pure strategy played
with probability above ``SUPPORT_TOL`` must be within epsilon of a best
response.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from approxnash.indicators import pbd_pmf, pbd_pmf_batch

SUPPORT_TOL = 1e-12
SIMPLEX_TOL = 1e-12


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _check_payoffs(a: np.ndarray, name: str) -> None:
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    if np.any(np.abs(a) > 1.0):
        raise ValueError(f"{name} entries must lie in [-1, 1]")


@dataclass(frozen=True, eq=False)
class BimatrixGame:
    R: np.ndarray
    C: np.ndarray

    def __post_init__(self):
        R, C = _frozen(self.R), _frozen(self.C)
        if R.ndim != 2 or R.shape[0] != R.shape[1] or R.shape[0] < 1:
            raise ValueError("R must be a non-empty square matrix")
        if C.shape != R.shape:
            raise ValueError("R and C must have identical shape")
        _check_payoffs(R, "R")
        _check_payoffs(C, "C")
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "C", C)

    @property
    def n(self) -> int:
        return self.R.shape[0]

    def to_json(self) -> dict:
        return {"n": self.n, "R": self.R.tolist(), "C": self.C.tolist()}

    @classmethod
    def from_json(cls, obj: dict) -> "BimatrixGame":
        game = cls(obj["R"], obj["C"])
        if "n" in obj and int(obj["n"]) != game.n:
            raise ValueError("declared n does not match matrix size")
        return game


def _check_simplex(v: np.ndarray, name: str) -> None:
    if v.ndim != 1 or v.size == 0:
        raise ValueError(f"{name} must be a non-empty vector")
    if np.any(v < 0.0) or abs(v.sum() - 1.0) > SIMPLEX_TOL:
        raise ValueError(f"{name} is not a probability vector")


@dataclass(frozen=True, eq=False)
class MixedPair:
    x: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        x, y = _frozen(self.x), _frozen(self.y)
        _check_simplex(x, "x")
        _check_simplex(y, "y")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "y", y)

    @classmethod
    def uniform(cls, n: int) -> "MixedPair":
        return cls(np.full(n, 1.0 / n), np.full(n, 1.0 / n))

    def to_json(self) -> dict:
        return {"x": self.x.tolist(), "y": self.y.tolist()}


def _one_sided_regret(payoffs: np.ndarray, mix: np.ndarray, mode: str) -> float:
    best = payoffs.max()
    if mode == "well_supported":
        supported = mix > SUPPORT_TOL
        if not supported.any():
            return 0.0
        return float(max(0.0, (best - payoffs[supported]).max()))
    if mode == "expected":
        return float(max(0.0, best - mix @ payoffs))
    raise ValueError(f"unknown regret mode {mode!r}")


def bimatrix_regret(game: BimatrixGame, pair: MixedPair, mode: str = "well_supported") -> tuple[float, float]:
    """(row_regret, col_regret) of a mixed pair.

    ``mode="expected"`` gives the weaker expected-payoff regret instead.
    """
    if pair.x.size != game.n or pair.y.size != game.n:
        raise ValueError("profile dimension does not match the game")
    row = _one_sided_regret(game.R @ pair.y, pair.x, mode)
    col = _one_sided_regret(pair.x @ game.C, pair.y, mode)
    return row, col


@dataclass(frozen=True, eq=False)
class AnonymousProfile:
    """q[i] is the probability that player i plays strategy 1."""

    q: np.ndarray

    def __post_init__(self):
        q = _frozen(self.q).reshape(-1)
        if np.any(q < 0.0) or np.any(q > 1.0):
            raise ValueError("profile entries must lie in [0, 1]")
        object.__setattr__(self, "q", q)

    @property
    def n(self) -> int:
        return self.q.size

    def to_json(self) -> dict:
        return {"q": self.q.tolist()}


def _as_q(profile) -> np.ndarray:
    if isinstance(profile, AnonymousProfile):
        return profile.q
    return AnonymousProfile(profile).q


def others_count_distribution(profile, i: int, override: Optional[float] = None) -> np.ndarray:
    """Distribution of the number of players other than ``i`` who play 1.

    ``override`` replaces q_i before it is excluded; it has no effect on the
    result and exists so callers can pass a candidate strategy uniformly.
    """
    q = _as_q(profile)
    if not 0 <= i < q.size:
        raise ValueError(f"player index {i} out of range for n={q.size}")
    if override is not None:
        q = q.copy()
        q[i] = override
    return pbd_pmf(np.delete(q, i))


@dataclass(frozen=True, eq=False)
class AnonymousGame:
    """u0[i, k], u1[i, k]: payoff of player i for strategy 0/1 when k others play 1."""

    u0: np.ndarray
    u1: np.ndarray

    def __post_init__(self):
        u0, u1 = _frozen(self.u0), _frozen(self.u1)
        if u0.ndim != 2 or u0.shape[0] != u0.shape[1] or u0.shape[0] < 1:
            raise ValueError("utilities must be n x n (players x counts)")
        if u1.shape != u0.shape:
            raise ValueError("u0 and u1 must have identical shape")
        _check_payoffs(u0, "u0")
        _check_payoffs(u1, "u1")
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "u1", u1)

    @property
    def n(self) -> int:
        return self.u0.shape[0]

    def expected_payoffs(self, Q: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Expected payoffs (U0, U1), each of shape (N, n), for a batch of profiles (N, n)."""
        Q = np.atleast_2d(np.asarray(Q, dtype=float))
        N, n = Q.shape
        if n != self.n:
            raise ValueError("profile length does not match the game")
        U0 = np.empty((N, n))
        U1 = np.empty((N, n))
        for i in range(n):
            pmf = pbd_pmf_batch(np.delete(Q, i, axis=1))
            U0[:, i] = pmf @ self.u0[i]
            U1[:, i] = pmf @ self.u1[i]
        return U0, U1

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "u": [{"u0": self.u0[i].tolist(), "u1": self.u1[i].tolist()} for i in range(self.n)],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "AnonymousGame":
        u = obj["u"]
        game = cls([row["u0"] for row in u], [row["u1"] for row in u])
        if "n" in obj and int(obj["n"]) != game.n:
            raise ValueError("declared n does not match utility table size")
        return game


def regrets_from_payoffs(Q: np.ndarray, U0: np.ndarray, U1: np.ndarray, support_tol: float = SUPPORT_TOL) -> np.ndarray:
    plays1 = Q > support_tol
    plays0 = (1.0 - Q) > support_tol
    r1 = np.where(plays1, np.maximum(U0 - U1, 0.0), 0.0)
    r0 = np.where(plays0, np.maximum(U1 - U0, 0.0), 0.0)
    return np.maximum(r0, r1)


def anonymous_regret(game, profile, support_tol: float = SUPPORT_TOL) -> np.ndarray:
    """Per-player well-supported regret.

    ``game`` is anything exposing ``n`` and ``expected_payoffs`` (an
    :class:`AnonymousGame` or a typed game from :mod:`approxnash.instances`).
    """
    q = _as_q(profile)
    if q.size != game.n:
        raise ValueError("profile length does not match the game")
    U0, U1 = game.expected_payoffs(q[None, :])
    return regrets_from_payoffs(q[None, :], U0, U1, support_tol)[0]


def max_regret(game, profile) -> float:
    if isinstance(game, BimatrixGame):
        return max(bimatrix_regret(game, profile))
    r = anonymous_regret(game, profile)
    return float(r.max()) if r.size else 0.0


def load_game(obj: dict):
    """Build a game from its JSON form (bimatrix, anonymous or typed)."""
    from approxnash.instances import GpGame

    if obj.get("type") == "gp":
        return GpGame.from_json(obj)
    if "R" in obj:
        return BimatrixGame.from_json(obj)
    if "u" in obj:
        return AnonymousGame.from_json(obj)
    raise ValueError("unrecognised game JSON: expected keys R/C or u")


def load_profile(obj: dict):
    if "q" in obj:
        return AnonymousProfile(obj["q"])
    if "x" in obj and "y" in obj:
        return MixedPair(obj["x"], obj["y"])
    raise ValueError("unrecognised profile JSON: expected keys x/y or q")
