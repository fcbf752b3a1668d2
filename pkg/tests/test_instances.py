import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from approxnash.bimatrix import sparsity
from approxnash.games import MixedPair, anonymous_regret, bimatrix_regret
from approxnash.instances import (
    GpGame,
    gen_gp_game,
    gen_gs_game,
    gen_random_anonymous,
    gen_random_sparse,
    gs_columns,
    gs_equilibrium,
    gs_size,
)
from approxnash.moment_search import brute_force_grid_nash

HIDDEN_SET_ROWS_FOR_FOUR = np.array([
    [1, 1, 1, 0, 0, 0],
    [1, 0, 0, 1, 1, 0],
    [0, 1, 0, 1, 0, 1],
    [0, 0, 1, 0, 1, 1],
    [-1, -1, -1, -1, -1, -1],
    [-1, -1, -1, -1, -1, -1],
], dtype=float)


def test_hidden_set_matrix_for_four():
    game = gen_gs_game(4)
    np.testing.assert_array_equal(game.R, HIDDEN_SET_ROWS_FOR_FOUR)
    # inside S the game is 1-sum, outside it pays (-1, 1)
    np.testing.assert_array_equal(game.R[:4] + game.C[:4], np.ones((4, 6)))
    np.testing.assert_array_equal(game.C[4:], np.ones((2, 6)))


def test_gs_two():
    game = gen_gs_game(2)
    np.testing.assert_array_equal(game.R, [[1.0, 0.0], [0.0, 1.0]])
    assert gs_columns(2, (0, 1)) == [(0,), (1,)]


@pytest.mark.parametrize("ell", [2, 4, 6, 8])
def test_column_sums_over_S(ell):
    S = tuple(range(1, ell + 1)) if gs_size(ell) > ell else None
    game = gen_gs_game(ell, S)
    rows = list(S) if S else list(range(ell))
    np.testing.assert_array_equal(game.R[rows].sum(axis=0), np.full(gs_size(ell), ell // 2))


@pytest.mark.parametrize("ell", [2, 4, 6])
def test_gs_equilibrium_is_exact(ell):
    row, col = bimatrix_regret(gen_gs_game(ell), gs_equilibrium(ell))
    assert row <= 1e-12 and col <= 1e-12


def test_gs_validation():
    with pytest.raises(ValueError):
        gs_size(3)
    with pytest.raises(ValueError):
        gen_gs_game(4, S=(0, 1, 2))
    with pytest.raises(ValueError):
        gen_gs_game(4, S=(0, 1, 2, 6))
    with pytest.raises(ValueError):
        gen_gs_game(4, S=(0, 1, 1, 2))


def test_rows_outside_S_cost_the_row_player():
    game = gen_gs_game(4, S=(0, 2, 3, 5))
    rng = np.random.default_rng(1)
    for _ in range(200):
        x = rng.dirichlet(np.ones(6))
        i = rng.choice([1, 4])
        x[i] += 0.02
        x /= x.sum()
        y = rng.dirichlet(np.ones(6))
        assert bimatrix_regret(game, MixedPair(x, y))[0] >= 1 - 0.02


def sample_far_pair(rng, ell, S, n, radius):
    """x supported on S at l1 distance > radius from uniform, y arbitrary."""
    while True:
        x = np.zeros(n)
        x[list(S)] = rng.dirichlet(np.full(ell, rng.choice([0.3, 1.0, 5.0, 50.0])))
        if np.abs(x[list(S)] - 1.0 / ell).sum() > radius:
            return MixedPair(x, rng.dirichlet(np.full(n, rng.choice([0.3, 1.0, 20.0]))))


@pytest.mark.parametrize("mode", ["expected", "well_supported"])
def test_far_row_strategies_are_not_approximate_equilibria(mode):
    eps, ell = 0.02, 4
    S = (0, 1, 2, 3)
    game = gen_gs_game(ell, S)
    rng = np.random.default_rng(2024)
    for _ in range(1000):
        pair = sample_far_pair(rng, ell, S, 6, 8 * eps)
        assert max(bimatrix_regret(game, pair, mode=mode)) > eps


def sample_half_sum_vector(rng):
    ell = 2 * int(rng.integers(1, 10))
    a = rng.normal(size=ell) * rng.exponential()
    a = np.sort(a - a.mean())[::-1]
    top = a[: ell // 2].sum()
    k = top * (1.0 + rng.exponential()) if rng.random() < 0.5 else top
    return a, k


def test_half_sum_bounds_l1_norm():
    rng = np.random.default_rng(7)
    for _ in range(10_000):
        a, k = sample_half_sum_vector(rng)
        assert np.all(np.diff(a) <= 0) and abs(a.sum()) <= 1e-9
        assert a[: a.size // 2].sum() <= k + 1e-12
        assert np.abs(a).sum() <= 4 * k + 1e-9


def test_gp_examples():
    game = gen_gp_game(2, (0.4, 0.6), 0.05)
    assert game.n == 4 and game.mu == pytest.approx(1.0)
    np.testing.assert_allclose(anonymous_regret(game, game.prescribed_profile()), 0.0, atol=1e-12)
    ones = gen_gp_game(2, (1.0, 1.0), 0.05)
    np.testing.assert_allclose(anonymous_regret(ones, [1, 1, 0, 0]), 0.0, atol=1e-12)
    regrets = anonymous_regret(game, [1.0, 0.6, 0.0, 0.0])
    np.testing.assert_allclose(regrets, [0.0, 0.3, 0.2, 0.0], atol=1e-12)
    assert regrets.max() > 0.025


def test_gp_validation_and_json():
    with pytest.raises(ValueError):
        gen_gp_game(2, (0.2, 0.6), 0.05)
    with pytest.raises(ValueError):
        gen_gp_game(2, (0.4,), 0.05)
    with pytest.raises(ValueError):
        gen_gp_game(2, (0.4, 0.6), 0.0)
    game = gen_gp_game(3, (0.5, 0.6, 0.7), 0.02)
    back = GpGame.from_json(game.to_json())
    assert back.p == game.p and back.delta == game.delta
    with pytest.raises(ValueError):
        GpGame.from_json({**game.to_json(), "n": 4})


def test_gp_batch_matches_single_profiles():
    game = gen_gp_game(2, (0.4, 0.6), 0.05)
    Q = np.random.default_rng(3).uniform(size=(30, 4))
    U0, U1 = game.expected_payoffs(Q)
    for row, u0, u1 in zip(Q, U0, U1):
        a0, a1 = game.expected_payoffs(row)
        np.testing.assert_allclose(a0[0], u0, atol=1e-15)
        np.testing.assert_allclose(a1[0], u1, atol=1e-15)


def test_gp_grid_scan():
    k, delta, p = 2, 0.05, (0.4, 0.6)
    game = gen_gp_game(k, p, delta)
    found = brute_force_grid_nash(game, 20, 0.02)
    assert found
    for prof in found:
        q = prof.q
        assert np.all(np.abs(q[:k] - p) <= 7 * k * k * delta)
        assert q[k] == 0.0 or q[k + 1] == 0.0


def test_random_generators():
    a, b = gen_random_sparse(16, 3, seed=5), gen_random_sparse(16, 3, seed=5)
    np.testing.assert_array_equal(a.R, b.R)
    np.testing.assert_array_equal(a.C, b.C)
    with pytest.raises(ValueError):
        gen_random_sparse(3, 4)
    g = gen_random_anonymous(5, seed=1)
    np.testing.assert_array_equal(g.u0, gen_random_anonymous(5, seed=1).u0)
    with pytest.raises(ValueError):
        gen_random_anonymous(0)


@given(st.integers(1, 30), st.integers(0, 5), st.integers(0, 10**6))
def test_sparse_generator_bounds(n, k, seed):
    k = min(k, n)
    game = gen_random_sparse(n, k, seed)
    assert sparsity(game) <= k
    assert np.abs(game.R).max() <= 1.0 and np.abs(game.C).max() <= 1.0


@given(st.integers(1, 8), st.integers(0, 10**6))
def test_anonymous_generator_bounds(n, seed):
    g = gen_random_anonymous(n, seed)
    assert g.u0.shape == (n, n)
    assert np.abs(g.u0).max() <= 1.0 and np.abs(g.u1).max() <= 1.0
