import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xorgame.games import (
    InvalidN,
    NotNormalized,
    TooLarge,
    XorGame,
    ZeroMatrix,
    chsh_game,
    chshn_pair_order,
    classical_bias,
    new_game,
    symmetrize,
)


class TestNewGame:
    def test_accepts_normalized(self):
        g = new_game(np.full((2, 2), 0.25) * np.array([[1, 1], [1, -1]]))
        assert g.n_alice == 2 and g.n_bob == 2

    def test_rejects_unnormalized(self):
        with pytest.raises(NotNormalized):
            new_game(np.array([[1.0, 1.0], [1.0, -1.0]]))

    def test_normalize_flag_scales(self):
        g = new_game(np.array([[1.0, 1.0], [1.0, -1.0]]), normalize=True)
        assert np.allclose(np.abs(g.matrix), 0.25, atol=1e-15)
        assert abs(np.abs(g.matrix).sum() - 1.0) < 1e-12

    def test_zero_matrix_cannot_normalize(self):
        with pytest.raises(ZeroMatrix):
            new_game(np.zeros((2, 2)), normalize=True)

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            new_game(np.array([[np.inf, 0.0], [0.0, 0.0]]))

    def test_single_entry(self):
        g = new_game(np.array([[1.0]]))
        assert g.matrix[0, 0] == 1.0

    @given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_normalize_always_valid(self, n, m, seed):
        rng = np.random.default_rng(seed)
        raw = rng.standard_normal((n, m))
        if np.abs(raw).sum() == 0.0:
            return
        g = new_game(raw, normalize=True)
        assert abs(np.abs(g.matrix).sum() - 1.0) < 1e-12


class TestChshGame:
    def test_n2_matrix(self):
        g, _ = chsh_game(2)
        assert np.array_equal(g.matrix, np.array([[0.25, 0.25], [0.25, -0.25]]))

    def test_pair_order(self):
        assert chshn_pair_order(3) == ((1, 2), (2, 1), (1, 3), (3, 1), (2, 3), (3, 2))

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_shape_and_weights(self, n):
        g, idx = chsh_game(n)
        assert g.matrix.shape == (n, n * (n - 1))
        nz = g.matrix[g.matrix != 0.0]
        assert nz.size == 2 * n * (n - 1)
        assert np.allclose(np.abs(nz), 1.0 / (2 * n * (n - 1)), atol=1e-15)
        # every row carries total weight 1/n
        assert np.allclose(np.abs(g.matrix).sum(axis=1), 1.0 / n, atol=1e-14)
        assert abs(g.matrix.sum() - 0.5) < 1e-13

    def test_column_signs(self):
        g, idx = chsh_game(3)
        t_plus = idx.column(1, 2)
        t_minus = idx.column(2, 1)
        w = 1.0 / 12.0
        assert g.matrix[0, t_plus] == pytest.approx(w)
        assert g.matrix[1, t_plus] == pytest.approx(w)
        assert g.matrix[0, t_minus] == pytest.approx(w)
        assert g.matrix[1, t_minus] == pytest.approx(-w)

    def test_labels_follow_pairs(self):
        g, idx = chsh_game(2)
        assert g.labels == ("1,2", "2,1")

    def test_index_round_trip(self):
        _, idx = chsh_game(4)
        for t, (a, b) in enumerate(idx.pairs):
            assert idx.column(a, b) == t
            assert idx.pair(t) == (a, b)

    def test_rejects_small_n(self):
        with pytest.raises(InvalidN):
            chsh_game(1)


class TestClassicalBias:
    def test_chsh2_value(self):
        g, _ = chsh_game(2)
        assert classical_bias(g) == pytest.approx(0.5, abs=1e-15)

    def test_chsh3_value(self):
        g, _ = chsh_game(3)
        assert classical_bias(g) == pytest.approx(0.5, abs=1e-15)

    def test_single_entry(self):
        assert classical_bias(new_game(np.array([[1.0]]))) == pytest.approx(1.0)

    def test_guard_against_huge_enumeration(self):
        g = new_game(np.full((20, 20), 1.0 / 400.0))
        with pytest.raises(TooLarge):
            classical_bias(g)

    def test_upper_bounds_any_sign_assignment(self, rng):
        g = new_game(rng.standard_normal((3, 4)), normalize=True)
        best = classical_bias(g)
        for _ in range(50):
            a = rng.choice([-1.0, 1.0], size=3)
            b = rng.choice([-1.0, 1.0], size=4)
            assert a @ g.matrix @ b <= best + 1e-12


class TestSymmetrize:
    def test_block_layout(self):
        g = new_game(np.array([[0.5, -0.5]]))
        s = symmetrize(g)
        expected = np.array(
            [
                [0.0, 0.25, -0.25],
                [0.25, 0.0, 0.0],
                [-0.25, 0.0, 0.0],
            ]
        )
        assert np.array_equal(s, expected)

    @given(st.integers(1, 4), st.integers(1, 4), st.integers(0, 2**32 - 1))
    @settings(max_examples=30, deadline=None)
    def test_symmetric_zero_diagonal_blocks(self, n, m, seed):
        rng = np.random.default_rng(seed)
        g = new_game(rng.standard_normal((n, m)), normalize=True)
        s = symmetrize(g)
        assert s.shape == (n + m, n + m)
        assert np.array_equal(s, s.T)
        assert np.abs(s[:n, :n]).max() == 0.0
        assert np.abs(s[n:, n:]).max() == 0.0
        assert np.array_equal(s[:n, n:], g.matrix / 2.0)
