import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xorgame.games import chsh_game, new_game, symmetrize
from xorgame.linalg import DimensionMismatch
from xorgame.relations import (
    DualInfeasible,
    RelationSystem,
    certify_epsilon,
    check_identity,
    chshn_dual_y,
    chshn_relations_form1,
    chshn_relations_form2,
    extract_relations,
    invariant_deviations,
    residual,
)
from xorgame.sdp import solve, verify_dual_feasible
from xorgame.strategies import (
    Observable,
    Strategy,
    bias,
    canonical_chshn,
    embed_with_junk,
    maximally_entangled,
    perturb,
)

from conftest import random_observable

RT2 = np.sqrt(2.0)


class TestDualY:
    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_values_and_sum(self, n):
        y = chshn_dual_y(n)
        assert y.size == n * n
        assert np.allclose(y[:n], 1.0 / (2 * RT2 * n), atol=1e-16)
        assert np.allclose(y[n:], 1.0 / (2 * RT2 * n * (n - 1)), atol=1e-16)
        assert abs(y.sum() - 1.0 / RT2) < 1e-12

    @pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
    def test_feasible(self, n):
        g, _ = chsh_game(n)
        ok, min_eig = verify_dual_feasible(chshn_dual_y(n), symmetrize(g))
        assert ok and min_eig >= -1e-12


class TestClosedForms:
    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    @pytest.mark.parametrize("form", [chshn_relations_form1, chshn_relations_form2])
    def test_invariants_exact(self, n, form):
        g, _ = chsh_game(n)
        rel = form(n)
        assert rel.r == n * (n - 1)
        assert max(invariant_deviations(rel, g)) < 1e-14

    def test_form1_alice_sum_for_n3(self):
        rel = chshn_relations_form1(3)
        uu = sum(np.outer(u, u) for u, _ in rel.pairs)
        assert np.abs(uu - np.eye(3) / (6.0 * RT2)).max() < 1e-15

    @pytest.mark.parametrize("n", [2, 3, 4])
    @pytest.mark.parametrize("form", [chshn_relations_form1, chshn_relations_form2])
    def test_canonical_residual_vanishes(self, n, form):
        assert residual(canonical_chshn(n), form(n)) < 1e-12

    def test_forms_agree_on_arbitrary_strategies(self):
        s = perturb(canonical_chshn(3), 0.4, seed=11, include_bob=True)
        r1 = residual(s, chshn_relations_form1(3))
        r2 = residual(s, chshn_relations_form2(3))
        assert abs(r1 - r2) < 1e-9

    def test_rejects_small_n(self):
        from xorgame.games import InvalidN

        with pytest.raises(InvalidN):
            chshn_relations_form1(1)


class TestExtractRelations:
    def test_closed_form_y_chsh2(self):
        g, _ = chsh_game(2)
        rel = extract_relations(g, chshn_dual_y(2))
        assert rel.r <= 4
        assert max(invariant_deviations(rel, g)) < 1e-10

    def test_single_entry_game(self):
        g = new_game(np.array([[1.0]]))
        rel = extract_relations(g, [0.5, 0.5])
        uv = sum(np.outer(u, v) for u, v in rel.pairs)
        assert np.abs(uv - g.matrix / 2.0).max() < 1e-14

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_solved_dual_gives_small_canonical_residual(self, n):
        g, _ = chsh_game(n)
        sol = solve(symmetrize(g), 1e-8)
        rel = extract_relations(g, sol.y)
        assert residual(canonical_chshn(n), rel) < 1e-5

    def test_oversized_cutoff_empties_pairs(self):
        g, _ = chsh_game(2)
        rel = extract_relations(g, chshn_dual_y(2), cutoff=10.0)
        assert rel.r == 0
        assert max(invariant_deviations(rel, g)) > 0.01

    def test_infeasible_y_rejected(self):
        g, _ = chsh_game(2)
        with pytest.raises(DualInfeasible):
            extract_relations(g, np.zeros(4))

    def test_wrong_length_rejected(self):
        g, _ = chsh_game(2)
        with pytest.raises(DimensionMismatch):
            extract_relations(g, np.ones(5))

    def test_negative_cutoff_rejected(self):
        g, _ = chsh_game(2)
        with pytest.raises(ValueError):
            extract_relations(g, chshn_dual_y(2), cutoff=-1.0)


class TestIdentity:
    @pytest.mark.parametrize("n", [2, 3])
    def test_holds_on_perturbed_strategies(self, n):
        g, _ = chsh_game(n)
        base = canonical_chshn(n)
        rng = np.random.default_rng(100 + n)
        systems = [
            chshn_relations_form1(n),
            chshn_relations_form2(n),
            extract_relations(g, chshn_dual_y(n)),
        ]
        for _ in range(20):
            theta = float(rng.uniform(0.0, 1.2))
            s = perturb(base, theta, seed=int(rng.integers(10**6)), include_bob=True)
            for rel in systems:
                lhs, rhs, ok = check_identity(g, s, rel)
                assert ok
                assert abs(lhs - rhs) <= 1e-7

    def test_holds_on_fully_random_strategies(self, rng):
        g, _ = chsh_game(2)
        rel = chshn_relations_form1(2)
        for _ in range(20):
            d = int(rng.choice([2, 4]))
            psi = rng.standard_normal(d * d) + 1j * rng.standard_normal(d * d)
            psi /= np.linalg.norm(psi)
            s = Strategy(
                d,
                d,
                tuple(random_observable(rng, d) for _ in range(2)),
                tuple(random_observable(rng, d) for _ in range(2)),
                psi,
            )
            lhs, rhs, ok = check_identity(g, s, rel)
            assert ok

    def test_canonical_both_sides_zero(self):
        g, _ = chsh_game(3)
        lhs, rhs, ok = check_identity(g, canonical_chshn(3), chshn_relations_form2(3))
        assert ok
        assert abs(lhs) < 1e-10 and abs(rhs) < 1e-10

    def test_unnormalized_state_breaks_identity(self):
        # bypass Strategy validation to feed an invalid state on purpose
        g, _ = chsh_game(2)
        s = canonical_chshn(2)
        broken = object.__new__(Strategy)
        object.__setattr__(broken, "d_A", s.d_A)
        object.__setattr__(broken, "d_B", s.d_B)
        object.__setattr__(broken, "alice", s.alice)
        object.__setattr__(broken, "bob", s.bob)
        object.__setattr__(broken, "state", 0.9 * s.state)
        lhs, rhs, ok = check_identity(g, broken, chshn_relations_form1(2))
        assert not ok


class TestResidualValues:
    def test_all_identity_strategy_chsh2(self):
        g, _ = chsh_game(2)
        e = Observable(np.eye(2, dtype=complex))
        s = Strategy(2, 2, (e, e), (e, e), maximally_entangled(2))
        rel = chshn_relations_form1(2)
        r = residual(s, rel)
        assert r == pytest.approx(1.0 / RT2 - 0.5, abs=1e-9)
        eps = certify_epsilon(g, s, rel, 1.0 / RT2)
        assert eps == pytest.approx(1.0 - 0.5 * RT2, abs=1e-10)

    def test_perturbed_bias_deficit_equals_residual(self):
        g, _ = chsh_game(3)
        s = perturb(canonical_chshn(3), 0.1, seed=8)
        rel = chshn_relations_form2(3)
        deficit = 1.0 / RT2 - bias(g, s)
        assert residual(s, rel) == pytest.approx(deficit, abs=1e-8)

    def test_embedded_canonical_residual_vanishes(self):
        s = canonical_chshn(3)
        junk_a = [Observable(np.diag([1.0 + 0j, -1.0])) for _ in s.alice]
        junk_b = [Observable(np.eye(3, dtype=complex)) for _ in s.bob]
        emb = embed_with_junk(s, 2, 3, junk_a, junk_b)
        assert residual(emb, chshn_relations_form1(3)) < 1e-12
        assert residual(emb, chshn_relations_form2(3)) < 1e-12

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            residual(canonical_chshn(2), chshn_relations_form1(3))

    def test_certify_epsilon_rejects_bad_beta(self):
        g, _ = chsh_game(2)
        s = canonical_chshn(2)
        with pytest.raises(ValueError):
            certify_epsilon(g, s, chshn_relations_form1(2), 0.0)


class TestRelationSystemType:
    def test_rejects_length_mismatch(self):
        with pytest.raises(DimensionMismatch):
            RelationSystem(np.ones(3), (), 2, 2)

    def test_rejects_pair_shape_mismatch(self):
        with pytest.raises(DimensionMismatch):
            RelationSystem(np.ones(4), ((np.ones(3), np.ones(2)),), 2, 2)

    @given(st.integers(2, 4))
    @settings(max_examples=10, deadline=None)
    def test_r_counts_pairs(self, n):
        rel = chshn_relations_form1(n)
        assert rel.r == len(rel.pairs) == n * (n - 1)
