import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hyp

import switchstab as st

from conftest import random_chain


class TestConstruction:
    def test_rejects_non_square(self):
        with pytest.raises(st.NotStochastic):
            st.new_mode_chain([[0.5, 0.5]], r0=1)

    def test_rejects_bad_row_sum_naming_row(self):
        with pytest.raises(st.NotStochastic, match="row 2"):
            st.new_mode_chain([[0.5, 0.5], [0.3, 0.3]], r0=1)

    def test_rejects_negative_entry(self):
        with pytest.raises(st.NotStochastic):
            st.new_mode_chain([[1.2, -0.2], [0.5, 0.5]], r0=1)

    def test_rejects_nan(self):
        with pytest.raises(st.NotStochastic):
            st.new_mode_chain([[np.nan, 1.0], [0.5, 0.5]], r0=1)

    def test_rejects_bad_initial_mode(self):
        with pytest.raises(st.BadInitialMode):
            st.new_mode_chain([[0.5, 0.5], [0.5, 0.5]], r0=3)
        with pytest.raises(st.BadInitialMode):
            st.new_mode_chain([[0.5, 0.5], [0.5, 0.5]], r0=0)

    def test_rejects_reducible(self):
        with pytest.raises(st.NotIrreducible):
            st.new_mode_chain([[1.0, 0.0], [0.0, 1.0]], r0=1)
        with pytest.raises(st.NotIrreducible):
            # mode 2 absorbs
            st.new_mode_chain([[0.5, 0.5], [0.0, 1.0]], r0=1)

    def test_rejects_periodic(self):
        with pytest.raises(st.NotAperiodic):
            st.new_mode_chain([[0.0, 1.0], [1.0, 0.0]], r0=1)

    def test_single_mode_chain(self):
        ch = st.new_mode_chain([[1.0]], r0=1)
        assert ch.M == 1 and ch.r0 == 1

    def test_matrix_is_immutable(self, two_mode_chain):
        with pytest.raises(ValueError):
            two_mode_chain.P[0, 0] = 0.9

    def test_tolerates_tiny_row_sum_error(self):
        ch = st.new_mode_chain([[0.7, 0.3 + 5e-13], [0.3, 0.7]], r0=1)
        assert ch.M == 2


class TestInvariantDistribution:
    def test_symmetric_chain_is_uniform(self, two_mode_chain):
        pi = st.invariant_distribution(two_mode_chain)
        np.testing.assert_allclose(pi, [0.5, 0.5], atol=1e-14)

    def test_single_mode(self):
        pi = st.invariant_distribution(st.new_mode_chain([[1.0]], r0=1))
        np.testing.assert_allclose(pi, [1.0])

    def test_residual_and_normalization_random(self):
        rng = np.random.default_rng(7)
        for _ in range(20):
            ch = random_chain(rng, int(rng.integers(2, 7)))
            pi = st.invariant_distribution(ch)
            assert abs(pi.sum() - 1.0) < 1e-12
            assert np.max(np.abs(pi @ ch.P - pi)) < 1e-12
            assert np.all(pi > 0.0)


class TestLStep:
    def test_zero_steps_is_identity(self, two_mode_chain):
        np.testing.assert_array_equal(st.l_step(two_mode_chain, 0), np.eye(2))

    def test_two_step_value(self, two_mode_chain):
        # 0.7^2 + 0.3^2 = 0.58
        assert st.l_step(two_mode_chain, 2)[0, 0] == pytest.approx(0.58, abs=1e-15)

    def test_negative_raises(self, two_mode_chain):
        with pytest.raises(ValueError):
            st.l_step(two_mode_chain, -1)

    @settings(max_examples=30, deadline=None)
    @given(a=hyp.integers(0, 8), b=hyp.integers(0, 8))
    def test_semigroup(self, a, b):
        ch = st.new_mode_chain([[0.6, 0.4], [0.2, 0.8]], r0=1)
        left = st.l_step(ch, a + b)
        right = st.l_step(ch, a) @ st.l_step(ch, b)
        np.testing.assert_allclose(left, right, atol=1e-13)


class TestSamplePath:
    def test_starts_at_r0_and_stays_in_range(self, two_mode_chain):
        path = st.sample_path(two_mode_chain, 500, seed=3)
        assert len(path) == 500
        assert path.values[0] == 1
        assert set(np.unique(path.values)) <= {1, 2}

    def test_deterministic(self, two_mode_chain):
        a = st.sample_path(two_mode_chain, 200, seed=11)
        b = st.sample_path(two_mode_chain, 200, seed=11)
        np.testing.assert_array_equal(a.values, b.values)

    def test_horizon_one(self, two_mode_chain):
        path = st.sample_path(two_mode_chain, 1, seed=0)
        np.testing.assert_array_equal(path.values, [1])

    def test_bad_horizon(self, two_mode_chain):
        with pytest.raises(ValueError):
            st.sample_path(two_mode_chain, 0, seed=0)

    def test_empirical_occupancy_matches_invariant(self, two_mode_chain):
        path = st.sample_path(two_mode_chain, 200_000, seed=5)
        freq = np.mean(path.values == 1)
        assert abs(freq - 0.5) < 0.01

    def test_deterministic_chain_path(self):
        # single mode: the only possible path
        ch = st.new_mode_chain([[1.0]], r0=1)
        path = st.sample_path(ch, 50, seed=9)
        assert np.all(path.values == 1)
