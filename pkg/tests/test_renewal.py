import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as hyp

import switchstab as st


class TestExplicit:
    def test_renormalizes(self):
        d = st.explicit_distribution({1: 2.0, 3: 2.0})
        np.testing.assert_allclose(d.probs, [0.5, 0.5])
        assert d.mean == pytest.approx(2.0)
        assert d.kind == "explicit"
        assert d.tail_mass == 0.0

    def test_drops_zero_mass_points(self):
        d = st.explicit_distribution({1: 0.5, 2: 0.0, 3: 0.5})
        np.testing.assert_array_equal(d.taus, [1, 3])

    def test_empty_raises(self):
        with pytest.raises(st.errors.EmptySupport):
            st.explicit_distribution({})

    def test_bad_support_raises(self):
        with pytest.raises(st.errors.BadSupport):
            st.explicit_distribution({0: 1.0})
        with pytest.raises(st.errors.BadSupport):
            st.explicit_distribution({1.5: 1.0})

    def test_negative_mass_raises(self):
        with pytest.raises(st.errors.NegativeProbability):
            st.explicit_distribution({1: -0.1, 2: 1.1})

    def test_zero_total_raises(self):
        with pytest.raises(st.errors.ZeroTotalMass):
            st.explicit_distribution({1: 0.0, 2: 0.0})

    @settings(max_examples=50, deadline=None)
    @given(
        masses=hyp.dictionaries(
            hyp.integers(1, 40),
            hyp.floats(1e-6, 1e3, allow_nan=False),
            min_size=1,
            max_size=8,
        )
    )
    def test_always_normalized(self, masses):
        d = st.explicit_distribution(masses)
        assert abs(d.probs.sum() - 1.0) < 1e-12
        assert np.all(np.diff(d.taus) > 0)


class TestConstructors:
    def test_uniform(self):
        d = st.uniform_distribution(2, 5)
        np.testing.assert_array_equal(d.taus, [2, 3, 4, 5])
        np.testing.assert_allclose(d.probs, [0.25] * 4)
        assert d.mean == pytest.approx(3.5)
        assert d.kind == "uniform"

    def test_uniform_bad_bounds(self):
        with pytest.raises(st.errors.BadBounds):
            st.uniform_distribution(5, 2)
        with pytest.raises(st.errors.BadBounds):
            st.uniform_distribution(0, 3)

    def test_periodic(self):
        d = st.periodic_distribution(4)
        np.testing.assert_array_equal(d.taus, [4])
        assert d.mean == 4.0
        assert d.kind == "periodic"
        assert d.params == {"T": 4}

    def test_periodic_bad(self):
        with pytest.raises(st.errors.BadBounds):
            st.periodic_distribution(0)

    def test_geometric_truncation_point(self):
        """Support ends at the first point whose residual tail drops below
        the tolerance; for rate 0.3 and tol 1e-12 that is length 78."""
        d = st.geometric_distribution(0.3)
        assert d.taus[0] == 1 and d.taus[-1] == 78
        assert 0.0 < d.tail_mass < 1e-12
        assert abs(d.probs.sum() - 1.0) < 1e-12
        # renormalized mean sits just below the untruncated 1/theta
        assert d.mean == pytest.approx(1.0 / 0.3, rel=1e-9)

    def test_geometric_custom_tail(self):
        d = st.geometric_distribution(0.3, tail_tol=0.014)
        assert d.taus[-1] == 12
        assert d.tail_mass == pytest.approx(0.7**12)

    def test_geometric_degenerate_theta_one(self):
        d = st.geometric_distribution(1.0)
        np.testing.assert_array_equal(d.taus, [1])
        np.testing.assert_allclose(d.probs, [1.0])
        assert d.tail_mass == 0.0

    def test_geometric_bad_theta(self):
        for theta in (0.0, -0.2, 1.5):
            with pytest.raises(st.BadTheta):
                st.geometric_distribution(theta)
        with pytest.raises(st.BadTheta):
            st.geometric_distribution(0.5, tail_tol=1.5)

    def test_geometric_mass_ratio(self):
        d = st.geometric_distribution(0.4)
        ratios = d.probs[1:] / d.probs[:-1]
        np.testing.assert_allclose(ratios, 0.6, rtol=1e-12)


class TestSampling:
    def test_times_structure(self):
        d = st.uniform_distribution(2, 5)
        times = st.sample_observation_times(d, 1000, seed=1)
        t = times.times
        assert t[0] == 0
        assert np.all(np.diff(t) >= 2) and np.all(np.diff(t) <= 5)
        assert t[-1] >= 1000
        assert t[-2] < 1000  # exactly one sentinel past the horizon

    def test_zero_horizon(self):
        d = st.periodic_distribution(3)
        times = st.sample_observation_times(d, 0, seed=0)
        np.testing.assert_array_equal(times.times, [0])

    def test_deterministic(self):
        d = st.geometric_distribution(0.25)
        a = st.sample_observation_times(d, 500, seed=42)
        b = st.sample_observation_times(d, 500, seed=42)
        np.testing.assert_array_equal(a.times, b.times)

    def test_periodic_grid(self):
        d = st.periodic_distribution(4)
        times = st.sample_observation_times(d, 20, seed=0)
        np.testing.assert_array_equal(times.times, [0, 4, 8, 12, 16, 20])

    def test_gap_mean_slln(self):
        d = st.geometric_distribution(0.3)
        times = st.sample_observation_times(d, 100_000, seed=5)
        gaps = np.diff(times.times)
        assert abs(gaps.mean() - d.mean) / d.mean < 0.01


class TestCountingProcess:
    def test_counts_at_and_between_observations(self):
        times = st.ObservationTimes(times=np.array([0, 3, 5, 9]))
        assert st.counting_process(times, 0) == 0
        assert st.counting_process(times, 2) == 0
        assert st.counting_process(times, 3) == 1
        assert st.counting_process(times, 4) == 1
        assert st.counting_process(times, 5) == 2
        assert st.counting_process(times, 9) == 3

    def test_out_of_horizon(self):
        times = st.ObservationTimes(times=np.array([0, 3]))
        with pytest.raises(st.OutOfHorizon):
            st.counting_process(times, 4)
        with pytest.raises(st.OutOfHorizon):
            st.counting_process(times, -1)

    def test_slln_rate(self):
        d = st.geometric_distribution(0.3)
        times = st.sample_observation_times(d, 100_000, seed=0)
        rate = st.counting_process(times, 100_000) / 100_000
        assert abs(rate - 1.0 / d.mean) < 0.01
