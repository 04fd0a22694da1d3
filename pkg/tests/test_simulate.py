import csv

import numpy as np
import pytest

import switchstab as st


@pytest.fixture
def run1(ex1, ex1_gains):
    def _run(horizon=200, seed=0, cert=None, x0=None):
        return st.closed_loop_run(
            ex1.system,
            ex1.chain,
            ex1.dist,
            ex1_gains,
            ex1.x0 if x0 is None else x0,
            horizon=horizon,
            seed=seed,
            cert=cert,
        )

    return _run


class TestClosedLoopRun:
    def test_origin_is_equilibrium(self, run1):
        traj = run1(x0=np.zeros(2))
        assert np.all(traj.x == 0.0)
        assert np.all(traj.u == 0.0)

    def test_shapes(self, run1):
        traj = run1(horizon=57)
        assert traj.x.shape == (58, 2)
        assert traj.u.shape == (58, 1)
        assert traj.r.shape == (58,)
        assert traj.sigma.shape == (58,)
        assert traj.horizon == 57

    def test_stable_example_decays(self, run1):
        traj = run1(horizon=200, seed=1)
        assert np.linalg.norm(traj.x[-1]) < 1e-3
        assert traj.nonfinite_step == -1

    def test_deterministic(self, run1):
        a, b = run1(seed=13), run1(seed=13)
        np.testing.assert_array_equal(a.x, b.x)
        np.testing.assert_array_equal(a.r, b.r)
        np.testing.assert_array_equal(a.obs_times.times, b.obs_times.times)

    def test_state_recursion(self, ex1, ex1_gains, run1):
        traj = run1(horizon=40, seed=2)
        A, B, K = ex1.system.A, ex1.system.B, ex1_gains.K
        for k in range(40):
            i, j = traj.r[k] - 1, traj.sigma[k] - 1
            expect = (A[i] + B[i] @ K[j]) @ traj.x[k]
            np.testing.assert_allclose(traj.x[k + 1], expect, atol=1e-12)

    def test_input_is_gain_times_state(self, ex1_gains, run1):
        traj = run1(horizon=40, seed=2)
        for k in (0, 17, 40):
            j = traj.sigma[k] - 1
            np.testing.assert_allclose(
                traj.u[k], ex1_gains.K[j] @ traj.x[k], atol=1e-12
            )

    def test_sigma_holds_between_observations(self, run1):
        traj = run1(horizon=300, seed=4)
        times = traj.obs_times.times
        for idx in range(len(times) - 1):
            t0 = int(times[idx])
            if t0 > 300:
                break
            # constant from this observation up to (not including) the next
            end = min(int(times[idx + 1]), 301)
            assert traj.sigma[t0] == traj.r[t0]  # refreshed at the instant
            assert np.all(traj.sigma[t0:end] == traj.r[t0])

    def test_perfect_information_sigma_equals_r(self, ex1, ex1_gains):
        traj = st.closed_loop_run(
            ex1.system, ex1.chain, st.periodic_distribution(1), ex1_gains,
            ex1.x0, horizon=100, seed=6,
        )
        np.testing.assert_array_equal(traj.sigma, traj.r)

    def test_divergent_run_clamps(self, ex1):
        # zero gains leave both subsystems unstable
        zeros = st.gains_from(np.eye(2), [np.zeros((1, 2))] * 2)
        traj = st.closed_loop_run(
            ex1.system, ex1.chain, ex1.dist, zeros, ex1.x0, horizon=3000, seed=0
        )
        assert traj.nonfinite_step > 0
        norms = np.linalg.norm(traj.x, axis=1)
        assert norms.max() <= 1e12 * (1 + 1e-9)
        assert np.all(np.isfinite(traj.x))

    def test_dimension_errors(self, ex1, ex1_gains):
        with pytest.raises(st.DimensionMismatch):
            st.closed_loop_run(
                ex1.system, ex1.chain, ex1.dist, ex1_gains,
                np.ones(3), horizon=10, seed=0,
            )
        with pytest.raises(ValueError):
            st.closed_loop_run(
                ex1.system, ex1.chain, ex1.dist, ex1_gains,
                ex1.x0, horizon=0, seed=0,
            )
        with pytest.raises(st.NonFiniteState):
            st.closed_loop_run(
                ex1.system, ex1.chain, ex1.dist, ex1_gains,
                np.array([np.nan, 0.0]), horizon=10, seed=0,
            )

    def test_pathwise_growth_bound(self, ex1, run1):
        """V along the trajectory never grows faster than the certified
        per-step factor (small additive tolerance for rounding)."""
        cert = ex1.certificate
        Rinv = np.linalg.inv(cert.R_tilde)
        for seed in range(5):
            traj = run1(horizon=300, seed=seed, cert=cert)
            V = np.einsum("ki,ij,kj->k", traj.x, Rinv, traj.x)
            z = cert.zeta[traj.r[:-1] - 1, traj.sigma[:-1] - 1]
            assert np.all(V[1:] <= z * V[:-1] + 1e-9 * (1.0 + V[:-1]))

    def test_eta_log_segment_identity(self, ex1, run1):
        """Scoring the path segment-by-segment reproduces the running
        growth-factor sum, final partial interval included."""
        cert = ex1.certificate
        traj = run1(horizon=250, seed=8, cert=cert)
        lnz = np.log(cert.zeta)
        inside = traj.obs_times.times[traj.obs_times.times <= 250]
        segs = st.segment_path(
            st.ModePath(values=traj.r), st.ObservationTimes(times=inside)
        )
        total = sum(
            lnz[e - 1, s.first - 1] for s in segs for e in s.elems
        )
        t_last = int(inside[-1])
        total += lnz[traj.r[t_last:] - 1, traj.r[t_last] - 1].sum()
        assert traj.eta_log[-1] == pytest.approx(total, abs=1e-10)


class TestMonteCarlo:
    def test_zero_start_always_converges(self, ex1, ex1_gains):
        rep = st.monte_carlo(
            ex1.system, ex1.chain, ex1.dist, ex1_gains,
            np.zeros(2), horizon=50, trials=10, seed=0,
        )
        assert rep.converged_fraction == 1.0

    def test_uncontrolled_unstable_never_converges(self, ex1):
        zeros = st.gains_from(np.eye(2), [np.zeros((1, 2))] * 2)
        rep = st.monte_carlo(
            ex1.system, ex1.chain, ex1.dist, zeros,
            ex1.x0, horizon=100, trials=10, seed=0,
        )
        assert rep.converged_fraction == 0.0
        assert rep.empirical_rate > 0.0

    def test_stable_setup_mostly_converges(self, ex1, ex1_gains):
        rep = st.monte_carlo(
            ex1.system, ex1.chain, ex1.dist, ex1_gains,
            ex1.x0, horizon=200, trials=50, seed=3,
        )
        assert rep.converged_fraction > 0.5
        assert rep.mean_final_log_norm < np.log(1e-3)
        assert rep.empirical_rate < 0.0
        assert rep.nonfinite_trials == 0

    def test_trials_replayable(self, ex1, ex1_gains):
        """Trial t of a report equals a direct run seeded (seed, t)."""
        rep = st.monte_carlo(
            ex1.system, ex1.chain, ex1.dist, ex1_gains,
            ex1.x0, horizon=60, trials=3, seed=99, threshold=1e-4,
        )
        finals = []
        for t in range(3):
            traj = st.closed_loop_run(
                ex1.system, ex1.chain, ex1.dist, ex1_gains,
                ex1.x0, horizon=60, seed=[99, t],
            )
            finals.append(np.log(np.linalg.norm(traj.x[-1])))
        assert rep.mean_final_log_norm == pytest.approx(np.mean(finals), abs=1e-12)

    def test_bad_trials(self, ex1, ex1_gains):
        with pytest.raises(ValueError):
            st.monte_carlo(
                ex1.system, ex1.chain, ex1.dist, ex1_gains,
                ex1.x0, horizon=10, trials=0, seed=0,
            )


class TestEtaExponent:
    def test_unit_zeta_is_exactly_zero(self, ex1):
        cert = st.new_certificate(
            np.ones((2, 2)), ex1.certificate.R_tilde, ex1.certificate.L
        )
        got = st.eta_exponent(ex1.system, ex1.chain, ex1.dist, cert, 2000, seed=0)
        assert got == 0.0

    def test_requires_long_horizon(self, ex1):
        with pytest.raises(ValueError):
            st.eta_exponent(
                ex1.system, ex1.chain, ex1.dist, ex1.certificate, 100, seed=0
            )

    def test_perfect_information_average(self, ex1):
        """With a gap of one step the sampled mode always matches, so the
        exponent converges to the invariant average of the diagonal."""
        cert = ex1.certificate
        got = st.eta_exponent(
            ex1.system, ex1.chain, st.periodic_distribution(1), cert,
            100_000, seed=2,
        )
        expect = 0.5 * (np.log(0.7) + np.log(0.8))
        assert abs(got - expect) / abs(expect) < 0.02

    def test_matches_ergodic_rate(self, ex1):
        rate = st.ergodic_rate(ex1.chain, ex1.dist, ex1.certificate.zeta)
        got = st.eta_exponent(
            ex1.system, ex1.chain, ex1.dist, ex1.certificate, 100_000, seed=5
        )
        assert abs(got - rate) / abs(rate) < 0.05


class TestExport:
    def test_row_count_and_header(self, run1, tmp_path):
        traj = run1(horizon=3)
        out = tmp_path / "traj.csv"
        st.export_trajectory(traj, out)
        rows = list(csv.reader(out.open()))
        assert rows[0] == ["k", "x_1", "x_2", "u_1", "r", "sigma", "observed"]
        assert len(rows) == 5  # header + 4 data rows

    def test_roundtrip_bit_exact(self, run1, tmp_path):
        traj = run1(horizon=80, seed=21)
        out = tmp_path / "traj.csv"
        st.export_trajectory(traj, out)
        rows = list(csv.reader(out.open()))[1:]
        x = np.array([[float(c) for c in row[1:3]] for row in rows])
        np.testing.assert_array_equal(x, traj.x)

    def test_observed_flags(self, run1, tmp_path):
        traj = run1(horizon=60, seed=5)
        out = tmp_path / "traj.csv"
        st.export_trajectory(traj, out)
        rows = list(csv.reader(out.open()))[1:]
        flagged = {int(row[0]) for row in rows if row[-1] == "1"}
        expect = {int(t) for t in traj.obs_times.times if t <= 60}
        assert flagged == expect

    def test_io_failure(self, run1, tmp_path):
        traj = run1(horizon=3)
        with pytest.raises(st.errors.IoFailure):
            st.export_trajectory(traj, tmp_path / "missing" / "traj.csv")
