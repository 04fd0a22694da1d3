"""
Closed-loop Monte Carlo simulation of the sampled-mode feedback system.

One run draws a mode path r(k) and a set of observation instants t_i, holds
the controller's mode estimate sigma(k) = r(t_{N(k)}) constant between
observations, and iterates x(k+1) = (A_{r(k)} + B_{r(k)} K_{sigma(k)}) x(k).
Mode and observation draws use separate sub-seeded RNG streams so they are
mutually independent yet reproducible from one master seed. With a
certificate attached, the run also accumulates the log growth-factor sum
whose time average converges to the theoretical ergodic rate.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _backend
from .errors import DimensionMismatch, IoFailure, NonFiniteState
from .markov import ModeChain
from .renewal import IntervalDistribution, ObservationTimes, _draw_times
from .stability import SwitchedSystem, ZetaCertificate
from .synthesis import GainSet

DIVERGENCE_CLAMP = 1e12
_LOG_FLOOR = 1e-300

_MODE_STREAM = 0
_RENEWAL_STREAM = 1


def _seed_words(seed) -> list[int]:
    if isinstance(seed, (int, np.integer)):
        return [int(seed)]
    return [int(w) for w in seed]


def _stream_rng(seed, stream: int) -> np.random.Generator:
    # decorrelated sub-streams: distinct entropy words, one generator each
    return np.random.default_rng(_seed_words(seed) + [stream])


@dataclass(frozen=True)
class Trajectory:
    """
    One closed-loop realization.

    x[k] is the state at step k (shape (horizon+1, n)), u[k] the input
    K_{sigma(k)} x(k) including the final step, r and sigma the active and
    sampled mode paths (1-based, length horizon+1). eta_log, present when a
    certificate was supplied, is the inclusive running sum
    eta_log[k] = sum_{n=0}^{k} ln zeta_{r(n), sigma(n)}. nonfinite_step is
    the first step whose state norm hit the divergence clamp, -1 if none;
    from there on the trajectory is a rescaled shadow of the true one.
    """

    x: np.ndarray
    u: np.ndarray
    r: np.ndarray
    sigma: np.ndarray
    obs_times: ObservationTimes
    eta_log: Optional[np.ndarray]
    nonfinite_step: int

    @property
    def horizon(self) -> int:
        return len(self.r) - 1


def closed_loop_run(
    sys: SwitchedSystem,
    chain: ModeChain,
    dist: IntervalDistribution,
    gains: GainSet,
    x0,
    horizon: int,
    seed,
    cert: Optional[ZetaCertificate] = None,
) -> Trajectory:
    """
    Simulate one trajectory of length `horizon`, deterministically per seed.

    Divergent runs are clamped at state norm 1e12 (rescaled, flagged via
    nonfinite_step) instead of overflowing, so parameter sweeps across
    unstable regions complete.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    if sys.M != chain.M or len(gains.K) != sys.M:
        raise DimensionMismatch("mode counts of system, chain, and gains differ")
    x0 = np.asarray(x0, dtype=np.float64).reshape(-1)
    if x0.shape != (sys.n,):
        raise DimensionMismatch(f"x0 must have length {sys.n}, got {x0.shape}")
    if not np.all(np.isfinite(x0)):
        raise NonFiniteState("x0 has non-finite entries")

    rng_mode = _stream_rng(seed, _MODE_STREAM)
    rng_renewal = _stream_rng(seed, _RENEWAL_STREAM)

    r = _backend.sample_modes(
        chain._cum_rows, chain.r0_index, rng_mode.random(horizon)
    )
    times = _draw_times(dist, horizon, rng_renewal)
    sigma = _backend.fill_sigma(r, times, horizon)

    n = sys.n
    F = np.empty((sys.M, sys.M, n, n))
    K = np.empty((sys.M, sys.m, n))
    for j in range(sys.M):
        K[j] = gains.K[j]
        for i in range(sys.M):
            F[i, j] = sys.A[i] + sys.B[i] @ gains.K[j]

    X, nonfinite = _backend.closed_loop(F, r, sigma, x0, DIVERGENCE_CLAMP)
    U = np.einsum("kmn,kn->km", K[sigma], X)

    eta_log = None
    if cert is not None:
        eta_log = np.cumsum(np.log(cert.zeta)[r, sigma])

    for arr in (X, U, r, sigma):
        arr.setflags(write=False)
    return Trajectory(
        x=X,
        u=U,
        r=r + 1,
        sigma=sigma + 1,
        obs_times=ObservationTimes(times=times),
        eta_log=eta_log,
        nonfinite_step=int(nonfinite),
    )


@dataclass(frozen=True)
class MonteCarloReport:
    """Aggregate convergence statistics over independent trials."""

    trials: int
    converged_fraction: float
    mean_final_log_norm: float
    empirical_rate: float
    nonfinite_trials: int


def monte_carlo(
    sys: SwitchedSystem,
    chain: ModeChain,
    dist: IntervalDistribution,
    gains: GainSet,
    x0,
    horizon: int,
    trials: int,
    seed,
    threshold: float = 1e-4,
) -> MonteCarloReport:
    """
    Run independent closed-loop trials and aggregate convergence statistics.

    Trial t derives its seed from (seed, t), so the report is reproducible
    and individual trials can be replayed in isolation. converged counts
    trials with final state norm below the threshold; empirical_rate is the
    mean slope of ln||x(k)|| over the tail half of the horizon.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    words = _seed_words(seed)
    half = -(-horizon // 2)  # ceil
    converged = 0
    nonfinite = 0
    final_logs = np.empty(trials)
    rates = np.empty(trials)
    for t in range(trials):
        traj = closed_loop_run(
            sys, chain, dist, gains, x0, horizon, seed=words + [t]
        )
        final = float(np.linalg.norm(traj.x[horizon]))
        mid = float(np.linalg.norm(traj.x[half]))
        if final < threshold:
            converged += 1
        if traj.nonfinite_step >= 0:
            nonfinite += 1
        final_logs[t] = np.log(max(final, _LOG_FLOOR))
        if horizon > half:
            rates[t] = (
                np.log(max(final, _LOG_FLOOR)) - np.log(max(mid, _LOG_FLOOR))
            ) / (horizon - half)
        else:
            rates[t] = 0.0
    return MonteCarloReport(
        trials=trials,
        converged_fraction=converged / trials,
        mean_final_log_norm=float(final_logs.mean()),
        empirical_rate=float(rates.mean()),
        nonfinite_trials=nonfinite,
    )


def eta_exponent(
    sys: SwitchedSystem,
    chain: ModeChain,
    dist: IntervalDistribution,
    cert: ZetaCertificate,
    horizon: int,
    seed,
) -> float:
    """
    Per-step exponent of the growth-factor product over one long realization:
    (1/horizon) * sum_{n=0}^{horizon} ln zeta_{r(n), sigma(n)}.

    The final partial observation interval contributes its residual terms, so
    the sum has horizon+1 summands. For long horizons this converges to
    ergodic_rate by the renewal reward theorem; the acceptance band at
    horizon 1e5 is 5% relative.
    """
    if horizon < 1000:
        raise ValueError(f"horizon must be >= 1000 for a stable average, got {horizon}")
    rng_mode = _stream_rng(seed, _MODE_STREAM)
    rng_renewal = _stream_rng(seed, _RENEWAL_STREAM)
    r = _backend.sample_modes(
        chain._cum_rows, chain.r0_index, rng_mode.random(horizon)
    )
    times = _draw_times(dist, horizon, rng_renewal)
    sigma = _backend.fill_sigma(r, times, horizon)
    lnz = np.log(cert.zeta)[r, sigma]
    return float(lnz.sum() / horizon)


def export_trajectory(traj: Trajectory, path) -> None:
    """
    Write a trajectory as CSV: k, x_1..x_n, u_1..u_m, r, sigma, observed.

    Floats are written with repr precision so re-parsing reproduces the
    values bit-exactly. The observed column flags rows whose step index is
    an observation instant. Raises IoFailure on filesystem errors.
    """
    n = traj.x.shape[1]
    m = traj.u.shape[1]
    horizon = traj.horizon
    observed = set(int(t) for t in traj.obs_times.times if t <= horizon)
    header = (
        ["k"]
        + [f"x_{a + 1}" for a in range(n)]
        + [f"u_{b + 1}" for b in range(m)]
        + ["r", "sigma", "observed"]
    )
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(header)
            for k in range(horizon + 1):
                row = (
                    [k]
                    + [repr(float(v)) for v in traj.x[k]]
                    + [repr(float(v)) for v in traj.u[k]]
                    + [int(traj.r[k]), int(traj.sigma[k]), int(k in observed)]
                )
                writer.writerow(row)
    except OSError as err:
        raise IoFailure(f"could not write trajectory to {path}: {err}") from err
