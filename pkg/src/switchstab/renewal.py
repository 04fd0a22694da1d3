"""
Discrete-time renewal process of mode-observation instants.

The controller learns the active mode only at random times t_0 = 0 < t_1 <
t_2 < ... whose gaps tau_i = t_i - t_{i-1} are i.i.d. with distribution mu
over the positive integers. This module provides the distribution object,
its special-case constructors, observation-time sampling, and the counting
process N(k) = #{i >= 1 : t_i <= k}.

Infinite-support distributions are truncated where the residual tail drops
below a tolerance, then renormalized; the removed mass is recorded so that
downstream evaluators can report a truncation error bound.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from . import _backend
from .errors import (
    BadBounds,
    BadSupport,
    BadTheta,
    EmptySupport,
    NegativeProbability,
    OutOfHorizon,
    ZeroTotalMass,
)

_MASS_TOL = 1e-12
DEFAULT_TAIL_TOL = 1e-12


@dataclass(frozen=True)
class IntervalDistribution:
    """
    Distribution of gaps between consecutive mode observations.

    Attributes
    ----------
    taus : np.ndarray
        Support, strictly increasing positive integers.
    probs : np.ndarray
        Probability of each support point; sums to 1 within 1e-12.
    mean : float
        First moment of the (truncated, renormalized) distribution.
    tail_mass : float
        Probability mass removed by truncation, before renormalization.
    kind : str
        One of "explicit", "uniform", "geometric", "periodic"; used by the
        CLI to pick the matching closed-form condition evaluator.
    params : dict
        Constructor parameters (e.g. {"theta": 0.3}) for serialization.
    """

    taus: np.ndarray
    probs: np.ndarray
    mean: float
    tail_mass: float
    kind: str
    params: dict = field(default_factory=dict)

    @property
    def max_tau(self) -> int:
        return int(self.taus[-1])

    def prob_map(self) -> dict[int, float]:
        return {int(t): float(p) for t, p in zip(self.taus, self.probs)}

    def cumulative(self) -> np.ndarray:
        return np.cumsum(self.probs)


@dataclass(frozen=True)
class ObservationTimes:
    """Strictly increasing observation instants starting at t_0 = 0."""

    times: np.ndarray

    def __len__(self) -> int:
        return len(self.times)

    @property
    def last(self) -> int:
        return int(self.times[-1])


def _finalize(
    taus: np.ndarray, probs: np.ndarray, tail_mass: float, kind: str, params: dict
) -> IntervalDistribution:
    total = probs.sum()
    probs = probs / total
    mean = float(taus @ probs)
    taus = taus.astype(np.int64)
    taus.setflags(write=False)
    probs.setflags(write=False)
    return IntervalDistribution(
        taus=taus,
        probs=probs,
        mean=mean,
        tail_mass=float(tail_mass),
        kind=kind,
        params=params,
    )


def explicit_distribution(probs: Mapping[int, float]) -> IntervalDistribution:
    """
    Distribution from an explicit {tau: mass} map, renormalized to sum 1.

    Zero-mass entries are dropped from the support. Raises EmptySupport,
    BadSupport, NegativeProbability, or ZeroTotalMass on malformed input.
    """
    if not probs:
        raise EmptySupport("distribution needs at least one support point")
    for tau in probs:
        if not (isinstance(tau, (int, np.integer)) and tau >= 1):
            raise BadSupport(f"support points must be positive integers, got {tau!r}")
    items = sorted((int(t), float(p)) for t, p in probs.items())
    taus = np.array([t for t, _ in items], dtype=np.int64)
    mass = np.array([p for _, p in items], dtype=np.float64)
    if np.any(mass < 0.0) or not np.all(np.isfinite(mass)):
        raise NegativeProbability("probability masses must be finite and >= 0")
    keep = mass > 0.0
    if not np.any(keep):
        raise ZeroTotalMass("all probability masses are zero")
    return _finalize(taus[keep], mass[keep], 0.0, "explicit", {})


def uniform_distribution(tau_lo: int, tau_hi: int) -> IntervalDistribution:
    """Uniform gaps on {tau_lo..tau_hi}: each point gets 1/(hi-lo+1)."""
    if not (
        isinstance(tau_lo, (int, np.integer))
        and isinstance(tau_hi, (int, np.integer))
        and 1 <= tau_lo <= tau_hi
    ):
        raise BadBounds(f"need 1 <= tau_lo <= tau_hi, got ({tau_lo}, {tau_hi})")
    taus = np.arange(int(tau_lo), int(tau_hi) + 1, dtype=np.int64)
    probs = np.full(len(taus), 1.0 / len(taus))
    return _finalize(
        taus, probs, 0.0, "uniform", {"tau_lo": int(tau_lo), "tau_hi": int(tau_hi)}
    )


def periodic_distribution(T: int) -> IntervalDistribution:
    """Deterministic gaps of length T: observation every T steps."""
    if not (isinstance(T, (int, np.integer)) and T >= 1):
        raise BadBounds(f"period must be a positive integer, got {T!r}")
    return _finalize(
        np.array([T], dtype=np.int64), np.array([1.0]), 0.0, "periodic", {"T": int(T)}
    )


def geometric_distribution(
    theta: float, tail_tol: float = DEFAULT_TAIL_TOL
) -> IntervalDistribution:
    """
    Geometric gaps mu_tau = (1-theta)^(tau-1) theta, truncated and renormalized.

    Models a mode sample available each step independently with probability
    theta; a gap of length tau means tau-1 consecutive losses. The support
    is cut at the smallest tau_max whose residual tail (1-theta)^tau_max is
    below tail_tol, and the removed mass is recorded as tail_mass.

    theta = 1 is accepted as the degenerate perfect-observation case with
    all mass at tau = 1 (useful as a sweep endpoint).
    """
    if not (0.0 < theta <= 1.0):
        raise BadTheta(f"theta must lie in (0, 1], got {theta}")
    if not (0.0 < tail_tol < 1.0):
        raise BadTheta(f"tail_tol must lie in (0, 1), got {tail_tol}")
    params = {"theta": float(theta), "tail_tol": float(tail_tol)}
    if theta == 1.0:
        return _finalize(
            np.array([1], dtype=np.int64), np.array([1.0]), 0.0, "geometric", params
        )
    # smallest tau_max with (1-theta)^tau_max < tail_tol
    tau_max = int(np.ceil(np.log(tail_tol) / np.log1p(-theta)))
    tau_max = max(tau_max, 1)
    while (1.0 - theta) ** tau_max >= tail_tol:
        tau_max += 1
    taus = np.arange(1, tau_max + 1, dtype=np.int64)
    probs = (1.0 - theta) ** (taus - 1) * theta
    tail = (1.0 - theta) ** tau_max
    return _finalize(taus, probs, tail, "geometric", params)


def sample_observation_times(
    dist: IntervalDistribution, horizon: int, seed
) -> ObservationTimes:
    """
    Draw i.i.d. gaps until the horizon is passed.

    The returned times start at 0 and the last one is >= horizon (one
    sentinel past the end), so the sampled mode is defined for every step
    k <= horizon. Horizon 0 returns just (0,).
    """
    if horizon < 0:
        raise ValueError(f"horizon must be >= 0, got {horizon}")
    rng = np.random.default_rng(seed)
    times = _draw_times(dist, horizon, rng)
    return ObservationTimes(times=times)


def _draw_times(
    dist: IntervalDistribution, horizon: int, rng: np.random.Generator
) -> np.ndarray:
    """Gap sampling shared with the simulator (which supplies its own rng)."""
    if horizon == 0:
        return np.zeros(1, dtype=np.int64)
    cum = dist.cumulative()
    chunks = [np.zeros(1, dtype=np.int64)]
    total = 0
    while total < horizon:
        # enough draws to cover the remaining span in expectation, plus slack
        need = max(16, int((horizon - total) / dist.mean * 1.2) + 8)
        gaps = _backend.sample_gaps(cum, dist.taus, rng.random(need))
        times = total + np.cumsum(gaps)
        chunks.append(times)
        total = int(times[-1])
    times = np.concatenate(chunks)
    cut = int(np.searchsorted(times, horizon, side="left"))
    times = times[: cut + 1]
    times.setflags(write=False)
    return times


def counting_process(times: ObservationTimes, k: int) -> int:
    """
    N(k): number of observation instants t_i <= k with i >= 1.

    N(0) = 0 by definition since t_0 = 0 does not count itself. Raises
    OutOfHorizon for k outside the covered range.
    """
    if k < 0 or k > times.last:
        raise OutOfHorizon(f"k = {k} outside covered range [0, {times.last}]")
    return int(np.searchsorted(times.times[1:], k, side="right"))
