"""
Finite-state discrete-time Markov chain driving the active mode.

The mode signal r(k) of the switched system is a time-homogeneous Markov
chain on {1, ..., M} with row-stochastic transition matrix P and a fixed
initial mode r0. Everything downstream (the sequence-valued chain, the
stability conditions, the simulations) assumes the chain is irreducible and
aperiodic, so both properties are validated eagerly at construction.

Mode indices are 1-based in the public API and 0-based internally; the
conversion happens only at the API boundary.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from . import _backend
from .errors import (
    BadInitialMode,
    NotAperiodic,
    NotIrreducible,
    NotStochastic,
    NumericalFailure,
)

_ROW_SUM_TOL = 1e-12
_INVARIANT_TOL = 1e-10


@dataclass(frozen=True)
class ModeChain:
    """
    Validated finite-state Markov chain.

    Attributes
    ----------
    P : np.ndarray
        Row-stochastic transition matrix, shape (M, M). Entry (i, j) is the
        probability of moving from mode i+1 to mode j+1 in one step.
    M : int
        Number of modes.
    r0 : int
        Initial mode, 1-based.
    """

    P: np.ndarray
    M: int
    r0: int
    _cum_rows: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def r0_index(self) -> int:
        """Initial mode, 0-based."""
        return self.r0 - 1


@dataclass(frozen=True)
class ModePath:
    """A realization of the mode signal; values are 1-based mode indices."""

    values: np.ndarray

    def __len__(self) -> int:
        return len(self.values)


def new_mode_chain(P: np.ndarray, r0: int) -> ModeChain:
    """
    Construct and validate a mode chain.

    Parameters
    ----------
    P : array-like
        Square matrix of transition probabilities.
    r0 : int
        Initial mode in {1..M}.

    Raises
    ------
    NotStochastic
        If any entry is negative, non-finite, or a row sum is off by more
        than 1e-12.
    NotIrreducible, NotAperiodic
        If the transition graph fails either chain property.
    BadInitialMode
        If r0 is outside {1..M}.
    """
    P = np.array(P, dtype=np.float64)
    if P.ndim != 2 or P.shape[0] != P.shape[1]:
        raise NotStochastic(f"transition matrix must be square, got shape {P.shape}")
    if not np.all(np.isfinite(P)):
        raise NotStochastic("transition matrix has non-finite entries")
    M = P.shape[0]
    if np.any(P < 0.0) or np.any(P > 1.0 + _ROW_SUM_TOL):
        raise NotStochastic("entries must lie in [0, 1]")
    row_sums = P.sum(axis=1)
    bad = np.abs(row_sums - 1.0) > _ROW_SUM_TOL
    if np.any(bad):
        row = int(np.argmax(bad))
        raise NotStochastic(
            f"row {row + 1} sums to {row_sums[row]:.15g}, expected 1 within {_ROW_SUM_TOL}"
        )
    if not (isinstance(r0, (int, np.integer)) and 1 <= r0 <= M):
        raise BadInitialMode(f"r0 must be an integer in 1..{M}, got {r0!r}")

    adjacency = P > 0.0
    if not _strongly_connected(adjacency):
        raise NotIrreducible("some mode cannot reach some other mode")
    if _period(adjacency) != 1:
        raise NotAperiodic(f"transition graph has period {_period(adjacency)}")

    P.setflags(write=False)
    cum = np.cumsum(P, axis=1)
    cum.setflags(write=False)
    chain = ModeChain(P=P, M=M, r0=int(r0))
    object.__setattr__(chain, "_cum_rows", cum)
    return chain


def _strongly_connected(adj: np.ndarray) -> bool:
    """Reachability closure: every mode must reach every mode."""
    M = adj.shape[0]
    reach = adj.copy()
    np.fill_diagonal(reach, True)
    # Repeated boolean squaring closes reachability in O(log M) rounds.
    for _ in range(max(1, math.ceil(math.log2(M)) + 1)):
        reach = reach @ reach
    return bool(reach.all())


def _period(adj: np.ndarray) -> int:
    """gcd of cycle lengths, computed from BFS levels on an irreducible graph.

    For each edge (u, v), depth[u] + 1 - depth[v] is the length mismatch of
    two walks to v; the gcd over all edges equals the chain's period.
    """
    M = adj.shape[0]
    depth = np.full(M, -1, dtype=np.int64)
    depth[0] = 0
    queue = deque([0])
    while queue:
        u = queue.popleft()
        for v in np.flatnonzero(adj[u]):
            if depth[v] < 0:
                depth[v] = depth[u] + 1
                queue.append(int(v))
    g = 0
    for u in range(M):
        for v in np.flatnonzero(adj[u]):
            g = math.gcd(g, int(depth[u] + 1 - depth[v]))
    return abs(g) if g != 0 else 1


def invariant_distribution(chain: ModeChain) -> np.ndarray:
    """
    Invariant distribution pi with pi P = pi and sum(pi) = 1.

    Computed as the left null vector of (P - I) via a direct linear solve;
    dimensions are tiny, so exactness and determinism beat iteration.

    Raises
    ------
    NumericalFailure
        If the residual ||pi P - pi||_inf exceeds 1e-10 or any component
        comes out non-positive.
    """
    M = chain.M
    A = chain.P.T - np.eye(M)
    A[M - 1, :] = 1.0  # replace one redundant equation with normalization
    b = np.zeros(M)
    b[M - 1] = 1.0
    try:
        pi = np.linalg.solve(A, b)
    except np.linalg.LinAlgError as err:
        raise NumericalFailure(f"invariant distribution solve failed: {err}") from err
    pi = pi / pi.sum()
    residual = np.max(np.abs(pi @ chain.P - pi))
    if residual > _INVARIANT_TOL:
        raise NumericalFailure(
            f"invariant distribution residual {residual:.3e} exceeds {_INVARIANT_TOL}"
        )
    if np.any(pi <= 0.0):
        raise NumericalFailure("invariant distribution has non-positive components")
    return pi


def l_step(chain: ModeChain, l: int) -> np.ndarray:
    """l-step transition matrix P^l; l = 0 gives the identity."""
    if l < 0:
        raise ValueError(f"l must be nonnegative, got {l}")
    return np.linalg.matrix_power(chain.P, l)


def sample_path(chain: ModeChain, horizon: int, seed) -> ModePath:
    """
    Sample a mode path of the given length starting at r0.

    The path has exactly `horizon` entries, r(0) .. r(horizon-1), and is
    deterministic for a fixed seed. Horizon 1 returns just (r0,) since the
    initial distribution is degenerate.
    """
    if horizon < 1:
        raise ValueError(f"horizon must be >= 1, got {horizon}")
    rng = np.random.default_rng(seed)
    uniforms = rng.random(horizon - 1)
    values = _backend.sample_modes(chain._cum_rows, chain.r0_index, uniforms)
    return ModePath(values=values + 1)
