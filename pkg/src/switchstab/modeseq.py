"""
The sequence-valued Markov chain over mode runs between observations.

Between consecutive observation instants the active mode traces out a finite
sequence q = (q_1, ..., q_|q|); the process of such sequences is itself a
Markov chain on the countable state space S of all sequences with positive
transition probabilities and an observable length (mu_{|q|} > 0). This
module enumerates a truncated slice of S, builds the initial distribution
lambda, the transition probabilities rho, and the invariant distribution phi,
and segments simulated mode paths into sequence realizations.

The transition probability out of q depends on q only through its last
element, which keeps every computation here linear in |S| times M: the
stationarity residual is evaluated by aggregating phi per last element
instead of materializing the |S| x |S| matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ExplosionGuard, PathTooShort, SupportExceedsMaxLen
from .markov import ModeChain, ModePath, invariant_distribution
from .renewal import IntervalDistribution, ObservationTimes

DENSE_CAP = 10_000
SEQUENCE_CAP = 1_000_000


@dataclass(frozen=True)
class ModeSequence:
    """A finite run of modes between observations; elements are 1-based."""

    elems: tuple[int, ...]

    def __post_init__(self):
        if len(self.elems) < 1:
            raise ValueError("mode sequence must be nonempty")

    def __len__(self) -> int:
        return len(self.elems)

    @property
    def first(self) -> int:
        return self.elems[0]

    @property
    def last(self) -> int:
        return self.elems[-1]


class TruncatedSequenceSpace:
    """
    Enumerated finite slice of the sequence space with lambda, rho, phi.

    Attributes
    ----------
    sequences : list[ModeSequence]
        All retained sequences, ordered by length then lexicographically.
    lam : np.ndarray
        Initial distribution; zero off sequences starting at r0.
    phi : np.ndarray
        Invariant distribution per the closed-form product formula.
    truncation_bound : float
        Probability mass excluded by the gap distribution's truncation.
    irreducible : bool
        Whether every retained sequence can reach every other through the
        retained transition graph (validated, not assumed).
    rho : np.ndarray
        Dense transition matrix, built lazily on first access and only when
        the sequence count is at most `dense_cap`; use rho_row otherwise.
    """

    def __init__(
        self,
        chain: ModeChain,
        dist: IntervalDistribution,
        sequences: list[ModeSequence],
        dense_cap: int = DENSE_CAP,
    ):
        self.chain = chain
        self.dist = dist
        self.sequences = sequences
        self.index = {s.elems: i for i, s in enumerate(sequences)}
        self.dense_cap = dense_cap
        self.truncation_bound = dist.tail_mass
        # per-sequence cached structure: weights w(q) = mu_|q| prod p,
        # first and last elements (0-based)
        self._firsts = np.array([s.first - 1 for s in sequences], dtype=np.int64)
        self._lasts = np.array([s.last - 1 for s in sequences], dtype=np.int64)
        self._weights = _sequence_weights(chain, dist, sequences)
        self.lam = initial_distribution(chain, dist, self)
        self.phi = invariant_distribution_phi(chain, dist, self)
        self.irreducible = _validate_irreducible(chain, self)
        self._rho: np.ndarray | None = None

    def __len__(self) -> int:
        return len(self.sequences)

    @property
    def rho(self) -> np.ndarray:
        if self._rho is None:
            count = len(self.sequences)
            if count > self.dense_cap:
                raise ExplosionGuard(
                    f"{count} sequences exceeds dense cap {self.dense_cap}; "
                    "use rho_row for on-demand rows"
                )
            # row q: p_{last(q), first(qbar)} * w(qbar), vectorized per row
            self._rho = self.chain.P[np.ix_(self._lasts, self._firsts)] * self._weights
        return self._rho

    def rho_row(self, i: int) -> np.ndarray:
        """Row of the transition matrix for sequence i, computed on demand."""
        last = self._lasts[i]
        return self.chain.P[last, self._firsts] * self._weights


def _sequence_weights(
    chain: ModeChain, dist: IntervalDistribution, sequences: list[ModeSequence]
) -> np.ndarray:
    """w(q) = mu_{|q|} * prod_n p_{q_n, q_{n+1}} for every sequence."""
    mu = dist.prob_map()
    out = np.empty(len(sequences), dtype=np.float64)
    P = chain.P
    for i, seq in enumerate(sequences):
        e = np.asarray(seq.elems, dtype=np.int64) - 1
        w = mu[len(seq)]
        if len(e) > 1:
            w *= float(np.prod(P[e[:-1], e[1:]]))
        out[i] = w
    return out


def enumerate_sequences(
    chain: ModeChain,
    dist: IntervalDistribution,
    max_len: int | None = None,
    cap: int = SEQUENCE_CAP,
) -> list[ModeSequence]:
    """
    All mode sequences q with mu_{|q|} > 0 and positive-probability steps.

    Sequences are ordered by length, then lexicographically. `max_len` must
    cover the distribution's retained support (SupportExceedsMaxLen raised
    otherwise); the count is pre-estimated from the adjacency structure and
    enumeration refuses to start past `cap` (ExplosionGuard).
    """
    support = [int(t) for t in dist.taus]
    if max_len is None:
        max_len = max(support)
    if max_len < max(support):
        raise SupportExceedsMaxLen(
            f"max_len {max_len} below the distribution's largest gap {max(support)}"
        )
    adj = (chain.P > 0.0).astype(np.int64)
    ones = np.ones(chain.M, dtype=np.int64)
    total = 0
    for tau in support:
        # number of length-tau walks in the positive-transition graph
        total += int(ones @ np.linalg.matrix_power(adj, tau - 1) @ ones)
        if total > cap:
            raise ExplosionGuard(
                f"enumeration would produce more than {cap} sequences"
            )
    neighbors = [tuple(int(j) + 1 for j in np.flatnonzero(adj[i])) for i in range(chain.M)]
    out: list[ModeSequence] = []
    for tau in support:
        frontier: list[tuple[int, ...]] = [(i,) for i in range(1, chain.M + 1)]
        for _ in range(tau - 1):
            frontier = [q + (j,) for q in frontier for j in neighbors[q[-1] - 1]]
        frontier.sort()
        out.extend(ModeSequence(elems=q) for q in frontier)
    return out


def build_space(
    chain: ModeChain,
    dist: IntervalDistribution,
    max_len: int | None = None,
    dense_cap: int = DENSE_CAP,
    cap: int = SEQUENCE_CAP,
) -> TruncatedSequenceSpace:
    """Enumerate the sequence space and attach lambda, phi, and lazy rho."""
    sequences = enumerate_sequences(chain, dist, max_len=max_len, cap=cap)
    return TruncatedSequenceSpace(chain, dist, sequences, dense_cap=dense_cap)


def initial_distribution(
    chain: ModeChain, dist: IntervalDistribution, space: TruncatedSequenceSpace
) -> np.ndarray:
    """
    lambda_q = mu_{|q|} prod p_{q_n, q_{n+1}} if q starts at r0, else 0.

    Sums to 1 up to the distribution's truncation bound; not renormalized.
    """
    lam = np.where(space._firsts == chain.r0_index, space._weights, 0.0)
    return lam


def transition_probability(
    chain: ModeChain,
    dist: IntervalDistribution,
    q: ModeSequence,
    qbar: ModeSequence,
) -> float:
    """rho_{q, qbar} = p_{last(q), first(qbar)} * mu_{|qbar|} * prod p."""
    mu = dist.prob_map()
    if len(qbar) not in mu:
        return 0.0
    e = np.asarray(qbar.elems, dtype=np.int64) - 1
    w = mu[len(qbar)]
    if len(e) > 1:
        w *= float(np.prod(chain.P[e[:-1], e[1:]]))
    return float(chain.P[q.last - 1, qbar.first - 1] * w)


def invariant_distribution_phi(
    chain: ModeChain, dist: IntervalDistribution, space: TruncatedSequenceSpace
) -> np.ndarray:
    """phi_q = pi_{q_1} mu_{|q|} prod p_{q_n, q_{n+1}} (closed form)."""
    pi = invariant_distribution(chain)
    return pi[space._firsts] * space._weights


def stationarity_residual(space: TruncatedSequenceSpace) -> float:
    """
    ||phi^T rho - phi^T||_inf without materializing rho.

    (phi^T rho)_qbar factors as [sum_i agg_i p_{i, first(qbar)}] * w(qbar)
    where agg_i collects phi mass by last element, so the residual costs
    O(|S| M) instead of O(|S|^2).
    """
    M = space.chain.M
    agg = np.zeros(M)
    np.add.at(agg, space._lasts, space.phi)
    mixed = agg @ space.chain.P
    lhs = mixed[space._firsts] * space._weights
    return float(np.max(np.abs(lhs - space.phi)))


def _validate_irreducible(chain: ModeChain, space: TruncatedSequenceSpace) -> bool:
    """
    Check that the retained transition graph is strongly connected.

    Because rows of rho depend on q only through its last element, sequence
    qbar is reachable from q iff some mode i reachable in the quotient graph
    from last(q) has p_{i, first(qbar)} > 0. The quotient graph has an edge
    i -> last(qbar) whenever p_{i, first(qbar)} > 0 for a retained qbar.
    """
    M = chain.M
    firsts = np.unique(space._firsts)
    lasts = np.unique(space._lasts)
    # quotient adjacency over modes
    quot = np.zeros((M, M), dtype=bool)
    for f, l in {(s.first - 1, s.last - 1) for s in space.sequences}:
        quot[:, l] |= chain.P[:, f] > 0.0
    reach = quot.copy()
    np.fill_diagonal(reach, True)
    for _ in range(M):
        reach = reach @ reach
    # from every occupied last-mode, every retained first-mode must be hit
    for i in lasts:
        hit = chain.P[reach[i]][:, firsts] > 0.0
        if not hit.any(axis=0).all():
            return False
    return True


def segment_path(path: ModePath, times: ObservationTimes) -> list[ModeSequence]:
    """
    Split a mode path at observation instants: s(i) = (r(t_i), ..., r(t_{i+1}-1)).

    The path must cover [0, t_N - 1] where t_N is the last observation time;
    the segments' concatenation reproduces that prefix of the path.
    """
    t = times.times
    if len(path) < int(t[-1]):
        raise PathTooShort(
            f"path length {len(path)} does not cover observation time {int(t[-1])}"
        )
    values = path.values
    return [
        ModeSequence(elems=tuple(int(v) for v in values[int(t[i]) : int(t[i + 1])]))
        for i in range(len(t) - 1)
    ]
