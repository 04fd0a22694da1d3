"""
Evaluators for the stabilization certificates.

Two sufficient conditions certify almost-sure stability of the sampled-mode
feedback loop. The first (the growth-bound inequality) asks, for every pair
of subsystem i and gain j, that the closed-loop matrix contract the quadratic
function V(x) = x^T R x by at most the factor zeta_{i,j}; it is checked as
positive semidefiniteness of a Schur-complement block. The second (the
averaged log-contraction condition) asks that the growth factors, averaged
over the invariant distribution of the mode chain and the gap distribution,
contract on the whole:

    sum_tau mu_tau sum_{l=1}^tau sum_{i,j} pi_i p_{i,j}^(l-1) ln zeta_{j,i} < 0.

The evaluator reorders this triple sum using the survival function of mu,
w_l = P[tau >= l], so each matrix power is formed once:

    LHS = sum_l w_l * pi^T (P^(l-1) o C) 1,   C[i, j] = ln zeta[j, i].

Closed forms are provided for geometric gaps (resolvent identity) and
periodic gaps (finite double sum), plus the relaxed certificate that needs
only a hard upper bound tau_bar on the gaps, positive real eigenvalues of P,
and off-diagonal growth factors dominating the diagonal ones.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NonPositiveZeta,
    SingularResolvent,
)
from .markov import ModeChain, invariant_distribution, l_step
from .renewal import IntervalDistribution

PSD_TOL = 1e-8
ZETA_FLOOR = 1e-12
_EIG_IMAG_TOL = 1e-10


@dataclass(frozen=True)
class SwitchedSystem:
    """Subsystem matrices of the switched plant.

    A and B are tuples of per-mode matrices: A_i is n x n, B_i is n x m.
    """

    A: tuple[np.ndarray, ...]
    B: tuple[np.ndarray, ...]
    M: int
    n: int
    m: int


def new_switched_system(A: Sequence, B: Sequence) -> SwitchedSystem:
    """Validate shapes and finiteness of the subsystem matrices."""
    if len(A) == 0 or len(A) != len(B):
        raise DimensionMismatch(
            f"need equally many A and B matrices, got {len(A)} and {len(B)}"
        )
    A = tuple(np.array(a, dtype=np.float64) for a in A)
    B = tuple(np.array(b, dtype=np.float64) for b in B)
    n = A[0].shape[0]
    for a in A:
        if a.shape != (n, n):
            raise DimensionMismatch(f"A matrices must all be {n}x{n}, got {a.shape}")
    m = B[0].shape[1] if B[0].ndim == 2 else 1
    B = tuple(b.reshape(n, -1) for b in B)
    for b in B:
        if b.shape != (n, m):
            raise DimensionMismatch(f"B matrices must all be {n}x{m}, got {b.shape}")
    for mat in (*A, *B):
        if not np.all(np.isfinite(mat)):
            raise DimensionMismatch("system matrices must be finite")
        mat.setflags(write=False)
    return SwitchedSystem(A=A, B=B, M=len(A), n=n, m=m)


@dataclass(frozen=True)
class ZetaCertificate:
    """Certificate (zeta, R_tilde, L) witnessing the two conditions.

    zeta[i, j] bounds the V-growth of subsystem i+1 under gain j+1;
    R_tilde is symmetric positive definite and L holds the gain factors,
    so the feedback gains are K_i = L_i R_tilde^{-1}.
    """

    zeta: np.ndarray
    R_tilde: np.ndarray
    L: tuple[np.ndarray, ...]


def new_certificate(zeta, R_tilde, L) -> ZetaCertificate:
    zeta = validate_zeta(np.array(zeta, dtype=np.float64))
    R_tilde = np.array(R_tilde, dtype=np.float64)
    if R_tilde.ndim != 2 or R_tilde.shape[0] != R_tilde.shape[1]:
        raise DimensionMismatch(f"R_tilde must be square, got {R_tilde.shape}")
    if np.max(np.abs(R_tilde - R_tilde.T)) > 1e-9 * max(1.0, np.max(np.abs(R_tilde))):
        raise DimensionMismatch("R_tilde must be symmetric")
    L = tuple(np.atleast_2d(np.array(li, dtype=np.float64)) for li in L)
    if len(L) != zeta.shape[0]:
        raise DimensionMismatch(f"need {zeta.shape[0]} gain factors, got {len(L)}")
    for mat in (zeta, R_tilde, *L):
        mat.setflags(write=False)
    return ZetaCertificate(zeta=zeta, R_tilde=R_tilde, L=L)


def validate_zeta(zeta: np.ndarray) -> np.ndarray:
    """Growth factors must be finite and at least the positivity floor."""
    zeta = np.asarray(zeta, dtype=np.float64)
    if zeta.ndim != 2 or zeta.shape[0] != zeta.shape[1]:
        raise NonPositiveZeta(f"zeta must be a square matrix, got shape {zeta.shape}")
    if not np.all(np.isfinite(zeta)) or np.any(zeta < ZETA_FLOOR):
        raise NonPositiveZeta(
            f"zeta entries must be finite and >= {ZETA_FLOOR} to keep ln finite"
        )
    return zeta


@dataclass(frozen=True)
class CondpReport:
    """Per-pair residuals of the growth-bound inequality.

    residuals[i, j] is the minimum eigenvalue of the Schur block for the
    pair (i+1, j+1) after normalizing the block by its largest absolute
    entry; the check passes iff every residual is >= -tol.
    """

    residuals: np.ndarray
    passed: bool
    tol: float


def check_condp(
    sys: SwitchedSystem, cert: ZetaCertificate, tol: float = PSD_TOL
) -> CondpReport:
    """
    Check the matrix inequality for every (subsystem, gain) pair.

    For each pair the condition zeta_{i,j} R_tilde >= Ahat^T R_tilde^-1 Ahat
    with Ahat = A_i R_tilde + B_i L_j is evaluated through its Schur
    complement form [[zeta R_tilde, Ahat^T], [Ahat, R_tilde]] >= 0, which
    avoids inverting R_tilde.
    """
    zeta = validate_zeta(cert.zeta)
    M, n = sys.M, sys.n
    if zeta.shape != (M, M):
        raise DimensionMismatch(f"zeta must be {M}x{M}, got {zeta.shape}")
    if cert.R_tilde.shape != (n, n):
        raise DimensionMismatch(
            f"R_tilde must be {n}x{n}, got {cert.R_tilde.shape}"
        )
    for li in cert.L:
        if li.shape != (sys.m, n):
            raise DimensionMismatch(f"gain factors must be {sys.m}x{n}, got {li.shape}")
    residuals = np.empty((M, M))
    for i in range(M):
        for j in range(M):
            Ahat = sys.A[i] @ cert.R_tilde + sys.B[i] @ cert.L[j]
            block = np.block(
                [[zeta[i, j] * cert.R_tilde, Ahat.T], [Ahat, cert.R_tilde]]
            )
            scale = np.max(np.abs(block))
            if scale == 0.0:
                residuals[i, j] = 0.0
                continue
            residuals[i, j] = float(np.linalg.eigvalsh(block / scale).min())
    return CondpReport(residuals=residuals, passed=bool(np.all(residuals >= -tol)), tol=tol)


class GeneralLhs(NamedTuple):
    """Value of the averaged log-contraction sum plus a truncation bound."""

    value: float
    truncation_bound: float


def _log_coeff(zeta: np.ndarray) -> np.ndarray:
    """C[i, j] = ln zeta[j, i]: coefficient seen from mode i at offset j."""
    return np.log(validate_zeta(zeta)).T


def condzeta_lhs_general(
    chain: ModeChain, dist: IntervalDistribution, zeta: np.ndarray
) -> GeneralLhs:
    """
    The triple sum over the truncated support of the gap distribution.

    Uses the survival-function reordering so each power of P is formed once.
    The reported truncation bound covers both the dropped tail terms and the
    renormalization shift; it is zero for finite-support distributions.
    """
    C = _log_coeff(zeta)
    pi = invariant_distribution(chain)
    taus = dist.taus
    # survival weights w_l = P[tau >= l] for l = 1..tau_max
    tau_max = int(taus[-1])
    w = np.zeros(tau_max)
    for t, p in zip(taus, dist.probs):
        w[: int(t)] += p
    value = 0.0
    Pl = np.eye(chain.M)
    for l in range(1, tau_max + 1):
        value += w[l - 1] * float(pi @ ((Pl * C) @ np.ones(chain.M)))
        if l < tau_max:
            Pl = Pl @ chain.P
    tail = dist.tail_mass
    if tail > 0.0:
        max_log = float(np.max(np.abs(np.log(zeta))))
        bound = max_log * tail * (tau_max + 2.0 * dist.mean) / max(1e-300, 1.0 - tail)
    else:
        bound = 0.0
    return GeneralLhs(value=float(value), truncation_bound=bound)


def condzeta_lhs_geometric(chain: ModeChain, theta: float, zeta: np.ndarray) -> float:
    """
    Exact closed form for geometric gaps via the resolvent Z = (I-(1-theta)P)^-1.

    LHS = sum_{i,j} pi_i z_{i,j} ln zeta_{j,i}; no truncation involved.
    theta = 1 gives Z = I and reduces to the perfect-information average
    sum_i pi_i ln zeta_{i,i}.
    """
    if not (0.0 < theta <= 1.0):
        raise ValueError(f"theta must lie in (0, 1], got {theta}")
    C = _log_coeff(zeta)
    pi = invariant_distribution(chain)
    try:
        Z = np.linalg.inv(np.eye(chain.M) - (1.0 - theta) * chain.P)
    except np.linalg.LinAlgError as err:  # cannot happen for theta in (0, 1]
        raise SingularResolvent(f"resolvent inversion failed: {err}") from err
    return float(pi @ ((Z * C) @ np.ones(chain.M)))


def condzeta_lhs_periodic(chain: ModeChain, T: int, zeta: np.ndarray) -> float:
    """Finite double sum for deterministic gaps of length T."""
    if T < 1:
        raise ValueError(f"period must be >= 1, got {T}")
    C = _log_coeff(zeta)
    pi = invariant_distribution(chain)
    value = 0.0
    Pl = np.eye(chain.M)
    for l in range(1, T + 1):
        value += float(pi @ ((Pl * C) @ np.ones(chain.M)))
        if l < T:
            Pl = Pl @ chain.P
    return value


@dataclass(frozen=True)
class Theorem2Report:
    """Diagnostics for the relaxed certificate.

    Conditions: (a) all eigenvalues of P real and positive, (b) every
    off-diagonal growth factor dominates its column diagonal,
    zeta_{j,i} >= zeta_{i,i}, (c) the tau_bar-truncated double sum is
    negative. first_failure names the first failing condition or is None.
    """

    passed: bool
    eigenvalues: np.ndarray
    eigenvalues_ok: bool
    zeta_ok: bool
    tau_bar_sum: float
    sum_ok: bool
    first_failure: str | None


def check_theorem2(chain: ModeChain, tau_bar: int, zeta: np.ndarray) -> Theorem2Report:
    """Evaluate the relaxed certificate for gaps bounded by tau_bar."""
    if tau_bar < 1:
        raise ValueError(f"tau_bar must be >= 1, got {tau_bar}")
    zeta = validate_zeta(zeta)
    eigs = np.linalg.eigvals(chain.P)
    real_ok = bool(
        np.all(np.abs(eigs.imag) <= _EIG_IMAG_TOL * np.maximum(1.0, np.abs(eigs)))
    )
    eig_ok = real_ok and bool(np.all(eigs.real > 0.0))
    # zeta_{j,i} >= zeta_{i,i}: every entry of column i must dominate the diagonal
    diag = np.diag(zeta)
    zeta_ok = bool(np.all(zeta >= diag[np.newaxis, :] - 0.0))
    s = condzeta_lhs_periodic(chain, tau_bar, zeta)
    sum_ok = s < 0.0
    first = None
    if not eig_ok:
        first = "eigenvalues"
    elif not zeta_ok:
        first = "zeta_domination"
    elif not sum_ok:
        first = "tau_bar_sum"
    return Theorem2Report(
        passed=eig_ok and zeta_ok and sum_ok,
        eigenvalues=eigs,
        eigenvalues_ok=eig_ok,
        zeta_ok=zeta_ok,
        tau_bar_sum=float(s),
        sum_ok=sum_ok,
        first_failure=first,
    )


@dataclass(frozen=True)
class MonotonicityReport:
    """First violation of the l-step probability monotonicity, if any."""

    passed: bool
    first_violation: tuple[int, int, int] | None  # (l, i, j) 1-based modes


def monotonicity_check(
    chain: ModeChain, l_max: int, tol: float = 1e-12
) -> MonotonicityReport:
    """
    Verify monotone convergence of the l-step transition probabilities.

    Checks p_{i,i}^(l+1) <= p_{i,i}^(l) and p_{i,j}^(l+1) >= p_{i,j}^(l)
    for i != j, for all l < l_max. Holds whenever P has positive real
    eigenvalues; informational otherwise.
    """
    Pl = np.eye(chain.M)
    for l in range(l_max):
        Pn = Pl @ chain.P
        delta = Pn - Pl
        for i in range(chain.M):
            for j in range(chain.M):
                if i == j and delta[i, i] > tol:
                    return MonotonicityReport(False, (l, i + 1, j + 1))
                if i != j and delta[i, j] < -tol:
                    return MonotonicityReport(False, (l, i + 1, j + 1))
        Pl = Pn
    return MonotonicityReport(True, None)


def ergodic_rate(
    chain: ModeChain, dist: IntervalDistribution, zeta: np.ndarray
) -> float:
    """
    Theoretical almost-sure exponential rate of the growth-factor product.

    Equals the averaged log-contraction sum divided by the mean gap; the
    simulated per-step exponent converges to this by the renewal reward
    theorem.
    """
    lhs = condzeta_lhs_general(chain, dist, zeta)
    return lhs.value / dist.mean
