"""
Feedback-gain synthesis via LMI feasibility plus a growth-factor grid search.

At fixed growth factors zeta the certificate conditions are linear matrix
inequalities in (R_tilde, L_1..L_M): every pair (i, j) contributes the block

    [[zeta_{i,j} R_tilde, (A_i R_tilde + B_i L_j)^T],
     [A_i R_tilde + B_i L_j,  R_tilde]]  >=  0,

solved here with the bespoke phase-I barrier method from ._sdp (problem
sizes are tiny, so a dependency-free interior point beats an external SDP
stack). The grid search places zeta candidates on the averaged
log-contraction boundary: diagonal entries are gridded in (0, 1) since a
stabilizable mode under its own gain should contract, and the common
off-diagonal value is then solved in closed form (the boundary equation is
linear in ln zeta) to sit just inside the feasible side. The first feasible
candidate in order of increasing max growth factor wins, which makes the
output deterministic.

For fixed gains K the same machinery runs in reduced form: with L_j = K_j
R_tilde the pair condition becomes F_{i,j}^T R F_{i,j} <= zeta_{i,j} R in the
single variable R = R_tilde^-1, and the certification search alternates a
max-margin solve for R with a growth-factor update along the minimal values
zeta*_{i,j}(R) = max generalized eigenvalue of (F^T R F, R).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._sdp import DEFAULT_MAX_ITERS, solve_phase1, sym_basis
from .errors import (
    DimensionMismatch,
    NoFeasiblePoint,
    NonPositiveZeta,
    SingularRtilde,
    SolverStall,
)
from .markov import ModeChain, invariant_distribution, l_step
from .renewal import IntervalDistribution
from .stability import (
    SwitchedSystem,
    ZetaCertificate,
    condzeta_lhs_general,
    condzeta_lhs_geometric,
    new_certificate,
    validate_zeta,
)

ZETA_FLOOR = 1e-12


@dataclass(frozen=True)
class SynthesisConfig:
    """Knobs for the grid search and the feasibility solver.

    zeta_grid: candidate diagonal growth factors; None selects 8 log-spaced
    points in (0, 1). boundary_margin: how far inside the zero surface of
    the averaged log-contraction sum the off-diagonal entries are placed
    (the boundary equation is solved for LHS = -boundary_margin).
    solver_tol: feasibility margin demanded from the LMI solver.
    max_iters: Newton step cap per solve. zeta_margin: safety factor applied
    to the minimal growth factors during fixed-gain certification; also sets
    how conservatively that search reports feasibility. max_rounds: cap on
    the fixed-gain alternation. theorem2/tau_bar: run the search in relaxed
    mode, enforcing off-diagonal domination and the tau_bar-truncated sum.
    """

    zeta_grid: Optional[Sequence[float]] = None
    boundary_margin: float = 0.01
    solver_tol: float = 1e-7
    max_iters: int = DEFAULT_MAX_ITERS
    zeta_margin: float = 1.03
    max_rounds: int = 20
    theorem2: bool = False
    tau_bar: Optional[int] = None

    def __post_init__(self):
        if self.boundary_margin <= 0 or self.solver_tol <= 0:
            raise ValueError("margins and tolerances must be positive")
        if self.zeta_margin <= 1.0:
            raise ValueError("zeta_margin must exceed 1")
        if self.max_iters < 1 or self.max_rounds < 1:
            raise ValueError("iteration caps must be positive")

    def diag_candidates(self) -> np.ndarray:
        if self.zeta_grid is not None:
            g = np.array(sorted(self.zeta_grid), dtype=np.float64)
            if np.any(g <= 0.0):
                raise ValueError("zeta_grid values must be positive")
            return g
        return np.geomspace(0.1, 0.9, 8)


@dataclass(frozen=True)
class GainProvenance:
    """The certificate pieces a gain set was extracted from."""

    R_tilde: np.ndarray
    L: tuple[np.ndarray, ...]
    zeta: Optional[np.ndarray] = None


@dataclass(frozen=True)
class GainSet:
    """Feedback gains K_i together with their provenance."""

    K: tuple[np.ndarray, ...]
    provenance: GainProvenance

    def certificate(self) -> ZetaCertificate:
        """Full certificate, available when growth factors were recorded."""
        if self.provenance.zeta is None:
            raise ValueError("gain set carries no growth factors")
        return new_certificate(
            self.provenance.zeta, self.provenance.R_tilde, self.provenance.L
        )


def gains_from(R_tilde, L, zeta=None) -> GainSet:
    """
    Extract gains K_i = L_i R_tilde^{-1} from certificate factors.

    Raises SingularRtilde when R_tilde is numerically singular. The
    extraction is invariant under joint scaling of (R_tilde, L).
    """
    R_tilde = np.array(R_tilde, dtype=np.float64)
    L = [np.atleast_2d(np.array(li, dtype=np.float64)) for li in L]
    eigs = np.linalg.eigvalsh(R_tilde)
    if np.min(np.abs(eigs)) <= 1e-12 * max(1.0, float(np.max(np.abs(eigs)))):
        raise SingularRtilde("R_tilde is numerically singular")
    K = tuple(np.linalg.solve(R_tilde, li.T).T for li in L)  # K = L R^-1, R symmetric
    for k in K:
        k.setflags(write=False)
    zeta_arr = None if zeta is None else validate_zeta(np.array(zeta, dtype=np.float64))
    prov = GainProvenance(R_tilde=R_tilde, L=tuple(L), zeta=zeta_arr)
    return GainSet(K=K, provenance=prov)


# --------------------------------------------------------------- LMI solving


def _synthesis_blocks(sys: SwitchedSystem, zeta: np.ndarray):
    """Affine blocks of the full synthesis LMI in (R_tilde, L_1..L_M, s).

    Parameter order: sym_basis coords of R_tilde, then the entries of each
    L_j row-major, then the margin s with basis -I in every block.
    """
    n, m, M = sys.n, sys.m, sys.M
    SB = sym_basis(n)
    nR = len(SB)
    nL = m * n
    P = nR + M * nL + 1
    blocks = []
    for i in range(M):
        for j in range(M):
            D = np.zeros((P, 2 * n, 2 * n))
            for p, Rb in enumerate(SB):
                Ah = sys.A[i] @ Rb
                D[p, :n, :n] = zeta[i, j] * Rb
                D[p, :n, n:] = Ah.T
                D[p, n:, :n] = Ah
                D[p, n:, n:] = Rb
            base = nR + j * nL
            for p in range(nL):
                Lb = np.zeros((m, n))
                Lb[p // n, p % n] = 1.0
                Ah = sys.B[i] @ Lb
                D[base + p, :n, n:] = Ah.T
                D[base + p, n:, :n] = Ah
            D[P - 1] = -np.eye(2 * n)
            blocks.append((np.zeros((2 * n, 2 * n)), D))
    eq = np.zeros(P)
    eq[:n] = 1.0  # trace(R_tilde) = n
    y0 = np.zeros(P)
    y0[:n] = 1.0  # R_tilde = I
    mats0 = [C + np.einsum("p,pij->ij", y0, D) for C, D in blocks]
    y0[P - 1] = min(float(np.linalg.eigvalsh(Mv).min()) for Mv in mats0) - 1.0
    return blocks, eq, P - 1, y0


def _unpack_synthesis(y: np.ndarray, sys: SwitchedSystem):
    n, m, M = sys.n, sys.m, sys.M
    SB = sym_basis(n)
    R_tilde = np.einsum("p,pij->ij", y[: len(SB)], np.stack(SB))
    L = []
    base = len(SB)
    for j in range(M):
        L.append(y[base + j * m * n : base + (j + 1) * m * n].reshape(m, n).copy())
    return R_tilde, L


def lmi_feasible(
    sys: SwitchedSystem, zeta, cfg: SynthesisConfig | None = None
) -> Optional[tuple[np.ndarray, list[np.ndarray]]]:
    """
    Solve the synthesis LMI at fixed growth factors.

    Returns (R_tilde, [L_1..L_M]) with trace(R_tilde) = n when a point with
    margin >= cfg.solver_tol exists, None when the solver certifies that no
    such point exists, and raises SolverStall when the Newton cap runs out
    without either verdict.
    """
    cfg = cfg or SynthesisConfig()
    zeta = validate_zeta(np.array(zeta, dtype=np.float64))
    if zeta.shape != (sys.M, sys.M):
        raise DimensionMismatch(f"zeta must be {sys.M}x{sys.M}, got {zeta.shape}")
    blocks, eq, s_idx, y0 = _synthesis_blocks(sys, zeta)
    res = solve_phase1(
        blocks, eq, s_idx, y0, feas_stop=cfg.solver_tol, max_iters=cfg.max_iters
    )
    if res.status != "feasible":
        return None
    R_tilde, L = _unpack_synthesis(res.y, sys)
    return R_tilde, L


# ---------------------------------------------------------------- grid search


def _boundary_coefficients(
    chain: ModeChain, dist: IntervalDistribution | None, cfg: SynthesisConfig
) -> np.ndarray:
    """Coefficients c[i, j] of ln zeta_{j,i} in the averaged sum.

    In relaxed mode the tau_bar-truncated sum is the search objective, so
    the survival weights are all 1 up to tau_bar.
    """
    pi = invariant_distribution(chain)
    if cfg.theorem2:
        if cfg.tau_bar is None:
            raise ValueError("theorem2 mode needs tau_bar")
        weights = [(l, 1.0) for l in range(1, cfg.tau_bar + 1)]
    else:
        if dist is None:
            raise ValueError("need a gap distribution outside theorem2 mode")
        tau_max = int(dist.taus[-1])
        w = np.zeros(tau_max)
        for t, p in zip(dist.taus, dist.probs):
            w[: int(t)] += p
        weights = [(l, float(w[l - 1])) for l in range(1, tau_max + 1)]
    c = np.zeros((chain.M, chain.M))
    Pl = np.eye(chain.M)
    for idx, (l, wl) in enumerate(weights):
        c += wl * (pi[:, np.newaxis] * Pl)
        if idx + 1 < len(weights):
            Pl = Pl @ chain.P
    return c


def _zeta_candidates(chain: ModeChain, dist, cfg: SynthesisConfig) -> list[np.ndarray]:
    """Growth-factor candidates on the contraction boundary, sorted by their
    largest entry (most uniformly contracting first)."""
    M = chain.M
    c = _boundary_coefficients(chain, dist, cfg)
    # c[i, j] multiplies ln zeta[j, i]: diagonal coefficient sum and
    # off-diagonal coefficient sum split the boundary equation
    c_diag = float(np.trace(c))
    c_off = float(c.sum() - c_diag)
    candidates = []
    for d in cfg.diag_candidates():
        if d >= 1.0 or d < ZETA_FLOOR:
            continue
        zeta = np.full((M, M), d)
        if M > 1 and c_off > 0.0:
            # solve c_diag ln d + c_off ln z = -margin for the common
            # off-diagonal value z
            z = float(np.exp((-cfg.boundary_margin - c_diag * np.log(d)) / c_off))
            if cfg.theorem2:
                z = max(z, d)  # off-diagonal entries must dominate the diagonal
            if z < ZETA_FLOOR:
                continue
            zeta[~np.eye(M, dtype=bool)] = z
        lhs = float((c * np.log(zeta).T).sum())
        if lhs >= 0.0:
            continue
        candidates.append(zeta)
    candidates.sort(key=lambda z: float(z.max()))
    return candidates


def synthesize(
    sys: SwitchedSystem,
    chain: ModeChain,
    dist: IntervalDistribution | None,
    cfg: SynthesisConfig | None = None,
) -> GainSet:
    """
    Search growth-factor candidates near the contraction boundary and return
    gains from the first LMI-feasible one.

    Candidates are tried in order of increasing max growth factor;
    candidates on which the solver stalls are skipped. Raises
    NoFeasiblePoint when the grid is exhausted.
    """
    cfg = cfg or SynthesisConfig()
    if sys.M != chain.M:
        raise DimensionMismatch(
            f"system has {sys.M} modes but chain has {chain.M}"
        )
    for zeta in _zeta_candidates(chain, dist, cfg):
        try:
            found = lmi_feasible(sys, zeta, cfg)
        except SolverStall:
            continue
        if found is None:
            continue
        R_tilde, L = found
        return gains_from(R_tilde, L, zeta=zeta)
    raise NoFeasiblePoint("no growth-factor candidate was LMI feasible")


# ------------------------------------------------------- fixed-gain analysis


@dataclass(frozen=True)
class FixedGainReport:
    """Outcome of certifying fixed gains for a given gap distribution."""

    passed: bool
    lhs: float
    zeta: np.ndarray
    R: np.ndarray
    rounds: int


def _reduced_blocks(F: np.ndarray, zeta: np.ndarray):
    """Blocks of the fixed-gain LMI in (R, s): zeta_{i,j} R - F^T R F - s I
    for every pair, plus R - s I to keep R itself positive definite."""
    M, n = zeta.shape[0], F.shape[-1]
    SB = sym_basis(n)
    P = len(SB) + 1
    blocks = []
    for i in range(M):
        for j in range(M):
            D = np.zeros((P, n, n))
            for p, Rb in enumerate(SB):
                D[p] = zeta[i, j] * Rb - F[i, j].T @ Rb @ F[i, j]
            D[P - 1] = -np.eye(n)
            blocks.append((np.zeros((n, n)), D))
    D = np.zeros((P, n, n))
    for p, Rb in enumerate(SB):
        D[p] = Rb
    D[P - 1] = -np.eye(n)
    blocks.append((np.zeros((n, n)), D))
    eq = np.zeros(P)
    eq[:n] = 1.0  # trace(R) = n
    y0 = np.zeros(P)
    y0[:n] = 1.0
    mats0 = [C + np.einsum("p,pij->ij", y0, D) for C, D in blocks]
    y0[P - 1] = min(float(np.linalg.eigvalsh(Mv).min()) for Mv in mats0) - 1.0
    return blocks, eq, P - 1, y0


def _unpack_reduced(y: np.ndarray, n: int) -> np.ndarray:
    SB = sym_basis(n)
    return np.einsum("p,pij->ij", y[: len(SB)], np.stack(SB))


def _zeta_star(F: np.ndarray, R: np.ndarray) -> np.ndarray:
    """Minimal growth factors for fixed gains at a given R: the largest
    generalized eigenvalue of (F^T R F, R) per pair, computed through the
    Cholesky factor of R so plain symmetric eigensolvers apply."""
    M, n = F.shape[0], F.shape[-1]
    Lc = np.linalg.cholesky(R)
    Linv = np.linalg.inv(Lc)
    out = np.empty((M, M))
    for i in range(M):
        for j in range(M):
            W = F[i, j].T @ R @ F[i, j]
            S = Linv @ W @ Linv.T
            out[i, j] = max(float(np.linalg.eigvalsh(S).max()), ZETA_FLOOR)
    return out


def _condzeta_for_dist(
    chain: ModeChain, dist: IntervalDistribution, zeta: np.ndarray
) -> float:
    """Dispatch to the exact closed form when the distribution kind has one."""
    if dist.kind == "geometric":
        return condzeta_lhs_geometric(chain, dist.params["theta"], zeta)
    return condzeta_lhs_general(chain, dist, zeta).value


def fixed_gain_feasibility(
    sys: SwitchedSystem,
    chain: ModeChain,
    gains: GainSet,
    dist: IntervalDistribution,
    cfg: SynthesisConfig | None = None,
) -> FixedGainReport:
    """
    Decide whether given gains carry a certificate for the given gaps.

    Coordinate descent with at most cfg.max_rounds rounds: from the current
    R the minimal growth factors zeta*(R) are inflated by the safety factor
    cfg.zeta_margin and tested against the averaged contraction condition;
    on failure R is re-solved to maximize the uniform LMI margin at the
    current growth factors and the loop repeats. The search reports failure
    when it reaches a fixed point or runs out of rounds; like the
    certificate it looks for, it is sufficient only.
    """
    cfg = cfg or SynthesisConfig()
    if sys.M != chain.M or len(gains.K) != sys.M:
        raise DimensionMismatch("mode counts of system, chain, and gains differ")
    n = sys.n
    F = np.empty((sys.M, sys.M, n, n))
    for i in range(sys.M):
        for j in range(sys.M):
            F[i, j] = sys.A[i] + sys.B[i] @ gains.K[j]
    R = np.eye(n)
    lhs = np.inf
    rounds = 0
    for rounds in range(1, cfg.max_rounds + 1):
        zeta = _zeta_star(F, R) * cfg.zeta_margin
        lhs = _condzeta_for_dist(chain, dist, zeta)
        if lhs < 0.0:
            return FixedGainReport(
                passed=True, lhs=lhs, zeta=zeta, R=R, rounds=rounds
            )
        blocks, eq, s_idx, y0 = _reduced_blocks(F, zeta)
        try:
            res = solve_phase1(
                blocks, eq, s_idx, y0, feas_stop=None, gap_tol=1e-9,
                max_iters=max(cfg.max_iters, 400),
            )
        except SolverStall:
            break
        R_new = _unpack_reduced(res.y, n)
        if float(np.linalg.eigvalsh(R_new).min()) <= 0.0:
            break
        if np.allclose(R_new, R, rtol=0.0, atol=1e-12):
            break
        R = R_new
    return FixedGainReport(passed=False, lhs=lhs, zeta=_zeta_star(F, R), R=R, rounds=rounds)
