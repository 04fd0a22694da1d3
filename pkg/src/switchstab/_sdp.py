"""
Phase-I log-determinant barrier solver for affine LMI feasibility.

Solves    maximize  y[obj]   subject to   B_k(y) >= 0 for all k,  a.y = b
where each block is affine in the parameter vector, B_k(y) = C_k + sum_p
y_p D_{k,p}. Feasibility problems are posed by letting y[obj] = s be a
uniform margin subtracted from every block, so s > 0 certifies a strictly
feasible point and a negative upper bound on s certifies infeasibility.

The central path minimizes t * (-s) - sum_k log det B_k(y) for increasing t;
each centering runs damped Newton steps on the KKT system with the single
linear equality. The duality gap of the barrier subproblem bounds the
distance to the optimum by (total block dimension) / t, which provides the
infeasibility certificate: if s + gap < feas_stop, no point with margin
feas_stop exists.

Problem sizes here are tiny (blocks at most ~20x20, a few dozen parameters),
so dense linear algebra throughout is the right tradeoff.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import SolverStall

DEFAULT_MAX_ITERS = 200


@dataclass(frozen=True)
class PhaseIResult:
    """Outcome of a phase-I solve.

    status is "feasible" (margin >= feas_stop reached), "infeasible"
    (certified: optimal margin below feas_stop), or "optimal" (duality gap
    closed in maximize mode). y is the final parameter vector, margin the
    achieved y[obj], upper_bound the dual bound on the optimal margin.
    """

    status: str
    y: np.ndarray
    margin: float
    upper_bound: float
    newton_steps: int


def _block_values(blocks, y: np.ndarray) -> list[np.ndarray]:
    return [C + np.einsum("p,pij->ij", y, D) for C, D in blocks]


def _all_pd(mats) -> bool:
    for Mv in mats:
        try:
            np.linalg.cholesky(Mv)
        except np.linalg.LinAlgError:
            return False
    return True


def solve_phase1(
    blocks,
    eq_vec: np.ndarray,
    obj_index: int,
    y0: np.ndarray,
    feas_stop: float | None = None,
    gap_tol: float = 1e-9,
    t0: float = 1.0,
    t_growth: float = 20.0,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> PhaseIResult:
    """
    Run the barrier phase-I on pre-assembled blocks.

    Parameters
    ----------
    blocks : list of (C, D)
        C is the constant matrix, D the (P, d, d) stack of basis matrices
        so that the block value is C + sum_p y_p D[p].
    eq_vec : np.ndarray
        Coefficients of the single equality constraint eq_vec . y = const;
        y0 must satisfy it (Newton steps preserve it).
    obj_index : int
        Index of the margin variable s in y (its basis must be -I in every
        block for the infeasibility bound to be meaningful).
    y0 : np.ndarray
        Strictly feasible start for the barrier, i.e. all blocks PD at y0.
    feas_stop : float or None
        Early-exit margin: report "feasible" once s >= feas_stop, report
        "infeasible" once the dual bound falls below it. None means run to
        the duality gap and report "optimal" (maximize mode).
    gap_tol : float
        Target duality gap in maximize mode.
    max_iters : int
        Total Newton step cap; SolverStall raised if no verdict in time.
    """
    P = len(y0)
    total_dim = sum(C.shape[0] for C, _ in blocks)
    y = np.array(y0, dtype=np.float64)
    if not _all_pd(_block_values(blocks, y)):
        raise ValueError("y0 is not strictly feasible for the barrier")
    t = t0
    steps = 0
    while steps < max_iters:
        # centering at the current t
        for _ in range(60):
            if steps >= max_iters:
                break
            steps += 1
            mats = _block_values(blocks, y)
            grad = np.zeros(P)
            hess = np.zeros((P, P))
            for (C, D), Mv in zip(blocks, mats):
                Minv = np.linalg.inv(Mv)
                # SD[p] = M^-1 D_p; grad_p = -tr(SD[p]), hess_pq = tr(SD[p] SD[q])
                SD = np.einsum("ij,pjk->pik", Minv, D)
                grad -= np.trace(SD, axis1=1, axis2=2)
                hess += np.einsum("pij,qji->pq", SD, SD)
            grad[obj_index] -= t
            kkt = np.zeros((P + 1, P + 1))
            kkt[:P, :P] = hess
            kkt[:P, P] = eq_vec
            kkt[P, :P] = eq_vec
            rhs = np.concatenate([-grad, [0.0]])
            try:
                sol = np.linalg.solve(kkt, rhs)
            except np.linalg.LinAlgError:
                sol, *_ = np.linalg.lstsq(kkt, rhs, rcond=None)
            dy = sol[:P]
            decrement = float(dy @ hess @ dy)
            step = 1.0
            for _ in range(50):
                if _all_pd(_block_values(blocks, y + step * dy)):
                    break
                step *= 0.5
            else:
                step = 0.0
            y = y + step * dy
            if decrement / 2.0 < 1e-10 or step == 0.0:
                break
        s = float(y[obj_index])
        bound = s + total_dim / t
        if feas_stop is not None:
            if s >= feas_stop:
                return PhaseIResult("feasible", y, s, bound, steps)
            if bound < feas_stop:
                return PhaseIResult("infeasible", y, s, bound, steps)
        elif total_dim / t < gap_tol:
            return PhaseIResult("optimal", y, s, bound, steps)
        t *= t_growth
    raise SolverStall(
        f"no verdict within {max_iters} Newton steps "
        f"(margin {float(y[obj_index]):.3e}, bound {float(y[obj_index]) + total_dim / t:.3e})"
    )


def sym_basis(n: int) -> list[np.ndarray]:
    """Basis of symmetric n x n matrices: unit diagonals, then unit (i, j)
    pairs with both symmetric entries set to 1."""
    out = []
    for i in range(n):
        E = np.zeros((n, n))
        E[i, i] = 1.0
        out.append(E)
    for i in range(n):
        for j in range(i + 1, n):
            E = np.zeros((n, n))
            E[i, j] = E[j, i] = 1.0
            out.append(E)
    return out
