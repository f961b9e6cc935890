"""Dense primal-dual interior-point method for small complex SDPs.

Solves

    primal  min <C, X>   s.t. <A_r, X> + s_r = b_r  (r inequality),
                              <A_r, X>       = b_r  (r equality),  X >= 0, s >= 0
    dual    max b^T y    s.t. C - sum_r y_r A_r = S >= 0,  y_r <= 0 (r inequality)

with ``<A, X> = Re Tr(A X)`` over Hermitian matrices. Search directions use
the HKM scaling with Mehrotra's predictor-corrector. Iterates may be
infeasible; callers must not trust ``y`` without an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass
class IpmResult:
    X: np.ndarray
    s: np.ndarray
    y: np.ndarray
    S: np.ndarray
    primal_objective: float
    dual_objective: float
    primal_residual: float
    dual_residual: float
    iterations: int
    converged: bool


def _herm(m: np.ndarray) -> np.ndarray:
    return (m + m.conj().T) / 2


def _max_step(x: np.ndarray, dx: np.ndarray) -> float:
    """Largest ``a <= 1`` keeping ``x + a*dx`` positive semidefinite."""
    try:
        l = np.linalg.cholesky(x)
    except np.linalg.LinAlgError:
        return 0.0
    li = np.linalg.inv(l)
    lo = np.linalg.eigvalsh(_herm(li @ dx @ li.conj().T)).min()
    return 1.0 if lo >= -1.0 else -1.0 / lo


def _max_step_lp(x: np.ndarray, dx: np.ndarray) -> float:
    neg = dx < 0
    if not np.any(neg):
        return 1.0
    return min(1.0, float(np.min(-x[neg] / dx[neg])))


def solve(
    C: np.ndarray,
    A: np.ndarray,
    b: np.ndarray,
    ineq: np.ndarray,
    tol: float = 1e-10,
    max_iter: int = 150,
) -> IpmResult:
    """Run the interior-point iteration.

    Args:
        C: ``(D, D)`` Hermitian objective.
        A: ``(m, D, D)`` stack of Hermitian constraint matrices.
        b: right-hand sides, length ``m``.
        ineq: boolean mask marking inequality rows.
        tol: target for relative gap and scaled residuals.
        max_iter: iteration cap.
    """
    m, dim, _ = A.shape
    b = np.asarray(b, dtype=float)
    ineq = np.asarray(ineq, dtype=bool)
    G = np.eye(m)[:, ineq]  # m x m_i selection of slack columns
    mi = int(ineq.sum())

    def op(x: np.ndarray) -> np.ndarray:
        return np.real(np.einsum("rij,ji->r", A, x))

    def adj(y: np.ndarray) -> np.ndarray:
        return np.einsum("r,rij->ij", y, A)

    scale = max(1.0, np.abs(b).max(initial=0.0), np.abs(C).max())
    X = np.eye(dim, dtype=complex) * scale
    S = np.eye(dim, dtype=complex) * scale
    s = np.ones(mi) * scale
    sig = np.ones(mi) * scale  # dual slack of the LP block, sig = -y[ineq]
    y = np.zeros(m)
    nb = 1.0 + np.linalg.norm(b)
    nc = 1.0 + np.linalg.norm(C)
    converged = False
    it = 0
    for it in range(1, max_iter + 1):
        rp = b - op(X) - G @ s
        Rd = _herm(C - adj(y) - S)
        rl = -G.T @ y - sig
        pobj = float(np.real(np.trace(C @ X)))
        dobj = float(b @ y)
        mu = (float(np.real(np.vdot(X, S))) + float(s @ sig)) / (dim + mi)
        pres = np.linalg.norm(rp) / nb
        dres = (np.linalg.norm(Rd) + np.linalg.norm(rl)) / nc
        gap = abs(pobj - dobj) / (1.0 + abs(pobj) + abs(dobj))
        if pres < tol and dres < tol and gap < tol:
            converged = True
            break

        Sinv = np.linalg.inv(S)
        Sinv = _herm(Sinv)
        XA = X @ A  # (m, D, D)
        # M_rs = Re Tr(A_r X A_s S^-1)
        M = np.real(np.einsum("rij,sjk,ki->rs", A, XA, Sinv))
        M = (M + M.T) / 2 + G @ np.diag(s / sig) @ G.T
        try:
            chol = np.linalg.cholesky(M)
        except np.linalg.LinAlgError:
            M += np.eye(m) * 1e-14 * max(1.0, np.abs(M).max())
            chol = np.linalg.cholesky(M)

        def direction(target_mu: float, corr_X: np.ndarray | None, corr_s: np.ndarray | None):
            K = target_mu * Sinv - X
            k_lp = target_mu / sig - s
            if corr_X is not None:
                K = K - corr_X @ Sinv
                k_lp = k_lp - corr_s / sig
            rhs = rp - op(K) + op(X @ Rd @ Sinv) - G @ k_lp + G @ ((s / sig) * rl)
            dy = np.linalg.solve(chol.conj().T, np.linalg.solve(chol, rhs))
            dS = _herm(Rd - adj(dy))
            dX = _herm(K - X @ dS @ Sinv)
            dsig = rl - G.T @ dy
            ds = k_lp - (s / sig) * dsig
            return dX, ds, dy, dS, dsig

        # predictor
        dX, ds, dy, dS, dsig = direction(0.0, None, None)
        ap = min(_max_step(X, dX), _max_step_lp(s, ds))
        ad = min(_max_step(S, dS), _max_step_lp(sig, dsig))
        mu_aff = (
            float(np.real(np.vdot(X + ap * dX, S + ad * dS)))
            + float((s + ap * ds) @ (sig + ad * dsig))
        ) / (dim + mi)
        sigma = min(1.0, (mu_aff / mu) ** 3) if mu > 0 else 0.0
        # corrector
        dX, ds, dy, dS, dsig = direction(sigma * mu, dX @ dS, ds * dsig)
        ap = min(1.0, 0.98 * min(_max_step(X, dX), _max_step_lp(s, ds)))
        ad = min(1.0, 0.98 * min(_max_step(S, dS), _max_step_lp(sig, dsig)))
        X = _herm(X + ap * dX)
        s = s + ap * ds
        y = y + ad * dy
        S = _herm(S + ad * dS)
        sig = sig + ad * dsig

    rp = b - op(X) - G @ s
    Rd = C - adj(y) - S
    return IpmResult(
        X, s, y, S,
        float(np.real(np.trace(C @ X))), float(b @ y),
        float(np.linalg.norm(rp) / nb), float(np.linalg.norm(Rd) / nc), it, converged,
    )
