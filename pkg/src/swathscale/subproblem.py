"""Closed-form solution of the quadratic-cone relaxation and its dual.

The relaxation replaces the barrier cone by ``K_e(alpha)``.  Its
first-order system is linear in ``(x, y, lambda)`` up to one quadratic
boundary equation, so the optimum is found by intersecting the system's
one-dimensional solution line with the boundary quadric and filtering the
two roots.  The dual pair is recovered in closed form.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .core import BarrierOracle
from .errors import DimensionMismatch, DomainError, NumericalFailure

_RANK_TOL = 1e-10
_LAMBDA_TOL = 1e-12


class SubStatus(enum.Enum):
    SOLVED = "solved"
    NOT_IN_SWATH = "not_in_swath"
    NUMERICAL_FAILURE = "numerical_failure"


@dataclass
class SubproblemSolution:
    x_e: np.ndarray | None
    y_e: np.ndarray | None
    s_e: np.ndarray | None
    lambda_mult: float | None
    gap: float | None
    status: SubStatus


def assemble_first_order_system(
    oracle: BarrierOracle,
    A: np.ndarray,
    c: np.ndarray,
    e: np.ndarray,
    alpha: float,
) -> tuple[np.ndarray, np.ndarray]:
    """Linear part of the stationarity system over unknowns (x, y, lambda).

    Rows encode ``A x = A e`` and
    ``0 = lambda c + A^T y + <g(e), x> g(e) - alpha^2 H(e) x``.
    """
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha={alpha} outside (0, 1)")
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, d = A.shape
    if m < 1:
        raise DimensionMismatch("at least one constraint row is required (b != 0)")
    if d != oracle.dim or c.shape != (d,) or e.shape != (d,):
        raise DimensionMismatch("A, c, e inconsistent with the oracle dimension")
    g = oracle.gradient(e)
    H = oracle.hessian_matrix(e)
    G = np.outer(g, g) - alpha**2 * H
    M = np.zeros((m + d, d + m + 1))
    M[:m, :d] = A
    M[m:, :d] = G
    M[m:, d : d + m] = A.T
    M[m:, d + m] = c
    rhs = np.concatenate([A @ e, np.zeros(d)])
    return M, rhs


def _stable_quadratic_roots(qa: float, qb: float, qc: float) -> list[float]:
    """Real roots of qa s^2 + qb s + qc with the sign-matched formula."""
    disc = qb * qb - 4.0 * qa * qc
    if disc < 0.0:
        return []
    root = math.sqrt(disc)
    q = -0.5 * (qb + math.copysign(root, qb) if qb != 0.0 else -root)
    roots = []
    if qa != 0.0:
        roots.append(q / qa)
    if q != 0.0:
        roots.append(qc / q)
    if len(roots) == 2 and roots[0] == roots[1]:
        roots = roots[:1]
    return roots


def solve_qcp(
    oracle: BarrierOracle,
    A: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    e: np.ndarray,
    alpha: float,
) -> SubproblemSolution:
    """Optimal primal/dual pair of the quadratic-cone relaxation at e.

    Returns status NOT_IN_SWATH when the boundary quadric yields no valid
    candidate (the relaxation is unbounded); raises NumericalFailure on
    rank or multiplier breakdown.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    m, d = A.shape
    n = oracle.degree
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha={alpha} outside (0, 1)")
    if d != oracle.dim or c.shape != (d,) or e.shape != (d,):
        raise DimensionMismatch("A, c, e inconsistent with the oracle dimension")
    if np.max(np.abs(A @ e - b)) > 1e-8 * (1.0 + np.abs(b).max(initial=0.0)):
        raise DomainError("e is not feasible: A e != b")
    # Work in local coordinates w = L x with H = L^T L, where the cone is
    # the isotropic circular cone around ehat = L e (||ehat|| = sqrt(n))
    # and the ill-conditioning of H is confined to backward-stable
    # triangular and QR operations.
    apply_L, solve_Lt, solve_L = oracle.hessian_factor(e)
    ehat = apply_L(e)
    chat = solve_Lt(c)
    At_hat = np.column_stack([solve_Lt(row) for row in A])  # d x m
    Qm, R = np.linalg.qr(At_hat)
    diag_R = np.abs(np.diag(R))
    if diag_R.size == 0 or diag_R.min() <= 1e-13 * max(diag_R.max(), 1.0):
        raise NumericalFailure("constraint map is rank-deficient at this point")

    # Stationarity: (alpha^2 I - ehat ehat^T) w = lambda chat + Qm ytil,
    # inverted in closed form via J(v) = (v + <ehat,v> ehat/(alpha^2-n))
    # / alpha^2.  Feasibility Qm^T w = R^{-T} b then pins down ytil as an
    # affine function of lambda through the Sherman-Morrison inverse of
    # Gm = Qm^T J Qm.
    def apply_J(v: np.ndarray) -> np.ndarray:
        return (v + (np.dot(ehat, v) / (alpha**2 - n)) * ehat) / alpha**2

    qhat = Qm.T @ ehat
    denom = alpha**2 - n + float(np.dot(qhat, qhat))
    if abs(denom) <= 1e-12 * n:
        raise NumericalFailure("first-order system is rank-deficient in y")

    def solve_Gm(r: np.ndarray) -> np.ndarray:
        return alpha**2 * (r - (np.dot(qhat, r) / denom) * qhat)

    btil = scipy.linalg.solve_triangular(R, b, trans="T")
    ce = float(np.dot(c, e))  # = <chat, ehat> without frame roundoff
    ctil = (Qm.T @ chat + (ce / (alpha**2 - n)) * qhat) / alpha**2
    ytil_b = solve_Gm(btil)
    ytil_c = solve_Gm(ctil)
    w0 = apply_J(Qm @ ytil_b)  # w(lambda) = w0 + lambda * wn
    wn = apply_J(chat - Qm @ ytil_c)
    # Re-project the line onto the feasible set {Qm^T w = btil} with the
    # orthonormal factor, so every candidate below satisfies A x = b and
    # the boundary equation simultaneously by construction.
    w0 = w0 + Qm @ (btil - Qm.T @ w0)
    wn = wn - Qm @ (Qm.T @ wn)

    # Normalize the direction: near the optimum wn shrinks while the
    # multiplier grows, and the raw quadratic would sink below roundoff.
    norm_wn = float(np.linalg.norm(wn))
    if not norm_wn > 0.0:
        raise NumericalFailure("solution-line direction degenerated to zero")
    wn = wn / norm_wn

    u, v = -float(np.dot(ehat, w0)), -float(np.dot(ehat, wn))  # <g, x>
    P = float(np.dot(w0, w0))
    Q2 = float(np.dot(w0, wn))
    # <g,x>^2 - alpha^2 ||w||^2 = 0 along w(s) = w0 + s wn, ||wn|| = 1
    qa = v * v - alpha**2
    qb = 2.0 * (u * v - alpha**2 * Q2)
    qc = u * u - alpha**2 * P
    scale = max(abs(qa), abs(qb), abs(qc))
    if scale == 0.0 or max(abs(qa), abs(qb)) <= 1e-15 * scale:
        raise NumericalFailure("boundary quadric degenerated along the solution line")

    # Pairing the stationarity equation with x and with e gives the
    # multiplier identity lambda * gap = (n - alpha^2) <g, x>, which is
    # numerically far sturdier than reading lambda off the line parameter.
    candidates = []
    for s in _stable_quadratic_roots(qa, qb, qc):
        gdotx = u + s * v
        if gdotx > 0.0:
            continue  # wrong half-cone: needs <e, x>_e >= 0
        x = solve_L(w0 + s * wn)
        gap = float(np.dot(c, e - x))
        if gap <= 0.0:
            continue  # maximizer branch (positive multiplier)
        lam = (n - alpha**2) * gdotx / gap
        ytil = ytil_b - lam * ytil_c
        candidates.append((float(np.dot(c, x)), x, ytil, lam, gap))
    if not candidates:
        return SubproblemSolution(None, None, None, None, None, SubStatus.NOT_IN_SWATH)

    obj, x, ytil, lam, gap = min(candidates, key=lambda cand: cand[0])
    if abs(lam) <= _LAMBDA_TOL:
        raise NumericalFailure("multiplier too close to zero for dual rescaling")
    y = scipy.linalg.solve_triangular(R, ytil)
    y_e = -y / lam
    hx = oracle.hessian_apply(e, x)
    ip = float(np.dot(e, hx))  # <e, x>_e
    s_e = (gap / (n - alpha**2)) * oracle.hessian_apply(e, e - (alpha**2 / ip) * x)
    return SubproblemSolution(x, y_e, s_e, lam, gap, SubStatus.SOLVED)


def in_swath(
    oracle: BarrierOracle,
    A: np.ndarray,
    b: np.ndarray,
    c: np.ndarray,
    e: np.ndarray,
    alpha: float,
) -> bool:
    """True iff the quadratic-cone relaxation at e attains its optimum."""
    return solve_qcp(oracle, A, b, c, e, alpha).status is SubStatus.SOLVED
