"""Independent oracles tying the solver back to its per-iteration identities.

Everything here recomputes a quantity along a second, unrelated path
(direct trace evaluation, finite differences, closed-form bounds) and
compares.  Checks aggregate into :class:`CheckReport`; nothing is cached
between checks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    BarrierOracle,
    Membership,
    QuadCone,
    dual_cone_member,
)
from .errors import DomainError, NotInterior
from .hyperbolic import power_sums
from .sdp import SdpInstance, det_barrier_oracle, direction_eigs_sdp, is_pd, smat, svec
from .subproblem import SubStatus, solve_qcp
from .driver import step_poly_coeffs


@dataclass
class CheckReport:
    name: str
    max_abs_err: float
    max_rel_err: float
    samples: int
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_rel_err <= self.tolerance


def trace_q(E: np.ndarray, X: np.ndarray, S: np.ndarray, t: float) -> float:
    """Exact evaluation of ``tr(((E + t X) S)^2)``."""
    M = (E + t * X) @ S
    return float(np.trace(M @ M))


def _solve_sdp_relaxation(sdp_inst: SdpInstance, E: np.ndarray, alpha: float):
    oracle = det_barrier_oracle(sdp_inst.n)
    A = sdp_inst.constraint_rows()
    sol = solve_qcp(oracle, A, sdp_inst.b, svec(sdp_inst.C), svec(E), alpha)
    if sol.status is not SubStatus.SOLVED:
        raise DomainError("E is not in the swath for this alpha")
    return oracle, sol


def q_scaling_check(
    sdp_inst: SdpInstance, E: np.ndarray, alpha: float, t_samples: int = 11
) -> CheckReport:
    """Compare the trace quadratic against the eigenvalue-coefficient form.

    With S normalized by the gap, ``tr(((E+tX)S)^2)`` must equal the step
    quadratic divided by ``((n - alpha^2) sum(lambda))^2`` on a grid
    spanning [0, 2 t_min].
    """
    n = sdp_inst.n
    _, sol = _solve_sdp_relaxation(sdp_inst, E, alpha)
    X = smat(sol.x_e)
    S = smat(sol.s_e) / sol.gap
    lam = direction_eigs_sdp(E, X)
    p1, p2, p3, p4 = power_sums(lam)
    a, b, c = step_poly_coeffs(p1, p2, p3, p4, alpha, n)
    t_min = -b / (2.0 * a)
    denom = ((n - alpha**2) * p1) ** 2
    grid = np.linspace(0.0, 2.0 * t_min, t_samples)
    max_abs = max_rel = 0.0
    for t in grid:
        lhs = trace_q(E, X, S, t)
        rhs = (a * t * t + b * t + c) / denom
        err = abs(lhs - rhs)
        max_abs = max(max_abs, err)
        max_rel = max(max_rel, err / max(abs(lhs), abs(rhs), 1e-300))
    return CheckReport("q_scaling", max_abs, max_rel, t_samples, 1e-8)


def membership_equiv_check(
    sdp_inst: SdpInstance,
    E: np.ndarray,
    alpha: float,
    beta: float,
    t_grid: np.ndarray,
    band: float = 1e-9,
) -> CheckReport:
    """Positive-definiteness plus dual-cone membership at E(t) must agree
    with the quadratic inequality q(t) < 1/(n - beta^2).

    Grid points inside the tol band around the threshold are skipped;
    max_rel_err is the disagreement count (0 or more).
    """
    if not 0.0 < beta < 1.0:
        raise DomainError("beta must lie in (0, 1)")
    n = sdp_inst.n
    oracle, sol = _solve_sdp_relaxation(sdp_inst, E, alpha)
    X = smat(sol.x_e)
    S = smat(sol.s_e) / sol.gap
    threshold = 1.0 / (n - beta**2)
    disagreements = 0
    used = 0
    for t in t_grid:
        if t <= -1.0:
            continue
        q_val = trace_q(E, X, S, t)
        if abs(q_val - threshold) <= band:
            continue
        used += 1
        rhs = q_val < threshold
        Et = (E + t * X) / (1.0 + t)
        if not is_pd(Et):
            lhs = False
        else:
            cone = QuadCone(oracle, svec(Et), beta)
            lhs = dual_cone_member(cone, svec(S)) is Membership.INTERIOR
        if lhs != rhs:
            disagreements += 1
    return CheckReport(
        "membership_equiv", float(disagreements), float(disagreements), used, 0.0
    )


def boundary_dual_point(E: np.ndarray, X: np.ndarray, alpha: float) -> np.ndarray:
    """The normalized dual slack built from a cone-boundary point:
    ``(E^{-1} - alpha^2/tr(E^{-1}X) E^{-1} X E^{-1}) / (n - alpha^2)``."""
    n = E.shape[0]
    Einv = np.linalg.inv(E)
    trEX = float(np.trace(Einv @ X))
    S = (Einv - (alpha**2 / trEX) * Einv @ X @ Einv) / (n - alpha**2)
    return 0.5 * (S + S.T)


def decrease_bound_check(
    E: np.ndarray, X: np.ndarray, alpha: float, t_grid: np.ndarray
) -> CheckReport:
    """Strict decrease bound on q(t) for 0 < t <= alpha/||X||_E.

    ``q(t) < (1 - 2 t (1-alpha)/(n-alpha^2) ||X||_E (alpha - t ||X||_E))
    / (n - alpha^2)``; max_rel_err is the worst (signed) margin violation.
    """
    n = E.shape[0]
    S = boundary_dual_point(E, X, alpha)
    lam = direction_eigs_sdp(E, X)
    x_norm = float(np.sqrt(np.sum(lam**2)))
    worst = -np.inf
    used = 0
    for t in t_grid:
        if not 0.0 < t <= alpha / x_norm + 1e-12:
            continue
        used += 1
        lhs = trace_q(E, X, S, t)
        rhs = (
            1.0
            - 2.0 * t * ((1.0 - alpha) / (n - alpha**2)) * x_norm * (alpha - t * x_norm)
        ) / (n - alpha**2)
        worst = max(worst, lhs - rhs)
    violation = max(worst, 0.0)
    return CheckReport("decrease_bound", violation, violation, used, 0.0)


def fd_check(oracle: BarrierOracle, x: np.ndarray, h: float | None = None) -> CheckReport:
    """Central-difference gradient and Hessian-vector check at x."""
    x = np.asarray(x, dtype=float)
    if h is None:
        h = 1e-5 * (1.0 + float(np.linalg.norm(x)))
    d = oracle.dim
    g = oracle.gradient(x)
    max_abs = max_rel = 0.0
    for j in range(d):
        step = np.zeros(d)
        step[j] = h
        fd = (oracle.value(x + step) - oracle.value(x - step)) / (2.0 * h)
        err = abs(fd - g[j])
        max_abs = max(max_abs, err)
        max_rel = max(max_rel, err / (1.0 + abs(g[j])))
    rng = np.random.default_rng(0)
    for _ in range(3):
        v = rng.standard_normal(d)
        hv = oracle.hessian_apply(x, v)
        fd = (oracle.gradient(x + h * v) - oracle.gradient(x - h * v)) / (2.0 * h)
        err = float(np.max(np.abs(fd - hv)))
        max_abs = max(max_abs, err)
        max_rel = max(max_rel, err / (1.0 + float(np.max(np.abs(hv)))))
    return CheckReport("finite_difference", max_abs, max_rel, d + 3, 1e-5)


def conjecture_curve(
    oracle: BarrierOracle,
    e: np.ndarray,
    x_e: np.ndarray,
    s_e: np.ndarray,
    t_grid: np.ndarray,
) -> list[float]:
    """Pointwise values of ``<s, H(e + t x)^{-1} s> / <e, s>^2``.

    Report-only: returns NaN where the shifted point leaves the cone.
    """
    denom = float(np.dot(e, s_e)) ** 2
    if denom == 0.0:
        raise DomainError("s_e is orthogonal to e (zero denominator)")
    values = []
    for t in t_grid:
        point = e + t * x_e
        try:
            pulled = oracle.hessian_solve(point, s_e)
        except NotInterior:
            values.append(float("nan"))
            continue
        values.append(float(np.dot(s_e, pulled)) / denom)
    return values
