"""Dense symmetric-matrix backend: -ln det barrier and SDP instances.

Symmetric matrices are carried either as ``(n, n)`` arrays or as
coordinate vectors of length ``d = n(n+1)/2`` under the scaled
vectorization (off-diagonals times sqrt(2)) that turns the trace inner
product into the coordinate dot product.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .core import BarrierOracle
from .errors import DimensionMismatch, InvariantViolation, NotInterior

_SQRT2 = np.sqrt(2.0)


def sym_dim(n: int) -> int:
    return n * (n + 1) // 2


def mat_order(d: int) -> int:
    n = int(round((np.sqrt(8 * d + 1) - 1) / 2))
    if sym_dim(n) != d:
        raise DimensionMismatch(f"{d} is not a symmetric-matrix coordinate length")
    return n


def svec(X: np.ndarray) -> np.ndarray:
    """Coordinate view of a symmetric matrix; dot(svec X, svec Y) = tr(XY)."""
    n = X.shape[0]
    iu, ju = np.triu_indices(n)
    v = X[iu, ju].astype(float).copy()
    v[iu != ju] *= _SQRT2
    return v


def smat(v: np.ndarray) -> np.ndarray:
    """Inverse of :func:`svec`."""
    n = mat_order(v.size)
    X = np.zeros((n, n))
    iu, ju = np.triu_indices(n)
    vals = np.asarray(v, dtype=float).copy()
    off = iu != ju
    vals[off] /= _SQRT2
    X[iu, ju] = vals
    X[ju, iu] = vals
    return X


def is_pd(X: np.ndarray) -> bool:
    try:
        np.linalg.cholesky(X)
        return True
    except np.linalg.LinAlgError:
        return False


def _chol_or_raise(E: np.ndarray) -> np.ndarray:
    try:
        return np.linalg.cholesky(E)
    except np.linalg.LinAlgError:
        raise NotInterior("matrix is not strictly positive definite")


@dataclass
class SdpInstance:
    """min tr(C X)  s.t.  tr(A_i X) = b_i,  X psd."""

    C: np.ndarray
    constraints: list[np.ndarray] = field(default_factory=list)
    b: np.ndarray = field(default_factory=lambda: np.zeros(0))
    metadata: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.C.shape[0]

    @property
    def m(self) -> int:
        return len(self.constraints)

    def constraint_rows(self) -> np.ndarray:
        """m x d matrix whose rows are svec(A_i)."""
        return np.array([svec(A) for A in self.constraints])

    def validate(self, tol: float = 1e-8) -> None:
        """Check linear independence of the A_i, b != 0, and C off their span."""
        n = self.n
        if any(A.shape != (n, n) for A in self.constraints):
            raise DimensionMismatch("constraint matrices must match C's order")
        if self.b.shape != (self.m,):
            raise DimensionMismatch("b length must equal the number of constraints")
        if self.m == 0 or not np.any(np.abs(self.b) > tol * (1 + np.abs(self.b).max(initial=0.0))):
            raise InvariantViolation("b must be nonzero (and m >= 1)")
        rows = self.constraint_rows()
        if np.linalg.matrix_rank(rows, tol=tol * max(1.0, np.abs(rows).max())) < self.m:
            raise InvariantViolation("constraint matrices are linearly dependent")
        stacked = np.vstack([rows, svec(self.C)])
        if np.linalg.matrix_rank(stacked, tol=tol * max(1.0, np.abs(stacked).max())) == self.m:
            raise InvariantViolation("C lies in the span of the constraints")


def det_barrier_oracle(n: int) -> BarrierOracle:
    """Barrier ``-ln det`` on svec coordinates: g(E) = -E^{-1},
    H(E)[V] = E^{-1} V E^{-1}, H(E)^{-1}[W] = E W E."""
    if n < 2:
        raise DimensionMismatch(f"matrix order must be >= 2, got {n}")
    d = sym_dim(n)

    def value(e):
        E = smat(e)
        L = _chol_or_raise(E)
        return float(-2.0 * np.sum(np.log(np.diag(L))))

    def gradient(e):
        E = smat(e)
        L = _chol_or_raise(E)
        Einv = scipy.linalg.cho_solve((L, True), np.eye(n))
        return -svec(0.5 * (Einv + Einv.T))

    def hessian_apply(e, v):
        E = smat(e)
        L = _chol_or_raise(E)
        Einv = scipy.linalg.cho_solve((L, True), np.eye(n))
        M = Einv @ smat(v) @ Einv
        return svec(0.5 * (M + M.T))

    def hessian_solve(e, w):
        E = smat(e)
        _chol_or_raise(E)
        M = E @ smat(w) @ E
        return svec(0.5 * (M + M.T))

    def hessian_matrix(e):
        E = smat(e)
        L = _chol_or_raise(E)
        Einv = scipy.linalg.cho_solve((L, True), np.eye(n))
        H = np.empty((d, d))
        basis = np.eye(d)
        for j in range(d):
            M = Einv @ smat(basis[j]) @ Einv
            H[:, j] = svec(0.5 * (M + M.T))
        return 0.5 * (H + H.T)

    def direction_eigs(e, x):
        return direction_eigs_sdp(smat(e), smat(x))

    def hessian_factor(e):
        E = smat(e)
        evals, V = np.linalg.eigh(E)
        if evals[0] <= 0.0:
            raise NotInterior("matrix is not strictly positive definite")
        root = V @ np.diag(np.sqrt(evals)) @ V.T
        inv_root = V @ np.diag(1.0 / np.sqrt(evals)) @ V.T

        def apply_L(v):
            M = inv_root @ smat(v) @ inv_root
            return svec(0.5 * (M + M.T))

        def solve_any(w):
            M = root @ smat(w) @ root
            return svec(0.5 * (M + M.T))

        # L is symmetric here, so L^{-T} and L^{-1} coincide.
        return apply_L, solve_any, solve_any

    return BarrierOracle(
        dim=d,
        degree=n,
        value=value,
        gradient=gradient,
        hessian_apply=hessian_apply,
        hessian_solve=hessian_solve,
        hessian_matrix=hessian_matrix,
        direction_eigs=direction_eigs,
        hessian_factor=hessian_factor,
    )


def direction_eigs_sdp(E: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Eigenvalues of ``E^{-1/2} X E^{-1/2}``, ascending.

    Computed through a Cholesky factor of E so symmetry and realness are
    structural.
    """
    L = _chol_or_raise(E)
    W = scipy.linalg.solve_triangular(L, X, lower=True)
    W = scipy.linalg.solve_triangular(L, W.T, lower=True)
    return np.sort(np.linalg.eigvalsh(0.5 * (W + W.T)))
