"""Hyperbolic-polynomial families, barrier oracles, and eigenvalue tools.

A family is a closed enumeration: coordinate product, second-order
(Lorentz) form, symmetric determinant on svec coordinates, and the
elementary symmetric polynomial e_k.  Eigenvalues of ``x`` in direction
``e`` are the roots of ``lambda -> p(lambda e - x)``; power sums of those
roots feed the step polynomial of the driver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from . import sdp
from .core import BarrierOracle
from .errors import (
    DegenerateLeadingCoefficient,
    DimensionMismatch,
    DomainError,
    NonRealEigenvalues,
    NotInterior,
    NumericalFailure,
)

PRODUCT = "product"
SECOND_ORDER = "second_order"
DETERMINANT = "determinant"
ELEMENTARY_SYMMETRIC = "elementary_symmetric"


@dataclass(frozen=True)
class HpFamily:
    """Descriptor of one hyperbolic polynomial: name, ambient dim, degree."""

    name: str
    d: int
    degree: int
    k: int | None = None  # elementary_symmetric only

    def canonical_direction(self) -> np.ndarray:
        if self.name == SECOND_ORDER:
            e = np.zeros(self.d)
            e[-1] = 1.0
            return e
        if self.name == DETERMINANT:
            return sdp.svec(np.eye(self.degree))
        return np.ones(self.d)


def product_family(d: int) -> HpFamily:
    if d < 2:
        raise DomainError("product family needs d >= 2")
    return HpFamily(PRODUCT, d, d)


def second_order_family(d: int) -> HpFamily:
    if d < 2:
        raise DomainError("second-order family needs d >= 2")
    return HpFamily(SECOND_ORDER, d, 2)


def determinant_family(n: int) -> HpFamily:
    if n < 2:
        raise DomainError("determinant family needs order >= 2")
    return HpFamily(DETERMINANT, sdp.sym_dim(n), n)


def elementary_symmetric_family(d: int, k: int) -> HpFamily:
    if not 2 <= k <= d:
        raise DomainError("elementary symmetric family needs 2 <= k <= d")
    return HpFamily(ELEMENTARY_SYMMETRIC, d, k, k=k)


def _check_dim(family: HpFamily, x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (family.d,):
        raise DimensionMismatch(f"expected vector of length {family.d}, got {x.shape}")
    return x


def _minkowski(u: np.ndarray, v: np.ndarray) -> float:
    return float(u[-1] * v[-1] - np.dot(u[:-1], v[:-1]))


def _esym_values(x: np.ndarray, k: int) -> np.ndarray:
    """e_0(x)..e_k(x) by the stable column recurrence."""
    e = np.zeros(k + 1)
    e[0] = 1.0
    for xi in x:
        e[1:] = e[1:] + xi * e[:-1]
    return e


def _esym_deflate(e: np.ndarray, xi: float) -> np.ndarray:
    """From e_j(x) recover e_j(x with one coordinate xi removed)."""
    f = np.zeros_like(e)
    f[0] = 1.0
    for j in range(1, len(e)):
        f[j] = e[j] - xi * f[j - 1]
    return f


def eval_p(family: HpFamily, x: np.ndarray) -> float:
    """Value of the family's polynomial at x."""
    x = _check_dim(family, x)
    if family.name == PRODUCT:
        return float(np.prod(x))
    if family.name == SECOND_ORDER:
        return _minkowski(x, x)
    if family.name == DETERMINANT:
        return float(np.linalg.det(sdp.smat(x)))
    return float(_esym_values(x, family.k)[family.k])


def _grad_hess_p(family: HpFamily, x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Gradient and Hessian of the polynomial itself (not the barrier)."""
    d = family.d
    if family.name == PRODUCT:
        grad = np.array([np.prod(np.delete(x, i)) for i in range(d)])
        hess = np.zeros((d, d))
        for i in range(d):
            for j in range(i + 1, d):
                hess[i, j] = hess[j, i] = np.prod(np.delete(x, [i, j]))
        return grad, hess
    if family.name == SECOND_ORDER:
        J = np.diag(np.concatenate([-np.ones(d - 1), [1.0]]))
        return 2.0 * (J @ x), 2.0 * J
    # elementary symmetric
    k = family.k
    e_full = _esym_values(x, k)
    grad = np.zeros(d)
    hess = np.zeros((d, d))
    deflated = [_esym_deflate(e_full, x[i]) for i in range(d)]
    for i in range(d):
        grad[i] = deflated[i][k - 1]
        for j in range(i + 1, d):
            if k >= 2:
                twice = _esym_deflate(deflated[i], x[j])
                hess[i, j] = hess[j, i] = twice[k - 2]
    return grad, hess


def is_interior(family: HpFamily, x: np.ndarray, tol: float = 0.0) -> bool:
    """Strict membership in the open hyperbolicity cone."""
    x = _check_dim(family, x)
    if family.name == PRODUCT:
        return bool(np.all(x > tol))
    if family.name == SECOND_ORDER:
        return x[-1] > np.linalg.norm(x[:-1]) + tol
    if family.name == DETERMINANT:
        return sdp.is_pd(sdp.smat(x))
    # Elementary symmetric: the cone in direction 1 is cut out by the
    # positivity of all lower elementary symmetric polynomials.
    values = _esym_values(x, family.k)
    return bool(np.all(values[1:] > tol))


def is_member(family: HpFamily, x: np.ndarray, tol: float = 1e-9) -> bool:
    """Membership in the closed cone, by the family-native test."""
    x = _check_dim(family, x)
    if family.name == PRODUCT:
        return bool(np.all(x >= -tol))
    if family.name == SECOND_ORDER:
        return x[-1] >= np.linalg.norm(x[:-1]) - tol
    if family.name == DETERMINANT:
        return bool(np.min(np.linalg.eigvalsh(sdp.smat(x))) >= -tol)
    values = _esym_values(x, family.k)
    scale = 1.0 + float(np.linalg.norm(x))
    return bool(np.all(values[1:] >= -tol * scale ** np.arange(1, family.k + 1)))


def hp_barrier_oracle(family: HpFamily) -> BarrierOracle:
    """Barrier oracle ``-ln p`` with analytic gradient and Hessian.

    The determinant family delegates to the SDP backend; the others use
    their closed forms.
    """
    if family.name == DETERMINANT:
        return sdp.det_barrier_oracle(family.degree)

    d, n = family.d, family.degree

    def _interior_or_raise(e):
        e = _check_dim(family, e)
        if not is_interior(family, e):
            raise NotInterior(f"point outside the open {family.name} cone")
        return e

    def value(e):
        e = _interior_or_raise(e)
        return float(-math.log(eval_p(family, e)))

    def gradient(e):
        e = _interior_or_raise(e)
        if family.name == PRODUCT:
            return -1.0 / e
        gp, _ = _grad_hess_p(family, e)
        return -gp / eval_p(family, e)

    def hessian_matrix(e):
        e = _interior_or_raise(e)
        if family.name == PRODUCT:
            return np.diag(1.0 / e**2)
        p = eval_p(family, e)
        gp, hp = _grad_hess_p(family, e)
        return np.outer(gp, gp) / p**2 - hp / p

    def _lorentz_frame(e):
        """Spectral data of the Lorentz barrier Hessian at e.

        With t = e[-1] and r = ||e[:-1]||, the Hessian has eigenvalue
        2/(t-r)^2 on b1, 2/(t+r)^2 on b2, and 2/((t-r)(t+r)) on the
        orthogonal complement, where b1, b2 mix the last axis with the
        radial direction.  Returns (lo, hi, b1, b2) with lo = t - r,
        hi = t + r.
        """
        e = _interior_or_raise(e)
        t = float(e[-1])
        r = float(np.linalg.norm(e[:-1]))
        b1 = np.zeros(d)
        b2 = np.zeros(d)
        if r > 0.0:
            radial = np.zeros(d)
            radial[:-1] = -e[:-1] / r
            axis = np.zeros(d)
            axis[-1] = 1.0
            b1 = (axis + radial) / math.sqrt(2.0)
            b2 = (axis - radial) / math.sqrt(2.0)
        return t - r, t + r, b1, b2

    def _lorentz_spectral_apply(e, v, power):
        """Apply H(e)^power for power in {1, 0.5, -0.5} via the closed
        eigendecomposition, avoiding a Cholesky of the near-singular
        dense Hessian close to the cone boundary."""
        lo, hi, b1, b2 = _lorentz_frame(e)
        v = np.asarray(v, dtype=float)
        mu_iso = (2.0 / (lo * hi)) ** power
        if not np.any(b1):
            return mu_iso * v
        mu1 = (2.0 / lo**2) ** power
        mu2 = (2.0 / hi**2) ** power
        c1 = float(np.dot(b1, v))
        c2 = float(np.dot(b2, v))
        return mu_iso * (v - c1 * b1 - c2 * b2) + mu1 * c1 * b1 + mu2 * c2 * b2

    def hessian_apply(e, v):
        if family.name == PRODUCT:
            e = _interior_or_raise(e)
            return np.asarray(v, dtype=float) / e**2
        if family.name == SECOND_ORDER:
            return _lorentz_spectral_apply(e, v, 1.0)
        return hessian_matrix(e) @ np.asarray(v, dtype=float)

    def hessian_solve(e, w):
        if family.name == PRODUCT:
            e = _interior_or_raise(e)
            return np.asarray(w, dtype=float) * e**2
        if family.name == SECOND_ORDER:
            # H(e)^{-1} w = e <e, w> - (p(e)/2) J w in the Minkowski form.
            e = _interior_or_raise(e)
            w = np.asarray(w, dtype=float)
            Jw = np.concatenate([-w[:-1], w[-1:]])
            return e * float(np.dot(e, w)) - 0.5 * eval_p(family, e) * Jw
        H = hessian_matrix(e)
        try:
            L = np.linalg.cholesky(H)
        except np.linalg.LinAlgError:
            raise NotInterior("barrier Hessian is not positive definite")
        z = np.linalg.solve(L, np.asarray(w, dtype=float))
        return np.linalg.solve(L.T, z)

    def direction_eigs(e, x):
        if family.name == PRODUCT:
            e = _interior_or_raise(e)
            return np.sort(np.asarray(x, dtype=float) / e)
        if family.name == SECOND_ORDER:
            e = _interior_or_raise(e)
            x = _check_dim(family, x)
            # p(le - x) = A l^2 + B l + C in the Minkowski form
            A = _minkowski(e, e)
            B = -2.0 * _minkowski(e, x)
            C = _minkowski(x, x)
            disc = max(B * B - 4.0 * A * C, 0.0)
            root = math.sqrt(disc)
            return np.sort(np.array([(-B - root) / (2 * A), (-B + root) / (2 * A)]))
        # Near-coincident roots perturb into conjugate pairs with
        # imaginary parts ~ sqrt(eps * conditioning); a loose realness
        # tolerance keeps those while still rejecting genuinely complex
        # spectra, whose imaginary parts are of order one.
        return direction_eigs_hp(family, x, e, tol=1e-3)

    def hessian_factor(e):
        if family.name == PRODUCT:
            e = _interior_or_raise(e)
            inv_e = 1.0 / e

            def apply_L(v):
                return np.asarray(v, dtype=float) * inv_e

            def solve_any(w):
                return np.asarray(w, dtype=float) * e

            return apply_L, solve_any, solve_any

        if family.name == SECOND_ORDER:
            # Symmetric square root from the closed eigendecomposition;
            # L = L^T, so the transposed and plain solves coincide.
            def apply_L(v):
                return _lorentz_spectral_apply(e, v, 0.5)

            def solve_any(w):
                return _lorentz_spectral_apply(e, w, -0.5)

            return apply_L, solve_any, solve_any

        H = hessian_matrix(e)
        try:
            U = scipy.linalg.cholesky(H, lower=False)  # H = U^T U
        except scipy.linalg.LinAlgError:
            raise NotInterior("barrier Hessian is not positive definite")

        def apply_L(v):
            return U @ np.asarray(v, dtype=float)

        def solve_Lt(v):
            return scipy.linalg.solve_triangular(
                U, np.asarray(v, dtype=float), trans="T", lower=False
            )

        def solve_L(w):
            return scipy.linalg.solve_triangular(
                U, np.asarray(w, dtype=float), lower=False
            )

        return apply_L, solve_Lt, solve_L

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


def restricted_coeffs(family: HpFamily, x: np.ndarray, e: np.ndarray) -> np.ndarray:
    """Coefficients a_0..a_n of ``t -> p(x + t e)``, ascending.

    Product and second-order families use closed forms; the rest sample
    p at Chebyshev nodes and solve the Vandermonde system.
    """
    x = _check_dim(family, x)
    e = _check_dim(family, e)
    if eval_p(family, e) <= 0.0:
        raise NotInterior("restriction direction must have positive polynomial value")
    n = family.degree
    if family.name == PRODUCT:
        a = np.array([1.0])
        for xi, ei in zip(x, e):
            a = np.convolve(a, [xi, ei])
        return a
    if family.name == SECOND_ORDER:
        return np.array([_minkowski(x, x), 2.0 * _minkowski(x, e), _minkowski(e, e)])
    scale = 1.0 + np.linalg.norm(x) / np.linalg.norm(e)
    nodes = scale * np.cos(np.pi * (2 * np.arange(n + 1) + 1) / (2 * (n + 1)))
    vals = np.array([eval_p(family, x + t * e) for t in nodes])
    coeffs = np.polynomial.polynomial.polyfit(nodes, vals, n)
    resid = np.max(np.abs(np.polynomial.polynomial.polyval(nodes, coeffs) - vals))
    if resid > 1e-6 * (1.0 + np.max(np.abs(vals))):
        raise NumericalFailure(f"Vandermonde fit residual {resid:.3e} too large")
    return coeffs


def direction_eigs_hp(
    family: HpFamily, x: np.ndarray, e: np.ndarray, tol: float = 1e-6
) -> np.ndarray:
    """The n roots of ``lambda -> p(lambda e - x)`` via companion matrix.

    Raises NonRealEigenvalues when imaginary parts exceed
    ``tol * (1 + |real part|)``.
    """
    a = restricted_coeffs(family, -np.asarray(x, dtype=float), e)
    roots = np.roots(a[::-1])
    bad = np.abs(roots.imag) > tol * (1.0 + np.abs(roots.real))
    if np.any(bad):
        worst = np.max(np.abs(roots.imag[bad]))
        raise NonRealEigenvalues(f"imaginary residual {worst:.3e} exceeds tolerance")
    return np.sort(roots.real)


def power_sums(eigs: np.ndarray) -> tuple[float, float, float, float]:
    """(sum l, sum l^2, sum l^3, sum l^4) from an eigenvalue vector."""
    lam = np.asarray(eigs, dtype=float)
    return tuple(float(np.sum(lam**k)) for k in range(1, 5))


def power_sums_from_coeffs(coeffs: np.ndarray) -> tuple[float, float, float, float]:
    """Power sums from the ascending coefficients of ``t -> p(x + t e)``.

    Uses the monic expansion p(e) prod(t + l_j): e_k = a_{n-k}/a_n, then
    the Newton identities.  Coefficients below index 0 count as zero.
    """
    a = np.asarray(coeffs, dtype=float)
    n = a.size - 1
    an = a[-1]
    if abs(an) <= 1e-12 * max(1.0, np.max(np.abs(a))):
        raise DegenerateLeadingCoefficient("leading coefficient is numerically zero")

    def elem(k):
        return a[n - k] / an if n - k >= 0 else 0.0

    e1, e2, e3, e4 = (elem(k) for k in range(1, 5))
    p1 = e1
    p2 = e1**2 - 2 * e2
    p3 = e1**3 - 3 * e1 * e2 + 3 * e3
    p4 = e1**4 - 4 * e1**2 * e2 + 2 * e2**2 + 4 * e1 * e3 - 4 * e4
    return (float(p1), float(p2), float(p3), float(p4))


@dataclass(frozen=True)
class HyperbolicityReport:
    trials: int
    failures: int
    max_imag_residual: float


def hyperbolicity_sample_check(
    family: HpFamily, e: np.ndarray, trials: int, seed: int, tol: float = 1e-6
) -> HyperbolicityReport:
    """Sample Gaussian points and verify all direction eigenvalues are real."""
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    failures = 0
    worst = 0.0
    for _ in range(trials):
        x = rng.standard_normal(family.d)
        a = restricted_coeffs(family, -x, e)
        roots = np.roots(a[::-1])
        resid = float(np.max(np.abs(roots.imag) / (1.0 + np.abs(roots.real))))
        worst = max(worst, resid)
        if resid > tol:
            failures += 1
    return HyperbolicityReport(trials=trials, failures=failures, max_imag_residual=worst)


@dataclass
class HpInstance:
    """min <c, x>  s.t.  A x = b,  x in the family's closed cone."""

    family: HpFamily
    c: np.ndarray
    A: np.ndarray
    b: np.ndarray
    e0: np.ndarray

    def validate(self, tol: float = 1e-9) -> None:
        from .errors import InvariantViolation

        d = self.family.d
        if self.A.shape[1] != d or self.c.shape != (d,) or self.e0.shape != (d,):
            raise DimensionMismatch("instance arrays inconsistent with ambient dim")
        m = self.A.shape[0]
        if self.b.shape != (m,):
            raise DimensionMismatch("b length must match the rows of A")
        scale = 1.0 + np.abs(self.b).max(initial=0.0)
        if m == 0 or np.abs(self.b).max(initial=0.0) <= tol * scale:
            raise InvariantViolation("b must be nonzero")
        if np.max(np.abs(self.A @ self.e0 - self.b)) > 1e-9 * scale:
            raise InvariantViolation("start point violates A e0 = b")
        if np.linalg.matrix_rank(self.A) < m:
            raise InvariantViolation("A must have full row rank")
        if not is_interior(self.family, self.e0):
            raise InvariantViolation("start point is not interior")
        stacked = np.vstack([self.A, self.c])
        if np.linalg.matrix_rank(stacked) == m:
            raise InvariantViolation("c lies in the row space of A")
