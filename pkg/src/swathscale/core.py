"""Local-metric geometry shared by the SDP and hyperbolic backends.

At an interior point ``e`` the barrier Hessian induces the local inner
product ``<u, v>_e = <u, H(e) v>``.  The circular cones ``K_e(alpha)``
measured in that metric, their duals, and the scalar schedule constants
live here; everything is backend-agnostic and works through a
:class:`BarrierOracle`.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainError

Vector = np.ndarray


@dataclass(frozen=True)
class BarrierOracle:
    """Behavioral interface to a logarithmically homogeneous barrier.

    All callables act on ambient coordinate vectors of length ``dim``.
    ``degree`` is the degree of the underlying polynomial; the barrier is
    ``-ln p``.  ``hessian_apply`` and ``hessian_solve`` must raise
    :class:`~swathscale.errors.NotInterior` off the cone interior.
    """

    dim: int
    degree: int
    value: Callable[[Vector], float]
    gradient: Callable[[Vector], Vector]
    hessian_apply: Callable[[Vector, Vector], Vector]
    hessian_solve: Callable[[Vector, Vector], Vector]
    hessian_matrix: Callable[[Vector], np.ndarray]
    direction_eigs: Callable[[Vector, Vector], Vector]
    # hessian_factor(e) returns (apply_L, solve_Lt, solve_L) for a factor
    # H(e) = L^T L, mapping to and from local coordinates w = L x.
    hessian_factor: Callable[[Vector], tuple] = None


class Membership(enum.Enum):
    INTERIOR = "interior"
    BOUNDARY = "boundary"
    OUTSIDE = "outside"


def local_inner(oracle: BarrierOracle, e: Vector, u: Vector, v: Vector) -> float:
    """``<u, v>_e = <u, H(e) v>``; symmetric and bilinear."""
    return float(np.dot(u, oracle.hessian_apply(e, v)))


def local_norm(oracle: BarrierOracle, e: Vector, v: Vector) -> float:
    return math.sqrt(max(local_inner(oracle, e, v, v), 0.0))


@dataclass(frozen=True)
class QuadCone:
    """The circular cone ``K_e(alpha) = {x : <e,x>_e >= alpha ||x||_e}``.

    Requires ``0 < alpha < sqrt(n)`` and degree ``n >= 2`` so that the
    dual parameter ``sqrt(n - alpha^2)`` stays >= 1.
    """

    oracle: BarrierOracle
    e: Vector
    alpha: float

    def __post_init__(self):
        n = self.oracle.degree
        if n < 2:
            raise DomainError(f"cone degree must be >= 2, got {n}")
        if not 0.0 < self.alpha < math.sqrt(n):
            raise DomainError(f"alpha={self.alpha} outside (0, sqrt({n}))")

    @property
    def dual_alpha(self) -> float:
        return math.sqrt(self.oracle.degree - self.alpha**2)


def primal_cone_member(cone: QuadCone, x: Vector, tol: float = 1e-9) -> Membership:
    """Classify ``x`` against ``K_e(alpha)`` with a relative tol band.

    The band scales with ``||x||_e`` so classification is invariant under
    positive rescaling of ``x`` (cones are scale-invariant sets).
    Boundary means ``|<e,x>_e - alpha ||x||_e| <= tol * ||x||_e``.
    """
    hx = cone.oracle.hessian_apply(cone.e, x)
    proj = float(np.dot(cone.e, hx))
    norm = math.sqrt(max(float(np.dot(x, hx)), 0.0))
    slack = proj - cone.alpha * norm
    band = tol * norm
    if abs(slack) <= band:
        return Membership.BOUNDARY
    return Membership.INTERIOR if slack > 0 else Membership.OUTSIDE


def dual_cone_member(cone: QuadCone, s: Vector, tol: float = 1e-9) -> Membership:
    """Classify ``s`` against ``K_e(alpha)* = H(e) K_e(sqrt(n - alpha^2))``."""
    pulled = cone.oracle.hessian_solve(cone.e, s)
    dual = QuadCone(cone.oracle, cone.e, cone.dual_alpha)
    return primal_cone_member(dual, pulled, tol)


@dataclass(frozen=True)
class ScheduleConstants:
    """Step-schedule scalars derived from alpha and the degree."""

    alpha: float
    beta: float
    kappa: float
    ratio_bound: float


def schedule_constants(alpha: float, n: int) -> ScheduleConstants:
    """beta = alpha sqrt((1+alpha)/2), kappa = alpha sqrt((1-alpha)/8),
    ratio_bound = 1 - kappa/(kappa + sqrt(n))."""
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha={alpha} outside (0, 1)")
    if n < 2:
        raise DomainError(f"degree must be >= 2, got {n}")
    beta = alpha * math.sqrt((1.0 + alpha) / 2.0)
    kappa = alpha * math.sqrt((1.0 - alpha) / 8.0)
    return ScheduleConstants(
        alpha=alpha,
        beta=beta,
        kappa=kappa,
        ratio_bound=1.0 - kappa / (kappa + math.sqrt(n)),
    )
