"""Symmetric-matrix coordinates and the log-det barrier oracle."""

import math

import numpy as np
import pytest
import scipy.linalg

import swathscale as sw
from swathscale.errors import DimensionMismatch, InvariantViolation, NotInterior


def random_sym(n, rng):
    M = rng.standard_normal((n, n))
    return 0.5 * (M + M.T)


def random_spd(n, rng):
    G = rng.standard_normal((n, n))
    return G @ G.T + n * np.eye(n)


class TestVectorization:
    def test_roundtrip(self, rng):
        for n in (2, 3, 5, 8):
            X = random_sym(n, rng)
            assert np.allclose(sw.smat(sw.svec(X)), X, atol=1e-14)

    def test_trace_inner_product(self, rng):
        # [DERIVED] oracle: direct trace computation.
        for _ in range(20):
            X = random_sym(4, rng)
            Y = random_sym(4, rng)
            assert np.dot(sw.svec(X), sw.svec(Y)) == pytest.approx(
                float(np.trace(X @ Y)), rel=1e-12
            )

    def test_dims(self):
        assert sw.sym_dim(4) == 10
        assert sw.mat_order(10) == 4
        with pytest.raises(DimensionMismatch):
            sw.mat_order(11)

    def test_identity_svec(self):
        # [TRIVIAL] diagonal entries pass through unscaled.
        v = sw.svec(np.eye(3))
        assert sorted(v[np.abs(v) > 1e-15]) == [1.0, 1.0, 1.0]


class TestDetBarrierOracle:
    def test_value_gradient(self, rng):
        oracle = sw.det_barrier_oracle(4)
        E = random_spd(4, rng)
        e = sw.svec(E)
        # [DERIVED] oracle: slogdet and explicit inverse.
        assert oracle.value(e) == pytest.approx(
            -np.linalg.slogdet(E)[1], rel=1e-12
        )
        g = sw.smat(oracle.gradient(e))
        assert np.allclose(g, -np.linalg.inv(E), atol=1e-10)

    def test_hessian_apply_solve_inverse_pair(self, rng):
        oracle = sw.det_barrier_oracle(4)
        e = sw.svec(random_spd(4, rng))
        v = rng.standard_normal(oracle.dim)
        assert np.allclose(
            oracle.hessian_solve(e, oracle.hessian_apply(e, v)), v, atol=1e-8
        )

    def test_hessian_matrix_consistent(self, rng):
        oracle = sw.det_barrier_oracle(3)
        e = sw.svec(random_spd(3, rng))
        H = oracle.hessian_matrix(e)
        v = rng.standard_normal(6)
        assert np.allclose(H @ v, oracle.hessian_apply(e, v), atol=1e-9)
        assert np.allclose(H, H.T, atol=1e-12)
        assert np.min(np.linalg.eigvalsh(H)) > 0

    def test_hessian_factor(self, rng):
        oracle = sw.det_barrier_oracle(4)
        e = sw.svec(random_spd(4, rng))
        apply_L, solve_Lt, solve_L = oracle.hessian_factor(e)
        v = rng.standard_normal(oracle.dim)
        # L^T L v = H v and the solves invert the factor.
        assert np.allclose(
            apply_L(apply_L(v)), oracle.hessian_apply(e, v), atol=1e-9
        )
        assert np.allclose(solve_L(apply_L(v)), v, atol=1e-10)
        assert np.allclose(solve_Lt(apply_L(v)), v, atol=1e-10)

    def test_structural_identities(self, rng):
        # H(e)e = -g(e), H(e)^{-1} g(e) = -e, <g, e> = -n.
        oracle = sw.det_barrier_oracle(5)
        for seed in range(5):
            e = sw.svec(random_spd(5, np.random.default_rng(seed)))
            g = oracle.gradient(e)
            assert np.allclose(oracle.hessian_apply(e, e), -g, atol=1e-9)
            assert np.allclose(oracle.hessian_solve(e, g), -e, atol=1e-9)
            assert np.dot(g, e) == pytest.approx(-5.0, rel=1e-10)

    def test_not_interior_raises(self):
        oracle = sw.det_barrier_oracle(3)
        e = sw.svec(np.diag([1.0, 1.0, -0.5]))
        with pytest.raises(NotInterior):
            oracle.value(e)
        with pytest.raises(NotInterior):
            oracle.gradient(e)


class TestDirectionEigs:
    def test_against_generalized_eigenproblem(self, rng):
        # [DERIVED] oracle: scipy generalized symmetric eigensolver.
        for _ in range(10):
            E = random_spd(4, rng)
            X = random_sym(4, rng)
            lam = sw.direction_eigs_sdp(E, X)
            ref = np.sort(scipy.linalg.eigvalsh(X, E))
            assert np.allclose(lam, ref, atol=1e-9)

    def test_identity_direction(self):
        # [TRIVIAL] eigenvalues of X at E = I are plain eigenvalues.
        X = np.diag([3.0, -1.0, 0.5])
        lam = sw.direction_eigs_sdp(np.eye(3), X)
        assert np.allclose(lam, [-1.0, 0.5, 3.0], atol=1e-13)


class TestSdpInstanceValidate:
    def test_good_instance_passes(self):
        inst, _ = sw.gen_central_path_sdp(4, 6, 1.0, 0)
        inst.validate()

    def test_rejects_zero_b(self):
        inst = sw.SdpInstance(
            C=np.diag([1.0, 2.0]), constraints=[np.eye(2)], b=np.zeros(1)
        )
        with pytest.raises(InvariantViolation):
            inst.validate()

    def test_rejects_dependent_constraints(self):
        inst = sw.SdpInstance(
            C=np.diag([1.0, 2.0]),
            constraints=[np.eye(2), 2.0 * np.eye(2)],
            b=np.array([2.0, 4.0]),
        )
        with pytest.raises(InvariantViolation):
            inst.validate()

    def test_rejects_objective_in_constraint_span(self):
        inst = sw.SdpInstance(
            C=3.0 * np.eye(2), constraints=[np.eye(2)], b=np.array([2.0])
        )
        with pytest.raises(InvariantViolation):
            inst.validate()
