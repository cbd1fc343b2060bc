"""Hyperbolic families: polynomial oracles, eigenvalues, barrier identities."""

import itertools
import math

import numpy as np
import pytest

import swathscale as sw
from swathscale.errors import (
    DegenerateLeadingCoefficient,
    DomainError,
    InvariantViolation,
    NotInterior,
)
from swathscale.hyperbolic import (
    eval_p,
    is_interior,
    is_member,
)

ALL_FAMILIES = [
    sw.product_family(5),
    sw.second_order_family(5),
    sw.determinant_family(3),
    sw.elementary_symmetric_family(5, 3),
]


def interior_point(family, rng, radius=0.4):
    e = family.canonical_direction()
    oracle = sw.hp_barrier_oracle(family)
    w = rng.standard_normal(family.d)
    norm = math.sqrt(float(np.dot(w, oracle.hessian_apply(e, w))))
    return e + (radius / norm) * w


class TestEvalP:
    def test_frozen_values(self):
        # [DERIVED] by hand / itertools oracle.
        assert eval_p(sw.product_family(4), np.array([1.0, 2, 3, 4])) == 24.0
        assert eval_p(
            sw.second_order_family(3), np.array([3.0, 4.0, 6.0])
        ) == pytest.approx(36 - 25, rel=1e-14)
        assert eval_p(
            sw.determinant_family(2), sw.svec(np.array([[2.0, 1.0], [1.0, 3.0]]))
        ) == pytest.approx(5.0, rel=1e-12)
        assert eval_p(
            sw.elementary_symmetric_family(5, 3), np.arange(1.0, 6.0)
        ) == pytest.approx(225.0, rel=1e-13)

    def test_esym_matches_combinations_oracle(self, rng):
        # [DERIVED] oracle: explicit sum over index subsets.
        for _ in range(20):
            x = rng.standard_normal(6)
            for k in (2, 3, 4):
                ref = sum(
                    math.prod(x[list(idx)])
                    for idx in itertools.combinations(range(6), k)
                )
                got = eval_p(sw.elementary_symmetric_family(6, k), x)
                assert got == pytest.approx(ref, rel=1e-10, abs=1e-10)


class TestMembership:
    def test_canonical_directions_interior(self):
        for fam in ALL_FAMILIES:
            assert is_interior(fam, fam.canonical_direction())

    def test_product(self):
        fam = sw.product_family(3)
        assert is_interior(fam, np.array([1.0, 2.0, 0.5]))
        assert not is_interior(fam, np.array([1.0, 0.0, 0.5]))
        assert is_member(fam, np.array([1.0, 0.0, 0.5]))
        assert not is_member(fam, np.array([1.0, -0.1, 0.5]))

    def test_second_order(self):
        fam = sw.second_order_family(3)
        assert is_interior(fam, np.array([0.3, 0.4, 1.0]))
        assert not is_interior(fam, np.array([3.0, 4.0, 5.0]))
        assert is_member(fam, np.array([3.0, 4.0, 5.0]))
        assert not is_member(fam, np.array([3.0, 4.0, -5.0]))

    def test_determinant(self):
        fam = sw.determinant_family(2)
        assert is_interior(fam, sw.svec(np.eye(2)))
        assert not is_interior(fam, sw.svec(np.diag([1.0, 0.0])))
        assert is_member(fam, sw.svec(np.diag([1.0, 0.0])))
        assert not is_member(fam, sw.svec(np.diag([1.0, -1.0])))

    def test_elementary_symmetric_contains_orthant(self, rng):
        fam = sw.elementary_symmetric_family(5, 3)
        for _ in range(20):
            x = np.abs(rng.standard_normal(5))
            assert is_member(fam, x)
        # A point with one moderately negative coordinate can still be
        # inside: e_1, e_2, e_3 all positive for (3, 3, 3, 3, -1).
        assert is_interior(fam, np.array([3.0, 3.0, 3.0, 3.0, -1.0]))
        assert not is_member(fam, np.array([-1.0, -1.0, -1.0, -1.0, -1.0]))


class TestBarrierIdentities:
    @pytest.mark.parametrize("family", ALL_FAMILIES, ids=lambda f: f.name)
    def test_hessian_times_e_is_minus_gradient(self, family, rng):
        oracle = sw.hp_barrier_oracle(family)
        for _ in range(10):
            e = interior_point(family, rng)
            g = oracle.gradient(e)
            he = oracle.hessian_apply(e, e)
            assert np.allclose(he, -g, atol=1e-8 * (1 + np.max(np.abs(g))))
            assert np.dot(e, he) == pytest.approx(family.degree, rel=1e-8)

    @pytest.mark.parametrize("family", ALL_FAMILIES, ids=lambda f: f.name)
    def test_factor_consistent_with_hessian(self, family, rng):
        oracle = sw.hp_barrier_oracle(family)
        e = interior_point(family, rng)
        apply_L, solve_Lt, solve_L = oracle.hessian_factor(e)
        v = rng.standard_normal(family.d)
        assert np.allclose(solve_L(apply_L(v)), v, atol=1e-9)
        # ||L v||^2 = <v, H v> pins the factor to the Hessian.
        hv = oracle.hessian_apply(e, v)
        w = apply_L(v)
        assert np.dot(w, w) == pytest.approx(float(np.dot(v, hv)), rel=1e-8)

    @pytest.mark.parametrize("family", ALL_FAMILIES, ids=lambda f: f.name)
    def test_solve_inverts_apply(self, family, rng):
        oracle = sw.hp_barrier_oracle(family)
        e = interior_point(family, rng)
        v = rng.standard_normal(family.d)
        assert np.allclose(
            oracle.hessian_solve(e, oracle.hessian_apply(e, v)), v, atol=1e-7
        )

    def test_gradient_raises_off_cone(self):
        fam = sw.product_family(3)
        oracle = sw.hp_barrier_oracle(fam)
        with pytest.raises(NotInterior):
            oracle.gradient(np.array([1.0, -1.0, 1.0]))


class TestLorentzClosedForms:
    def test_against_dense_hessian(self, rng):
        fam = sw.second_order_family(6)
        oracle = sw.hp_barrier_oracle(fam)
        for _ in range(10):
            e = interior_point(fam, rng)
            H = oracle.hessian_matrix(e)
            v = rng.standard_normal(6)
            assert np.allclose(oracle.hessian_apply(e, v), H @ v, atol=1e-9)
            assert np.allclose(
                oracle.hessian_solve(e, v), np.linalg.solve(H, v), atol=1e-9
            )

    def test_axis_point(self, rng):
        # Degenerate radial part: the Hessian is isotropic there.
        fam = sw.second_order_family(4)
        oracle = sw.hp_barrier_oracle(fam)
        e = np.array([0.0, 0.0, 0.0, 2.0])
        v = rng.standard_normal(4)
        H = oracle.hessian_matrix(e)
        assert np.allclose(oracle.hessian_apply(e, v), H @ v, atol=1e-12)
        apply_L, _, solve_L = oracle.hessian_factor(e)
        assert np.allclose(solve_L(apply_L(v)), v, atol=1e-12)


class TestDirectionEigs:
    def test_product_closed_form(self, rng):
        fam = sw.product_family(5)
        oracle = sw.hp_barrier_oracle(fam)
        e = np.abs(rng.standard_normal(5)) + 0.5
        x = rng.standard_normal(5)
        assert np.allclose(oracle.direction_eigs(e, x), np.sort(x / e), atol=1e-12)

    def test_determinant_matches_sdp(self, rng):
        fam = sw.determinant_family(3)
        oracle = sw.hp_barrier_oracle(fam)
        G = rng.standard_normal((3, 3))
        E = G @ G.T + 3 * np.eye(3)
        X = rng.standard_normal((3, 3))
        X = 0.5 * (X + X.T)
        lam = oracle.direction_eigs(sw.svec(E), sw.svec(X))
        assert np.allclose(lam, sw.direction_eigs_sdp(E, X), atol=1e-9)

    def test_eigs_reproduce_polynomial_factorization(self, rng):
        # p(lambda e - x) vanishes at each reported eigenvalue.
        for fam in ALL_FAMILIES:
            e = interior_point(fam, rng)
            x = rng.standard_normal(fam.d)
            lam = sw.hp_barrier_oracle(fam).direction_eigs(e, x)
            assert lam.shape == (fam.degree,)
            scale = abs(eval_p(fam, e)) * (1.0 + np.max(np.abs(lam))) ** fam.degree
            for lam_j in lam:
                assert abs(eval_p(fam, lam_j * e - x)) <= 1e-7 * scale

    def test_sum_of_eigs_is_local_inner(self, rng):
        # sum lambda_j = <e, x>_e for every family.
        for fam in ALL_FAMILIES:
            oracle = sw.hp_barrier_oracle(fam)
            e = interior_point(fam, rng)
            x = rng.standard_normal(fam.d)
            lam = oracle.direction_eigs(e, x)
            assert float(np.sum(lam)) == pytest.approx(
                sw.local_inner(oracle, e, e, x), rel=1e-7, abs=1e-9
            )


class TestRestrictedCoeffs:
    def test_product_matches_numpy_polynomial(self, rng):
        # [DERIVED] oracle: multiply the linear factors with numpy.
        fam = sw.product_family(4)
        x = rng.standard_normal(4)
        e = np.abs(rng.standard_normal(4)) + 0.5
        got = sw.restricted_coeffs(fam, x, e)
        ref = np.array([1.0])
        for xi, ei in zip(x, e):
            ref = np.polynomial.polynomial.polymul(ref, [xi, ei])
        assert np.allclose(got, ref, atol=1e-12)

    def test_leading_coefficient_is_p_of_e(self, rng):
        for fam in ALL_FAMILIES:
            e = interior_point(fam, rng)
            x = rng.standard_normal(fam.d)
            coeffs = sw.restricted_coeffs(fam, x, e)
            assert coeffs.shape == (fam.degree + 1,)
            assert coeffs[-1] == pytest.approx(eval_p(fam, e), rel=1e-8)

    def test_rejects_nonpositive_direction(self):
        fam = sw.product_family(3)
        with pytest.raises(NotInterior):
            sw.restricted_coeffs(fam, np.ones(3), np.array([1.0, -1.0, 1.0]))


class TestPowerSums:
    def test_newton_identities_match_roots(self, rng):
        # [DERIVED] oracle: sum powers of the planted roots directly.
        for deg in (2, 3, 5, 8, 12):
            roots = rng.uniform(-3.0, 3.0, size=deg)
            lead = rng.uniform(0.5, 2.0)
            # ascending coefficients of lead * prod (t + root_j)
            coeffs = np.array([lead])
            for r in roots:
                coeffs = np.polynomial.polynomial.polymul(coeffs, [r, 1.0])
            got = sw.power_sums_from_coeffs(coeffs)
            ref = sw.power_sums(roots)
            for g, r in zip(got, ref):
                assert g == pytest.approx(r, rel=1e-8, abs=1e-8)

    def test_degenerate_leading_coefficient(self):
        with pytest.raises(DegenerateLeadingCoefficient):
            sw.power_sums_from_coeffs(np.array([1.0, 1.0, 0.0]))


class TestHyperbolicitySampling:
    @pytest.mark.parametrize("family", ALL_FAMILIES, ids=lambda f: f.name)
    def test_all_real(self, family):
        report = sw.hyperbolicity_sample_check(
            family, family.canonical_direction(), trials=50, seed=7
        )
        assert report.failures == 0


class TestHpInstanceValidate:
    def test_generated_instance_passes(self):
        inst, _ = sw.gen_hp_instance(sw.product_family(6), 3, 1.0, 0)
        inst.validate()

    def test_rejects_infeasible_start(self):
        inst, _ = sw.gen_hp_instance(sw.product_family(6), 3, 1.0, 0)
        inst.b = inst.b + 1.0
        with pytest.raises(InvariantViolation):
            inst.validate()

    def test_rejects_zero_b(self):
        fam = sw.product_family(4)
        inst = sw.HpInstance(
            family=fam,
            c=np.array([1.0, 2.0, 3.0, 5.0]),
            A=np.array([[1.0, -1.0, 0.0, 0.0]]),
            b=np.zeros(1),
            e0=np.ones(4),
        )
        with pytest.raises(InvariantViolation):
            inst.validate()
