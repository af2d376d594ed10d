"""Second fundamental form, Gauss split and the invariant/anti-invariant probes."""

import math

import numpy as np
import pytest

from goldenslant.errors import NotAntiInvariant, NotInvariant
from goldenslant.extrinsic import (
    anti_invariant_shape_vanishing,
    gauss_split_residual,
    invariant_connection_check,
    second_fundamental_form,
    shape_operator,
)
from goldenslant.structures import GoldenStructure, Metric, diagonal_golden
from goldenslant.submanifold import ImmersionSpec

EUCLID4 = Metric.euclidean(4, backend="float")
STRUCT4 = diagonal_golden(["psi", "psi", "one_minus_psi", "one_minus_psi"]).to_float()

PARABOLOID = ImmersionSpec.from_strings(["u1", "u2"], ["u1", "u2", "u1^2+u2^2", "0"])
SPHERE_PATCH = ImmersionSpec.from_strings(
    ["u1", "u2"], ["cos(u1)*cos(u2)", "cos(u1)*sin(u2)", "sin(u1)", "0"]
)


class TestSecondFundamentalForm:
    def test_affine_immersion_has_no_curvature_data(self):
        imm = ImmersionSpec.from_strings(["u1", "u2"], ["u1", "u2", "u1+u2", "0"])
        sff = second_fundamental_form(imm, (0.5, -0.5), EUCLID4)
        assert np.abs(sff.h).max() == 0.0
        assert np.abs(sff.christoffel_t).max() == 0.0

    def test_sphere_patch_normal_curvature(self):
        # At (0, 0): tangents are e3 and e2; d2x/du1^2 = (-1, 0, 0, 0), purely
        # normal with unit magnitude along the first axis.
        sff = second_fundamental_form(SPHERE_PATCH, (0.0, 0.0), EUCLID4)
        frame = sff.frame
        ambient_h11 = frame.normal_onb @ sff.h[0, 0]
        assert np.abs(ambient_h11 - np.array([-1.0, 0.0, 0.0, 0.0])).max() <= 1e-12
        assert math.isclose(np.linalg.norm(sff.h[0, 0]), 1.0, abs_tol=1e-12)

    def test_paraboloid_hessian_split(self):
        sff = second_fundamental_form(PARABOLOID, (0.0, 0.0), EUCLID4)
        frame = sff.frame
        h11 = frame.normal_onb @ sff.h[0, 0]
        h22 = frame.normal_onb @ sff.h[1, 1]
        assert np.abs(h11 - np.array([0, 0, 2.0, 0])).max() <= 1e-12
        assert np.abs(h22 - np.array([0, 0, 2.0, 0])).max() <= 1e-12
        assert np.abs(sff.h[0, 1]).max() <= 1e-12
        assert np.abs(sff.christoffel_t).max() <= 1e-12

    def test_h_is_symmetric(self):
        imm = ImmersionSpec.from_strings(
            ["u1", "u2"], ["u1", "u2", "u1^2*u2+sin(u1*u2)", "cos(u1)*u2^2"]
        )
        sff = second_fundamental_form(imm, (0.3, 0.7), EUCLID4)
        assert np.abs(sff.h - sff.h.transpose(1, 0, 2)).max() <= 1e-12
        assert np.abs(sff.christoffel_t - sff.christoffel_t.transpose(1, 0, 2)).max() <= 1e-12

    def test_shape_operator_defining_relation(self):
        sff = second_fundamental_form(PARABOLOID, (0.4, -0.1), EUCLID4)
        op = shape_operator(sff)
        h_onb = sff.h_onb()
        rng = np.random.default_rng(5)
        for _ in range(20):
            x, y = rng.standard_normal((2, 2))
            v = rng.standard_normal(2)
            a_v = op(v)
            lhs = float(x @ a_v @ y)
            rhs = float(np.einsum("abc,a,b,c->", h_onb, x, y, v))
            assert abs(lhs - rhs) <= 1e-10

    def test_shape_operator_self_adjoint(self):
        sff = second_fundamental_form(PARABOLOID, (0.2, 0.6), EUCLID4)
        op = shape_operator(sff)
        a_v = op(np.array([1.0, -2.0]))
        assert np.abs(a_v - a_v.T).max() <= 1e-12


class TestGaussSplit:
    def test_affine_is_exactly_zero(self):
        imm = ImmersionSpec.from_strings(["u1", "u2"], ["u1", "u2", "u1-u2", "0"])
        assert gauss_split_residual(imm, (0.1, 0.9), STRUCT4) == (0.0, 0.0)

    def test_paraboloid_residuals_vanish(self):
        r_tan, r_nor = gauss_split_residual(PARABOLOID, (0.3, -0.2), STRUCT4)
        assert r_tan <= 1e-9 and r_nor <= 1e-9

    def test_split_is_structure_independent(self):
        # The Gauss split is definitional for any linear ambient operator, so a
        # perturbed, non-golden phi still splits cleanly.
        phi = STRUCT4.phi_float.copy()
        phi[0, 1] += 0.3
        phi[1, 0] += 0.3
        broken = GoldenStructure(phi, EUCLID4, validate=False)
        r_tan, r_nor = gauss_split_residual(PARABOLOID, (0.3, -0.2), broken)
        assert r_tan <= 1e-9 and r_nor <= 1e-9

    def test_random_quadratic_immersions(self):
        rng = np.random.default_rng(77)
        for trial in range(30):
            coeffs = rng.uniform(-1, 1, (4, 6))
            components = [
                f"{c[0]:.5f}+{c[1]:.5f}*u1+{c[2]:.5f}*u2"
                f"+{c[3]:.5f}*u1^2+{c[4]:.5f}*u1*u2+{c[5]:.5f}*u2^2"
                for c in coeffs
            ]
            imm = ImmersionSpec.from_strings(["u1", "u2"], components)
            point = tuple(rng.uniform(-0.5, 0.5, 2))
            try:
                r_tan, r_nor = gauss_split_residual(imm, point, STRUCT4)
            except Exception:
                continue  # rank-deficient draw
            assert max(r_tan, r_nor) <= 1e-9


class TestInvariantConnection:
    def test_affine_invariant_case_is_zero(self):
        imm = ImmersionSpec.from_strings(
            ["u1", "u2"], ["u1*cos(0.5)", "u1*sin(0.5)", "u2", "0"]
        )
        assert invariant_connection_check(imm, (0.2, 0.4), STRUCT4) == (0.0, 0.0)

    def test_bent_inside_psi_plane_stays_invariant(self):
        # bending confined to the psi eigenplane keeps the tangent space
        # invariant at the origin; both residuals stay at rounding level
        imm = ImmersionSpec.from_strings(["u1", "u2"], ["u1+u1^2", "u2", "0", "0"])
        r_par, r_wei = invariant_connection_check(imm, (0.0, 0.0), STRUCT4)
        assert r_par <= 1e-9 and r_wei <= 1e-9

    def test_curved_invariant_submanifold_with_nonzero_h(self):
        # 4-dimensional psi eigenspace; a paraboloid inside it is invariant in
        # a whole neighborhood and genuinely curved, so h(X, PY) = s h(X, Y)
        # is exercised with h != 0.
        struct6 = diagonal_golden(["psi"] * 4 + ["one_minus_psi"] * 2).to_float()
        imm = ImmersionSpec.from_strings(
            ["u1", "u2"], ["u1", "u2", "u1^2+u2^2", "u1*u2", "0", "0"]
        )
        for point in [(0.0, 0.0), (0.3, -0.2)]:
            sff_residuals = invariant_connection_check(imm, point, struct6)
            assert max(sff_residuals) <= 1e-9
        sff = second_fundamental_form(imm, (0.3, -0.2), struct6.metric)
        assert np.abs(sff.h).max() > 0.1  # the check was not vacuous

    def test_not_invariant_input_raises(self):
        imm = ImmersionSpec.from_strings(["u1"], ["u1", "psi*u1"])
        struct2 = diagonal_golden(["psi", "one_minus_psi"]).to_float()
        with pytest.raises(NotInvariant):
            invariant_connection_check(imm, (0.0,), struct2)


class TestAntiInvariantProbe:
    STRUCT = diagonal_golden(["psi", "one_minus_psi", "psi", "one_minus_psi"]).to_float()

    def test_affine_anti_invariant_vanishes(self):
        imm = ImmersionSpec.from_strings(["u1", "u2"], ["u1", "psi*u1", "u2", "psi*u2"])
        assert anti_invariant_shape_vanishing(imm, (0.2, 0.8), self.STRUCT) == 0.0

    def test_curved_anti_invariant_patch_reports_violation(self):
        # Quadratic normal bending keeps the origin tangent space
        # anti-invariant but makes h nonzero; since the normal space equals
        # phi(TM) here, A_{phi Y} cannot vanish.  The probe must report that.
        imm = ImmersionSpec.from_strings(
            ["u1", "u2"], ["u1", "psi*u1+0.05*u1^2", "u2", "psi*u2"]
        )
        probe = anti_invariant_shape_vanishing(imm, (0.0, 0.0), self.STRUCT)
        assert probe > 1e-3  # finding: the vanishing claim fails off the affine case

    def test_invariant_input_raises(self):
        imm = ImmersionSpec.from_strings(
            ["u1", "u2"], ["u1*cos(0.5)", "u1*sin(0.5)", "u2", "0"]
        )
        with pytest.raises(NotAntiInvariant):
            anti_invariant_shape_vanishing(imm, (0.0, 0.0), STRUCT4)
