#!/usr/bin/env python3
"""
Unit tests for ℝ-tube calculus

Membership, orthogonality, intersection, involutions, projections and the
ℝ × SL(n,ℝ)/SO(n) splitting of the standard tube.
"""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

import unittest

import numpy as np

from src.errors import DisjointTubesError, DomainError, NonMaximalError
from src.geometry import (
    LagrangianFrame,
    RTube,
    SiegelPoint,
    act_on_lagrangian,
    act_on_siegel,
    contains_point,
    intersect_tubes,
    involution_matrix,
    is_causal_pair,
    product_split,
    project_lagrangian,
    projected_vectorial_distance,
    sl_distance,
    symplectic_form,
    tubes_orthogonal,
    vectorial_distance,
)
from src.geometry.tubes import orthogonality_residual, reflect_lagrangian
from tests.fixtures import random_pd, random_symmetric, random_symplectic, rng


def chart(X) -> LagrangianFrame:
    return LagrangianFrame.from_chart(np.atleast_2d(X))


def moved(g, tube: RTube) -> RTube:
    return RTube(act_on_lagrangian(g, tube.first), act_on_lagrangian(g, tube.second))


class TestMembership(unittest.TestCase):
    """Points of a tube"""

    def setUp(self):
        self.rng = rng(20)

    def test_standard_tube(self):
        """iY lies on 𝒴_{0,l∞}; X + iY with X ≠ 0 does not"""
        tube = RTube.standard(2)
        Y = random_pd(self.rng, 2)
        self.assertTrue(contains_point(tube, SiegelPoint.imaginary(Y)))
        self.assertFalse(contains_point(tube, SiegelPoint(np.diag([1.0, 0.0]), Y)))

    def test_equivariance(self):
        """g·iY lies on g·𝒴_{0,l∞}"""
        g = random_symplectic(self.rng, 3)
        point = act_on_siegel(g, SiegelPoint.imaginary(random_pd(self.rng, 3)))
        self.assertTrue(contains_point(moved(g, RTube.standard(3)), point))

    def test_same_as_ignores_order(self):
        """Tubes are unordered pairs"""
        tube = RTube.standard(2)
        self.assertTrue(tube.same_as(tube.reversed()))
        self.assertFalse(tube.same_as(RTube(chart(np.eye(2)), LagrangianFrame.infinity(2))))

    def test_requires_transverse_endpoints(self):
        """Endpoints must be transverse"""
        with self.assertRaises(DomainError):
            RTube(chart(np.eye(2)), chart(np.diag([1.0, 2.0])))


class TestOrthogonality(unittest.TestCase):
    """Orthogonal tubes and their intersection"""

    def setUp(self):
        self.rng = rng(21)
        self.standard = RTube.standard(2)
        self.unit = RTube(chart(np.eye(2)), chart(-np.eye(2)))

    def test_orthogonal_pair(self):
        """𝒴_{0,l∞} ⟂ 𝒴_{Id,−Id}"""
        self.assertTrue(tubes_orthogonal(self.standard, self.unit))
        self.assertTrue(tubes_orthogonal(self.unit, self.standard))
        self.assertLess(orthogonality_residual(self.standard, self.unit), 1e-9)

    def test_not_orthogonal(self):
        """𝒴_{0,l∞} and 𝒴_{2Id,−Id} cross at an angle: R = 1.5·Id"""
        skew = RTube(chart(2.0 * np.eye(2)), chart(-np.eye(2)))
        self.assertFalse(tubes_orthogonal(self.standard, skew))
        self.assertAlmostEqual(orthogonality_residual(self.standard, skew), 0.5 * np.sqrt(2.0), places=9)

    def test_orthogonality_equivariant(self):
        """Orthogonality survives any symplectic change of coordinates"""
        g = random_symplectic(self.rng, 2)
        self.assertTrue(tubes_orthogonal(moved(g, self.standard), moved(g, self.unit)))

    def test_non_interleaving_tubes(self):
        """Tubes whose endpoints do not interleave are never orthogonal"""
        outside = RTube(chart(np.eye(2)), chart(2.0 * np.eye(2)))
        self.assertFalse(tubes_orthogonal(self.standard, outside))
        self.assertEqual(orthogonality_residual(self.standard, outside), float("inf"))

    def test_intersection(self):
        """𝒴_{0,l∞} ∩ 𝒴_{P,Q} = i·(P # −Q)"""
        point = intersect_tubes(self.standard, self.unit)
        np.testing.assert_allclose(point.Z, 1j * np.eye(2), atol=1e-10)
        skew = intersect_tubes(self.standard, RTube(chart(2.0 * np.eye(2)), chart(-np.eye(2))))
        np.testing.assert_allclose(skew.Y, np.sqrt(2.0) * np.eye(2), atol=1e-10)
        np.testing.assert_allclose(skew.X, np.zeros((2, 2)), atol=1e-10)

    def test_intersection_equivariant(self):
        """g·(t₁ ∩ t₂) = g·t₁ ∩ g·t₂"""
        g = random_symplectic(self.rng, 2)
        P, Q = random_pd(self.rng, 2), -random_pd(self.rng, 2)
        other = RTube(chart(P), chart(Q))
        expected = act_on_siegel(g, intersect_tubes(self.standard, other))
        point = intersect_tubes(moved(g, self.standard), moved(g, other))
        np.testing.assert_allclose(point.Z, expected.Z, atol=1e-8)

    def test_disjoint_tubes(self):
        """Non-interleaving endpoints raise DisjointTubesError"""
        with self.assertRaises(DisjointTubesError):
            intersect_tubes(self.standard, RTube(chart(np.eye(2)), chart(2.0 * np.eye(2))))


class TestInvolution(unittest.TestCase):
    """σ_{a,b}: −1 on the first endpoint, +1 on the second"""

    def setUp(self):
        self.rng = rng(22)

    def test_standard_involution(self):
        """σ on 𝒴_{0,l∞} is diag(Id, −Id) and negates charts"""
        tube = RTube.standard(2)
        sigma = involution_matrix(tube)
        np.testing.assert_allclose(sigma, np.diag([1.0, 1.0, -1.0, -1.0]), atol=1e-12)
        X = random_symmetric(self.rng, 2)
        np.testing.assert_allclose(reflect_lagrangian(tube, chart(X)).chart, -X, atol=1e-10)

    def test_anti_symplectic_involution(self):
        """σ² = Id, σᵀJσ = −J, endpoints fixed"""
        g = random_symplectic(self.rng, 3)
        tube = moved(g, RTube.standard(3))
        sigma = involution_matrix(tube)
        J = symplectic_form(3)
        np.testing.assert_allclose(sigma @ sigma, np.eye(6), atol=1e-9)
        np.testing.assert_allclose(sigma.T @ J @ sigma, -J, atol=1e-9)
        self.assertTrue(reflect_lagrangian(tube, tube.first).same_as(tube.first))
        self.assertTrue(reflect_lagrangian(tube, tube.second).same_as(tube.second))

    def test_sign_on_endpoints(self):
        """−1 on the first endpoint, +1 on the second"""
        g = random_symplectic(self.rng, 2)
        tube = moved(g, RTube.standard(2))
        sigma = involution_matrix(tube)
        np.testing.assert_allclose(sigma @ tube.first.frame, -tube.first.frame, atol=1e-9)
        np.testing.assert_allclose(sigma @ tube.second.frame, tube.second.frame, atol=1e-9)


class TestProjection(unittest.TestCase):
    """Projections of Lagrangians onto a tube"""

    def setUp(self):
        self.rng = rng(23)

    def test_projection_on_standard_tube(self):
        """p_{0,l∞}(A) = iA for A PD"""
        A = random_pd(self.rng, 2)
        point = project_lagrangian(RTube.standard(2), chart(A))
        np.testing.assert_allclose(point.Z, 1j * A, atol=1e-10)

    def test_projection_lies_on_tube(self):
        """Projections land on the tube in any coordinates"""
        g = random_symplectic(self.rng, 2)
        tube = moved(g, RTube.standard(2))
        l = act_on_lagrangian(g, chart(random_pd(self.rng, 2)))
        self.assertTrue(contains_point(tube, project_lagrangian(tube, l)))

    def test_projection_rejects_outside(self):
        """A Lagrangian of mixed signature is in neither interval"""
        with self.assertRaises(NonMaximalError):
            project_lagrangian(RTube.standard(2), chart(np.diag([1.0, -1.0])))

    def test_projected_distance(self):
        """(log μ) for R(0, A, B, l∞) = A⁻¹B"""
        tube = RTube.standard(2)
        distance = projected_vectorial_distance(tube, chart(np.eye(2)), chart(np.diag([np.exp(1.0), np.exp(2.0)])))
        np.testing.assert_allclose(distance.as_array(), [2.0, 1.0], atol=1e-9)
        self.assertEqual(projected_vectorial_distance(tube, chart(np.eye(2)), chart(np.eye(2))).components, (0.0, 0.0))

    def test_projected_distance_matches_points(self):
        """Equal to the vectorial distance between the projections"""
        tube = RTube.standard(2)
        A = random_pd(self.rng, 2)
        B = A + random_pd(self.rng, 2)
        expected = vectorial_distance(project_lagrangian(tube, chart(A)), project_lagrangian(tube, chart(B)))
        distance = projected_vectorial_distance(tube, chart(A), chart(B))
        np.testing.assert_allclose(distance.as_array(), expected.as_array(), atol=1e-8)


class TestSplitting(unittest.TestCase):
    """ℝ × SL(n,ℝ)/SO(n) coordinates and causality"""

    def setUp(self):
        self.rng = rng(24)

    def test_product_split(self):
        """iY ↦ (log det Y/√n, Y/det(Y)^{1/n})"""
        split = product_split(SiegelPoint.imaginary(np.diag([np.e, np.e ** 3])))
        self.assertAlmostEqual(split.euclid, 4.0 / np.sqrt(2.0), places=10)
        np.testing.assert_allclose(split.sl_part, np.diag([np.exp(-1.0), np.e]), atol=1e-10)
        self.assertAlmostEqual(float(np.linalg.det(split.sl_part)), 1.0, places=10)

    def test_split_requires_standard_tube(self):
        """Points off the standard tube are rejected"""
        with self.assertRaises(DomainError):
            product_split(SiegelPoint(np.eye(2), np.eye(2)))

    def test_riemannian_splitting(self):
        """d_R² = (Δeuclid)² + d_SL² along the standard tube"""
        Y1, Y2 = random_pd(self.rng, 3), random_pd(self.rng, 3)
        Z1, Z2 = SiegelPoint.imaginary(Y1), SiegelPoint.imaginary(Y2)
        s1, s2 = product_split(Z1), product_split(Z2)
        total = vectorial_distance(Z1, Z2).riemannian
        pieces = np.hypot(s1.euclid - s2.euclid, sl_distance(s1.sl_part, s2.sl_part))
        self.assertAlmostEqual(total, pieces, places=7)

    def test_causal_pair(self):
        """iA → iB causal iff B − A is PD"""
        A = random_pd(self.rng, 2)
        B = A + random_pd(self.rng, 2)
        self.assertTrue(is_causal_pair(SiegelPoint.imaginary(A), SiegelPoint.imaginary(B)))
        self.assertFalse(is_causal_pair(SiegelPoint.imaginary(B), SiegelPoint.imaginary(A)))


def run_tests():
    """Run all tests"""
    print("=" * 60)
    print("🧪 Running ℝ-tube tests")
    print("=" * 60)
    print()

    suite = unittest.TestLoader().loadTestsFromModule(sys.modules[__name__])
    runner = unittest.TextTestRunner(verbosity=2)
    result = runner.run(suite)

    print()
    print("=" * 60)
    if result.wasSuccessful():
        print("✅ ALL TESTS PASSED!")
        print(f"   {result.testsRun} tests run, 0 failures")
        return 0
    else:
        print("❌ SOME TESTS FAILED!")
        print(f"   {result.testsRun} tests run")
        print(f"   {len(result.failures)} failures")
        print(f"   {len(result.errors)} errors")
        return 1


if __name__ == '__main__':
    exit(run_tests())
