#!/usr/bin/env python3
"""
Tests for the identity and inequality verifiers

Lower bounds on Fuchsian, diagonal and product representations, the
cross-ratio period identity, the doubled representation and the gap family.
"""

import sys
from pathlib import Path
sys.path.insert(0, str(Path(__file__).parent.parent))

import unittest

import numpy as np

from src.errors import DomainError, UnsupportedRankError
from src.spectrum import (
    basmajian_partial_sums,
    double_check,
    gap_experiment,
    theorem_b_terms,
    verify_theorem_a,
    verify_theorem_b,
)
from tests.fixtures import diagonal, fuchsian, product, twisted_diagonal

DEPTH = 3
ACCEPTANCE_DEPTH = 10


class TestLowerBounds(unittest.TestCase):
    """Finsler and Riemannian lower bounds"""

    def test_fuchsian_finsler(self):
        """n = 1: every check passes, the bound is the identity itself"""
        report = verify_theorem_a(fuchsian((2.0, 1.0, 3.0)), "finsler", depth=DEPTH)
        self.assertTrue(report.passed, report.failed)
        names = [verdict.name for verdict in report.verdicts]
        self.assertIn("term_chain[gamma0]", names)
        self.assertIn("lower_sum[gamma2]", names)
        self.assertIn("whole_surface", names)
        self.assertAlmostEqual(report.values["boundary_length"], 3.0, places=8)

    def test_product_both_metrics(self):
        """Product of two Fuchsian pants satisfies both bounds"""
        rho = product()
        spectra = [basmajian_partial_sums(rho, boundary, DEPTH) for boundary in range(3)]
        finsler = verify_theorem_a(rho, "finsler", spectra=spectra)
        riemannian = verify_theorem_a(rho, "riemannian", spectra=spectra)
        self.assertTrue(finsler.passed, finsler.failed)
        self.assertTrue(riemannian.passed, riemannian.failed)
        self.assertIn("length_comparison[gamma1]", [verdict.name for verdict in riemannian.verdicts])
        self.assertLess(finsler.values["lower_bound"], finsler.values["boundary_length"])

    def test_single_boundary_skips_whole_surface(self):
        """Without all three spectra there is no whole-surface verdict"""
        rho = diagonal(2)
        report = verify_theorem_a(rho, spectra=[basmajian_partial_sums(rho, 0, DEPTH)])
        self.assertTrue(report.passed, report.failed)
        self.assertNotIn("whole_surface", [verdict.name for verdict in report.verdicts])
        self.assertNotIn("boundary_length", report.values)

    def test_unknown_metric(self):
        """Only finsler and riemannian are known"""
        with self.assertRaises(DomainError):
            verify_theorem_a(fuchsian(), "hilbert", depth=0)


class TestEqualityCases(unittest.TestCase):
    """Diagonal embeddings attain the lower bound; distinct factors do not"""

    def test_diagonal_equality(self):
        """Lower sum equals the identity sum within 1e-6"""
        spectrum = basmajian_partial_sums(diagonal(2), 0, DEPTH)
        self.assertLess(abs(spectrum.lower_sum - spectrum.identity_sum), 1e-6)
        self.assertAlmostEqual(spectrum.riemannian_lower_sum, np.sqrt(2.0) * spectrum.identity_sum, places=8)

    def test_twisted_diagonal_equality(self):
        """Twisting by a rotation keeps the equality"""
        twisted = basmajian_partial_sums(twisted_diagonal(), 1, DEPTH)
        straight = basmajian_partial_sums(diagonal(2), 1, DEPTH)
        self.assertLess(abs(twisted.lower_sum - twisted.identity_sum), 1e-6)
        self.assertAlmostEqual(twisted.identity_sum, straight.identity_sum, places=8)

    def test_rank_three_diagonal(self):
        """n = 3: sums scale by n and the bound is attained"""
        base = basmajian_partial_sums(fuchsian(), 0, 2)
        spectrum = basmajian_partial_sums(diagonal(3), 0, 2)
        self.assertAlmostEqual(spectrum.identity_sum, 3.0 * base.identity_sum, places=7)
        self.assertLess(abs(spectrum.lower_sum - spectrum.identity_sum), 1e-6)

    def test_product_strict(self):
        """Every record with unequal lengths has lower < dF"""
        spectrum = basmajian_partial_sums(product(), 0, DEPTH)
        strict = [record for record in spectrum.records if record.ell_vect[0] - record.ell_vect[1] > 1e-3]
        self.assertTrue(strict)
        for record in strict:
            self.assertLess(record.lower_term, record.dF_term)


class TestPeriodIdentity(unittest.TestCase):
    """Σ log B against ℓ_B(γ) = 2ℓ^F(γ)"""

    def test_diagonal(self):
        """All verdicts pass and the period is twice the Finsler length"""
        rho = diagonal(2)
        report = verify_theorem_b(rho, 0, depth=4)
        self.assertTrue(report.passed, report.failed)
        spectrum = report.spectra[0]
        self.assertAlmostEqual(report.values["ell_B"], 2.0 * spectrum.ell_F, places=8)
        self.assertEqual(len(report.values["partial_sums"]), 5)
        self.assertTrue(np.all(np.diff(report.values["residuals"]) < 0))

    def test_terms_are_twice_dF(self):
        """log B per record = 2 dF_term"""
        rho = product()
        spectrum = basmajian_partial_sums(rho, 2, DEPTH)
        terms = theorem_b_terms(rho, spectrum)
        doubled = 2.0 * np.array([record.dF_term for record in spectrum.records])
        np.testing.assert_allclose(terms, doubled, atol=1e-8)

    def test_reuses_spectrum(self):
        """A precomputed spectrum is used as is"""
        rho = fuchsian()
        spectrum = basmajian_partial_sums(rho, 1, 2)
        report = verify_theorem_b(rho, spectrum=spectrum)
        self.assertIs(report.spectra[0], spectrum)
        self.assertIn("period[gamma1]", [verdict.name for verdict in report.verdicts])


class TestDouble(unittest.TestCase):
    """Doubled representation along a boundary"""

    def test_fuchsian_double(self):
        """Relations hold and doubled orthotubes have twice the Finsler length"""
        report = double_check(fuchsian(), 0, depth=2, count=5)
        self.assertTrue(report.passed, report.failed)
        self.assertEqual(len(report.values["doubled_gaps"]), 5)

    def test_product_double(self):
        """Same for a product representation in Sp(4,ℝ)"""
        report = double_check(product(), 1, depth=2, count=4)
        self.assertTrue(report.passed, report.failed)
        self.assertLess(report.verdicts[0].details["worst_residual"], 1e-7)


class TestGapExperiment(unittest.TestCase):
    """Lower bounds below η while ℓ^F(γ₀) = nL/2"""

    def test_gap(self):
        """Both lower bounds stay below η = 0.5 with ℓ^F = 2"""
        report = gap_experiment(n=2, L=2.0, eta=0.5, depth=6)
        self.assertTrue(report.passed, report.failed)
        spectrum = report.spectra[0]
        self.assertAlmostEqual(spectrum.ell_F, 2.0, places=6)
        self.assertLess(spectrum.lower_sum, 0.5)
        self.assertEqual(report.values["eps"], 0.125)

    def test_gap_needs_rank_two(self):
        """Other ranks are rejected"""
        with self.assertRaises(UnsupportedRankError):
            gap_experiment(n=3)


class TestAcceptance(unittest.TestCase):
    """Deep runs of the shipped scenarios"""

    @classmethod
    def setUpClass(cls):
        cls.deep = basmajian_partial_sums(fuchsian(), 0, ACCEPTANCE_DEPTH)

    def test_basmajian_regression_depth_six(self):
        """Cuffs (2, 2, 2), γ₀, depth 6: 1620 orthotubes, 2Σ = 1.99372"""
        spectrum = basmajian_partial_sums(fuchsian(), 0, 6)
        self.assertEqual(len(spectrum.records), 1620)
        self.assertAlmostEqual(2.0 * spectrum.identity_sum, 1.99372, delta=1e-5)
        self.assertAlmostEqual(spectrum.residual / spectrum.ell_F, 0.0031, delta=1e-4)

    def test_basmajian_residual_depth_ten(self):
        """The relative residual keeps shrinking below its depth-6 value"""
        relative = self.deep.residual / self.deep.ell_F
        self.assertGreater(relative, 0.0)
        self.assertLess(relative, 0.0031)
        self.assertTrue(self.deep.within_bound)
        self.assertTrue(np.all(np.diff(self.deep.by_depth["residual"].to_numpy()) < 0))
        self.assertEqual(self.deep.by_depth["records"].iloc[-1], len(self.deep.records))

    def test_period_identity_depth_ten(self):
        """Σ log B is within 5% of ℓ_B at depth 10"""
        report = verify_theorem_b(diagonal(2), 0, depth=ACCEPTANCE_DEPTH)
        self.assertTrue(report.passed, report.failed)
        self.assertLess(report.values["residuals"][-1] / report.values["ell_B"], 0.05)
        self.assertEqual(len(report.values["partial_sums"]), ACCEPTANCE_DEPTH + 1)

    def test_gap_depth_ten(self):
        """Both lower bounds stay below η = 0.5 at depth 10"""
        report = gap_experiment(n=2, L=2.0, eta=0.5, depth=ACCEPTANCE_DEPTH)
        self.assertTrue(report.passed, report.failed)
        self.assertLess(report.spectra[0].riemannian_lower_sum, 0.5)

    def test_double_ten_shortest(self):
        """The ten shortest orthotubes double to twice their Finsler length, n = 1 and n = 2"""
        for rho in (fuchsian(), diagonal(2)):
            with self.subTest(rho=rho.label):
                report = double_check(rho, 0, depth=4, count=10)
                self.assertTrue(report.passed, report.failed)
                self.assertEqual(len(report.values["doubled_gaps"]), 10)

    def test_rank_three_lower_bounds(self):
        """n = 3 diagonal at depth 8: both bounds hold and the Finsler bound is attained"""
        rho = diagonal(3)
        spectra = [basmajian_partial_sums(rho, boundary, 8) for boundary in range(3)]
        for metric in ("finsler", "riemannian"):
            with self.subTest(metric=metric):
                report = verify_theorem_a(rho, metric, spectra=spectra)
                self.assertTrue(report.passed, report.failed)
        for spectrum in spectra:
            self.assertLess(abs(spectrum.lower_sum - spectrum.identity_sum), 1e-6)
            self.assertAlmostEqual(spectrum.ell_F, 3.0, places=8)


def run_tests():
    """Run all tests"""
    print("=" * 60)
    print("🧪 Running identity and inequality tests")
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
