import os
import sys
import unittest

import numpy as np

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))  # noqa: E402
from mtc_coset.coset import (  # noqa: E402
    GroupDiagnostics,
    analyze,
    b_coeff,
    check_assumptions,
    check_dim_formulas,
    coset_system,
    field_identification,
    identify_induced,
    kw_closure_check,
    kw_criteria,
    kw_group_diagnostics,
    kw_hypothesis,
    kw_map,
    kw_set,
    kw_sign_check,
    mirror_extension_check,
    mixed_branching_check,
    multiplicity_structure,
    pairing_bound_check,
    s_covariance_check,
    stabilizer_check,
    stabilizers,
)
from mtc_coset.errors import PreconditionError, StructuralError  # noqa: E402
from mtc_coset.fixtures import (  # noqa: E402
    diagonal_coset,
    double_system,
    embedding_system,
    ising_coset,
    trivial_system,
)
from mtc_coset.generators import minimal_model, su2_level  # noqa: E402
from mtc_coset.modular_core import ModularData, validate  # noqa: E402

EPS = 1e-9


def _perturb_twist(md: ModularData, index: int, phase: float) -> ModularData:
    twists = md.twists.copy()
    twists[index] = twists[index] * np.exp(1j * phase)
    return ModularData(name=f"{md.name}~", labels=md.labels, s=md.s, twists=twists)


class TestCosetConstruction(unittest.TestCase):

    def test_shape_mismatch(self):
        cs = ising_coset()
        with self.assertRaises(StructuralError) as context:
            coset_system(cs.md1, cs.md2, cs.mdc, cs.branching[:3])
        self.assertIn("shape", str(context.exception))

    def test_negative_entries(self):
        cs = ising_coset()
        z = cs.branching.copy()
        z[1, 0, 0] = -1
        with self.assertRaises(StructuralError):
            coset_system(cs.md1, cs.md2, cs.mdc, z)

    def test_j_sets(self):
        cs = ising_coset()
        self.assertEqual(cs.j_sets, [[0, 2], [1], [1], [0, 2]])
        self.assertEqual(cs.j1, [0, 2])
        self.assertEqual(cs.pair_label(1, 1), "((0,1),1)")


class TestIsingCoset(unittest.TestCase):

    def setUp(self):
        self.cs = ising_coset()

    def test_assumptions(self):
        for report in check_assumptions(self.cs):
            self.assertTrue(report.passed, report.name)
        self.assertTrue(s_covariance_check(self.cs).passed)
        self.assertLess(s_covariance_check(self.cs).residual, 1e-8)
        self.assertTrue(mirror_extension_check(self.cs).passed)

    def test_kw_set(self):
        """KW = {0, 2} by both the twist and the monodromy criterion"""
        criteria = kw_criteria(self.cs)
        self.assertEqual([a for a, ok in criteria.twist.items() if ok], [0, 2])
        self.assertEqual([a for a, ok in criteria.monodromy.items() if ok], [0, 2])
        self.assertEqual([a for a, ok in criteria.induced_local.items() if ok], [0, 2])
        self.assertEqual(kw_set(self.cs), [0, 2])

    def test_identify_induced(self):
        self.assertEqual(identify_induced(self.cs, 2), 3)
        self.assertEqual(kw_map(self.cs), {0: 0, 2: 3})
        with self.assertRaises(PreconditionError):
            identify_induced(self.cs, 1)
        self.assertTrue(kw_closure_check(self.cs).passed)

    def test_field_identification(self):
        fi = field_identification(self.cs)
        self.assertEqual(fi.orbits, [[0, 3], [1, 2]])
        self.assertEqual(fi.supports, [{0, 2}, {1}])
        self.assertTrue(fi.report.passed)

    def test_dimension_formulas(self):
        """c_i = 1 and the three dimension expressions agree"""
        report, c = check_dim_formulas(self.cs)
        self.assertTrue(report.passed, report.violations)
        np.testing.assert_allclose(c, np.ones(4), atol=EPS)
        self.assertLess(report.residual, EPS)
        self.assertLess(abs(b_coeff(self.cs, 0, 0) - 0.5), 1e-12)
        self.assertLess(abs(b_coeff(self.cs, 1, 1) - np.sqrt(2) / 2), 1e-12)

    def test_group_diagnostics(self):
        diag = kw_group_diagnostics(self.cs)
        self.assertEqual(diag.values, (True, True, True, True))
        self.assertTrue(diag.report().passed)

    def test_kw_hypothesis(self):
        result = kw_hypothesis(self.cs)
        self.assertLess(result.max_imag, EPS)
        self.assertGreater(result.min_real, -EPS)
        self.assertEqual(result.triples, 12)
        self.assertLess(abs(result.products[(1, 1, 2)] - np.sqrt(2) / 4), 1e-10)
        self.assertTrue(result.report().passed)
        self.assertTrue(kw_sign_check(self.cs).passed)

    def test_stabilizers(self):
        """G^(0,1) is trivial: M^(1,1) moves M^(0,1) to M^(1,0)"""
        g_i, g_ia = stabilizers(self.cs, 1, 1)
        self.assertEqual(g_i, [0])
        self.assertEqual(g_ia, [0])
        g_i, _ = stabilizers(self.cs, 0, 0)
        self.assertEqual(g_i, [0])
        self.assertTrue(stabilizer_check(self.cs).passed)

    def test_multiplicity_structure(self):
        for i, js in enumerate(self.cs.j_sets):
            for alpha in js:
                with self.subTest(i=i, alpha=alpha):
                    report = multiplicity_structure(self.cs, i, alpha)
                    self.assertTrue(report.passed, report.violations)
                    self.assertEqual(report.details["inner_product"], 1)
                    self.assertEqual(report.details["stabilizer_order"], 1)

    def test_multiplicity_of_zero_pair(self):
        with self.assertRaises(PreconditionError):
            multiplicity_structure(self.cs, 1, 0)

    def test_pairing_and_mixed_branching(self):
        report = pairing_bound_check(self.cs)
        self.assertTrue(report.passed, report.violations)
        self.assertEqual(report.details["pairs"], 6)
        self.assertEqual(report.details["simple_pairs"], 6)
        self.assertTrue(mixed_branching_check(self.cs).passed)

    def test_analyze_is_clean(self):
        report = analyze(self.cs)
        failed = [(s.title, s.error, [c.name for c in s.checks if not c.passed]) for s in report.sections]
        self.assertTrue(report.passed, failed)
        titles = [s.title for s in report.sections]
        self.assertEqual(titles[0], "Standing assumptions")
        self.assertEqual(titles[-1], "Spectral verification")
        self.assertEqual(report.section("Kac-Wakimoto set").tables["KW"], ["0", "2"])


class TestOtherFixtures(unittest.TestCase):

    def test_diagonal_level_two(self):
        """k = 2: KW = {0, 3} and 24 KW-hypothesis triples, all positive"""
        cs = diagonal_coset(2)
        self.assertEqual(kw_set(cs), [0, 3])
        result = kw_hypothesis(cs)
        self.assertEqual(result.triples, 24)
        self.assertLess(result.max_imag, EPS)
        self.assertGreater(result.min_real, -EPS)
        report, c = check_dim_formulas(cs)
        self.assertTrue(report.passed, report.violations)
        self.assertTrue(kw_group_diagnostics(cs).agree)

    def test_diagonal_level_two_pairing_is_exact(self):
        """KW = {0, 3} is a group, so the pairing bound holds with equality"""
        report = pairing_bound_check(diagonal_coset(2))
        self.assertTrue(report.passed, report.violations)
        self.assertTrue(report.details["equality_required"])

    def test_diagonal_level_two_analyze(self):
        report = analyze(diagonal_coset(2))
        self.assertTrue(report.passed, [(s.title, s.error) for s in report.sections if not s.passed])

    def test_trivial_fixture(self):
        cs = trivial_system(minimal_model(3, 4))
        self.assertEqual(kw_set(cs), [0])
        result = kw_hypothesis(cs)
        self.assertGreater(result.min_real, -EPS)
        self.assertLess(result.max_imag, EPS)
        report = analyze(cs)
        self.assertTrue(report.passed, [(s.title, s.error) for s in report.sections if not s.passed])

    def test_double_fixture(self):
        cs = double_system(su2_level(2))
        for report in check_assumptions(cs):
            self.assertTrue(report.passed, report.name)
        self.assertEqual(kw_set(cs), [0])
        result = kw_hypothesis(cs)
        self.assertGreater(result.min_real, -EPS)
        self.assertLess(result.max_imag, EPS)
        self.assertTrue(kw_group_diagnostics(cs).agree)

    def test_diagonal_rejects_level_zero(self):
        with self.assertRaises(StructuralError):
            diagonal_coset(0)


class TestGroupDiagnostics(unittest.TestCase):

    def test_embedding_conditions_disagree(self):
        """su2_10 in so(5)_1: KW = {0, 10} is a group, the other conditions fail"""
        cs = embedding_system()
        self.assertEqual(cs.j_sets, [[0, 6], [3, 7], [4, 10]])
        self.assertEqual(kw_set(cs), [0, 10])
        diag = kw_group_diagnostics(cs)
        self.assertEqual(diag.values, (True, False, False, False))
        self.assertFalse(diag.agree)
        self.assertTrue(diag.is_group)
        report = diag.report()
        self.assertFalse(report.passed)
        self.assertIn("conditions disagree", report.violations[0])
        self.assertFalse(report.details["c_all_one"])

    def test_embedding_breaks_unit_structure(self):
        reports = {r.name: r for r in check_assumptions(embedding_system())}
        self.assertFalse(reports["commutant_structure"].passed)
        self.assertTrue(reports["algebra_twist_trivial"].passed)

    def test_all_conditions_failing_agree(self):
        diag = GroupDiagnostics(False, False, False, False)
        self.assertTrue(diag.agree)
        self.assertFalse(diag.is_group)
        self.assertTrue(diag.report().passed)

    def test_single_broken_condition_fails(self):
        for broken in range(4):
            values = [True] * 4
            values[broken] = False
            with self.subTest(broken=broken):
                report = GroupDiagnostics(*values).report()
                self.assertFalse(report.passed)
                self.assertEqual(len(report.violations), 1)


class TestNegativeControls(unittest.TestCase):

    def test_perturbed_coset_twist(self):
        """A perturbed twist in C is caught by validate and by twist compatibility"""
        cs = ising_coset()
        mdc = _perturb_twist(cs.mdc, 1, 0.3)
        self.assertFalse(validate(mdc).passed)
        bad = coset_system(cs.md1, cs.md2, mdc, cs.branching)
        reports = {r.name: r for r in check_assumptions(bad)}
        self.assertFalse(reports["twist_compatibility"].passed)
        self.assertFalse(analyze(bad).passed)

    def test_perturbed_c2_twist(self):
        cs = ising_coset()
        md2 = _perturb_twist(cs.md2, 1, 0.2)
        self.assertFalse(validate(md2).passed)
        bad = coset_system(cs.md1, md2, cs.mdc, cs.branching)
        self.assertFalse(analyze(bad).passed)

    def test_wrong_branching_fails_covariance(self):
        cs = ising_coset()
        z = cs.branching.copy()
        z[1, 1, 1] = 0
        z[1, 1, 2] = 1
        bad = coset_system(cs.md1, cs.md2, cs.mdc, z)
        self.assertFalse(s_covariance_check(bad).passed)


if __name__ == "__main__":
    unittest.main()
