import os
import sys
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))  # noqa: E402
from mtc_coset.errors import StructuralError  # noqa: E402
from mtc_coset.generators import (  # noqa: E402
    clebsch_gordan_fusion,
    kac_label,
    kac_table,
    minimal_model,
    minimal_model_weight,
    pointed_cyclic,
    su2_level,
)
from mtc_coset.modular_core import quantum_dims, validate, verlinde  # noqa: E402


class TestSu2(unittest.TestCase):

    def test_levels_one_to_eight_validate(self):
        """su2_k passes every invariant with tight residuals"""
        for k in range(1, 9):
            with self.subTest(k=k):
                report = validate(su2_level(k))
                self.assertTrue(report.passed, [c.name for c in report.failed()])
                for check in report.checks:
                    if check.residual is not None and check.name != "verlinde_integrality":
                        self.assertLess(check.residual, 1e-9, check.name)
                self.assertLess(report.get("verlinde_integrality").residual, 1e-6)

    def test_fusion_matches_clebsch_gordan(self):
        for k in range(1, 9):
            with self.subTest(k=k):
                self.assertTrue(np.array_equal(verlinde(su2_level(k)).n, clebsch_gordan_fusion(k)))

    def test_level_two(self):
        md = su2_level(2)
        self.assertEqual(md.labels, ("0", "1", "2"))
        np.testing.assert_allclose(md.twists, [1, np.exp(2j * np.pi * 3 / 16), -1], atol=1e-12)
        dims, _ = quantum_dims(md)
        np.testing.assert_allclose(dims, [1, np.sqrt(2), 1], atol=1e-12)

    def test_level_zero_is_trivial(self):
        self.assertEqual(su2_level(0).rank, 1)

    def test_negative_level(self):
        with self.assertRaises(StructuralError):
            su2_level(-1)


class TestMinimalModels(unittest.TestCase):

    def test_unitary_series_validates(self):
        for p, q in ((3, 4), (4, 5), (5, 6)):
            with self.subTest(p=p, q=q):
                report = validate(minimal_model(p, q))
                self.assertTrue(report.passed, [c.name for c in report.failed()])

    def test_ising(self):
        """M(3,4) labels, weights and quantum dimensions"""
        md = minimal_model(3, 4)
        self.assertEqual(md.labels, ("(1,1)", "(1,2)", "(1,3)"))
        np.testing.assert_allclose(
            md.twists, np.exp(2j * np.pi * np.array([0, 1 / 16, 1 / 2])), atol=1e-12
        )
        np.testing.assert_allclose(md.s[0], [0.5, np.sqrt(2) / 2, 0.5], atol=1e-12)

    def test_kac_table_size(self):
        """The table has (p-1)(q-1)/2 entries"""
        for p, q in ((3, 4), (4, 5), (5, 6), (2, 5)):
            self.assertEqual(len(kac_table(p, q)), (p - 1) * (q - 1) // 2)

    def test_kac_label_identifies(self):
        self.assertEqual(kac_label(3, 4, 2, 3), (1, 1))
        self.assertEqual(kac_label(4, 5, 3, 2), (1, 3))

    def test_weight(self):
        self.assertAlmostEqual(minimal_model_weight(4, 5, 1, 2), 1 / 10)
        self.assertAlmostEqual(minimal_model_weight(4, 5, 2, 2), 3 / 80)

    def test_bad_parameters(self):
        for p, q in ((4, 6), (5, 4), (1, 3)):
            with self.subTest(p=p, q=q):
                with self.assertRaises(StructuralError):
                    minimal_model(p, q)


class TestPointed(unittest.TestCase):

    def test_rank_one(self):
        md = pointed_cyclic(1, 0)
        self.assertEqual(md.rank, 1)
        self.assertTrue(validate(md).passed)

    def test_semion(self):
        md = pointed_cyclic(2, 1)
        np.testing.assert_allclose(md.twists, [1, 1j], atol=1e-12)

    def test_odd_lift_gives_well_defined_twist(self):
        """For n*t odd the twist uses t + n"""
        md = pointed_cyclic(3, 1)
        np.testing.assert_allclose(md.twists[1], np.exp(4j * np.pi / 3), atol=1e-12)

    def test_degenerate_rejected(self):
        with self.assertRaises(StructuralError) as context:
            pointed_cyclic(4, 2)
        self.assertIn("degenerate", str(context.exception))

    def test_bad_order(self):
        with self.assertRaises(StructuralError):
            pointed_cyclic(0, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(min_value=1, max_value=9), st.integers(min_value=1, max_value=8))
def test_pointed_validates_when_nondegenerate(n, t):
    if np.gcd(n, t) != 1 and n > 1:
        return
    report = validate(pointed_cyclic(n, t))
    assert report.passed, [c.name for c in report.failed()]


if __name__ == "__main__":
    unittest.main()
