import os
import sys
import unittest

import numpy as np
import pytest

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))  # noqa: E402
from mtc_coset.coset import check_assumptions, kw_group_diagnostics, s_covariance_check  # noqa: E402
from mtc_coset.errors import StructuralError  # noqa: E402
from mtc_coset.fixtures import (  # noqa: E402
    FIXTURES,
    diagonal_coset,
    double_system,
    ising_coset,
    pointed_system,
    random_pointed_system,
)
from mtc_coset.generators import minimal_model  # noqa: E402
from mtc_coset.modular_core import validate  # noqa: E402


class TestReferenceFixtures(unittest.TestCase):

    def test_ising_is_diagonal_level_one(self):
        cs = ising_coset()
        self.assertTrue(np.array_equal(cs.branching, diagonal_coset(1).branching))
        self.assertEqual(cs.algebra.support, [0, 8])

    def test_diagonal_rejects_small_levels(self):
        for k in (0, -3):
            with self.subTest(k=k):
                with self.assertRaises(StructuralError):
                    diagonal_coset(k)

    def test_diagonal_ranks(self):
        """su2_{k+1} x M(k+2, k+3) over su2_k x su2_1"""
        for k in (1, 2, 3):
            with self.subTest(k=k):
                cs = diagonal_coset(k)
                self.assertEqual(cs.md1.rank, k + 2)
                self.assertEqual(cs.md2.rank, (k + 1) * (k + 2) // 2)
                self.assertEqual(cs.mdc.rank, 2 * (k + 1))
                self.assertTrue(s_covariance_check(cs).passed)

    def test_double_branching_pairs_duals(self):
        cs = double_system(minimal_model(3, 4))
        self.assertEqual(cs.mdc.rank, 1)
        self.assertTrue(np.array_equal(cs.branching[0], np.eye(3, dtype=int)))
        self.assertTrue(validate(cs.md2).passed)

    def test_registry(self):
        self.assertEqual(set(FIXTURES), {"ising", "trivial", "double"})
        for name, factory in FIXTURES.items():
            with self.subTest(name=name):
                self.assertTrue(s_covariance_check(factory()).passed)


class TestPointedSystems(unittest.TestCase):

    def test_trivial_subgroup(self):
        """The trivial subgroup gives C = semion x semion"""
        cs = pointed_system(2, 1, 2, 1, 1, 1)
        self.assertEqual(cs.mdc.rank, 4)
        for report in check_assumptions(cs):
            self.assertTrue(report.passed, report.name)


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_random_pointed_systems_agree(seed):
    """Random pointed coset systems satisfy the standing assumptions and the
    four group conditions agree (all true, every label is invertible)."""
    rng = np.random.default_rng(seed)
    for _ in range(25):
        cs = random_pointed_system(rng)
        diag = kw_group_diagnostics(cs)
        assert diag.agree, (cs.name, diag.values)
        assert diag.is_group, cs.name
        assert s_covariance_check(cs).passed, cs.name


if __name__ == "__main__":
    unittest.main()
