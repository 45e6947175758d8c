import os
import sys
import unittest
from unittest.mock import patch

import numpy as np

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))  # noqa: E402
from mtc_coset.errors import AlgebraError, ModuleCategoryError, StructuralError  # noqa: E402
from mtc_coset.extension import (  # noqa: E402
    algebra_dimension,
    build_module_fusion_system,
    commutation_check,
    decompose_module_category,
    fpdim_identities,
    gram_check,
    induce,
    induced_gram,
    is_local_induced,
    is_simple_current_algebra,
    local_modular_data,
    make_algebra,
    ring_homomorphism_check,
    unit_algebra,
)
from mtc_coset.coset import module_fusion_system  # noqa: E402
from mtc_coset.fixtures import ising_coset, ising_coset_algebra, pointed_diagonal_algebra  # noqa: E402
from mtc_coset.generators import minimal_model, su2_level  # noqa: E402
from mtc_coset.modular_core import deligne_product, mirror  # noqa: E402


class TestAlgebraObjects(unittest.TestCase):

    def setUp(self):
        self.su2 = su2_level(2)

    def test_unit_multiplicity(self):
        with self.assertRaises(AlgebraError) as context:
            make_algebra(self.su2, [2, 0, 0])
        self.assertIn("unit multiplicity", str(context.exception))

    def test_nontrivial_twist(self):
        """theta_2 = -1 on su2_2 so 0 + 2 is not an algebra"""
        with self.assertRaises(AlgebraError):
            make_algebra(self.su2, [1, 0, 1])

    def test_wrong_length(self):
        with self.assertRaises(StructuralError):
            make_algebra(self.su2, [1, 0])

    def test_ising_coset_algebra(self):
        algebra = ising_coset_algebra()
        self.assertEqual(algebra.base.rank, 9)
        self.assertEqual(algebra.support, [0, 8])
        self.assertAlmostEqual(algebra_dimension(algebra), 2.0)
        self.assertTrue(is_simple_current_algebra(algebra))

    def test_induction(self):
        """a_(1,sigma) restricts to 2 (1,sigma) on the Ising coset algebra"""
        algebra = ising_coset_algebra()
        vec = induce(algebra, 4).mult
        expected = np.zeros(9, dtype=int)
        expected[4] = 2
        self.assertEqual(vec.tolist(), expected.tolist())
        self.assertEqual(int(induced_gram(algebra)[4, 4]), 2)
        self.assertTrue(is_local_induced(algebra, 4))
        self.assertFalse(is_local_induced(algebra, 3))


class TestDecomposition(unittest.TestCase):

    def test_ising_coset_module_category(self):
        """Six simple modules of dims 1,1,1,1,sqrt2,sqrt2, four of them local"""
        basis = decompose_module_category(ising_coset_algebra())
        self.assertEqual(basis.rank, 6)
        np.testing.assert_allclose(
            sorted(basis.dims()), [1, 1, 1, 1, np.sqrt(2), np.sqrt(2)], atol=1e-9
        )
        self.assertEqual(len(basis.local_indices), 4)
        self.assertTrue(fpdim_identities(basis).passed)
        self.assertTrue(gram_check(basis).passed)
        self.assertEqual(basis.unit_index, 0)

    def test_split_simples_share_a_group(self):
        basis = decompose_module_category(ising_coset_algebra())
        split = [s for s in basis.simples if s.restriction[4] == 1]
        self.assertEqual(len(split), 2)
        self.assertEqual(split[0].group, split[1].group)
        self.assertIsNone(split[0].representative)
        self.assertTrue(all(s.local for s in split))
        labels = basis.labels()
        self.assertEqual(len(set(labels)), 6)
        self.assertTrue(any(label.endswith("#2]") for label in labels))

    def test_pointed_diagonal(self):
        basis = decompose_module_category(pointed_diagonal_algebra())
        self.assertEqual(basis.rank, 2)
        self.assertEqual(len(basis.local_indices), 1)
        self.assertTrue(fpdim_identities(basis).passed)

    def test_unit_algebra(self):
        """Modules over the unit are the category itself, all local"""
        md = su2_level(3)
        basis = decompose_module_category(unit_algebra(md))
        self.assertEqual(basis.rank, md.rank)
        self.assertEqual(basis.local_indices, list(range(md.rank)))

    def test_lagrangian_algebra_by_gram_factorization(self):
        """The diagonal algebra of Ising x Ising^rev has one local module"""
        ising = minimal_model(3, 4)
        ambient = deligne_product(ising, mirror(ising))
        m = np.zeros(9, dtype=int)
        m[[0, 4, 8]] = 1
        algebra = make_algebra(ambient, m)
        self.assertFalse(is_simple_current_algebra(algebra))
        basis = decompose_module_category(algebra)
        self.assertEqual(basis.rank, 3)
        self.assertEqual(len(basis.local_indices), 1)
        self.assertTrue(fpdim_identities(basis).passed)

    def test_rank_limit(self):
        with patch.dict(os.environ, {"MTC_COSET_MAX_RANK": "4"}):
            with self.assertRaises(ModuleCategoryError) as context:
                decompose_module_category(ising_coset_algebra())
        self.assertIn("limit", str(context.exception))


class TestModuleFusion(unittest.TestCase):

    def test_ising_coset_operators(self):
        """Split simples are resolved by the fusion rules of the coset category"""
        system = module_fusion_system(ising_coset())
        basis = system.basis
        self.assertEqual(system.v.shape, (9, 6, 6))
        self.assertEqual(system.t.shape, (4, 6, 6))
        self.assertTrue(commutation_check(system).passed)
        self.assertTrue(ring_homomorphism_check(system).passed)
        unit = basis.unit_index
        np.testing.assert_array_equal(system.v[0], np.eye(6, dtype=int))
        self.assertEqual(system.local_simples[0], unit)
        np.testing.assert_array_equal(system.t[0], np.eye(6, dtype=int))

    def test_split_simples_need_local_data(self):
        basis = decompose_module_category(ising_coset_algebra())
        with self.assertRaises(ModuleCategoryError):
            build_module_fusion_system(basis)

    def test_local_restrictions_required(self):
        basis = decompose_module_category(pointed_diagonal_algebra())
        md, _ = local_modular_data(basis)
        with self.assertRaises(StructuralError):
            build_module_fusion_system(basis, md)

    def test_local_modular_data_of_pointed_diagonal(self):
        basis = decompose_module_category(pointed_diagonal_algebra())
        md, restrictions = local_modular_data(basis)
        self.assertEqual(md.rank, 1)
        np.testing.assert_allclose(md.s, [[1.0]], atol=1e-12)
        self.assertEqual(restrictions.tolist(), [[1, 0, 0, 1]])

    def test_local_modular_data_refuses_fixed_points(self):
        basis = decompose_module_category(ising_coset_algebra())
        with self.assertRaises(ModuleCategoryError):
            local_modular_data(basis)

    def test_local_modular_data_refuses_su2_4_fixed_point(self):
        """su2_4 with its D_4 simple current algebra 0 + 4 has fixed point 2"""
        md = su2_level(4)
        algebra = make_algebra(md, [1, 0, 0, 0, 1])
        basis = decompose_module_category(algebra)
        self.assertEqual(len(basis.local_indices), 3)
        with self.assertRaises(ModuleCategoryError):
            local_modular_data(basis)


if __name__ == "__main__":
    unittest.main()
