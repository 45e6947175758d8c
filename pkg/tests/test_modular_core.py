import os
import sys
import unittest

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))  # noqa: E402
from mtc_coset.errors import NotModularDataError, StructuralError  # noqa: E402
from mtc_coset.generators import minimal_model, pointed_cyclic, su2_level  # noqa: E402
from mtc_coset.modular_core import (  # noqa: E402
    FusionTensor,
    ModularData,
    ObjectVector,
    balancing_check,
    deligne_product,
    dual_permutation,
    fusion_product,
    fusion_tensor_check,
    is_invertible,
    mirror,
    monodromy_is_trivial,
    quantum_dims,
    trivial_modular_data,
    validate,
    verlinde,
)

PRIME_PAIRS = [(n, t) for n in range(2, 7) for t in range(1, n) if np.gcd(n, t) == 1]


def _with_twists(md: ModularData, twists) -> ModularData:
    return ModularData(name=f"{md.name}*", labels=md.labels, s=md.s, twists=twists)


class TestModularDataConstruction(unittest.TestCase):

    def test_non_square_s(self):
        with self.assertRaises(StructuralError):
            ModularData(name="bad", labels=("0", "1"), s=np.ones((2, 3)), twists=[1, 1])

    def test_label_count_mismatch(self):
        """S-matrix size must equal the label count"""
        with self.assertRaises(StructuralError) as context:
            ModularData(name="bad", labels=("0",), s=np.eye(2), twists=[1, 1])
        self.assertIn("labels", str(context.exception))

    def test_duplicate_labels(self):
        with self.assertRaises(StructuralError):
            ModularData(name="bad", labels=("a", "a"), s=np.eye(2), twists=[1, 1])

    def test_arrays_are_read_only(self):
        md = su2_level(2)
        with self.assertRaises(ValueError):
            md.s[0, 0] = 0

    def test_index_lookup(self):
        md = minimal_model(3, 4)
        self.assertEqual(md.index("(1,3)"), 2)
        self.assertEqual(md.index(1), 1)
        with self.assertRaises(StructuralError):
            md.index("(2,2)")

    def test_from_weights(self):
        md = su2_level(1)
        self.assertAlmostEqual(md.twists[1], np.exp(2j * np.pi * 0.25))


class TestVerlinde(unittest.TestCase):

    def test_ising_fusion(self):
        """sigma x sigma = 1 + epsilon"""
        n = verlinde(minimal_model(3, 4)).n
        self.assertEqual(n[1, 1].tolist(), [1, 0, 1])
        self.assertEqual(n[2, 2].tolist(), [1, 0, 0])
        self.assertEqual(n[1, 2].tolist(), [0, 1, 0])

    def test_non_integral_raises(self):
        """A unitary but non-modular S-matrix gives fractional fusion"""
        theta = np.pi / 5
        s = np.array([[np.cos(theta), np.sin(theta)], [np.sin(theta), -np.cos(theta)]])
        md = ModularData(name="rotated", labels=("0", "1"), s=s, twists=[1, 1])
        with self.assertRaises(NotModularDataError):
            verlinde(md)

    def test_quantum_dims_ising(self):
        dims, big_d = quantum_dims(minimal_model(3, 4))
        np.testing.assert_allclose(dims, [1, np.sqrt(2), 1], atol=1e-12)
        self.assertAlmostEqual(big_d, 2.0)

    def test_duals(self):
        self.assertEqual(dual_permutation(pointed_cyclic(5, 2)).tolist(), [0, 4, 3, 2, 1])
        self.assertEqual(dual_permutation(su2_level(4)).tolist(), [0, 1, 2, 3, 4])

    def test_monodromy_and_invertibles(self):
        ising = minimal_model(3, 4)
        self.assertTrue(is_invertible(ising, 2))
        self.assertFalse(is_invertible(ising, 1))
        self.assertTrue(monodromy_is_trivial(ising, 0, 1))
        self.assertFalse(monodromy_is_trivial(ising, 1, 2))
        self.assertFalse(monodromy_is_trivial(ising, 1, 1))

    def test_fusion_product(self):
        """sigma * (sigma + epsilon) = 1 + sigma + epsilon"""
        n = verlinde(minimal_model(3, 4))
        out = fusion_product(n, np.array([0, 1, 0]), np.array([0, 1, 1]))
        self.assertEqual(out.tolist(), [1, 1, 1])

    def test_fusion_tensor_check_flags_broken_tensor(self):
        n = verlinde(su2_level(2)).n.copy()
        n[1, 1, 0] = 0
        report = fusion_tensor_check(FusionTensor(n=n), np.arange(3))
        self.assertFalse(report.passed)
        self.assertTrue(any("delta" in v for v in report.violations))

    def test_object_vector(self):
        md = minimal_model(3, 4)
        vec = ObjectVector(md, [1, 0, 2])
        self.assertEqual(vec.describe(), "(1,1) + 2*(1,3)")
        self.assertAlmostEqual(vec.dimension(), 3.0)
        with self.assertRaises(StructuralError):
            ObjectVector(md, [1, -1, 0])


class TestValidate(unittest.TestCase):

    def test_trivial_data(self):
        report = validate(trivial_modular_data())
        self.assertTrue(report.passed)

    def test_report_lists_every_invariant(self):
        report = validate(su2_level(2))
        names = [c.name for c in report.checks]
        for name in (
            "symmetric",
            "unitary",
            "first_row_positive",
            "unit_twist",
            "twist_modulus",
            "charge_conjugation",
            "verlinde_integrality",
            "fusion_axioms",
            "balancing",
            "global_dimension",
        ):
            self.assertIn(name, names)
        self.assertTrue(report.passed)
        self.assertLess(report.get("unitary").residual, 1e-9)

    def test_flipped_twist_fails_balancing(self):
        """su2_2 with theta_2 = +1 is caught by the balancing equation"""
        md = su2_level(2)
        twists = md.twists.copy()
        twists[2] = 1.0
        report = validate(_with_twists(md, twists))
        self.assertFalse(report.passed)
        self.assertFalse(report.get("balancing").passed)
        self.assertGreater(report.get("balancing").residual, 1.0)
        self.assertLess(balancing_check(md), 1e-9)
        self.assertGreater(balancing_check(_with_twists(md, twists)), 1.0)

    def test_conjugated_twists_on_complex_s(self):
        """Conjugated twists over a complex S-matrix violate balancing"""
        md = pointed_cyclic(3, 2)
        report = validate(_with_twists(md, np.conj(md.twists)))
        self.assertFalse(report.get("balancing").passed)
        self.assertGreater(report.get("balancing").residual, 0.1)

    def test_conjugated_twists_on_real_s_is_the_mirror(self):
        """With a real S-matrix, conjugated twists are the mirror category"""
        md = su2_level(2)
        self.assertTrue(validate(mirror(md)).passed)

    def test_non_unit_twist(self):
        md = su2_level(1)
        report = validate(_with_twists(md, [1j, md.twists[1]]))
        self.assertFalse(report.get("unit_twist").passed)

    def test_non_unitary_minimal_model_fails(self):
        """Lee-Yang M(2,5) has a negative quantum dimension"""
        report = validate(minimal_model(2, 5))
        self.assertFalse(report.passed)
        self.assertFalse(report.get("first_row_positive").passed)


class TestDeligneProduct(unittest.TestCase):

    def test_labels_and_unit(self):
        md = deligne_product(su2_level(1), minimal_model(3, 4))
        self.assertEqual(md.rank, 6)
        self.assertEqual(md.labels[0], "(0,(1,1))")
        self.assertEqual(md.labels[4], "(1,(1,2))")

    def test_product_with_trivial_is_identity(self):
        md = su2_level(3)
        prod = deligne_product(trivial_modular_data(), md)
        np.testing.assert_allclose(prod.s, md.s)
        np.testing.assert_allclose(prod.twists, md.twists)

    def test_double_of_ising_validates(self):
        md = minimal_model(3, 4)
        self.assertTrue(validate(deligne_product(md, mirror(md))).passed)


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(PRIME_PAIRS), st.sampled_from(PRIME_PAIRS))
def test_pointed_products_are_modular(first, second):
    """Deligne products of pointed data validate and fuse componentwise"""
    md1 = pointed_cyclic(*first)
    md2 = pointed_cyclic(*second)
    prod = deligne_product(md1, md2)
    assert validate(prod).passed
    n = verlinde(prod).n
    n1 = verlinde(md1).n
    n2 = verlinde(md2).n
    r1, r2 = md1.rank, md2.rank
    expected = np.einsum("ace,bdf->abcdef", n1, n2).reshape(r1 * r2, r1 * r2, r1 * r2)
    assert np.array_equal(n, expected)


@settings(max_examples=12, deadline=None)
@given(st.integers(min_value=1, max_value=3), st.integers(min_value=3, max_value=4))
def test_su2_times_minimal_model_is_componentwise(k, p):
    """Dimensions, duals and fusion of su2_k x M(p,p+1) are those of the factors"""
    md1 = su2_level(k)
    md2 = minimal_model(p, p + 1)
    prod = deligne_product(md1, md2)
    r1, r2 = md1.rank, md2.rank

    d1, big_d1 = quantum_dims(md1)
    d2, big_d2 = quantum_dims(md2)
    dims, big_d = quantum_dims(prod)
    np.testing.assert_allclose(dims, np.outer(d1, d2).ravel(), atol=1e-9)
    assert abs(big_d - big_d1 * big_d2) < 1e-9

    dual1 = dual_permutation(md1)
    dual2 = dual_permutation(md2)
    expected_dual = [dual1[a] * r2 + dual2[b] for a in range(r1) for b in range(r2)]
    assert dual_permutation(prod).tolist() == expected_dual

    n1 = verlinde(md1).n
    n2 = verlinde(md2).n
    expected = np.einsum("ace,bdf->abcdef", n1, n2).reshape(r1 * r2, r1 * r2, r1 * r2)
    assert np.array_equal(verlinde(prod).n, expected)

    for a in range(prod.rank):
        for b in range(a, prod.rank):
            assert monodromy_is_trivial(prod, a, b) == monodromy_is_trivial(prod, b, a)


@settings(max_examples=20, deadline=None)
@given(st.sampled_from(PRIME_PAIRS))
def test_pointed_data_is_a_group(pair):
    """Every label of pointed data is invertible and fuses like Z_n"""
    md = pointed_cyclic(*pair)
    n = verlinde(md).n
    r = md.rank
    for a in range(r):
        assert is_invertible(md, a)
        for b in range(r):
            assert n[a, b].tolist() == [1 if c == (a + b) % r else 0 for c in range(r)]


if __name__ == "__main__":
    unittest.main()
