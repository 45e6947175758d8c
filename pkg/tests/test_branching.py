import os
import sys
import unittest

import numpy as np

# Add the project root to the path
sys.path.insert(0, os.path.dirname(os.path.dirname(__file__)))  # noqa: E402
from mtc_coset.branching import BranchingBounds, solve_branching  # noqa: E402
from mtc_coset.errors import SearchLimitError  # noqa: E402
from mtc_coset.fixtures import diagonal_coset, ising_coset  # noqa: E402
from mtc_coset.generators import minimal_model, su2_level  # noqa: E402
from mtc_coset.modular_core import trivial_modular_data  # noqa: E402


class TestSolveBranching(unittest.TestCase):

    def test_ising_triple_has_one_solution(self):
        """The GKO branching is the only family for su2_2 x Ising over su2_1 x su2_1"""
        cs = ising_coset()
        solutions = solve_branching(cs.md1, cs.md2, cs.mdc)
        self.assertEqual(len(solutions), 1)
        self.assertTrue(np.array_equal(solutions[0].branching, cs.branching))

    def test_inconsistent_triple(self):
        """Dimensions cannot match when C is su2_1"""
        solutions = solve_branching(su2_level(2), minimal_model(3, 4), su2_level(1))
        self.assertEqual(solutions, [])

    def test_trivial_triple(self):
        md = minimal_model(3, 4)
        solutions = solve_branching(trivial_modular_data(), md, md)
        self.assertEqual(len(solutions), 1)
        self.assertTrue(np.array_equal(solutions[0].branching[:, 0, :], np.eye(3, dtype=int)))

    def test_search_limit(self):
        cs = ising_coset()
        with self.assertRaises(SearchLimitError) as context:
            solve_branching(cs.md1, cs.md2, cs.mdc, BranchingBounds(max_candidates=0))
        self.assertIn("max_candidates", str(context.exception))

    def test_free_direction_limit(self):
        cs = ising_coset()
        with self.assertRaises(SearchLimitError):
            solve_branching(cs.md1, cs.md2, cs.mdc, BranchingBounds(max_free=-1))

    def test_diagonal_level_two(self):
        cs = diagonal_coset(2)
        solutions = solve_branching(cs.md1, cs.md2, cs.mdc, BranchingBounds(entry_bound=2))
        self.assertEqual(len(solutions), 1)
        self.assertTrue(np.array_equal(solutions[0].branching, cs.branching))


if __name__ == "__main__":
    unittest.main()
