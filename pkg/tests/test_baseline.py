# Copyright 2026 The treematch Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
# http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
import itertools
import unittest

import numpy as np
import pytest
from scipy.optimize import linear_sum_assignment

from treematch import errors
from treematch.baseline import (
    FORBIDDEN,
    CostMatrix,
    bp_cost_matrix,
    greedy_rowwise,
    hungarian,
    strong_triangle_violations,
    ultra_cost_matrix,
)
from treematch.costs import EditCosts
from treematch.graph import Graph
from treematch.tree import NO_PARENT, CostTree, LeafMap, path_distance_matrix


def brute_force(matrix):
    n = matrix.shape[0]
    return min(sum(matrix[i, p[i]] for i in range(n)) for p in itertools.permutations(range(n)))


class TestCostMatrix(unittest.TestCase):
    def test_rejects_bad_entries(self):
        with pytest.raises(errors.ArgumentError):
            CostMatrix([[1.0, -1.0]])
        with pytest.raises(errors.ArgumentError):
            CostMatrix([[np.nan]])
        with pytest.raises(errors.ArgumentError):
            CostMatrix([[1.0], [2.0]])
        with pytest.raises(errors.ArgumentError):
            CostMatrix([1.0, 2.0])

    def test_order(self):
        self.assertEqual(CostMatrix(np.zeros((3, 3))).order, 3)
        self.assertRaises(errors.ArgumentError, getattr, CostMatrix(np.zeros((2, 3))), "order")


class TestHungarian(unittest.TestCase):
    def test_small(self):
        result = hungarian([[1, 2], [2, 1]])
        self.assertEqual(result.cost, 2)
        self.assertEqual(result.pairs, ((0, 0), (1, 1)))

    def test_against_brute_force(self):
        rng = np.random.default_rng(20)
        for _ in range(200):
            n = int(rng.integers(1, 7))
            matrix = rng.integers(0, 20, size=(n, n)).astype(float)
            result = hungarian(matrix)
            self.assertEqual(result.cost, brute_force(matrix))
            self.assertEqual(sorted(j for _, j in result.pairs), list(range(n)))

    def test_against_scipy(self):
        rng = np.random.default_rng(21)
        for _ in range(100):
            n = int(rng.integers(1, 30))
            matrix = rng.random((n, n))
            rows, cols = linear_sum_assignment(matrix)
            self.assertAlmostEqual(hungarian(matrix).cost, matrix[rows, cols].sum(), places=9)

    def test_forbidden_entries_are_avoided(self):
        result = hungarian([[FORBIDDEN, 1], [1, FORBIDDEN]])
        self.assertEqual(result.pairs, ((0, 1), (1, 0)))
        self.assertEqual(result.cost, 2)

    def test_no_admissible_bijection(self):
        with pytest.raises(errors.SolverError):
            hungarian([[FORBIDDEN, 1], [FORBIDDEN, 2]])


class TestGreedy(unittest.TestCase):
    def test_row_order_matters(self):
        result = greedy_rowwise([[0, 1], [0, 100]])
        self.assertEqual(result.pairs, ((0, 0), (1, 1)))
        self.assertEqual(result.cost, 101)

    def test_rectangular(self):
        result = greedy_rowwise([[3, 1, 2]])
        self.assertEqual(result.pairs, ((0, 1),))

    def test_never_below_optimum(self):
        rng = np.random.default_rng(22)
        for _ in range(100):
            matrix = rng.random((6, 6))
            self.assertGreaterEqual(greedy_rowwise(matrix).cost, hungarian(matrix).cost - 1e-12)

    def test_row_without_column(self):
        with pytest.raises(errors.SolverError):
            greedy_rowwise([[1, FORBIDDEN], [FORBIDDEN, FORBIDDEN]])


class TestBpCostMatrix(unittest.TestCase):
    def test_path_against_single_vertex(self):
        g = Graph(2, [(0, 1)], vertex_labels=[0, 1])
        h = Graph(1, vertex_labels=[0])
        c = bp_cost_matrix(g, h, EditCosts()).entries
        self.assertEqual(c.tolist(), [[1, 2, FORBIDDEN], [2, FORBIDDEN, 2], [1, 0, 0]])

    def test_deletion_uses_degree(self):
        g = Graph(3, [(0, 1), (0, 2)], vertex_labels=[0, 0, 0])
        h = Graph(1, vertex_labels=[0])
        c = bp_cost_matrix(g, h, EditCosts(tau_vertex=2.0, tau_edge=0.5)).entries
        self.assertEqual(np.diag(c[:3, 1:]).tolist(), [3.0, 2.5, 2.5])
        self.assertEqual(c[3, 0], 2.0)

    def test_edge_labels_enter_substitution(self):
        g = Graph(2, [(0, 1)], vertex_labels=[0, 0], edge_labels=[1])
        h = Graph(2, [(0, 1)], vertex_labels=[0, 0], edge_labels=[2])
        c = bp_cost_matrix(g, h, EditCosts()).entries
        self.assertEqual(c[:2, :2].tolist(), [[1, 1], [1, 1]])


class TestUltraCostMatrix(unittest.TestCase):
    def test_colocated(self):
        tree = CostTree([NO_PARENT, 0], [0, 0.5])
        rho = LeafMap(tree, {("g", 0): 1, ("h", 0): 1})
        c = ultra_cost_matrix(Graph(1), Graph(1), tree, rho, 1.0)
        self.assertEqual(c.entries.tolist(), [[0, 1], [1, 0]])

    def test_substitution_above_tau(self):
        tree = CostTree([NO_PARENT, 0, 0], [0, 1, 1])
        rho = LeafMap(tree, {("g", 0): 1, ("h", 0): 2})
        with pytest.raises(errors.CostModelError):
            ultra_cost_matrix(Graph(1), Graph(1), tree, rho, 1.0)


class TestStrongTriangle(unittest.TestCase):
    def test_exhaustive(self):
        self.assertEqual(strong_triangle_violations([[0, 1], [1, 3]]), [(1, 0, 0, 1)])

    def test_sampled(self):
        self.assertIn((1, 0, 0, 1), strong_triangle_violations([[0, 1], [1, 3]], samples=500, seed=3))

    def test_ultrametric_has_none(self):
        # two cherries under one root: every leaf at root distance 2
        tree = CostTree([NO_PARENT, 0, 0, 1, 1, 2, 2], [0, 1, 1, 1, 1, 1, 1])
        matrix = path_distance_matrix(tree, [3, 4, 5], [3, 5, 6, 4])
        self.assertEqual(strong_triangle_violations(matrix), [])

    def test_path_metric_has_some(self):
        tree = CostTree([NO_PARENT, 0, 1, 2], [0, 1, 1, 1])
        matrix = path_distance_matrix(tree, [0, 3], [1, 3])
        self.assertTrue(strong_triangle_violations(matrix))
