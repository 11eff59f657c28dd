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
import math
import unittest

import numpy as np
import pytest

from treematch import errors
from treematch.clustering import ClusterConfig
from treematch.costs import EditCosts
from treematch.ged import exact_ged_bruteforce
from treematch.graph import Dataset, Graph
from treematch.methods import (
    METHODS,
    ged_bp,
    ged_exact,
    ged_greedy,
    ged_linear,
    make_method,
    resolve_tree_kind,
)
from treematch.sampling import random_gnp
from treematch.tree import validate_ultrametric
from treematch.wl import WlConfig


def labelled_dataset(count=12, max_vertices=4, seed=0):
    rng = np.random.default_rng(seed)
    graphs = [
        random_gnp(int(rng.integers(1, max_vertices + 1)), 0.5, int(rng.integers(10**6)), alphabet=2)
        for _ in range(count)
    ]
    return Dataset(graphs, [k % 2 for k in range(count)], "tiny")


def attributed_dataset():
    graphs = [
        Graph(2, [(0, 1)], vertex_attributes=[[0.0], [0.0]]),
        Graph(2, [(0, 1)], vertex_attributes=[[10.0], [10.0]]),
    ]
    return Dataset(graphs, [0, 1], "points")


class TestTreeKind(unittest.TestCase):
    def test_auto(self):
        self.assertEqual(resolve_tree_kind(labelled_dataset(), "auto"), "wl")
        self.assertEqual(resolve_tree_kind(attributed_dataset(), "auto"), "cluster")
        self.assertEqual(resolve_tree_kind(attributed_dataset(), "wl"), "wl")

    def test_unknown(self):
        with pytest.raises(errors.ConfigurationError):
            resolve_tree_kind(labelled_dataset(), "forest")


class TestMethodBase(unittest.TestCase):
    def test_registry(self):
        self.assertEqual(sorted(METHODS), ["bp", "exact-bf", "greedy", "linear"])
        self.assertIsInstance(make_method("greedy", labelled_dataset()), ged_greedy)
        with pytest.raises(errors.ConfigurationError):
            make_method("astar", labelled_dataset())

    def test_params(self):
        ds = labelled_dataset()
        self.assertEqual(ged_bp(ds).params, "tv=1.0,te=1.0")
        self.assertEqual(ged_linear(ds, EditCosts(0.5, 2.0)).params, "tv=0.5,te=2.0,tree=wl,it=7,edge_labels=False")
        self.assertEqual(
            ged_linear(attributed_dataset(), literal_epsilon=True).params,
            "tv=1.0,te=1.0,tree=cluster,leaves=300,seed=0,lloyd_max_iter=100,lloyd_tol=1e-06,eps=literal",
        )

    def test_counts_pairs(self):
        method = ged_bp(labelled_dataset())
        method(0, 1)
        method(1, 1)
        self.assertEqual(method.statistics["pairs"], 2)

    def test_pair_outside_dataset(self):
        with pytest.raises(errors.ArgumentError):
            ged_bp(labelled_dataset(count=3))(0, 3)

    def test_with_costs(self):
        method = ged_greedy(labelled_dataset()).with_costs(EditCosts(tau_vertex=2.0))
        self.assertIsInstance(method, ged_greedy)
        self.assertEqual(method.costs.tau_vertex, 2.0)


class TestLinear(unittest.TestCase):
    def test_tree_scaled_to_half_tau(self):
        method = ged_linear(labelled_dataset(), EditCosts(tau_vertex=0.6), wl=WlConfig(iterations=2))
        check = validate_ultrametric(method.tree, set(method.rho.values()))
        self.assertTrue(check)
        self.assertTrue(math.isclose(check.radius, 0.3))
        self.assertIn("tree_seconds", method.statistics)
        self.assertEqual(method.statistics["tree_nodes"], method.hierarchy.tree.node_count)

    def test_with_costs_reuses_hierarchy(self):
        method = ged_linear(labelled_dataset())
        again = method.with_costs(EditCosts(tau_vertex=1.7))
        self.assertIs(again.hierarchy, method.hierarchy)
        self.assertEqual(again.tree_kind, "wl")
        check = validate_ultrametric(again.tree, set(again.rho.values()))
        self.assertTrue(math.isclose(check.radius, 0.85))

    def test_upper_bound(self):
        ds = labelled_dataset(count=16)
        method = ged_linear(ds)
        for i in range(16):
            for j in range(i, 16):
                self.assertGreaterEqual(method(i, j).cost, exact_ged_bruteforce(ds[i], ds[j], method.costs))

    def test_cluster_tree(self):
        method = ged_linear(attributed_dataset(), cluster=ClusterConfig(leaves=2))
        self.assertEqual(method.tree_kind, "cluster")
        result = method(0, 1)
        # both vertices substituted at distance 10, the edge kept
        self.assertTrue(math.isclose(result.cost, 20.0))
        self.assertTrue(math.isclose(result.assignment_cost, 2.0))
        self.assertEqual(method(0, 0).cost, 0)


class TestExactMethod(unittest.TestCase):
    def test_matches_bruteforce(self):
        ds = labelled_dataset(count=6)
        method = ged_exact(ds)
        result = method(2, 3)
        self.assertEqual(result.cost, exact_ged_bruteforce(ds[2], ds[3], EditCosts()))
        self.assertEqual(result.cost, result.assignment_cost)

    def test_too_large(self):
        ds = Dataset([Graph(5), Graph(5)], [0, 1], "big")
        with pytest.raises(errors.CapacityError):
            ged_exact(ds)(0, 1)
