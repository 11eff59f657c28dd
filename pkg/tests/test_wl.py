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
import collections
import itertools
import unittest

import networkx as nx
import numpy as np
import pytest

from treematch import errors
from treematch.assignment import embed_dataset, l1_distance
from treematch.graph import Dataset, Graph
from treematch.methods import ged_linear
from treematch.sampling import random_gnp
from treematch.tree import path_distance, validate_ultrametric
from treematch.wl import ColourDictionary, WlConfig, build_wl_tree, initial_colours, refine, refine_step


def path_graph(n, labels=None):
    return Graph(n, [(v, v + 1) for v in range(n - 1)], vertex_labels=labels)


def as_networkx(g):
    nxg = nx.Graph()
    for v in range(g.vertex_count):
        nxg.add_node(v, label=int(g.vertex_labels[v]))
    nxg.add_edges_from(g.edges.tolist())
    return nxg


class TestColourDictionary(unittest.TestCase):
    def test_first_encounter_order(self):
        d = ColourDictionary()
        level = d.new_level()
        self.assertEqual([d.lookup(level, key, -1) for key in ("b", "a", "b", "c")], [0, 1, 0, 2])
        self.assertEqual(d.colour_count(level), 3)
        self.assertEqual(d.parents[level], [-1, -1, -1])

    def test_levels_are_separate(self):
        d = ColourDictionary()
        d.new_level()
        d.lookup(0, "x", -1)
        d.new_level()
        self.assertEqual(d.lookup(1, "y", 0), 0)
        self.assertEqual(len(d), 2)


class TestRefinement(unittest.TestCase):
    def test_unlabelled_graphs_start_uniform(self):
        d = ColourDictionary()
        (colours,) = initial_colours([path_graph(3)], d)
        self.assertEqual(colours.tolist(), [0, 0, 0])

    def test_path_endpoints_share_a_colour(self):
        d = ColourDictionary()
        graphs = [path_graph(3, [0, 0, 0])]
        (colours,) = refine_step(graphs, initial_colours(graphs, d), d)
        self.assertEqual(colours[0], colours[2])
        self.assertNotEqual(colours[0], colours[1])

    def test_dictionary_is_shared(self):
        graphs = [path_graph(3, [0, 0, 0]), path_graph(2, [0, 0])]
        _, levels = refine(graphs, 1)
        # endpoints of both paths have one neighbour of colour 0
        self.assertEqual(levels[1][0][0], levels[1][1][0])

    def test_classes_nest(self):
        rng = np.random.default_rng(30)
        graphs = [random_gnp(int(rng.integers(2, 12)), 0.3, int(rng.integers(1000)), alphabet=3) for _ in range(20)]
        dictionary, levels = refine(graphs, 4)
        for level in range(1, 5):
            for gi in range(len(graphs)):
                for old, new in zip(levels[level - 1][gi].tolist(), levels[level][gi].tolist()):
                    self.assertEqual(dictionary.parents[level][new], old)

    def test_edge_labels(self):
        graphs = [
            Graph(2, [(0, 1)], vertex_labels=[0, 0], edge_labels=[1]),
            Graph(2, [(0, 1)], vertex_labels=[0, 0], edge_labels=[2]),
        ]
        _, plain = refine(graphs, 1)
        _, labelled = refine(graphs, 1, edge_labels=True)
        self.assertEqual(plain[1][0].tolist(), plain[1][1].tolist())
        self.assertNotEqual(labelled[1][0][0], labelled[1][1][0])

    def test_histograms_match_networkx_hash(self):
        rng = np.random.default_rng(31)
        graphs = [random_gnp(int(rng.integers(3, 6)), 0.5, int(rng.integers(1000)), alphabet=2) for _ in range(40)]
        _, levels = refine(graphs, 3)
        histograms = [collections.Counter(colours.tolist()) for colours in levels[-1]]
        hashes = [nx.weisfeiler_lehman_graph_hash(as_networkx(g), node_attr="label", iterations=3) for g in graphs]
        for a, b in itertools.combinations(range(len(graphs)), 2):
            self.assertEqual(histograms[a] == histograms[b], hashes[a] == hashes[b])


class TestWlTree(unittest.TestCase):
    def test_zero_iterations(self):
        graphs = [Graph(1, vertex_labels=[0]), Graph(1, vertex_labels=[1])]
        tree, rho = build_wl_tree(graphs, WlConfig(iterations=0, level_weight=0.5))
        self.assertEqual(tree.node_count, 3)
        self.assertEqual(path_distance(tree, rho[(0, 0)], rho[(1, 0)]), 1.0)

    def test_leaves_at_common_depth(self):
        rng = np.random.default_rng(32)
        graphs = [random_gnp(int(rng.integers(1, 10)), 0.3, int(rng.integers(1000)), alphabet=2) for _ in range(15)]
        config = WlConfig(iterations=3, level_weight=0.25)
        tree, rho = build_wl_tree(graphs, config)
        self.assertEqual(tree.height, 4)
        mapped = set(rho.values())
        self.assertEqual({int(tree.depth[v]) for v in mapped}, {4})
        check = validate_ultrametric(tree, mapped)
        self.assertTrue(check)
        self.assertEqual(check.radius, 1.0)

    def test_isomorphic_graphs_embed_equally(self):
        g = Graph(4, [(0, 1), (1, 2), (2, 3)], vertex_labels=[1, 0, 0, 2])
        h = Graph(4, [(3, 2), (2, 1), (1, 0)], vertex_labels=[2, 0, 0, 1])
        tree, rho = build_wl_tree([g, h])
        first, second = embed_dataset(tree, rho, [0, 1])
        self.assertEqual(l1_distance(first, second), 0)

    def test_bad_config(self):
        with pytest.raises(errors.ConfigurationError):
            WlConfig(iterations=-1)
        with pytest.raises(errors.ConfigurationError):
            WlConfig(level_weight=0)

    def test_distance_counts_differing_levels(self):
        rng = np.random.default_rng(33)
        graphs = [random_gnp(int(rng.integers(1, 7)), 0.4, int(rng.integers(1000)), alphabet=2) for _ in range(8)]
        config = WlConfig(iterations=3, level_weight=0.25)
        tree, rho = build_wl_tree(graphs, config)
        _, levels = refine(graphs, 3)
        vertices = [(gi, v) for gi, g in enumerate(graphs) for v in range(g.vertex_count)]
        for (gi, v), (gj, u) in itertools.combinations(vertices, 2):
            differing = sum(levels[level][gi][v] != levels[level][gj][u] for level in range(4))
            self.assertAlmostEqual(path_distance(tree, rho[(gi, v)], rho[(gj, u)]), 2 * 0.25 * differing)

    def test_refinement_stops_at_stable_partition(self):
        dictionary, _ = refine([path_graph(5)], 4)
        self.assertEqual([dictionary.colour_count(level) for level in range(5)], [1, 2, 3, 3, 3])

        rng = np.random.default_rng(34)
        graphs = [random_gnp(int(rng.integers(2, 9)), 0.3, int(rng.integers(1000)), alphabet=2) for _ in range(10)]
        dictionary, _ = refine(graphs, 6)
        counts = [dictionary.colour_count(level) for level in range(7)]
        stable = next((i for i in range(6) if counts[i] == counts[i + 1]), None)
        if stable is not None:
            self.assertEqual(set(counts[stable:]), {counts[stable]})

    def test_cycle_keeps_one_colour(self):
        cycle = Graph(5, [(v, (v + 1) % 5) for v in range(5)])
        dictionary, levels = refine([cycle], 4)
        for level in range(5):
            self.assertEqual(dictionary.colour_count(level), 1)
            self.assertEqual(len(set(levels[level][0].tolist())), 1)

    def test_triangle_and_path_differ_after_one_iteration(self):
        triangle = Graph(3, [(0, 1), (1, 2), (0, 2)])
        dataset = Dataset([triangle, path_graph(3)], [0, 1], "shapes")
        result = ged_linear(dataset, wl=WlConfig(iterations=1))(0, 1)
        self.assertGreater(result.cost, 0)
        self.assertGreater(result.assignment_cost, 0)
