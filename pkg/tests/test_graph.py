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
import os
import tempfile
import unittest

import numpy as np
import pytest

from treematch import errors
from treematch.graph import Dataset, Graph, Split
from treematch.sampling import random_gnp, sample_pairs, stratified_split
from treematch.tudataset import load_split, load_tudataset, save_tudataset


def write_files(directory, name, **files):
    for suffix, lines in files.items():
        with open(os.path.join(directory, f"{name}_{suffix}.txt"), "w", encoding="utf-8") as f:
            f.write("".join(f"{line}\n" for line in lines))


class TestGraph(unittest.TestCase):
    def test_edges_are_canonical(self):
        g = Graph(3, [(2, 0), (1, 2)])
        self.assertEqual(g.edges.tolist(), [[0, 2], [1, 2]])
        self.assertEqual(g.edge_count, 2)
        self.assertEqual(g.degrees.tolist(), [1, 1, 2])
        self.assertEqual(sorted(g.neighbours(2).tolist()), [0, 1])

    def test_edge_codes(self):
        g = Graph(4, [(2, 3), (0, 1), (1, 3)])
        self.assertEqual(g.edge_codes.tolist(), [1, 7, 11])
        self.assertEqual(g.edges[g.edge_code_order].tolist(), [[0, 1], [1, 3], [2, 3]])

    def test_adjacency_edge_ids(self):
        g = Graph(3, [(0, 1), (1, 2)])
        indptr, nbrs, eids = g.adjacency
        self.assertEqual(indptr.tolist(), [0, 1, 3, 4])
        self.assertEqual(nbrs.tolist(), [1, 0, 2, 1])
        self.assertEqual(eids.tolist(), [0, 0, 1, 1])

    def test_rejects_bad_input(self):
        with pytest.raises(errors.ArgumentError):
            Graph(2, [(0, 0)])
        with pytest.raises(errors.ArgumentError):
            Graph(2, [(0, 1), (1, 0)])
        with pytest.raises(errors.ArgumentError):
            Graph(2, [(0, 2)])
        with pytest.raises(errors.ArgumentError):
            Graph(2, vertex_labels=[1])
        with pytest.raises(errors.ArgumentError):
            Graph(2, [(0, 1)], edge_labels=[1, 2])

    def test_arrays_are_read_only(self):
        g = Graph(2, [(0, 1)], vertex_labels=[3, 4])
        with pytest.raises(ValueError):
            g.vertex_labels[0] = 1

    def test_equality(self):
        self.assertEqual(Graph(2, [(1, 0)], vertex_labels=[1, 2]), Graph(2, [(0, 1)], vertex_labels=[1, 2]))
        self.assertNotEqual(Graph(2, [(0, 1)]), Graph(2, [(0, 1)], vertex_labels=[0, 0]))


class TestDataset(unittest.TestCase):
    def test_capabilities(self):
        ds = Dataset([Graph(1, vertex_labels=[0]), Graph(2, vertex_labels=[1, 1])], [0, 1], "toy")
        self.assertTrue(ds.has_vertex_labels)
        self.assertFalse(ds.has_vertex_attributes)
        self.assertFalse(ds.has_edge_labels)
        self.assertEqual(len(ds), 2)

    def test_label_count_mismatch(self):
        with pytest.raises(errors.ArgumentError):
            Dataset([Graph(1)], [0, 1], "toy")

    def test_split_check(self):
        Split((0,), (1,), (2,)).check(3)
        with pytest.raises(errors.ArgumentError):
            Split((0,), (0,), (2,)).check(3)
        with pytest.raises(errors.ArgumentError):
            Split((0,), (1,), (3,)).check(3)
        with pytest.raises(errors.ArgumentError):
            Split((0,), (), (2,)).check(3)


class TestLoadTudataset(unittest.TestCase):
    def setUp(self):
        self.tmp = tempfile.TemporaryDirectory()
        self.dir = self.tmp.name

    def tearDown(self):
        self.tmp.cleanup()

    def test_smallest_input(self):
        write_files(self.dir, "T", A=["1, 2", "2, 1"], graph_indicator=[1, 1, 2], graph_labels=[0, 1])
        ds = load_tudataset(self.dir, "T")
        self.assertEqual(len(ds), 2)
        self.assertEqual((ds[0].vertex_count, ds[0].edge_count), (2, 1))
        self.assertEqual((ds[1].vertex_count, ds[1].edge_count), (1, 0))
        self.assertEqual(ds.class_labels, (0, 1))

    def test_local_indices(self):
        write_files(
            self.dir,
            "T",
            A=["1, 2", "2, 1", "3, 5", "5, 3", "4, 5", "5, 4"],
            graph_indicator=[1, 1, 2, 2, 2],
            graph_labels=[1, 1],
            node_labels=[7, 8, 1, 2, 3],
        )
        ds = load_tudataset(self.dir, "T")
        self.assertEqual(ds[1].edges.tolist(), [[0, 2], [1, 2]])
        self.assertEqual(ds[1].vertex_labels.tolist(), [1, 2, 3])

    def test_missing_mandatory_file(self):
        write_files(self.dir, "T", A=["1, 2"])
        with pytest.raises(errors.IngestionError) as exc:
            load_tudataset(self.dir, "T")
        self.assertTrue(exc.value.path.endswith("T_graph_indicator.txt"))

    def test_ragged_attributes(self):
        write_files(
            self.dir,
            "T",
            A=["1, 2", "2, 1"],
            graph_indicator=[1, 1],
            graph_labels=[0],
            node_attributes=["0.5, 1.0", "0.25"],
        )
        with pytest.raises(errors.FormatError) as exc:
            load_tudataset(self.dir, "T")
        self.assertEqual(exc.value.line, 2)

    def test_edge_across_graphs(self):
        write_files(self.dir, "T", A=["1, 3"], graph_indicator=[1, 1, 2], graph_labels=[0, 0])
        with pytest.raises(errors.FormatError):
            load_tudataset(self.dir, "T")

    def test_one_direction_warns(self):
        write_files(self.dir, "T", A=["1, 2"], graph_indicator=[1, 1], graph_labels=[0])
        with self.assertLogs("treematch.tudataset", level="WARNING") as logs:
            ds = load_tudataset(self.dir, "T")
        self.assertEqual(ds[0].edge_count, 1)
        self.assertTrue(any("one direction" in line for line in logs.output))

    def test_edge_label_count_must_match_rows(self):
        for labels in ([1], [1, 1, 2]):
            write_files(
                self.dir, "T", A=["1, 2", "2, 1"], graph_indicator=[1, 1], graph_labels=[0], edge_labels=labels
            )
            with pytest.raises(errors.FormatError) as exc:
                load_tudataset(self.dir, "T")
            self.assertTrue(exc.value.path.endswith("T_edge_labels.txt"))

    def test_missing_graph_labels_default_to_zero(self):
        write_files(self.dir, "T", A=["1, 2", "2, 1"], graph_indicator=[1, 1, 2])
        with self.assertLogs("treematch.tudataset", level="WARNING"):
            ds = load_tudataset(self.dir, "T")
        self.assertEqual(ds.class_labels, (0, 0))

    def test_attributes_parse_exactly(self):
        write_files(
            self.dir, "T", A=[], graph_indicator=[1], graph_labels=[0], node_attributes=["0.1, 2.5e-3"]
        )
        ds = load_tudataset(self.dir, "T")
        self.assertEqual(ds[0].vertex_attributes.tolist(), [[0.1, 0.0025]])


def test_round_trip(tmp_path):
    rng = np.random.default_rng(3)
    graphs = []
    for n in (1, 4, 6):
        g = random_gnp(n, 0.5, int(rng.integers(1000)), alphabet=3)
        graphs.append(
            Graph(
                n,
                g.edges,
                vertex_labels=g.vertex_labels,
                vertex_attributes=rng.normal(size=(n, 2)),
                edge_labels=rng.integers(0, 4, size=g.edge_count),
            )
        )
    ds = Dataset(graphs, [0, 1, 1], "RT")
    save_tudataset(ds, str(tmp_path))
    again = load_tudataset(str(tmp_path), "RT")
    assert again.class_labels == ds.class_labels
    assert list(again.graphs) == list(ds.graphs)


def test_load_split(tmp_path):
    path = tmp_path / "split.txt"
    path.write_text("# predefined\ntrain: 0, 4\nvalidation: 1\n\ntest: 2,3\n")
    assert load_split(str(path)) == Split((0, 4), (1,), (2, 3))


def test_load_split_rejects_unknown_part(tmp_path):
    path = tmp_path / "split.txt"
    path.write_text("train: 0\nholdout: 1\n")
    with pytest.raises(errors.FormatError) as exc:
        load_split(str(path))
    assert exc.value.line == 2


class TestRandomGnp(unittest.TestCase):
    def test_extremes(self):
        self.assertEqual(random_gnp(3, 0.0, seed=1).edge_count, 0)
        self.assertEqual(random_gnp(3, 1.0, seed=1).edges.tolist(), [[0, 1], [0, 2], [1, 2]])

    def test_zero_vertices(self):
        with pytest.raises(errors.ArgumentError):
            random_gnp(0, 0.5, seed=1)

    def test_same_seed_same_graph(self):
        self.assertEqual(random_gnp(30, 0.2, seed=9, alphabet=4), random_gnp(30, 0.2, seed=9, alphabet=4))

    def test_edge_count_is_binomial(self):
        counts = np.array([random_gnp(100, 0.15, seed=s).edge_count for s in range(1000)])
        sigma = math.sqrt(4950 * 0.15 * 0.85)
        self.assertLess(abs(counts.mean() - 742.5), 4 * sigma / math.sqrt(1000))
        self.assertLess(abs(counts.std() - sigma), 0.1 * sigma)
        self.assertLess(np.max(np.abs(counts - 742.5)), 6 * sigma)


class TestStratifiedSplit(unittest.TestCase):
    @staticmethod
    def dataset(labels):
        return Dataset([Graph(1) for _ in labels], labels, "toy")

    def test_exact_thirds(self):
        ds = self.dataset([0, 0, 0, 1, 1, 1])
        split = stratified_split(ds, seed=0)
        for part in split:
            self.assertEqual(sorted(ds.class_labels[i] for i in part), [0, 1])

    def test_remainder_goes_to_train(self):
        ds = self.dataset([0, 0, 0, 0, 1, 1, 1])
        split = stratified_split(ds, seed=5)
        self.assertEqual(sum(ds.class_labels[i] == 0 for i in split.train), 2)
        self.assertEqual(len(split.validation), 2)
        self.assertEqual(len(split.test), 2)
        split.check(len(ds))

    def test_deterministic(self):
        ds = self.dataset([0, 1, 2] * 5)
        self.assertEqual(stratified_split(ds, seed=11), stratified_split(ds, seed=11))

    def test_small_class(self):
        with pytest.raises(errors.SplitError) as exc:
            stratified_split(self.dataset([0, 0, 0, 1, 1]), seed=0)
        self.assertEqual(exc.value.class_label, 1)


class TestSamplePairs(unittest.TestCase):
    def test_distinct_sorted_pairs(self):
        pairs = sample_pairs(40, 500, seed=2)
        self.assertEqual(len(pairs), 500)
        self.assertEqual(len(set(pairs)), 500)
        self.assertEqual(pairs, sorted(pairs))
        self.assertTrue(all(0 <= i < j < 40 for i, j in pairs))

    def test_all_pairs(self):
        self.assertEqual(sample_pairs(4, 6, seed=0), [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])

    def test_too_many(self):
        with pytest.raises(errors.ArgumentError):
            sample_pairs(4, 7, seed=0)
