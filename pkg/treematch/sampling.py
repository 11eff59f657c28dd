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

"""Seeded random graphs, splits and pair samples."""

import typing

import numpy as np

from treematch import _utils
from treematch.errors import ArgumentError, SplitError
from treematch.graph import Dataset, Graph, Split


def random_gnp(n: int, p: float, seed: int, alphabet: int = 1) -> Graph:
    """Erdős–Rényi graph: every vertex pair is an edge with probability ``p``.

    Vertex labels are drawn uniformly from ``[0, alphabet)``.
    """
    if n < 1:
        raise ArgumentError(f"n must be positive, got {n}")
    if alphabet < 1:
        raise ArgumentError(f"alphabet must be positive, got {alphabet}")
    p = _utils.check_probability(p)
    rng = np.random.default_rng(seed)
    rows = []
    for i in range(n - 1):
        js = np.flatnonzero(rng.random(n - i - 1) < p) + (i + 1)
        if js.size:
            rows.append(np.column_stack([np.full(js.size, i, dtype=np.int64), js]))
    edges = np.concatenate(rows) if rows else np.empty((0, 2), dtype=np.int64)
    labels = rng.integers(0, alphabet, size=n)
    return Graph(n, edges, vertex_labels=labels)


def stratified_split(dataset: Dataset, seed: int) -> Split:
    """Split every class into thirds.

    Members of a class are shuffled, then each part receives ``count // 3`` of
    them; the remaining one or two go to train, then validation.
    """
    rng = np.random.default_rng(seed)
    labels = np.asarray(dataset.class_labels)
    train: typing.List[int] = []
    validation: typing.List[int] = []
    test: typing.List[int] = []
    for label in np.unique(labels).tolist():
        members = np.flatnonzero(labels == label)
        if members.size < 3:
            raise SplitError(f"class {label} has {members.size} member(s), at least 3 are needed", label)
        members = rng.permutation(members).tolist()
        q, r = divmod(len(members), 3)
        sizes = [q + (1 if r > 0 else 0), q + (1 if r > 1 else 0), q]
        train.extend(members[: sizes[0]])
        validation.extend(members[sizes[0] : sizes[0] + sizes[1]])
        test.extend(members[sizes[0] + sizes[1] :])
    return Split(tuple(sorted(train)), tuple(sorted(validation)), tuple(sorted(test)))


def sample_pairs(dataset_size: int, count: int, seed: int) -> typing.List[typing.Tuple[int, int]]:
    """Draw ``count`` distinct index pairs ``(i, j)``, ``i < j``, sorted."""
    total = dataset_size * (dataset_size - 1) // 2
    if not 0 <= count <= total:
        raise ArgumentError(f"cannot draw {count} distinct pairs from {dataset_size} graphs")
    if count == 0:
        return []
    rng = np.random.default_rng(seed)
    codes = np.sort(rng.choice(total, size=count, replace=False))
    # row i starts at code i * (2n - i - 1) / 2
    i = np.arange(dataset_size, dtype=np.int64)
    starts = i * (2 * dataset_size - i - 1) // 2
    rows = np.searchsorted(starts, codes, side="right") - 1
    cols = codes - starts[rows] + rows + 1
    return list(zip(rows.tolist(), cols.tolist()))
