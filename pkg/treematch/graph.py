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

import functools
import typing

import numpy as np

from treematch.errors import ArgumentError


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


class Graph:
    """Undirected simple graph with optional labels and attributes.

    Vertices are ``0 .. vertex_count - 1``. Edges are stored once, as rows
    ``(u, v)`` with ``u < v``, in the order they were given. All arrays are
    read-only after construction.
    """

    def __init__(
        self,
        vertex_count: int,
        edges: typing.Iterable[typing.Tuple[int, int]] = (),
        vertex_labels: typing.Optional[typing.Sequence[int]] = None,
        vertex_attributes: typing.Optional[typing.Sequence[typing.Sequence[float]]] = None,
        edge_labels: typing.Optional[typing.Sequence[int]] = None,
    ) -> None:
        if vertex_count < 0:
            raise ArgumentError(f"vertex_count must be non-negative, got {vertex_count}")
        self.vertex_count = int(vertex_count)

        edge_array = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges, dtype=np.int64)
        edge_array = edge_array.reshape(-1, 2)
        if edge_array.size:
            if edge_array.min() < 0 or edge_array.max() >= self.vertex_count:
                raise ArgumentError("edge endpoint outside of [0, vertex_count)")
            if np.any(edge_array[:, 0] == edge_array[:, 1]):
                raise ArgumentError("self-loops are not allowed")
        edge_array = np.sort(edge_array, axis=1)
        codes = edge_array[:, 0] * max(self.vertex_count, 1) + edge_array[:, 1]
        if np.unique(codes).size != codes.size:
            raise ArgumentError("duplicate undirected edge")
        self.edges = _frozen(edge_array)

        self.vertex_labels: typing.Optional[np.ndarray] = None
        if vertex_labels is not None:
            labels = np.asarray(vertex_labels, dtype=np.int64).reshape(-1)
            if labels.size != self.vertex_count:
                raise ArgumentError(f"expected {self.vertex_count} vertex labels, got {labels.size}")
            if labels.size and labels.min() < 0:
                raise ArgumentError("vertex labels must be non-negative")
            self.vertex_labels = _frozen(labels)

        self.vertex_attributes: typing.Optional[np.ndarray] = None
        if vertex_attributes is not None:
            try:
                attributes = np.asarray(vertex_attributes, dtype=np.float64)
            except ValueError as e:
                raise ArgumentError("vertex attributes must share one dimension") from e
            if attributes.ndim == 1 and self.vertex_count == 0:
                attributes = attributes.reshape(0, 0)
            if attributes.ndim != 2 or attributes.shape[0] != self.vertex_count:
                raise ArgumentError(f"expected {self.vertex_count} attribute vectors of equal dimension")
            self.vertex_attributes = _frozen(attributes)

        self.edge_labels: typing.Optional[np.ndarray] = None
        if edge_labels is not None:
            labels = np.asarray(edge_labels, dtype=np.int64).reshape(-1)
            if labels.size != len(self.edges):
                raise ArgumentError(f"expected {len(self.edges)} edge labels, got {labels.size}")
            if labels.size and labels.min() < 0:
                raise ArgumentError("edge labels must be non-negative")
            self.edge_labels = _frozen(labels)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def attribute_dimension(self) -> typing.Optional[int]:
        if self.vertex_attributes is None:
            return None
        return self.vertex_attributes.shape[1]

    @functools.cached_property
    def degrees(self) -> np.ndarray:
        deg = np.bincount(self.edges.reshape(-1), minlength=self.vertex_count)
        return _frozen(deg.astype(np.int64))

    @functools.cached_property
    def adjacency(self) -> typing.Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """CSR adjacency ``(indptr, neighbours, edge_ids)``.

        Neighbours of ``v`` are ``neighbours[indptr[v]:indptr[v + 1]]``;
        ``edge_ids`` gives the row of ``edges`` each entry came from.
        """
        m = len(self.edges)
        src = np.concatenate([self.edges[:, 0], self.edges[:, 1]])
        dst = np.concatenate([self.edges[:, 1], self.edges[:, 0]])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        order = np.lexsort((dst, src))
        indptr = np.zeros(self.vertex_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=self.vertex_count), out=indptr[1:])
        return _frozen(indptr), _frozen(dst[order]), _frozen(eid[order])

    @functools.cached_property
    def edge_codes(self) -> np.ndarray:
        """Sorted codes ``u * vertex_count + v`` of the edges (``u < v``)."""
        codes = self.edges[:, 0] * self.vertex_count + self.edges[:, 1]
        return _frozen(np.sort(codes))

    @functools.cached_property
    def edge_code_order(self) -> np.ndarray:
        """Edge row of each entry of :attr:`edge_codes`."""
        codes = self.edges[:, 0] * self.vertex_count + self.edges[:, 1]
        return _frozen(np.argsort(codes, kind="stable"))

    def neighbours(self, v: int) -> np.ndarray:
        indptr, nbrs, _ = self.adjacency
        return nbrs[indptr[v] : indptr[v + 1]]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and np.array_equal(self.edges, other.edges)
            and _optional_equal(self.vertex_labels, other.vertex_labels)
            and _optional_equal(self.vertex_attributes, other.vertex_attributes)
            and _optional_equal(self.edge_labels, other.edge_labels)
        )

    __hash__ = None  # type: ignore

    def __repr__(self) -> str:
        extras = []
        if self.vertex_labels is not None:
            extras.append("vertex_labels")
        if self.vertex_attributes is not None:
            extras.append(f"attributes[{self.attribute_dimension}]")
        if self.edge_labels is not None:
            extras.append("edge_labels")
        suffix = f" with {', '.join(extras)}" if extras else ""
        return f"<Graph |V|={self.vertex_count} |E|={self.edge_count}{suffix}>"


def _optional_equal(a: typing.Optional[np.ndarray], b: typing.Optional[np.ndarray]) -> bool:
    if a is None or b is None:
        return a is None and b is None
    return np.array_equal(a, b)


class Dataset:
    """A named, labelled collection of graphs."""

    def __init__(self, graphs: typing.Sequence[Graph], class_labels: typing.Sequence[int], name: str) -> None:
        graphs = tuple(graphs)
        class_labels = tuple(int(c) for c in class_labels)
        if not graphs:
            raise ArgumentError("a dataset holds at least one graph")
        if len(class_labels) != len(graphs):
            raise ArgumentError(f"{len(graphs)} graphs but {len(class_labels)} class labels")
        self.graphs = graphs
        self.class_labels = class_labels
        self.name = name

    def __len__(self) -> int:
        return len(self.graphs)

    def __getitem__(self, index: int) -> Graph:
        return self.graphs[index]

    def __iter__(self) -> typing.Iterator[Graph]:
        return iter(self.graphs)

    @property
    def has_vertex_labels(self) -> bool:
        return all(g.vertex_labels is not None for g in self.graphs)

    @property
    def has_vertex_attributes(self) -> bool:
        return all(g.vertex_attributes is not None for g in self.graphs)

    @property
    def has_edge_labels(self) -> bool:
        return all(g.edge_labels is not None for g in self.graphs)

    def __repr__(self) -> str:
        return f"<Dataset {self.name!r}: {len(self.graphs)} graphs>"


class Split(typing.NamedTuple):
    """Disjoint train/validation/test index sequences into a dataset."""

    train: typing.Tuple[int, ...]
    validation: typing.Tuple[int, ...]
    test: typing.Tuple[int, ...]

    def check(self, dataset_size: int) -> "Split":
        parts = (self.train, self.validation, self.test)
        if not all(parts):
            raise ArgumentError("every part of a split must be non-empty")
        seen: typing.Set[int] = set()
        for part in parts:
            for i in part:
                if not 0 <= i < dataset_size:
                    raise ArgumentError(f"split index {i} outside of dataset of size {dataset_size}")
                if i in seen:
                    raise ArgumentError(f"split index {i} appears in more than one part")
                seen.add(i)
        return self
