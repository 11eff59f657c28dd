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

"""Rooted, positively weighted trees and the metrics they define.

A :class:`CostTree` stores one parent pointer and one edge weight per node;
node ``v`` other than the root identifies the edge to its parent. The
distance between two nodes is the weight of the path joining them.
"""

import collections.abc
import functools
import hashlib
import logging
import typing

import numpy as np

from treematch import _utils
from treematch.errors import ArgumentError, CostModelError, FormatError

LOG = logging.getLogger(__name__)

NO_PARENT = -1


def _frozen(array: np.ndarray) -> np.ndarray:
    array.flags.writeable = False
    return array


def _gather(indptr: np.ndarray, values: np.ndarray, nodes: np.ndarray) -> np.ndarray:
    """Concatenate ``values[indptr[v]:indptr[v + 1]]`` for every ``v`` in ``nodes``."""
    starts = indptr[nodes]
    lengths = indptr[nodes + 1] - starts
    total = int(lengths.sum())
    if total == 0:
        return values[:0]
    shift = np.repeat(starts - np.cumsum(lengths) + lengths, lengths)
    return values[shift + np.arange(total)]


class CostTree:
    """Rooted tree with positive edge weights.

    :param parent: parent of every node, :data:`NO_PARENT` for the root.
    :param weight: weight of the edge from every node to its parent; the
        entry of the root is ignored and stored as 0.

    Depths, a breadth-first order, children lists and root distances are
    computed once at construction.
    """

    def __init__(self, parent: typing.Sequence[int], weight: typing.Sequence[float]) -> None:
        parent_array = np.array(parent, dtype=np.int64).reshape(-1)
        weight_array = np.array(weight, dtype=np.float64).reshape(-1)
        n = parent_array.size
        if n == 0:
            raise ArgumentError("a cost tree has at least one node")
        if weight_array.size != n:
            raise ArgumentError(f"{n} parents but {weight_array.size} weights")
        roots = np.flatnonzero(parent_array == NO_PARENT)
        if roots.size != 1:
            raise ArgumentError(f"expected exactly one root, found {roots.size}")
        root = int(roots[0])
        others = np.delete(np.arange(n), root)
        if others.size:
            if parent_array[others].min() < 0 or parent_array[others].max() >= n:
                raise ArgumentError("parent pointer outside of the tree")
            bad = others[~(np.isfinite(weight_array[others]) & (weight_array[others] > 0))]
            if bad.size:
                v = int(bad[0])
                raise ArgumentError(f"edge weights must be positive and finite, node {v} has {weight_array[v]!r}")
        weight_array[root] = 0.0

        # children in CSR form, each list sorted by node id
        child_counts = np.bincount(parent_array[others], minlength=n)
        child_indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(child_counts, out=child_indptr[1:])
        child_nodes = others[np.argsort(parent_array[others], kind="stable")]

        depth = np.full(n, -1, dtype=np.int64)
        root_distance = np.zeros(n, dtype=np.float64)
        levels = []
        frontier = np.array([root], dtype=np.int64)
        level = 0
        while frontier.size:
            depth[frontier] = level
            if level:
                root_distance[frontier] = root_distance[parent_array[frontier]] + weight_array[frontier]
            levels.append(frontier)
            frontier = _gather(child_indptr, child_nodes, frontier)
            level += 1
        order = np.concatenate(levels)
        if order.size != n:
            raise ArgumentError("parent pointers contain a cycle")

        self.root = root
        self.parent = _frozen(parent_array)
        self.weight = _frozen(weight_array)
        self.depth = _frozen(depth)
        self.order = _frozen(order)
        self.root_distance = _frozen(root_distance)
        self.child_indptr = _frozen(child_indptr)
        self.child_nodes = _frozen(child_nodes)

    @classmethod
    def from_edges(
        cls,
        node_count: int,
        edges: typing.Sequence[typing.Tuple[int, int]],
        weights: typing.Sequence[float],
        root: int = 0,
    ) -> "CostTree":
        """Orient an undirected weighted tree away from ``root``."""
        edge_array = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        weight_array = np.asarray(weights, dtype=np.float64).reshape(-1)
        if edge_array.shape[0] != node_count - 1:
            raise ArgumentError(f"a tree on {node_count} nodes has {node_count - 1} edges, got {edge_array.shape[0]}")
        if weight_array.size != edge_array.shape[0]:
            raise ArgumentError(f"{edge_array.shape[0]} edges but {weight_array.size} weights")
        if not 0 <= root < node_count:
            raise ArgumentError(f"root {root} outside of [0, {node_count})")
        if edge_array.size and (edge_array.min() < 0 or edge_array.max() >= node_count):
            raise ArgumentError("edge endpoint outside of the tree")
        m = edge_array.shape[0]
        src = np.concatenate([edge_array[:, 0], edge_array[:, 1]])
        dst = np.concatenate([edge_array[:, 1], edge_array[:, 0]])
        eid = np.concatenate([np.arange(m), np.arange(m)])
        by_src = np.argsort(src, kind="stable")
        indptr = np.zeros(node_count + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=node_count), out=indptr[1:])
        dst, eid = dst[by_src], eid[by_src]

        parent = np.full(node_count, NO_PARENT, dtype=np.int64)
        weight = np.zeros(node_count, dtype=np.float64)
        seen = np.zeros(node_count, dtype=bool)
        seen[root] = True
        frontier = np.array([root], dtype=np.int64)
        while frontier.size:
            starts = indptr[frontier]
            lengths = indptr[frontier + 1] - starts
            owners = np.repeat(frontier, lengths)
            nbrs = _gather(indptr, dst, frontier)
            via = _gather(indptr, eid, frontier)
            fresh = ~seen[nbrs]
            nbrs, via, owners = nbrs[fresh], via[fresh], owners[fresh]
            if np.unique(nbrs).size != nbrs.size:
                raise ArgumentError("edges contain a cycle")
            seen[nbrs] = True
            parent[nbrs] = owners
            weight[nbrs] = weight_array[via]
            frontier = nbrs
        if not seen.all():
            raise ArgumentError("edges do not connect all nodes")
        return cls(parent, weight)

    @property
    def node_count(self) -> int:
        return self.parent.size

    def __len__(self) -> int:
        return self.parent.size

    def children(self, v: int) -> np.ndarray:
        return self.child_nodes[self.child_indptr[v] : self.child_indptr[v + 1]]

    @functools.cached_property
    def leaves(self) -> np.ndarray:
        """Nodes without children, in id order."""
        return _frozen(np.flatnonzero(np.diff(self.child_indptr) == 0))

    @functools.cached_property
    def height(self) -> int:
        return int(self.depth.max())

    @functools.cached_property
    def levels(self) -> typing.List[np.ndarray]:
        """Nodes of every depth, root level first."""
        bounds = np.searchsorted(self.depth[self.order], np.arange(self.height + 2))
        return [self.order[bounds[d] : bounds[d + 1]] for d in range(self.height + 1)]

    def subtree_counts(self, nodes: np.ndarray) -> np.ndarray:
        """Number of entries of ``nodes`` inside the subtree of every node."""
        counts = np.bincount(np.asarray(nodes, dtype=np.int64), minlength=self.node_count).astype(np.int64)
        for level in reversed(self.levels[1:]):
            np.add.at(counts, self.parent[level], counts[level])
        return counts

    @functools.cached_property
    def fingerprint(self) -> str:
        """Digest of the shape and weights, stable across processes."""
        digest = hashlib.sha1()
        digest.update(np.ascontiguousarray(self.parent, dtype="<i8").tobytes())
        digest.update(np.ascontiguousarray(self.weight, dtype="<f8").tobytes())
        return digest.hexdigest()

    # Plain lists for the scalar loops of the assignment algorithms.
    @functools.cached_property
    def parent_list(self) -> typing.List[int]:
        return self.parent.tolist()

    @functools.cached_property
    def weight_list(self) -> typing.List[float]:
        return self.weight.tolist()

    @functools.cached_property
    def depth_list(self) -> typing.List[int]:
        return self.depth.tolist()

    def check_node(self, v: int) -> int:
        if not 0 <= v < self.parent.size:
            raise ArgumentError(f"node {v} outside of [0, {self.parent.size})")
        return int(v)

    def scaled(self, factor: float) -> "CostTree":
        """Copy of the tree with every weight multiplied by ``factor``."""
        if not (factor > 0 and np.isfinite(factor)):
            raise ArgumentError(f"scale factor must be positive and finite, got {factor!r}")
        return CostTree(self.parent, self.weight * factor)

    def with_node(self, parent: int, weight: float) -> "CostTree":
        """Copy of the tree with one more node below ``parent``; its id is ``node_count``."""
        self.check_node(parent)
        return CostTree(np.append(self.parent, parent), np.append(self.weight, weight))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CostTree):
            return NotImplemented
        return np.array_equal(self.parent, other.parent) and np.array_equal(self.weight, other.weight)

    __hash__ = None  # type: ignore

    def __repr__(self) -> str:
        return f"<CostTree nodes={self.node_count} height={self.height} root={self.root}>"


class LeafMap(collections.abc.Mapping):
    """Total map from object ids to nodes of a :class:`CostTree`.

    Dataset-wide maps use ``(graph_index, vertex)`` keys; :meth:`pair` turns
    such a map into the per-pair view keyed ``("g", v)`` and ``("h", v)``.
    """

    def __init__(self, tree: CostTree, nodes: typing.Mapping[typing.Hashable, int]) -> None:
        self.tree = tree
        self._nodes = {key: int(node) for key, node in nodes.items()}
        if self._nodes:
            values = np.fromiter(self._nodes.values(), dtype=np.int64, count=len(self._nodes))
            if values.min() < 0 or values.max() >= tree.node_count:
                raise ArgumentError("object mapped to a node outside of the tree")

    def __getitem__(self, key: typing.Hashable) -> int:
        return self._nodes[key]

    def __iter__(self) -> typing.Iterator[typing.Hashable]:
        return iter(self._nodes)

    def __len__(self) -> int:
        return len(self._nodes)

    def nodes_of(self, objects: typing.Sequence[typing.Hashable]) -> np.ndarray:
        try:
            return np.fromiter((self._nodes[o] for o in objects), dtype=np.int64, count=len(objects))
        except KeyError as e:
            raise ArgumentError(f"object {e.args[0]!r} is not mapped to the tree") from e

    @functools.cached_property
    def _by_graph(self) -> typing.Dict[int, np.ndarray]:
        grouped: typing.Dict[int, typing.List[typing.Tuple[int, int]]] = collections.defaultdict(list)
        for key, node in self._nodes.items():
            if isinstance(key, tuple) and len(key) == 2 and isinstance(key[0], int) and isinstance(key[1], int):
                grouped[key[0]].append((key[1], node))
        result = {}
        for graph_index, entries in grouped.items():
            entries.sort()
            if [v for v, _ in entries] != list(range(len(entries))):
                raise ArgumentError(f"vertices of graph {graph_index} are not mapped contiguously")
            result[graph_index] = _frozen(np.array([node for _, node in entries], dtype=np.int64))
        return result

    def graph_nodes(self, graph_index: int) -> np.ndarray:
        """Node of every vertex of graph ``graph_index`` of a dataset-wide map."""
        try:
            return self._by_graph[graph_index]
        except KeyError:
            return np.empty(0, dtype=np.int64)

    def pair(self, i: int, j: int) -> "LeafMap":
        nodes: typing.Dict[typing.Hashable, int] = {}
        nodes.update((("g", v), node) for v, node in enumerate(self.graph_nodes(i).tolist()))
        nodes.update((("h", v), node) for v, node in enumerate(self.graph_nodes(j).tolist()))
        return LeafMap(self.tree, nodes)

    def extended(
        self, extra: typing.Mapping[typing.Hashable, int], tree: typing.Optional[CostTree] = None
    ) -> "LeafMap":
        """Copy with more objects, optionally moved onto a tree that extends this one."""
        nodes = dict(self._nodes)
        nodes.update(extra)
        return LeafMap(self.tree if tree is None else tree, nodes)

    def __repr__(self) -> str:
        return f"<LeafMap objects={len(self._nodes)} tree={self.tree!r}>"


def lowest_common_ancestor(tree: CostTree, a: int, b: int) -> int:
    a, b = tree.check_node(a), tree.check_node(b)
    parent, depth = tree.parent_list, tree.depth_list
    while depth[a] > depth[b]:
        a = parent[a]
    while depth[b] > depth[a]:
        b = parent[b]
    while a != b:
        a, b = parent[a], parent[b]
    return a


def path_distance(tree: CostTree, a: int, b: int) -> float:
    """Weight of the path between nodes ``a`` and ``b``."""
    a, b = tree.check_node(a), tree.check_node(b)
    parent, depth, weight = tree.parent_list, tree.depth_list, tree.weight_list
    total = 0.0
    while depth[a] > depth[b]:
        total += weight[a]
        a = parent[a]
    while depth[b] > depth[a]:
        total += weight[b]
        b = parent[b]
    while a != b:
        total += weight[a] + weight[b]
        a, b = parent[a], parent[b]
    return total


def path_distance_matrix(tree: CostTree, rows: typing.Sequence[int], cols: typing.Sequence[int]) -> np.ndarray:
    """Path distances between every node of ``rows`` and every node of ``cols``."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1)
    cols = np.asarray(cols, dtype=np.int64).reshape(-1)
    for nodes in (rows, cols):
        if nodes.size and (nodes.min() < 0 or nodes.max() >= tree.node_count):
            raise ArgumentError("node outside of the tree")
    a = np.repeat(rows, cols.size)
    b = np.tile(cols, rows.size)
    ends = tree.root_distance[a] + tree.root_distance[b]
    parent, depth = tree.parent, tree.depth
    while True:
        deeper_a = depth[a] > depth[b]
        deeper_b = depth[b] > depth[a]
        if not (deeper_a.any() or deeper_b.any()):
            break
        a[deeper_a] = parent[a[deeper_a]]
        b[deeper_b] = parent[b[deeper_b]]
    apart = a != b
    while apart.any():
        a[apart] = parent[a[apart]]
        b[apart] = parent[b[apart]]
        apart = a != b
    return (ends - 2 * tree.root_distance[a]).reshape(rows.size, cols.size)


class MinimalSubtree(typing.NamedTuple):
    """Minimal connected subtree and the original id of each of its nodes."""

    tree: CostTree
    original: typing.Tuple[int, ...]

    @property
    def index(self) -> typing.Dict[int, int]:
        return {v: k for k, v in enumerate(self.original)}


def minimal_subtree(tree: CostTree, nodes: typing.Iterable[int]) -> MinimalSubtree:
    """Smallest connected subtree of ``tree`` containing ``nodes``.

    Every node first climbs towards the root while its parent is new and not
    above the shallowest requested depth; the nodes left at that depth are
    then lifted together until they meet. The work is proportional to the
    size of the result.
    """
    requested = {tree.check_node(v) for v in nodes}
    if not requested:
        raise ArgumentError("minimal_subtree needs at least one node")
    parent, depth = tree.parent_list, tree.depth_list
    dmin = min(depth[v] for v in requested)
    kept = set(requested)
    for v in requested:
        u = v
        while depth[u] > dmin:
            p = parent[u]
            if p in kept:
                break
            kept.add(p)
            u = p
    frontier = {v for v in kept if depth[v] == dmin}
    while len(frontier) > 1:
        frontier = {parent[v] for v in frontier}
        kept.update(frontier)
    (top,) = frontier

    buckets: typing.Dict[int, typing.List[int]] = collections.defaultdict(list)
    for v in kept:
        buckets[depth[v]].append(v)
    original: typing.List[int] = []
    for d in sorted(buckets):
        original.extend(sorted(buckets[d]))
    index = {v: k for k, v in enumerate(original)}
    sub_parent = [NO_PARENT if v == top else index[parent[v]] for v in original]
    sub_weight = [0.0 if v == top else tree.weight_list[v] for v in original]
    return MinimalSubtree(CostTree(sub_parent, sub_weight), tuple(original))


class UltrametricCheck(typing.NamedTuple):
    ok: bool
    radius: float
    offending: typing.Tuple[int, ...]

    def __bool__(self) -> bool:
        return self.ok


def validate_ultrametric(tree: CostTree, leaves: typing.Optional[typing.Iterable[int]] = None) -> UltrametricCheck:
    """Check that ``leaves`` (by default all leaves) share one root distance.

    ``radius`` is the root distance of the first leaf; ``offending`` lists
    the leaves that deviate from it by more than the relative tolerance.
    """
    if leaves is None:
        leaf_ids = tree.leaves.tolist()
    else:
        leaf_ids = sorted({tree.check_node(v) for v in leaves})
    if not leaf_ids:
        return UltrametricCheck(True, 0.0, ())
    distances = tree.root_distance.tolist()
    radius = distances[leaf_ids[0]]
    offending = tuple(v for v in leaf_ids if not _utils.isclose(distances[v], radius))
    return UltrametricCheck(not offending, radius, offending)


class EpsilonAttachment(typing.NamedTuple):
    tree: CostTree
    node: int


def attach_epsilon_node(
    tree: CostTree,
    tau: float,
    leaves: typing.Optional[typing.Iterable[int]] = None,
    literal: bool = False,
    min_weight: typing.Optional[float] = None,
) -> EpsilonAttachment:
    """Add the node hosting inserted and deleted objects below the root.

    With the default weight ``tau - r``, where ``r`` is the common root
    distance of ``leaves``, every leaf lies at distance ``tau`` from the new
    node. ``literal=True`` uses weight ``tau`` instead. When ``r == tau`` the
    weight is clamped to ``min_weight`` (default ``1e-9 * tau``).
    """
    _utils.check_positive(tau, "tau")
    check = validate_ultrametric(tree, leaves)
    if not check:
        raise CostModelError(f"leaves {list(check.offending)[:5]} are not at the common root distance {check.radius!r}")
    r = check.radius
    if r > tau and not _utils.isclose(r, tau):
        raise CostModelError(f"substitution cost exceeds deletion cost: root distance {r!r} > tau {tau!r}")
    if literal:
        weight = tau
    else:
        weight = tau - r
        if weight <= 0 or _utils.isclose(r, tau):
            weight = 1e-9 * tau if min_weight is None else min_weight
            LOG.warning("root distance %r equals tau %r, epsilon node attached at weight %r", r, tau, weight)
    return EpsilonAttachment(tree.with_node(tree.root, weight), tree.node_count)


def dumps_tree(tree: CostTree) -> str:
    """Serialise as ``node parent weight depth`` lines in breadth-first order, root first."""
    lines = []
    parent, weight, depth = tree.parent_list, tree.weight_list, tree.depth_list
    for v in tree.order.tolist():
        lines.append(f"{v} {parent[v]} {weight[v]!r} {depth[v]}\n")
    return "".join(lines)


def loads_tree(text: str) -> CostTree:
    """Inverse of :func:`dumps_tree`."""
    rows: typing.Dict[int, typing.Tuple[int, float, int, int]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        fields = line.split()
        if not fields:
            continue
        if len(fields) != 4:
            raise FormatError(f"expected 4 fields, got {len(fields)}", "<tree>", lineno)
        try:
            node, par, w, d = int(fields[0]), int(fields[1]), float(fields[2]), int(fields[3])
        except ValueError as e:
            raise FormatError(f"malformed tree line {line!r}", "<tree>", lineno) from e
        if node in rows:
            raise FormatError(f"node {node} listed twice", "<tree>", lineno)
        rows[node] = (par, w, d, lineno)
    if sorted(rows) != list(range(len(rows))):
        raise FormatError("node ids are not 0 .. n-1", "<tree>")
    parent = [rows[v][0] for v in range(len(rows))]
    weight = [rows[v][1] for v in range(len(rows))]
    try:
        tree = CostTree(parent, weight)
    except ArgumentError as e:
        raise FormatError(str(e), "<tree>") from e
    for v, (_, _, d, lineno) in rows.items():
        if tree.depth[v] != d:
            raise FormatError(f"depth {d} of node {v} does not match its parent chain", "<tree>", lineno)
    return tree


class Hierarchy(typing.NamedTuple):
    """A cost tree built over a dataset and the node of every ``(graph_index, vertex)``."""

    tree: CostTree
    rho: LeafMap
