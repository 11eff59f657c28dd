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

"""Optimal assignments when costs are path lengths in a tree.

Two object sets of equal size are placed on the nodes of a
:class:`~treematch.tree.CostTree`. Cutting the edge above node ``v`` leaves
``A_v`` objects of the first set and ``B_v`` of the second below it; an
optimal bijection sends exactly ``|A_v - B_v|`` pairs across that edge, so
the optimal cost is ``sum(|A_v - B_v| * w(v))``.
"""

import collections
import typing

import numpy as np

from treematch.errors import ArgumentError
from treematch.tree import CostTree, LeafMap, NO_PARENT, minimal_subtree

PairKey = typing.Callable[[typing.Hashable], typing.Optional[typing.Hashable]]


class AssignmentInstance:
    """Two equal-size object sequences placed on a tree by ``rho``."""

    def __init__(
        self,
        a: typing.Sequence[typing.Hashable],
        b: typing.Sequence[typing.Hashable],
        tree: CostTree,
        rho: typing.Union[LeafMap, typing.Mapping[typing.Hashable, int]],
    ) -> None:
        self.a = tuple(a)
        self.b = tuple(b)
        if len(self.a) != len(self.b):
            raise ArgumentError(f"object sets differ in size: {len(self.a)} != {len(self.b)}")
        if not isinstance(rho, LeafMap):
            rho = LeafMap(tree, rho)
        self.tree = tree
        self.rho = rho
        self.a_nodes = rho.nodes_of(self.a)
        self.b_nodes = rho.nodes_of(self.b)
        for nodes in (self.a_nodes, self.b_nodes):
            if nodes.size and nodes.max() >= tree.node_count:
                raise ArgumentError("object mapped outside of the instance tree")

    def __len__(self) -> int:
        return len(self.a)

    def __repr__(self) -> str:
        return f"<AssignmentInstance n={len(self.a)} tree={self.tree!r}>"


class SideCounts(typing.NamedTuple):
    """Objects of each set in the subtree of every node (root entry = set size)."""

    a: np.ndarray
    b: np.ndarray


class Assignment(typing.NamedTuple):
    pairs: typing.Tuple[typing.Tuple[typing.Any, typing.Any], ...]
    cost: float

    def as_dict(self) -> typing.Dict[typing.Any, typing.Any]:
        return dict(self.pairs)


def side_counts(instance: AssignmentInstance) -> SideCounts:
    tree = instance.tree
    return SideCounts(tree.subtree_counts(instance.a_nodes), tree.subtree_counts(instance.b_nodes))


def assignment_cost(instance: AssignmentInstance) -> float:
    """Cost of an optimal assignment, without building one."""
    counts = side_counts(instance)
    return float(np.sum(np.abs(counts.a - counts.b) * instance.tree.weight))


def _pair_on_tree(
    tree: CostTree,
    a_nodes: typing.List[int],
    b_nodes: typing.List[int],
    a_ids: typing.Sequence[typing.Hashable],
    b_ids: typing.Sequence[typing.Hashable],
    pair_key: typing.Optional[PairKey],
) -> Assignment:
    t = tree.node_count
    n = len(a_nodes)
    parent, weight = tree.parent_list, tree.weight_list

    # one FIFO linked list of pending objects per node and side
    head = ([-1] * t, [-1] * t)
    tail = ([-1] * t, [-1] * t)
    count = ([0] * t, [0] * t)
    nxt = ([-1] * n, [-1] * n)
    for side, nodes in enumerate((a_nodes, b_nodes)):
        h, tl, c, nx = head[side], tail[side], count[side], nxt[side]
        for k, v in enumerate(nodes):
            if h[v] == -1:
                h[v] = k
            else:
                nx[tl[v]] = k
            tl[v] = k
            c[v] += 1
    placed = (list(count[0]), list(count[1])) if pair_key is not None else None

    pairs: typing.List[typing.Tuple[int, int]] = []
    cost = 0.0
    for v in reversed(tree.order.tolist()):
        if placed is not None and placed[0][v] and placed[1][v]:
            _pair_by_key(v, placed[0][v], placed[1][v], head, tail, count, nxt, a_ids, b_ids, pair_key, pairs)
        ha, hb = head
        na, nb = nxt
        ca, cb = count
        for _ in range(min(ca[v], cb[v])):
            x, y = ha[v], hb[v]
            pairs.append((x, y))
            ha[v], hb[v] = na[x], nb[y]
        m = min(ca[v], cb[v])
        ca[v] -= m
        cb[v] -= m
        p = parent[v]
        if p == NO_PARENT:
            continue
        for side in (0, 1):
            c = count[side]
            if not c[v]:
                continue
            h, tl, nx = head[side], tail[side], nxt[side]
            if h[p] == -1:
                h[p] = h[v]
            else:
                nx[tl[p]] = h[v]
            tl[p] = tl[v]
            c[p] += c[v]
            cost += c[v] * weight[v]
    return Assignment(tuple((a_ids[x], b_ids[y]) for x, y in pairs), cost)


def _pair_by_key(v, size_a, size_b, head, tail, count, nxt, a_ids, b_ids, pair_key, pairs) -> None:
    """Pair the objects placed directly at ``v`` that share a key, first-in-first-out per key."""
    prefixes = []
    rests = []
    for side, size in ((0, size_a), (1, size_b)):
        items = []
        k = head[side][v]
        for _ in range(size):
            items.append(k)
            k = nxt[side][k]
        prefixes.append(items)
        rests.append(k)

    waiting: typing.Dict[typing.Hashable, typing.Deque[int]] = collections.defaultdict(collections.deque)
    for y in prefixes[1]:
        key = pair_key(b_ids[y])
        if key is not None:
            waiting[key].append(y)
    matched_b = set()
    left_a = []
    for x in prefixes[0]:
        key = pair_key(a_ids[x])
        queue = waiting.get(key) if key is not None else None
        if queue:
            y = queue.popleft()
            matched_b.add(y)
            pairs.append((x, y))
        else:
            left_a.append(x)
    left_b = [y for y in prefixes[1] if y not in matched_b]

    for side, left in ((0, left_a), (1, left_b)):
        paired = len(prefixes[side]) - len(left)
        if not paired:
            continue
        count[side][v] -= paired
        rest = rests[side]
        for x, y in zip(left, left[1:]):
            nxt[side][x] = y
        if left:
            head[side][v] = left[0]
            nxt[side][left[-1]] = rest
            if rest == -1:
                tail[side][v] = left[-1]
        else:
            head[side][v] = rest
            if rest == -1:
                tail[side][v] = -1


def construct_assignment(instance: AssignmentInstance, pair_key: typing.Optional[PairKey] = None) -> Assignment:
    """Build an optimal bijection from the leaves upward.

    Nodes are visited in order of decreasing depth. At each node pending
    objects of the two sets are paired first-in-first-out and the leftovers,
    all from one set, are handed to the parent in constant time.

    :param pair_key: optional key on object ids. Objects placed directly on
        a node that share a non-``None`` key are paired with each other
        before anything else; this never changes the cost.
    """
    return _pair_on_tree(
        instance.tree, instance.a_nodes.tolist(), instance.b_nodes.tolist(), instance.a, instance.b, pair_key
    )


def construct_assignment_pruned(
    instance: AssignmentInstance, pair_key: typing.Optional[PairKey] = None
) -> Assignment:
    """:func:`construct_assignment` on the minimal subtree spanning the populated nodes."""
    if not len(instance):
        return Assignment((), 0.0)
    populated = set(instance.a_nodes.tolist())
    populated.update(instance.b_nodes.tolist())
    sub = minimal_subtree(instance.tree, populated)
    index = sub.index
    return _pair_on_tree(
        sub.tree,
        [index[v] for v in instance.a_nodes.tolist()],
        [index[v] for v in instance.b_nodes.tolist()],
        instance.a,
        instance.b,
        pair_key,
    )


class SparseEmbedding:
    """Vector indexed by tree edges; edge ``v`` joins node ``v`` to its parent.

    Only non-zero components are stored, ``edges`` sorted ascending.
    """

    def __init__(self, edges: np.ndarray, values: np.ndarray, fingerprint: str) -> None:
        self.edges = np.asarray(edges, dtype=np.int64)
        self.values = np.asarray(values, dtype=np.float64)
        self.fingerprint = fingerprint

    def __len__(self) -> int:
        return self.edges.size

    def as_dict(self) -> typing.Dict[int, float]:
        return dict(zip(self.edges.tolist(), self.values.tolist()))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SparseEmbedding):
            return NotImplemented
        return (
            self.fingerprint == other.fingerprint
            and np.array_equal(self.edges, other.edges)
            and np.array_equal(self.values, other.values)
        )

    __hash__ = None  # type: ignore

    def __repr__(self) -> str:
        return f"<SparseEmbedding nnz={self.edges.size} tree={self.fingerprint[:8]}>"


def _embed_nodes(tree: CostTree, nodes: np.ndarray) -> SparseEmbedding:
    if not nodes.size:
        return SparseEmbedding(np.empty(0, dtype=np.int64), np.empty(0), tree.fingerprint)
    populated = set(nodes.tolist())
    populated.add(tree.root)
    sub = minimal_subtree(tree, populated)
    index = sub.index
    counts = sub.tree.subtree_counts(np.array([index[v] for v in nodes.tolist()], dtype=np.int64))
    original = np.array(sub.original, dtype=np.int64)
    keep = counts > 0
    keep[sub.tree.root] = False
    edges = original[keep]
    values = counts[keep] * sub.tree.weight[keep]
    order = np.argsort(edges)
    return SparseEmbedding(edges[order], values[order], tree.fingerprint)


def embed(
    objects: typing.Sequence[typing.Hashable],
    tree: CostTree,
    rho: typing.Union[LeafMap, typing.Mapping[typing.Hashable, int]],
) -> SparseEmbedding:
    """Embed an object set so that l1 distances are optimal assignment costs."""
    if not isinstance(rho, LeafMap):
        rho = LeafMap(tree, rho)
    return _embed_nodes(tree, rho.nodes_of(list(objects)))


def embed_dataset(
    tree: CostTree, rho: LeafMap, groups: typing.Iterable[typing.Union[int, typing.Sequence[typing.Hashable]]]
) -> typing.List[SparseEmbedding]:
    """One embedding per group.

    A group is either a graph index of a dataset-wide map or a sequence of
    object ids.
    """
    result = []
    for group in groups:
        if isinstance(group, (int, np.integer)):
            nodes = rho.graph_nodes(int(group))
        else:
            nodes = rho.nodes_of(list(group))
        result.append(_embed_nodes(tree, nodes))
    return result


def l1_distance(x: SparseEmbedding, y: SparseEmbedding) -> float:
    if x.fingerprint != y.fingerprint:
        raise ArgumentError("embeddings belong to different trees")
    edges = np.union1d(x.edges, y.edges)
    xv = np.zeros(edges.size)
    yv = np.zeros(edges.size)
    xv[np.searchsorted(edges, x.edges)] = x.values
    yv[np.searchsorted(edges, y.edges)] = y.values
    return float(np.sum(np.abs(xv - yv)))


def dumps_embedding(embedding: SparseEmbedding) -> str:
    """``edge_id value`` lines, sorted by edge id."""
    return "".join(f"{e} {v!r}\n" for e, v in zip(embedding.edges.tolist(), embedding.values.tolist()))
