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

"""Bisecting k-means over continuous vertex attributes.

The cluster hierarchy becomes an ultrametric cost tree: every cluster gets a
height (its radius, made monotone towards the root) and two vertices are at
twice the height of their smallest common cluster.
"""

import dataclasses
import heapq
import logging
import typing

import numpy as np

from treematch.errors import ConfigurationError, DegenerateClusterError
from treematch.graph import Dataset, Graph
from treematch.tree import NO_PARENT, CostTree, Hierarchy, LeafMap

LOG = logging.getLogger(__name__)


@dataclasses.dataclass(frozen=True)
class ClusterConfig:
    leaves: int = 300
    lloyd_max_iter: int = 100
    lloyd_tol: float = 1e-6
    seed: int = 0

    def __post_init__(self) -> None:
        if self.leaves < 1:
            raise ConfigurationError(f"leaves must be at least 1, got {self.leaves}")
        if self.lloyd_max_iter < 1:
            raise ConfigurationError(f"lloyd_max_iter must be positive, got {self.lloyd_max_iter}")
        if not self.lloyd_tol > 0:
            raise ConfigurationError(f"lloyd_tol must be positive, got {self.lloyd_tol!r}")


class TwoMeans(typing.NamedTuple):
    centroids: np.ndarray
    labels: np.ndarray


def _assign(points: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    d0 = np.sum((points - centroids[0]) ** 2, axis=1)
    d1 = np.sum((points - centroids[1]) ** 2, axis=1)
    return (d1 < d0).astype(np.int64)


def lloyd2(points: np.ndarray, seed: int, max_iter: int = 100, tol: float = 1e-6) -> TwoMeans:
    """Lloyd's algorithm for two clusters.

    Starts from two distinct points picked with ``seed`` and stops once no
    centroid moves by ``tol`` or more, or after ``max_iter`` rounds.
    Written out instead of calling a k-means library because the seeding
    and the stopping rule fix the shape of the cluster tree.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    rng = np.random.default_rng(seed)
    first = int(rng.integers(points.shape[0])) if points.shape[0] else 0
    others = np.flatnonzero(np.any(points != points[first], axis=1)) if points.shape[0] else np.empty(0, np.int64)
    if not others.size:
        raise DegenerateClusterError(f"2-means needs two distinct points among {points.shape[0]}")
    second = int(rng.choice(others))
    centroids = points[[first, second]].copy()
    for _ in range(max_iter):
        labels = _assign(points, centroids)
        updated = centroids.copy()
        for k in (0, 1):
            members = points[labels == k]
            if members.shape[0]:
                updated[k] = members.mean(axis=0)
        moved = float(np.max(np.linalg.norm(updated - centroids, axis=1)))
        centroids = updated
        if moved < tol:
            break
    labels = _assign(points, centroids)
    if labels.min() == labels.max():
        raise DegenerateClusterError("2-means converged to a single cluster")
    return TwoMeans(centroids, labels)


@dataclasses.dataclass
class ClusterNode:
    centroid: np.ndarray
    members: np.ndarray
    height: float = 0.0
    children: typing.Tuple[int, ...] = ()
    parent: int = NO_PARENT
    sse: float = 0.0


def _new_node(points: np.ndarray, members: np.ndarray, parent: int) -> ClusterNode:
    centroid = points[members].mean(axis=0)
    sq = np.sum((points[members] - centroid) ** 2, axis=1)
    return ClusterNode(centroid, members, float(np.sqrt(sq.max())), parent=parent, sse=float(sq.sum()))


def build_cluster_hierarchy(points: np.ndarray, config: ClusterConfig = ClusterConfig()) -> typing.List[ClusterNode]:
    """Split the leaf with the largest squared error until ``config.leaves`` leaves exist.

    Returns the nodes in creation order, root first. Leaves have height 0;
    an inner node has the larger of its radius and its children's heights.
    """
    points = np.asarray(points, dtype=np.float64)
    if points.ndim == 1:
        points = points[:, None]
    nodes = [_new_node(points, np.arange(points.shape[0]), NO_PARENT)] if points.shape[0] else []
    heap = [(-nodes[0].sse, 0)] if nodes and nodes[0].sse > 0 else []
    leaf_count = len(nodes)
    while leaf_count < config.leaves and heap:
        _, k = heapq.heappop(heap)
        node = nodes[k]
        try:
            split = lloyd2(points[node.members], config.seed + k, config.lloyd_max_iter, config.lloyd_tol)
        except DegenerateClusterError:
            continue
        children = []
        for side in (0, 1):
            child = _new_node(points, node.members[split.labels == side], k)
            nodes.append(child)
            children.append(len(nodes) - 1)
            if child.sse > 0:
                heapq.heappush(heap, (-child.sse, len(nodes) - 1))
        node.children = tuple(children)
        leaf_count += 1
    if leaf_count < config.leaves:
        LOG.info("bisecting k-means stopped at %d of %d leaves: no splittable cluster left", leaf_count, config.leaves)

    for node in reversed(nodes):
        if node.children:
            node.height = max([node.height] + [nodes[c].height for c in node.children])
        else:
            node.height = 0.0
    return nodes


def _points_of(graphs: typing.Sequence[Graph]) -> typing.Tuple[np.ndarray, typing.List[typing.Tuple[int, int]]]:
    owners = []
    blocks = []
    dimension = None
    for gi, g in enumerate(graphs):
        if g.vertex_attributes is None:
            raise ConfigurationError(f"graph {gi} has no vertex attributes")
        if g.vertex_count:
            if dimension is None:
                dimension = g.attribute_dimension
            elif g.attribute_dimension != dimension:
                raise ConfigurationError(
                    f"graph {gi} has attribute dimension {g.attribute_dimension}, expected {dimension}"
                )
            blocks.append(g.vertex_attributes)
        owners.extend((gi, v) for v in range(g.vertex_count))
    if not blocks:
        return np.empty((0, 1)), owners
    return np.vstack(blocks), owners


def build_cluster_tree(
    graphs: typing.Union[Dataset, typing.Sequence[Graph]], config: ClusterConfig = ClusterConfig()
) -> Hierarchy:
    """Cost tree of the bisecting k-means hierarchy of all vertex attributes.

    The edge above a cluster weighs its parent's height minus its own;
    clusters whose edge would weigh 0 are merged into their parent.
    """
    graphs = list(graphs)
    points, owners = _points_of(graphs)
    nodes = build_cluster_hierarchy(points, config)
    if not nodes:
        tree = CostTree([NO_PARENT], [0.0])
        return Hierarchy(tree, LeafMap(tree, {}))

    # tree id of every cluster; contracted clusters share their parent's id
    tree_id = [0] * len(nodes)
    parent = [NO_PARENT]
    weight = [0.0]
    for k in range(1, len(nodes)):
        node = nodes[k]
        up = nodes[node.parent]
        if up.height - node.height > 0:
            tree_id[k] = len(parent)
            parent.append(tree_id[node.parent])
            weight.append(up.height - node.height)
        else:
            tree_id[k] = tree_id[node.parent]
    tree = CostTree(parent, weight)

    leaf_of = np.zeros(points.shape[0], dtype=np.int64)
    for k, node in enumerate(nodes):
        if not node.children:
            leaf_of[node.members] = tree_id[k]
    rho = LeafMap(tree, {owner: node for owner, node in zip(owners, leaf_of.tolist())})
    LOG.debug("cluster tree: %d clusters, %d tree nodes, root height %r", len(nodes), tree.node_count, nodes[0].height)
    return Hierarchy(tree, rho)
