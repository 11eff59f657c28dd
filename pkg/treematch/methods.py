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

"""Graph edit distance methods over the graphs of a dataset.

A method is built once per dataset and edit costs, then called with two
graph indices::

    method = ged_linear(dataset, EditCosts(tau_vertex=0.5))
    result = method(0, 1)
"""

import abc
import logging
import time
import typing

from treematch import ged
from treematch.clustering import ClusterConfig, build_cluster_tree
from treematch.costs import EditCosts
from treematch.errors import ArgumentError, ConfigurationError
from treematch.graph import Dataset
from treematch.tree import CostTree, Hierarchy, LeafMap, attach_epsilon_node, validate_ultrametric
from treematch.wl import WlConfig, build_wl_tree

LOG = logging.getLogger(__name__)

TREE_KINDS = ("auto", "wl", "cluster")


class method_base(abc.ABC):
    """Abstract base class for distance methods."""

    name: str = ""

    def __init__(self, dataset: Dataset, costs: EditCosts = EditCosts()) -> None:
        self.dataset = dataset
        self.costs = costs
        self.statistics: typing.Dict[str, typing.Any] = {"pairs": 0}

    @property
    def params(self) -> str:
        """Parameters as one whitespace-free token."""
        return f"tv={self.costs.tau_vertex!r},te={self.costs.tau_edge!r}"

    def with_costs(self, costs: EditCosts) -> "method_base":
        return type(self)(self.dataset, costs)

    @abc.abstractmethod
    def compute(self, i: int, j: int) -> ged.GedResult:
        pass

    def __call__(self, i: int, j: int) -> ged.GedResult:
        size = len(self.dataset)
        if not (0 <= i < size and 0 <= j < size):
            raise ArgumentError(f"graph pair ({i}, {j}) outside of dataset of size {size}")
        result = self.compute(i, j)
        self.statistics["pairs"] += 1
        return result

    def __repr__(self) -> str:
        return f"<{self.__class__.__name__} {self.params} dataset={self.dataset.name!r}>"


def resolve_tree_kind(dataset: Dataset, tree: str) -> str:
    """``auto`` clusters attribute-only datasets and refines colours otherwise."""
    if tree not in TREE_KINDS:
        raise ConfigurationError(f"tree must be one of {TREE_KINDS}, got {tree!r}")
    if tree != "auto":
        return tree
    if dataset.has_vertex_attributes and not dataset.has_vertex_labels:
        return "cluster"
    return "wl"


class ged_linear(method_base):
    """Assignment on a cost tree built once for the whole dataset.

    The tree is scaled so that two vertices are at most ``tau_vertex``
    apart, then the node hosting deletions and insertions is attached.
    Statistics record the construction time in ``tree_seconds``.
    """

    name = "linear"

    def __init__(
        self,
        dataset: Dataset,
        costs: EditCosts = EditCosts(),
        tree: str = "auto",
        wl: WlConfig = WlConfig(),
        cluster: ClusterConfig = ClusterConfig(),
        literal_epsilon: bool = False,
        hierarchy: typing.Optional[Hierarchy] = None,
    ) -> None:
        super().__init__(dataset, costs)
        self.tree_kind = resolve_tree_kind(dataset, tree)
        self.wl = wl
        self.cluster = cluster
        self.literal_epsilon = literal_epsilon

        started = time.perf_counter()
        if hierarchy is None:
            if self.tree_kind == "wl":
                hierarchy = build_wl_tree(dataset.graphs, wl)
            else:
                hierarchy = build_cluster_tree(dataset.graphs, cluster)
        self.hierarchy = hierarchy
        self.tree, self.rho = self._scaled(hierarchy)
        self.epsilon_tree, self.epsilon_node = attach_epsilon_node(
            self.tree, costs.tau_vertex, leaves=set(self.rho.values()), literal=literal_epsilon
        )
        self.statistics["tree_seconds"] = time.perf_counter() - started
        self.statistics["tree_nodes"] = self.hierarchy.tree.node_count
        LOG.debug("%s tree for %r: %d nodes", self.tree_kind, dataset.name, self.hierarchy.tree.node_count)

    def _scaled(self, hierarchy: Hierarchy) -> typing.Tuple[CostTree, LeafMap]:
        # vertices end up at root distance tau_vertex / 2
        check = validate_ultrametric(hierarchy.tree, set(hierarchy.rho.values()))
        if check.radius <= 0:
            return hierarchy.tree, hierarchy.rho
        tree = hierarchy.tree.scaled(self.costs.tau_vertex / (2 * check.radius))
        return tree, LeafMap(tree, hierarchy.rho)

    @property
    def params(self) -> str:
        # everything the tree depends on, so cached distances never mix trees
        if self.tree_kind == "wl":
            extra = f"it={self.wl.iterations},edge_labels={self.wl.edge_labels!r}"
        else:
            c = self.cluster
            extra = f"leaves={c.leaves},seed={c.seed},lloyd_max_iter={c.lloyd_max_iter},lloyd_tol={c.lloyd_tol!r}"
        eps = ",eps=literal" if self.literal_epsilon else ""
        return f"{super().params},tree={self.tree_kind},{extra}{eps}"

    def with_costs(self, costs: EditCosts) -> "ged_linear":
        return ged_linear(
            self.dataset,
            costs,
            tree=self.tree_kind,
            wl=self.wl,
            cluster=self.cluster,
            literal_epsilon=self.literal_epsilon,
            hierarchy=self.hierarchy,
        )

    def compute(self, i: int, j: int) -> ged.GedResult:
        return ged.approx_ged_linear(
            self.dataset[i],
            self.dataset[j],
            self.epsilon_tree,
            self.rho.pair(i, j),
            self.costs,
            epsilon_node=self.epsilon_node,
        )


class ged_bp(method_base):
    """Bipartite heuristic solved exactly with the Hungarian method."""

    name = "bp"

    def compute(self, i: int, j: int) -> ged.GedResult:
        return ged.approx_ged_matrix(self.dataset[i], self.dataset[j], self.costs, solver="hungarian")


class ged_greedy(method_base):
    """Bipartite heuristic solved row by row."""

    name = "greedy"

    def compute(self, i: int, j: int) -> ged.GedResult:
        return ged.approx_ged_matrix(self.dataset[i], self.dataset[j], self.costs, solver="greedy")


class ged_exact(method_base):
    """Exhaustive search, for graphs with nine vertices in total at most."""

    name = "exact-bf"

    def compute(self, i: int, j: int) -> ged.GedResult:
        g, h = self.dataset[i], self.dataset[j]
        cost, mapping = ged.exact_ged_with_mapping(g, h, self.costs)
        return ged.GedResult(cost, mapping, cost)


METHODS: typing.Dict[str, typing.Type[method_base]] = {
    cls.name: cls for cls in (ged_linear, ged_bp, ged_greedy, ged_exact)
}


def make_method(name: str, dataset: Dataset, costs: EditCosts = EditCosts(), **options: typing.Any) -> method_base:
    """Build method ``name``; ``options`` only apply to ``linear``."""
    try:
        cls = METHODS[name]
    except KeyError:
        raise ConfigurationError(f"unknown method {name!r}, expected one of {sorted(METHODS)}") from None
    if cls is ged_linear:
        return ged_linear(dataset, costs, **options)
    return cls(dataset, costs)

