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

"""Colour refinement trees.

Every refinement step splits colour classes, so the colours of all levels
form a tree below an artificial root: a level ``i`` colour hangs below the
level ``i - 1`` colour it refines. Vertices sit on their last colour.
"""

import dataclasses
import logging
import typing

import numpy as np

from treematch.errors import ConfigurationError
from treematch.graph import Dataset, Graph
from treematch.tree import NO_PARENT, CostTree, Hierarchy, LeafMap

LOG = logging.getLogger(__name__)

Colouring = typing.List[np.ndarray]


@dataclasses.dataclass(frozen=True)
class WlConfig:
    iterations: int = 7
    level_weight: float = 0.5
    # include edge labels in the refinement key
    edge_labels: bool = False

    def __post_init__(self) -> None:
        if self.iterations < 0:
            raise ConfigurationError(f"iterations must be non-negative, got {self.iterations}")
        if not self.level_weight > 0:
            raise ConfigurationError(f"level_weight must be positive, got {self.level_weight!r}")


class ColourDictionary:
    """Injective map from refinement keys to colours, one table per level.

    Colours of a level are numbered ``0, 1, ...`` in first-encounter order.
    ``parents[i][c]`` is the level ``i - 1`` colour that colour ``c`` of
    level ``i`` refines (``-1`` on level 0).
    """

    def __init__(self) -> None:
        self.tables: typing.List[typing.Dict[typing.Hashable, int]] = []
        self.parents: typing.List[typing.List[int]] = []

    def new_level(self) -> int:
        self.tables.append({})
        self.parents.append([])
        return len(self.tables) - 1

    def lookup(self, level: int, key: typing.Hashable, parent: int) -> int:
        table = self.tables[level]
        colour = table.get(key)
        if colour is None:
            colour = table[key] = len(table)
            self.parents[level].append(parent)
        return colour

    def colour_count(self, level: int) -> int:
        return len(self.tables[level])

    def __len__(self) -> int:
        return len(self.tables)


def initial_colours(graphs: typing.Sequence[Graph], dictionary: ColourDictionary) -> Colouring:
    """Level 0: vertex labels, or colour 0 for unlabelled graphs."""
    level = dictionary.new_level()
    colours = []
    for g in graphs:
        labels = g.vertex_labels.tolist() if g.vertex_labels is not None else [0] * g.vertex_count
        colours.append(np.array([dictionary.lookup(level, lab, NO_PARENT) for lab in labels], dtype=np.int64))
    return colours


def refine_step(
    graphs: typing.Sequence[Graph],
    colours: Colouring,
    dictionary: ColourDictionary,
    edge_labels: bool = False,
) -> Colouring:
    """One refinement step over all graphs with a shared dictionary.

    The key of a vertex is its colour and the sorted colours of its
    neighbours (with ``edge_labels``, sorted ``(edge label, colour)`` pairs).
    """
    level = dictionary.new_level()
    refined = []
    for g, old in zip(graphs, colours):
        indptr, nbrs, eids = g.adjacency
        owner = np.repeat(np.arange(g.vertex_count), np.diff(indptr))
        nbr_colours = old[nbrs]
        if edge_labels and g.edge_labels is not None:
            labels = g.edge_labels[eids]
            order = np.lexsort((nbr_colours, labels, owner))
            entries = list(zip(labels[order].tolist(), nbr_colours[order].tolist()))
        else:
            order = np.lexsort((nbr_colours, owner))
            entries = nbr_colours[order].tolist()
        bounds = indptr.tolist()
        old_list = old.tolist()
        new = [
            dictionary.lookup(level, (c, tuple(entries[bounds[v] : bounds[v + 1]])), c)
            for v, c in enumerate(old_list)
        ]
        refined.append(np.array(new, dtype=np.int64))
    return refined


def refine(
    graphs: typing.Sequence[Graph], iterations: int, edge_labels: bool = False
) -> typing.Tuple[ColourDictionary, typing.List[Colouring]]:
    """Colourings of levels ``0 .. iterations``."""
    dictionary = ColourDictionary()
    levels = [initial_colours(graphs, dictionary)]
    for _ in range(iterations):
        levels.append(refine_step(graphs, levels[-1], dictionary, edge_labels))
    return dictionary, levels


def build_wl_tree(graphs: typing.Union[Dataset, typing.Sequence[Graph]], config: WlConfig = WlConfig()) -> Hierarchy:
    """Cost tree of the colour hierarchy over ``graphs``.

    Node 0 is the root; the colours of level ``i`` follow at depth ``i + 1``
    and every edge weighs ``config.level_weight``. Vertex ``v`` of graph
    ``i`` maps to the node of its level ``config.iterations`` colour.
    """
    graphs = list(graphs)
    dictionary, levels = refine(graphs, config.iterations, config.edge_labels)

    offsets = [1]
    for level in range(len(dictionary)):
        offsets.append(offsets[-1] + dictionary.colour_count(level))
    parent = [NO_PARENT]
    for level in range(len(dictionary)):
        if level == 0:
            parent.extend([0] * dictionary.colour_count(0))
        else:
            parent.extend(offsets[level - 1] + p for p in dictionary.parents[level])
    weight = [0.0] + [config.level_weight] * (len(parent) - 1)
    tree = CostTree(parent, weight)

    last = offsets[config.iterations]
    nodes = {}
    for gi, colours in enumerate(levels[-1]):
        for v, c in enumerate(colours.tolist()):
            nodes[(gi, v)] = last + c
    LOG.debug(
        "colour tree over %d graphs: %d nodes, %d final colours",
        len(graphs),
        tree.node_count,
        dictionary.colour_count(config.iterations),
    )
    return Hierarchy(tree, LeafMap(tree, nodes))
