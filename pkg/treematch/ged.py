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

"""Graph edit distance from vertex assignments.

Every vertex mapping between two graphs induces an edit path: mapped
vertices are substituted, the others deleted or inserted, and edges follow
their endpoints. The approximations below choose a mapping by solving an
assignment problem and report the cost of the induced path.
"""

import itertools
import typing

import numpy as np

from treematch import assignment as _assignment
from treematch import baseline
from treematch.costs import EditCosts
from treematch.errors import ArgumentError, CapacityError
from treematch.graph import Graph
from treematch.tree import CostTree, LeafMap, attach_epsilon_node

EPSILON = -1

# sum of vertex counts up to which exact_ged_bruteforce enumerates
BRUTEFORCE_LIMIT = 9


class VertexMapping:
    """Partial bijection between the vertices of two graphs.

    ``g_to_h[u]`` is the image of vertex ``u`` of G or :data:`EPSILON` if
    ``u`` is deleted; ``h_to_g`` is the inverse, :data:`EPSILON` marking
    inserted vertices.
    """

    def __init__(self, g_to_h: typing.Sequence[int], h_to_g: typing.Sequence[int]) -> None:
        self.g_to_h = np.asarray(g_to_h, dtype=np.int64).reshape(-1)
        self.h_to_g = np.asarray(h_to_g, dtype=np.int64).reshape(-1)
        n, m = self.g_to_h.size, self.h_to_g.size
        for u, v in enumerate(self.g_to_h.tolist()):
            if v != EPSILON and not (0 <= v < m and self.h_to_g[v] == u):
                raise ArgumentError(f"vertex {u} of G maps to {v}, which does not map back")
        for v, u in enumerate(self.h_to_g.tolist()):
            if u != EPSILON and not (0 <= u < n and self.g_to_h[u] == v):
                raise ArgumentError(f"vertex {v} of H maps to {u}, which does not map back")

    @classmethod
    def from_pairs(
        cls, n: int, m: int, pairs: typing.Iterable[typing.Tuple[typing.Optional[int], typing.Optional[int]]]
    ) -> "VertexMapping":
        """Build from ``(u, v)`` substitutions; ``None`` on one side marks a deletion or insertion."""
        g_to_h = [EPSILON] * n
        h_to_g = [EPSILON] * m
        for u, v in pairs:
            if u is not None and v is not None:
                if g_to_h[u] != EPSILON or h_to_g[v] != EPSILON:
                    raise ArgumentError(f"vertex mapped twice in pair ({u}, {v})")
                g_to_h[u] = v
                h_to_g[v] = u
        return cls(g_to_h, h_to_g)

    @property
    def substitutions(self) -> typing.List[typing.Tuple[int, int]]:
        us = np.flatnonzero(self.g_to_h != EPSILON)
        return list(zip(us.tolist(), self.g_to_h[us].tolist()))

    @property
    def deletions(self) -> typing.List[int]:
        return np.flatnonzero(self.g_to_h == EPSILON).tolist()

    @property
    def insertions(self) -> typing.List[int]:
        return np.flatnonzero(self.h_to_g == EPSILON).tolist()

    def inverse(self) -> "VertexMapping":
        return VertexMapping(self.h_to_g, self.g_to_h)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, VertexMapping):
            return NotImplemented
        return np.array_equal(self.g_to_h, other.g_to_h) and np.array_equal(self.h_to_g, other.h_to_g)

    __hash__ = None  # type: ignore

    def __repr__(self) -> str:
        return (
            f"<VertexMapping substituted={len(self.substitutions)} "
            f"deleted={len(self.deletions)} inserted={len(self.insertions)}>"
        )


class GedResult(typing.NamedTuple):
    """Cost of the induced edit path, the mapping, and the cost the solver optimised."""

    cost: float
    mapping: VertexMapping
    assignment_cost: float


def induced_edit_cost(g: Graph, h: Graph, mapping: VertexMapping, costs: EditCosts) -> float:
    """Cost of the edit path induced by ``mapping``; every edge is charged once."""
    if mapping.g_to_h.size != g.vertex_count or mapping.h_to_g.size != h.vertex_count:
        raise ArgumentError(
            f"mapping covers {mapping.g_to_h.size}+{mapping.h_to_g.size} vertices, "
            f"graphs have {g.vertex_count}+{h.vertex_count}"
        )
    f = mapping.g_to_h
    us = np.flatnonzero(f != EPSILON)
    vs = f[us]
    substituted = us.size
    total = float(np.sum(costs.vertex_substitution_pairs(g, us, h, vs)))
    total += costs.tau_vertex * ((g.vertex_count - substituted) + (h.vertex_count - substituted))

    if g.edge_count:
        fa = f[g.edges[:, 0]]
        fb = f[g.edges[:, 1]]
        both = (fa != EPSILON) & (fb != EPSILON)
        lo = np.minimum(fa, fb)
        hi = np.maximum(fa, fb)
        codes = lo * h.vertex_count + hi
        pos = np.searchsorted(h.edge_codes, codes)
        pos = np.minimum(pos, max(h.edge_count - 1, 0))
        kept = both & (h.edge_count > 0)
        if h.edge_count:
            kept &= h.edge_codes[pos] == codes
        kept_rows = np.flatnonzero(kept)
        preserved = kept_rows.size
        if preserved and costs.edge_rule_for(g, h) == "dirac":
            h_rows = h.edge_code_order[pos[kept_rows]]
            total += float(np.sum(g.edge_labels[kept_rows] != h.edge_labels[h_rows]))
    else:
        preserved = 0
    total += costs.tau_edge * ((g.edge_count - preserved) + (h.edge_count - preserved))
    return total


def _price(
    g: Graph,
    h: Graph,
    images: typing.Dict[int, int],
    sub: np.ndarray,
    h_edges: typing.Dict[typing.Tuple[int, int], int],
    costs: EditCosts,
    dirac_edges: bool,
) -> float:
    # independent of induced_edit_cost: dictionaries and plain loops only
    total = 0.0
    for u, v in images.items():
        total += sub[u][v]
    total += costs.tau_vertex * (g.vertex_count + h.vertex_count - 2 * len(images))
    preserved = 0
    for e, (a, b) in enumerate(g.edges.tolist()):
        if a in images and b in images:
            x, y = images[a], images[b]
            f = h_edges.get((x, y) if x < y else (y, x))
            if f is not None:
                preserved += 1
                if dirac_edges and g.edge_labels[e] != h.edge_labels[f]:
                    total += 1.0
                continue
        total += costs.tau_edge
    total += costs.tau_edge * (h.edge_count - preserved)
    return total


def exact_ged_with_mapping(g: Graph, h: Graph, costs: EditCosts) -> typing.Tuple[float, VertexMapping]:
    """Minimum induced edit cost over all partial vertex bijections, with a minimising mapping.

    Enumerates ``sum_k C(n, k) * P(m, k)`` mappings, so it is limited to
    ``n + m <= 9``. The first minimum in enumeration order is kept.
    """
    n, m = g.vertex_count, h.vertex_count
    if n + m > BRUTEFORCE_LIMIT:
        raise CapacityError(f"exhaustive search limited to {BRUTEFORCE_LIMIT} vertices in total, got {n} + {m}")
    sub = costs.vertex_substitution_matrix(g, h).tolist()
    h_edges = {(a, b): f for f, (a, b) in enumerate(h.edges.tolist())}
    dirac_edges = costs.edge_rule_for(g, h) == "dirac"
    best = np.inf
    best_pairs: typing.Sequence[typing.Tuple[int, int]] = ()
    for k in range(min(n, m) + 1):
        for kept in itertools.combinations(range(n), k):
            for images in itertools.permutations(range(m), k):
                cost = _price(g, h, dict(zip(kept, images)), sub, h_edges, costs, dirac_edges)
                if cost < best:
                    best, best_pairs = cost, tuple(zip(kept, images))
    return float(best), VertexMapping.from_pairs(n, m, best_pairs)


def exact_ged_bruteforce(g: Graph, h: Graph, costs: EditCosts) -> float:
    """Exact graph edit distance of two tiny graphs by exhaustive search."""
    return exact_ged_with_mapping(g, h, costs)[0]


def _label_key(g: Graph, h: Graph, costs: EditCosts) -> typing.Optional[_assignment.PairKey]:
    rule = costs.vertex_rule_for(g, h)
    if rule == "dirac":
        g_lab, h_lab = g.vertex_labels.tolist(), h.vertex_labels.tolist()
    elif rule == "euclidean":
        g_lab = [tuple(x) for x in g.vertex_attributes.tolist()]
        h_lab = [tuple(x) for x in h.vertex_attributes.tolist()]
    else:
        return None

    def key(obj: typing.Hashable) -> typing.Optional[typing.Hashable]:
        side, v = obj[0], obj[1]
        if side == "g":
            return g_lab[v]
        if side == "h":
            return h_lab[v]
        return None

    return key


def approx_ged_linear(
    g: Graph,
    h: Graph,
    tree: CostTree,
    rho: LeafMap,
    costs: EditCosts,
    epsilon_node: typing.Optional[int] = None,
    literal_epsilon: bool = False,
    prefer_equal_labels: bool = True,
) -> GedResult:
    """Approximate GED through an optimal assignment on a cost tree.

    ``rho`` maps ``("g", v)`` and ``("h", v)`` to tree nodes. Deletions and
    insertions are represented by objects placed on an extra node at
    distance ``tau_vertex`` from every vertex; pass ``epsilon_node`` when
    ``tree`` already has it, otherwise it is attached here.
    """
    n, m = g.vertex_count, h.vertex_count
    a = [("g", v) for v in range(n)]
    b = [("h", v) for v in range(m)]
    if epsilon_node is None:
        placed = rho.nodes_of(a + b)
        tree, epsilon_node = attach_epsilon_node(
            tree, costs.tau_vertex, leaves=placed.tolist(), literal=literal_epsilon
        )
    eps_a = [("eps", "a", k) for k in range(m)]
    eps_b = [("eps", "b", k) for k in range(n)]
    extra = {obj: epsilon_node for obj in itertools.chain(eps_a, eps_b)}
    instance = _assignment.AssignmentInstance(a + eps_a, b + eps_b, tree, rho.extended(extra, tree=tree))
    key = _label_key(g, h, costs) if prefer_equal_labels else None
    result = _assignment.construct_assignment_pruned(instance, pair_key=key)

    pairs = []
    for x, y in result.pairs:
        if x[0] == "g" and y[0] == "h":
            pairs.append((x[1], y[1]))
    mapping = VertexMapping.from_pairs(n, m, pairs)
    return GedResult(induced_edit_cost(g, h, mapping, costs), mapping, result.cost)


def approx_ged_matrix(g: Graph, h: Graph, costs: EditCosts, solver: str = "hungarian") -> GedResult:
    """Bipartite GED heuristic: solve the ``n + m`` matrix with ``solver``.

    ``greedy`` walks the rows of G's vertices only, each taking its cheapest
    free column; vertices of H left over are inserted.
    """
    n, m = g.vertex_count, h.vertex_count
    matrix = baseline.bp_cost_matrix(g, h, costs)
    if solver == "hungarian":
        solved = baseline.hungarian(matrix)
        matrix_cost = solved.cost
    elif solver == "greedy":
        solved = baseline.greedy_rowwise(baseline.CostMatrix(matrix.entries[:n]))
        taken = {j for _, j in solved.pairs if j < m}
        matrix_cost = solved.cost + float(sum(matrix.entries[n + j, j] for j in range(m) if j not in taken))
    else:
        raise ArgumentError(f"unknown solver {solver!r}, expected 'hungarian' or 'greedy'")
    mapping = VertexMapping.from_pairs(n, m, [(i, j) for i, j in solved.pairs if i < n and j < m])
    return GedResult(induced_edit_cost(g, h, mapping, costs), mapping, matrix_cost)
