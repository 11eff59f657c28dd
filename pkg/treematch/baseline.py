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

"""Matrix-based assignment solvers and the cost matrices of bipartite GED.

Forbidden entries are stored as :data:`FORBIDDEN` (``numpy.inf``) and are
never added into a cost.
"""

import typing

import numpy as np

from treematch import _utils
from treematch.assignment import Assignment
from treematch.costs import EditCosts
from treematch.errors import ArgumentError, CostModelError, SolverError
from treematch.graph import Graph
from treematch.tree import CostTree, LeafMap, path_distance_matrix

FORBIDDEN = np.inf


class CostMatrix:
    """Dense cost matrix with at most as many rows as columns."""

    def __init__(self, entries: typing.Any) -> None:
        array = np.array(entries, dtype=np.float64)
        if array.ndim != 2:
            raise ArgumentError(f"a cost matrix is 2-dimensional, got shape {array.shape}")
        if array.shape[0] > array.shape[1]:
            raise ArgumentError(f"more rows than columns: {array.shape}")
        if np.isnan(array).any():
            raise ArgumentError("cost matrix contains NaN")
        if (array < 0).any():
            raise ArgumentError("cost matrix contains negative entries")
        array.flags.writeable = False
        self.entries = array

    @property
    def shape(self) -> typing.Tuple[int, int]:
        return self.entries.shape

    @property
    def order(self) -> int:
        if self.entries.shape[0] != self.entries.shape[1]:
            raise ArgumentError(f"matrix of shape {self.entries.shape} is not square")
        return self.entries.shape[0]

    def cost_of(self, pairs: typing.Iterable[typing.Tuple[int, int]]) -> float:
        return float(sum(self.entries[i, j] for i, j in pairs))

    def __repr__(self) -> str:
        return f"<CostMatrix {self.entries.shape[0]}x{self.entries.shape[1]}>"


def _as_matrix(matrix: typing.Union[CostMatrix, typing.Any]) -> CostMatrix:
    return matrix if isinstance(matrix, CostMatrix) else CostMatrix(matrix)


def hungarian(matrix: typing.Union[CostMatrix, typing.Any]) -> Assignment:
    """Minimum-cost bijection of a square matrix, O(n^3).

    Shortest augmenting paths with row and column potentials; pairs are
    ``(row, column)`` sorted by row. Ties go to the lowest column index.
    """
    matrix = _as_matrix(matrix)
    n = matrix.order
    c = matrix.entries
    # 1-based potentials and matching, index 0 is the virtual source column
    u = np.zeros(n + 1)
    v = np.zeros(n + 1)
    match = np.zeros(n + 1, dtype=np.int64)
    way = np.zeros(n + 1, dtype=np.int64)
    for i in range(1, n + 1):
        match[0] = i
        j0 = 0
        minv = np.full(n + 1, np.inf)
        used = np.zeros(n + 1, dtype=bool)
        while True:
            used[j0] = True
            i0 = match[j0]
            free = ~used[1:]
            reduced = c[i0 - 1] - u[i0] - v[1:]
            better = free & (reduced < minv[1:])
            minv[1:][better] = reduced[better]
            way[1:][better] = j0
            candidates = np.where(free, minv[1:], np.inf)
            j1 = int(np.argmin(candidates)) + 1
            delta = candidates[j1 - 1]
            if not np.isfinite(delta):
                raise SolverError(f"no bijection avoids the forbidden entries (row {i - 1})")
            u[match[used]] += delta
            v[used] -= delta
            minv[1:][free] -= delta
            j0 = j1
            if match[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            match[j0] = match[j1]
            j0 = j1
    pairs = sorted((int(match[j]) - 1, j - 1) for j in range(1, n + 1))
    return Assignment(tuple(pairs), matrix.cost_of(pairs))


def greedy_rowwise(matrix: typing.Union[CostMatrix, typing.Any]) -> Assignment:
    """Give every row, in index order, its cheapest unused column, O(n^2)."""
    matrix = _as_matrix(matrix)
    used = np.zeros(matrix.shape[1], dtype=bool)
    pairs = []
    for i, row in enumerate(matrix.entries):
        candidates = np.where(used, np.inf, row)
        j = int(np.argmin(candidates))
        if not np.isfinite(candidates[j]):
            raise SolverError(f"row {i} has no unused admissible column")
        used[j] = True
        pairs.append((i, j))
    return Assignment(tuple(pairs), matrix.cost_of(pairs))


def _incident_edge_cost(g: Graph, u: int, h: Graph, v: int, costs: EditCosts) -> float:
    """Optimal assignment between the edges incident to ``u`` and to ``v``."""
    g_ptr, _, g_edges = g.adjacency
    h_ptr, _, h_edges = h.adjacency
    ge = g_edges[g_ptr[u] : g_ptr[u + 1]]
    he = h_edges[h_ptr[v] : h_ptr[v + 1]]
    p, q = ge.size, he.size
    if costs.edge_rule_for(g, h) == "zero":
        return abs(p - q) * costs.tau_edge
    if p == 0 or q == 0:
        return (p + q) * costs.tau_edge
    inner = np.zeros((p + q, p + q))
    inner[:p, :q] = g.edge_labels[ge][:, None] != h.edge_labels[he][None, :]
    inner[:p, q:] = FORBIDDEN
    inner[p:, :q] = FORBIDDEN
    np.fill_diagonal(inner[:p, q:], costs.tau_edge)
    np.fill_diagonal(inner[p:, :q], costs.tau_edge)
    return hungarian(inner).cost


def bp_cost_matrix(g: Graph, h: Graph, costs: EditCosts) -> CostMatrix:
    """Square matrix of order ``n + m`` for the bipartite GED heuristic.

    Rows are the vertices of ``g`` followed by ``m`` insertion rows; columns
    are the vertices of ``h`` followed by ``n`` deletion columns. Entry
    ``(i, j)`` adds the cost of optimally matching the incident edges to the
    vertex substitution cost; deleting ``u`` costs ``tau_vertex`` plus
    ``tau_edge`` per incident edge, likewise for insertions.
    """
    n, m = g.vertex_count, h.vertex_count
    c = np.zeros((n + m, n + m))
    sub = costs.vertex_substitution_matrix(g, h)
    if costs.edge_rule_for(g, h) == "zero":
        sub = sub + np.abs(g.degrees[:, None] - h.degrees[None, :]) * costs.tau_edge
    else:
        for i in range(n):
            for j in range(m):
                sub[i, j] += _incident_edge_cost(g, i, h, j, costs)
    c[:n, :m] = sub
    c[:n, m:] = FORBIDDEN
    c[n:, :m] = FORBIDDEN
    np.fill_diagonal(c[:n, m:], costs.tau_vertex + g.degrees * costs.tau_edge)
    np.fill_diagonal(c[n:, :m], costs.tau_vertex + h.degrees * costs.tau_edge)
    return CostMatrix(c)


def ultra_cost_matrix(g: Graph, h: Graph, tree: CostTree, rho: LeafMap, tau_vertex: float) -> CostMatrix:
    """Matrix of order ``n + m`` with tree distances and a constant ``tau_vertex`` for every deletion and insertion.

    ``rho`` is a per-pair map with keys ``("g", v)`` and ``("h", v)``.
    """
    n, m = g.vertex_count, h.vertex_count
    sub = path_distance_matrix(
        tree, rho.nodes_of([("g", v) for v in range(n)]), rho.nodes_of([("h", v) for v in range(m)])
    )
    if sub.size:
        worst = np.unravel_index(np.argmax(sub), sub.shape)
        if sub[worst] > tau_vertex and not _utils.isclose(sub[worst], tau_vertex):
            raise CostModelError(
                f"substitution cost {sub[worst]!r} of vertices {worst[0]} and {worst[1]} exceeds tau {tau_vertex!r}"
            )
    c = np.full((n + m, n + m), float(tau_vertex))
    c[:n, :m] = sub
    c[n:, m:] = 0.0
    return CostMatrix(c)


def strong_triangle_violations(
    matrix: typing.Union[CostMatrix, typing.Any],
    tol: float = 1e-9,
    samples: typing.Optional[int] = None,
    seed: int = 0,
) -> typing.List[typing.Tuple[int, int, int, int]]:
    """Quadruples ``(a, b, a2, b2)`` with ``C[a, b2] > max(C[a, b], C[a2, b], C[a2, b2])``.

    Costs drawn from an ultrametric never produce such a quadruple. The
    search is exhaustive unless ``samples`` quadruples are drawn at random.
    """
    c = _as_matrix(matrix).entries
    rows, cols = c.shape

    def violated(lhs: np.ndarray, rhs: np.ndarray) -> np.ndarray:
        with np.errstate(invalid="ignore"):
            return lhs > rhs + tol * np.maximum(1.0, np.abs(rhs))

    found = []
    if samples is None:
        for a in range(rows):
            for a2 in range(rows):
                if a2 == a:
                    continue
                # axes: b, b2
                rhs = np.maximum(np.maximum(c[a][:, None], c[a2][:, None]), c[a2][None, :])
                hits = violated(np.broadcast_to(c[a][None, :], rhs.shape), rhs)
                for b, b2 in zip(*np.nonzero(hits)):
                    found.append((a, int(b), a2, int(b2)))
        return found
    rng = np.random.default_rng(seed)
    a = rng.integers(0, rows, samples)
    a2 = rng.integers(0, rows, samples)
    b = rng.integers(0, cols, samples)
    b2 = rng.integers(0, cols, samples)
    rhs = np.maximum(np.maximum(c[a, b], c[a2, b]), c[a2, b2])
    hits = violated(c[a, b2], rhs)
    return sorted({(int(a[k]), int(b[k]), int(a2[k]), int(b2[k])) for k in np.flatnonzero(hits)})
