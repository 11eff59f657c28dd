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

import dataclasses
import math

import numpy as np

from treematch.errors import ConfigurationError
from treematch.graph import Graph

VERTEX_RULES = ("auto", "dirac", "euclidean", "zero")
EDGE_RULES = ("auto", "dirac", "zero")


@dataclasses.dataclass(frozen=True)
class EditCosts:
    """Costs of the edit operations.

    Inserting or deleting a vertex costs ``tau_vertex``, an edge
    ``tau_edge``. Vertex substitution is Dirac on labels (0 if equal, 1
    otherwise), the Euclidean distance of attributes, or free; edge
    substitution is Dirac on edge labels or free. ``auto`` picks labels
    when both graphs have them, then attributes, then free.
    """

    tau_vertex: float = 1.0
    tau_edge: float = 1.0
    vertex_rule: str = "auto"
    edge_rule: str = "auto"

    def __post_init__(self) -> None:
        for name in ("tau_vertex", "tau_edge"):
            value = getattr(self, name)
            if not (value > 0 and math.isfinite(value)):
                raise ConfigurationError(f"{name} must be positive and finite, got {value!r}")
        if self.vertex_rule not in VERTEX_RULES:
            raise ConfigurationError(f"vertex_rule must be one of {VERTEX_RULES}, got {self.vertex_rule!r}")
        if self.edge_rule not in EDGE_RULES:
            raise ConfigurationError(f"edge_rule must be one of {EDGE_RULES}, got {self.edge_rule!r}")

    def vertex_rule_for(self, g: Graph, h: Graph) -> str:
        rule = self.vertex_rule
        labels = g.vertex_labels is not None and h.vertex_labels is not None
        attributes = g.vertex_attributes is not None and h.vertex_attributes is not None
        if rule == "auto":
            return "dirac" if labels else "euclidean" if attributes else "zero"
        if rule == "dirac" and not labels:
            raise ConfigurationError("dirac vertex costs need vertex labels on both graphs")
        if rule == "euclidean":
            if not attributes:
                raise ConfigurationError("euclidean vertex costs need vertex attributes on both graphs")
            if g.attribute_dimension != h.attribute_dimension:
                raise ConfigurationError(
                    f"attribute dimensions differ: {g.attribute_dimension} != {h.attribute_dimension}"
                )
        return rule

    def edge_rule_for(self, g: Graph, h: Graph) -> str:
        labels = g.edge_labels is not None and h.edge_labels is not None
        if self.edge_rule == "auto":
            return "dirac" if labels else "zero"
        if self.edge_rule == "dirac" and not labels:
            raise ConfigurationError("dirac edge costs need edge labels on both graphs")
        return self.edge_rule

    def vertex_substitution_matrix(self, g: Graph, h: Graph) -> np.ndarray:
        """Substitution cost of every vertex of ``g`` by every vertex of ``h``."""
        rule = self.vertex_rule_for(g, h)
        if rule == "dirac":
            return (g.vertex_labels[:, None] != h.vertex_labels[None, :]).astype(np.float64)
        if rule == "euclidean":
            diff = g.vertex_attributes[:, None, :] - h.vertex_attributes[None, :, :]
            return np.sqrt(np.sum(diff * diff, axis=-1))
        return np.zeros((g.vertex_count, h.vertex_count))

    def vertex_substitution_pairs(self, g: Graph, us: np.ndarray, h: Graph, vs: np.ndarray) -> np.ndarray:
        """Substitution costs of the vertex pairs ``(us[k], vs[k])``."""
        rule = self.vertex_rule_for(g, h)
        if rule == "dirac":
            return (g.vertex_labels[us] != h.vertex_labels[vs]).astype(np.float64)
        if rule == "euclidean":
            diff = g.vertex_attributes[us] - h.vertex_attributes[vs]
            return np.sqrt(np.sum(diff * diff, axis=-1))
        return np.zeros(len(us))

    def vertex_substitution(self, g: Graph, u: int, h: Graph, v: int) -> float:
        rule = self.vertex_rule_for(g, h)
        if rule == "dirac":
            return float(g.vertex_labels[u] != h.vertex_labels[v])
        if rule == "euclidean":
            diff = g.vertex_attributes[u] - h.vertex_attributes[v]
            return float(np.sqrt(np.sum(diff * diff)))
        return 0.0

    def edge_substitution(self, g: Graph, e: int, h: Graph, f: int) -> float:
        """Substitution cost of edge row ``e`` of ``g`` by edge row ``f`` of ``h``."""
        if self.edge_rule_for(g, h) == "dirac":
            return float(g.edge_labels[e] != h.edge_labels[f])
        return 0.0
