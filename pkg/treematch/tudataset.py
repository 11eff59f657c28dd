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

"""Reading and writing the TUDataset text format.

A dataset ``NAME`` is a directory holding ``NAME_A.txt`` (one directed edge
``i, j`` per line, 1-based global vertex ids), ``NAME_graph_indicator.txt``
(graph id of every vertex) and optionally ``NAME_graph_labels.txt``,
``NAME_node_labels.txt``, ``NAME_node_attributes.txt`` and
``NAME_edge_labels.txt``.
"""

import logging
import os
import typing

from treematch.errors import FormatError, IngestionError
from treematch.graph import Dataset, Graph, Split

LOG = logging.getLogger(__name__)


def _path(directory: str, name: str, suffix: str) -> str:
    return os.path.join(directory, f"{name}_{suffix}.txt")


def _read_rows(path: str) -> typing.Iterator[typing.Tuple[int, typing.List[str]]]:
    try:
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.strip()
                if not line:
                    continue
                yield lineno, [field.strip() for field in line.split(",")]
    except OSError as e:
        raise IngestionError(f"cannot read {path}: {e.strerror}", path) from e


def _read_ints(path: str, width: typing.Optional[int] = None) -> typing.List[int]:
    values = []
    for lineno, fields in _read_rows(path):
        if width is not None and len(fields) != width:
            raise FormatError(f"expected {width} fields, got {len(fields)}", path, lineno)
        try:
            values.append(int(fields[0]))
        except ValueError as e:
            raise FormatError(f"not an integer: {fields[0]!r}", path, lineno) from e
    return values


def _require(path: str) -> str:
    if not os.path.isfile(path):
        raise IngestionError(f"missing mandatory file {path}", path)
    return path


def load_tudataset(directory: str, name: str) -> Dataset:
    """Load dataset ``name`` from ``directory``.

    Vertex ids are remapped to 0-based indices local to their graph. The two
    directed rows of an edge are collapsed into one undirected edge; an edge
    listed in one direction only is kept and reported as a warning.
    """
    a_path = _require(_path(directory, name, "A"))
    indicator_path = _require(_path(directory, name, "graph_indicator"))

    indicator = _read_ints(indicator_path, width=1)
    if not indicator:
        raise FormatError("no vertices", indicator_path)
    if min(indicator) < 1:
        raise FormatError("graph ids are 1-based", indicator_path)
    graph_count = max(indicator)

    # global vertex (0-based) -> (graph, local index); the mapping is dropped after loading
    local = []
    sizes = [0] * graph_count
    for gid in indicator:
        local.append(sizes[gid - 1])
        sizes[gid - 1] += 1

    node_labels = None
    path = _path(directory, name, "node_labels")
    if os.path.isfile(path):
        node_labels = _read_ints(path)
        if len(node_labels) != len(indicator):
            raise FormatError(f"{len(node_labels)} node labels for {len(indicator)} vertices", path)

    attributes = None
    path = _path(directory, name, "node_attributes")
    if os.path.isfile(path):
        attributes = []
        dimension = None
        for lineno, fields in _read_rows(path):
            if dimension is None:
                dimension = len(fields)
            elif len(fields) != dimension:
                raise FormatError(f"ragged attribute row: {len(fields)} values, expected {dimension}", path, lineno)
            try:
                attributes.append([float(x) for x in fields])
            except ValueError as e:
                raise FormatError(f"not a real number in {fields!r}", path, lineno) from e
        if len(attributes) != len(indicator):
            raise FormatError(f"{len(attributes)} attribute rows for {len(indicator)} vertices", path)

    edge_label_rows = None
    path = _path(directory, name, "edge_labels")
    if os.path.isfile(path):
        edge_label_rows = _read_ints(path)

    # per graph: undirected (u, v) -> [label, directions seen]
    edge_maps: typing.List[typing.Dict[typing.Tuple[int, int], typing.List[typing.Any]]] = [
        {} for _ in range(graph_count)
    ]
    row = 0
    for lineno, fields in _read_rows(a_path):
        if len(fields) != 2:
            raise FormatError(f"expected 2 fields, got {len(fields)}", a_path, lineno)
        try:
            i, j = int(fields[0]) - 1, int(fields[1]) - 1
        except ValueError as e:
            raise FormatError(f"not an edge: {fields!r}", a_path, lineno) from e
        if not (0 <= i < len(indicator) and 0 <= j < len(indicator)):
            raise FormatError(f"vertex id out of range in {fields!r}", a_path, lineno)
        if indicator[i] != indicator[j]:
            raise FormatError(
                f"edge joins vertex {i + 1} of graph {indicator[i]} and vertex {j + 1} of graph {indicator[j]}",
                a_path,
                lineno,
            )
        label = None
        if edge_label_rows is not None:
            if row >= len(edge_label_rows):
                raise FormatError("fewer edge labels than edge rows", _path(directory, name, "edge_labels"))
            label = edge_label_rows[row]
        row += 1
        if i == j:
            LOG.warning("%s: dropping self-loop on vertex %d (line %d)", a_path, i + 1, lineno)
            continue
        u, v = local[i], local[j]
        key = (u, v) if u < v else (v, u)
        direction = 1 if u < v else 2
        entry = edge_maps[indicator[i] - 1].get(key)
        if entry is None:
            edge_maps[indicator[i] - 1][key] = [label, direction]
        else:
            if entry[0] != label:
                LOG.warning("%s: conflicting labels for edge %s (line %d), keeping the first", a_path, key, lineno)
            entry[1] |= direction
    if edge_label_rows is not None and len(edge_label_rows) != row:
        raise FormatError(
            f"{len(edge_label_rows)} edge labels for {row} edge rows", _path(directory, name, "edge_labels")
        )

    graph_labels = None
    path = _path(directory, name, "graph_labels")
    if os.path.isfile(path):
        graph_labels = _read_ints(path)
        if len(graph_labels) != graph_count:
            raise FormatError(f"{len(graph_labels)} graph labels for {graph_count} graphs", path)
    else:
        LOG.warning("%s missing, all graphs get class 0", path)
        graph_labels = [0] * graph_count

    odd = 0
    graphs = []
    offsets = [0] * (graph_count + 1)
    order = sorted(range(len(indicator)), key=lambda k: (indicator[k], local[k]))
    for gid in range(graph_count):
        offsets[gid + 1] = offsets[gid] + sizes[gid]
    for gid in range(graph_count):
        members = order[offsets[gid] : offsets[gid + 1]]
        edges = []
        labels = []
        for key, (label, seen) in edge_maps[gid].items():
            if seen != 3:
                odd += 1
            edges.append(key)
            labels.append(label)
        graphs.append(
            Graph(
                sizes[gid],
                edges,
                vertex_labels=[node_labels[k] for k in members] if node_labels is not None else None,
                vertex_attributes=[attributes[k] for k in members] if attributes is not None else None,
                edge_labels=labels if edge_label_rows is not None else None,
            )
        )
    if odd:
        LOG.warning("%s: %d edges listed in one direction only", a_path, odd)
    LOG.info("loaded %s: %d graphs, %d vertices", name, graph_count, len(indicator))
    return Dataset(graphs, graph_labels, name)


def save_tudataset(dataset: Dataset, directory: str) -> None:
    """Write ``dataset`` to ``directory`` in the TUDataset text format."""
    os.makedirs(directory, exist_ok=True)
    name = dataset.name
    offset = 0
    with open(_path(directory, name, "A"), "w", encoding="utf-8", newline="\n") as a_file, open(
        _path(directory, name, "graph_indicator"), "w", encoding="utf-8", newline="\n"
    ) as indicator_file:
        edge_labels = []
        for gid, graph in enumerate(dataset.graphs, start=1):
            for _ in range(graph.vertex_count):
                indicator_file.write(f"{gid}\n")
            for row, (u, v) in enumerate(graph.edges.tolist()):
                a_file.write(f"{u + offset + 1}, {v + offset + 1}\n")
                a_file.write(f"{v + offset + 1}, {u + offset + 1}\n")
                if graph.edge_labels is not None:
                    label = int(graph.edge_labels[row])
                    edge_labels.extend((label, label))
            offset += graph.vertex_count

    with open(_path(directory, name, "graph_labels"), "w", encoding="utf-8", newline="\n") as f:
        f.writelines(f"{c}\n" for c in dataset.class_labels)

    if dataset.has_edge_labels:
        with open(_path(directory, name, "edge_labels"), "w", encoding="utf-8", newline="\n") as f:
            f.writelines(f"{c}\n" for c in edge_labels)

    if dataset.has_vertex_labels:
        with open(_path(directory, name, "node_labels"), "w", encoding="utf-8", newline="\n") as f:
            for graph in dataset.graphs:
                f.writelines(f"{c}\n" for c in graph.vertex_labels.tolist())

    if dataset.has_vertex_attributes:
        with open(_path(directory, name, "node_attributes"), "w", encoding="utf-8", newline="\n") as f:
            for graph in dataset.graphs:
                for vector in graph.vertex_attributes.tolist():
                    f.write(", ".join(repr(x) for x in vector) + "\n")


_SPLIT_PARTS = ("train", "validation", "test")


def load_split(path: str) -> Split:
    """Read a predefined split.

    The file holds one line per part, ``train: 0, 4, 7``, ``validation: ...``
    and ``test: ...``, with 0-based dataset indices. Blank lines and lines
    starting with ``#`` are skipped.
    """
    parts: typing.Dict[str, typing.Tuple[int, ...]] = {}
    try:
        with open(path, encoding="utf-8") as f:
            lines = f.readlines()
    except OSError as e:
        raise IngestionError(f"cannot read {path}: {e.strerror}", path) from e
    for lineno, line in enumerate(lines, start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        label, sep, rest = line.partition(":")
        label = label.strip()
        if not sep or label not in _SPLIT_PARTS:
            raise FormatError(f"expected one of {', '.join(_SPLIT_PARTS)} followed by ':'", path, lineno)
        if label in parts:
            raise FormatError(f"part {label!r} given twice", path, lineno)
        try:
            parts[label] = tuple(int(x) for x in rest.split(",") if x.strip())
        except ValueError as e:
            raise FormatError(f"not an index list: {rest.strip()!r}", path, lineno) from e
    missing = [p for p in _SPLIT_PARTS if p not in parts]
    if missing:
        raise FormatError(f"missing part(s) {', '.join(missing)}", path)
    return Split(parts["train"], parts["validation"], parts["test"])
