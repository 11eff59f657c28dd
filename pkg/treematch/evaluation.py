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

"""Classification experiments and runtime benchmarks.

k-nearest-neighbour classification selects its parameters by grid search on
the validation part of a split. Distances are computed by
:func:`pairwise_distances`, optionally in a process pool and cached on disk.
"""

import dataclasses
import hashlib
import itertools
import logging
import os
import tempfile
import time
import typing
from concurrent import futures

import numpy as np

from treematch import _utils
from treematch.after import PairCallState, after_nothing
from treematch.costs import EditCosts
from treematch.errors import ArgumentError, CapacityError, ConfigurationError, FormatError
from treematch.graph import Dataset, Split
from treematch.methods import make_method, method_base
from treematch.sampling import random_gnp
from treematch.stop import stop_base, stop_never

LOG = logging.getLogger(__name__)

Pair = typing.Tuple[int, int]
AfterCallback = typing.Callable[[PairCallState], None]


@dataclasses.dataclass(frozen=True)
class GridSpec:
    k: typing.Sequence[int] = (1, 3, 5)
    tau_vertex: typing.Sequence[float] = (0.1, 0.5, 0.9, 1.3, 1.7)
    tau_edge: typing.Sequence[float] = (0.1, 0.5, 0.9, 1.3, 1.7)

    def __post_init__(self) -> None:
        for name in ("k", "tau_vertex", "tau_edge"):
            values = tuple(getattr(self, name))
            if not values:
                raise ConfigurationError(f"grid {name} needs at least one choice")
            object.__setattr__(self, name, values)
        if min(self.k) < 1:
            raise ConfigurationError(f"k choices must be positive, got {self.k}")
        if min(self.tau_vertex) <= 0 or min(self.tau_edge) <= 0:
            raise ConfigurationError("tau choices must be positive")

    def __len__(self) -> int:
        return len(self.k) * len(self.tau_vertex) * len(self.tau_edge)


class EvalReport(typing.NamedTuple):
    dataset: str
    method: str
    k: int
    tau_vertex: float
    tau_edge: float
    validation_accuracy: float
    test_accuracy: float
    # wall-clock seconds per phase: tree, validation, test
    seconds: typing.Dict[str, float]


class BenchState(typing.NamedTuple):
    """Progress of one method through a scaling benchmark, checked by stop strategies."""

    method: str
    size: int
    seconds: float
    seconds_since_start: float


class BenchRow(typing.NamedTuple):
    n: int
    method: str
    mean_seconds: float
    stddev_seconds: float


def knn_vote(
    distances: typing.Sequence[float],
    train_labels: typing.Sequence[int],
    k: int,
    train_ids: typing.Optional[typing.Sequence[int]] = None,
) -> int:
    """Majority class of the ``k`` nearest training graphs.

    Equal distances are ordered by training index. A tied vote goes to the
    class with the smaller summed distance, then to the smaller class.
    """
    distances = np.asarray(distances, dtype=np.float64)
    if not distances.size:
        raise ArgumentError("empty training set")
    if not 1 <= k <= distances.size:
        raise ArgumentError(f"k must lie in [1, {distances.size}], got {k}")
    ids = np.arange(distances.size) if train_ids is None else np.asarray(train_ids)
    nearest = np.lexsort((ids, distances))[:k]
    votes: typing.Dict[int, typing.Tuple[int, float]] = {}
    for idx in nearest.tolist():
        label = int(train_labels[idx])
        count, summed = votes.get(label, (0, 0.0))
        votes[label] = (count + 1, summed + float(distances[idx]))
    return min(votes, key=lambda c: (-votes[c][0], votes[c][1], c))


def knn_predict(
    train: typing.Sequence[int],
    query: int,
    k: int,
    distance: typing.Callable[[int, int], float],
    labels: typing.Sequence[int],
) -> int:
    """Predict the class of graph ``query`` from the graphs ``train``.

    ``distance(query, t)`` is evaluated for every training index ``t``;
    ``labels`` holds the class of every graph of the dataset.
    """
    train = list(train)
    if not train:
        raise ArgumentError("empty training set")
    distances = [distance(query, t) for t in train]
    return knn_vote(distances, [labels[t] for t in train], k, train)


def knn_accuracy(
    distances: np.ndarray,
    query_labels: typing.Sequence[int],
    train_labels: typing.Sequence[int],
    k: int,
    train_ids: typing.Optional[typing.Sequence[int]] = None,
) -> float:
    """Fraction of queries (rows of ``distances``) classified correctly."""
    if not len(query_labels):
        raise ArgumentError("no queries to classify")
    hits = sum(
        knn_vote(row, train_labels, k, train_ids) == int(label) for row, label in zip(distances, query_labels)
    )
    return hits / len(query_labels)


def _run_chunk(method: method_base, pairs: typing.Sequence[Pair]) -> typing.List[typing.Tuple[float, float]]:
    results = []
    for i, j in pairs:
        started = time.perf_counter()
        cost = method(i, j).cost
        results.append((cost, time.perf_counter() - started))
    return results


def compute_pairs(
    method: method_base,
    pairs: typing.Iterable[Pair],
    workers: int = 1,
    after: AfterCallback = after_nothing,
) -> typing.List[typing.Tuple[float, float]]:
    """``(distance, seconds)`` of every pair, in the order of ``pairs``.

    With ``workers > 1`` contiguous chunks of pairs run in a process pool;
    the distances do not depend on the number of workers. ``after`` runs in
    the calling process once per pair, in pair order.
    """
    if workers < 1:
        raise ArgumentError(f"workers must be positive, got {workers}")
    pairs = [(int(i), int(j)) for i, j in pairs]
    results: typing.List[typing.Tuple[float, float]] = []
    if workers == 1 or len(pairs) < 2:
        for i, j in pairs:
            results.extend(_run_chunk(method, [(i, j)]))
            after(PairCallState(method, i, j, results[-1][1], results[-1][0], len(results)))
        return results

    size = -(-len(pairs) // (workers * 4))
    chunks = [pairs[s : s + size] for s in range(0, len(pairs), size)]
    with futures.ProcessPoolExecutor(max_workers=workers) as executor:
        for chunk, chunk_results in zip(chunks, executor.map(_run_chunk, itertools.repeat(method), chunks)):
            for (i, j), (cost, seconds) in zip(chunk, chunk_results):
                results.append((cost, seconds))
                after(PairCallState(method, i, j, seconds, cost, len(results)))
    method.statistics["pairs"] += len(pairs)
    return results


def pairwise_distances(
    method: method_base,
    rows: typing.Sequence[int],
    cols: typing.Sequence[int],
    workers: int = 1,
    after: AfterCallback = after_nothing,
) -> np.ndarray:
    """Distance matrix between the graphs ``rows`` and ``cols``."""
    pairs = list(itertools.product(rows, cols))
    values = [cost for cost, _ in compute_pairs(method, pairs, workers, after)]
    return np.array(values, dtype=np.float64).reshape(len(rows), len(cols))


class DistanceCache:
    """Distance matrices stored as text under ``directory``.

    A file starts with the header ``dataset method params rows cols``
    followed by one line of ``repr`` floats per row. File names hash the
    header fields and the row and column indices.
    """

    def __init__(self, directory: str) -> None:
        self.directory = directory
        os.makedirs(directory, exist_ok=True)

    @staticmethod
    def header(dataset: str, method: str, params: str, rows: typing.Sequence[int], cols: typing.Sequence[int]) -> str:
        return f"{dataset} {method} {params} {len(rows)} {len(cols)}"

    def path(
        self, dataset: str, method: str, params: str, rows: typing.Sequence[int], cols: typing.Sequence[int]
    ) -> str:
        digest = hashlib.sha1(f"{dataset} {method} {params}\n".encode("utf-8"))
        digest.update(",".join(map(str, rows)).encode("ascii") + b"\n")
        digest.update(",".join(map(str, cols)).encode("ascii"))
        return os.path.join(self.directory, f"{method}-{digest.hexdigest()[:20]}.txt")

    def load(
        self, dataset: str, method: str, params: str, rows: typing.Sequence[int], cols: typing.Sequence[int]
    ) -> typing.Optional[np.ndarray]:
        path = self.path(dataset, method, params, rows, cols)
        if not os.path.isfile(path):
            return None
        with open(path, encoding="utf-8") as f:
            lines = f.read().splitlines()
        if not lines or lines[0] != self.header(dataset, method, params, rows, cols):
            LOG.warning("ignoring cache file %s with unexpected header", path)
            return None
        matrix = np.zeros((len(rows), len(cols)))
        if len(lines) - 1 != len(rows):
            raise FormatError(f"expected {len(rows)} rows, got {len(lines) - 1}", path)
        for r, line in enumerate(lines[1:]):
            try:
                values = [float(x) for x in line.split()]
            except ValueError as e:
                raise FormatError(f"not a float row: {line!r}", path, r + 2) from e
            if len(values) != len(cols):
                raise FormatError(f"expected {len(cols)} values, got {len(values)}", path, r + 2)
            matrix[r] = values
        LOG.debug("loaded %dx%d distances from %s", len(rows), len(cols), path)
        return matrix

    def store(
        self,
        dataset: str,
        method: str,
        params: str,
        rows: typing.Sequence[int],
        cols: typing.Sequence[int],
        matrix: np.ndarray,
    ) -> str:
        path = self.path(dataset, method, params, rows, cols)
        lines = [self.header(dataset, method, params, rows, cols)]
        lines.extend(" ".join(repr(float(x)) for x in row) for row in np.asarray(matrix).tolist())
        fd, tmp = tempfile.mkstemp(dir=self.directory, suffix=".tmp")
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
            f.write("\n".join(lines) + "\n")
        os.replace(tmp, path)
        return path


def _distances(
    method: method_base,
    rows: typing.Sequence[int],
    cols: typing.Sequence[int],
    workers: int,
    cache: typing.Optional[DistanceCache],
    after: AfterCallback,
) -> np.ndarray:
    key = (method.dataset.name, method.name, method.params, list(rows), list(cols))
    if cache is not None:
        matrix = cache.load(*key)
        if matrix is not None:
            return matrix
    matrix = pairwise_distances(method, rows, cols, workers, after)
    if cache is not None:
        cache.store(*key, matrix)
    return matrix


def grid_search(
    dataset: Dataset,
    split: Split,
    grid: GridSpec,
    method: method_base,
    workers: int = 1,
    cache: typing.Optional[DistanceCache] = None,
    after: AfterCallback = after_nothing,
) -> EvalReport:
    """Pick k and the edit costs on the validation graphs, then classify the test graphs.

    The best grid point has the highest validation accuracy; ties go to the
    smaller k, then the smaller ``tau_vertex``, then the smaller ``tau_edge``.
    ``method`` is re-costed with :meth:`method_base.with_costs` per point.
    """
    split = split.check(len(dataset))
    if max(grid.k) > len(split.train):
        raise ArgumentError(f"k up to {max(grid.k)} needs as many training graphs, got {len(split.train)}")
    labels = np.asarray(dataset.class_labels)
    train_labels = labels[list(split.train)]

    started = time.perf_counter()
    best: typing.Optional[typing.Tuple[typing.Tuple[float, int, float, float], float]] = None
    for tau_vertex, tau_edge in itertools.product(grid.tau_vertex, grid.tau_edge):
        variant = method.with_costs(dataclasses.replace(method.costs, tau_vertex=tau_vertex, tau_edge=tau_edge))
        matrix = _distances(variant, split.validation, split.train, workers, cache, after)
        for k in grid.k:
            accuracy = knn_accuracy(matrix, labels[list(split.validation)], train_labels, k, split.train)
            key = (-accuracy, k, tau_vertex, tau_edge)
            if best is None or key < best[0]:
                best = (key, accuracy)
            LOG.debug("k=%d tau_vertex=%r tau_edge=%r: validation accuracy %.4f", k, tau_vertex, tau_edge, accuracy)
    validation_seconds = time.perf_counter() - started
    assert best is not None
    (_, k, tau_vertex, tau_edge), validation_accuracy = best

    started = time.perf_counter()
    chosen = method.with_costs(dataclasses.replace(method.costs, tau_vertex=tau_vertex, tau_edge=tau_edge))
    matrix = _distances(chosen, split.test, split.train, workers, cache, after)
    test_accuracy = knn_accuracy(matrix, labels[list(split.test)], train_labels, k, split.train)
    test_seconds = time.perf_counter() - started
    LOG.info(
        "%s on %s: k=%d tau_vertex=%r tau_edge=%r validation %.4f test %.4f",
        method.name,
        dataset.name,
        k,
        tau_vertex,
        tau_edge,
        validation_accuracy,
        test_accuracy,
    )
    return EvalReport(
        dataset.name,
        method.name,
        k,
        tau_vertex,
        tau_edge,
        validation_accuracy,
        test_accuracy,
        {
            "tree": float(method.statistics.get("tree_seconds", 0.0)),
            "validation": validation_seconds,
            "test": test_seconds,
        },
    )


def _derived_seed(seed: int, *parts: int) -> int:
    return int(np.random.SeedSequence([seed, *parts]).generate_state(1)[0])


def _check_bench(sizes: typing.Sequence[int], reps: int) -> None:
    if not sizes or min(sizes) < 1:
        raise ArgumentError(f"sizes must be positive, got {list(sizes)}")
    if reps < 1:
        raise ArgumentError(f"reps must be positive, got {reps}")


def _bench(
    methods: typing.Sequence[str],
    sizes: typing.Sequence[int],
    reps: int,
    stop: stop_base,
    measure: typing.Callable[[str, int, int], float],
) -> typing.List[BenchRow]:
    rows = []
    for name in methods:
        started = time.perf_counter()
        for n in sizes:
            try:
                timings = [measure(name, n, rep) for rep in range(reps)]
            except CapacityError as e:
                LOG.warning("%s stopped before size %d: %s", name, n, e)
                break
            rows.append(BenchRow(n, name, float(np.mean(timings)), float(np.std(timings))))
            state = BenchState(name, n, float(np.sum(timings)), time.perf_counter() - started)
            if stop(state):
                LOG.info("%s exhausted its budget at size %d", name, n)
                break
    return rows


def bench_scaling(
    sizes: typing.Sequence[int],
    p: float = 0.15,
    reps: int = 10,
    methods: typing.Sequence[str] = ("linear", "bp"),
    seed: int = 0,
    costs: EditCosts = EditCosts(),
    stop: stop_base = stop_never,
) -> typing.List[BenchRow]:
    """Mean seconds per distance between two random graphs of every size.

    The linear method's timing includes building its tree. Every method
    sees the same graphs; ``stop`` ends a method's run after a size.
    """
    _check_bench(sizes, reps)
    _utils.check_probability(p)

    def measure(name: str, n: int, rep: int) -> float:
        g = random_gnp(n, p, _derived_seed(seed, n, rep, 0))
        h = random_gnp(n, p, _derived_seed(seed, n, rep, 1))
        pair = Dataset([g, h], [0, 0], f"gnp-{n}")
        started = time.perf_counter()
        make_method(name, pair, costs)(0, 1)
        return time.perf_counter() - started

    return _bench(methods, sizes, reps, stop, measure)


def bench_dataset_scaling(
    counts: typing.Sequence[int],
    graph_size: int = 15,
    p: float = 0.15,
    reps: int = 1,
    methods: typing.Sequence[str] = ("linear", "bp"),
    seed: int = 0,
    costs: EditCosts = EditCosts(),
    stop: stop_base = stop_never,
    workers: int = 1,
) -> typing.List[BenchRow]:
    """Seconds to compute all pairwise distances of ``count`` random graphs."""
    _check_bench(counts, reps)
    _utils.check_probability(p)

    def measure(name: str, count: int, rep: int) -> float:
        graphs = [random_gnp(graph_size, p, _derived_seed(seed, count, rep, k)) for k in range(count)]
        dataset = Dataset(graphs, [0] * count, f"gnp-{graph_size}x{count}")
        started = time.perf_counter()
        method = make_method(name, dataset, costs)
        compute_pairs(method, itertools.combinations(range(count), 2), workers)
        return time.perf_counter() - started

    return _bench(methods, counts, reps, stop, measure)


def loglog_slope(rows: typing.Iterable[BenchRow], method: str) -> float:
    """Least-squares slope of log time against log size."""
    points = [(r.n, r.mean_seconds) for r in rows if r.method == method and r.mean_seconds > 0]
    if len({n for n, _ in points}) < 2:
        raise ArgumentError(f"need timings at two sizes at least for {method!r}")
    x = np.log([n for n, _ in points])
    y = np.log([t for _, t in points])
    return float(np.polyfit(x, y, 1)[0])


class Comparison(typing.NamedTuple):
    pairs: typing.List[Pair]
    names: typing.Tuple[str, ...]
    # one column per method
    distances: np.ndarray

    def diagonal(self) -> typing.Dict[str, typing.Tuple[int, int, int]]:
        """Per method: pairs ``(below, on, above)`` the first method's distance."""
        reference = self.distances[:, 0]
        result = {}
        for c, name in enumerate(self.names):
            column = self.distances[:, c]
            on = np.isclose(column, reference, rtol=_utils.REL_TOL, atol=0.0)
            below = int(np.sum((column < reference) & ~on))
            above = int(np.sum((column > reference) & ~on))
            result[name] = (below, int(np.sum(on)), above)
        return result


def compare_methods(
    dataset: Dataset,
    pairs: typing.Sequence[Pair],
    methods: typing.Sequence[typing.Union[str, method_base]],
    costs: EditCosts = EditCosts(),
    workers: int = 1,
) -> Comparison:
    """Distances of every method on the same pairs of ``dataset``.

    Methods given by name are built with ``costs``.
    """
    if not methods:
        raise ArgumentError("compare needs at least one method")
    methods = [make_method(m, dataset, costs) if isinstance(m, str) else m for m in methods]
    pairs = [(int(i), int(j)) for i, j in pairs]
    columns = [[cost for cost, _ in compute_pairs(m, pairs, workers)] for m in methods]
    distances = np.array(columns, dtype=np.float64).T.reshape(len(pairs), len(methods))
    return Comparison(pairs, tuple(m.name for m in methods), distances)
