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

"""Command line interface.

Every subcommand writes CSV (comma separated, ``.`` decimal point, LF line
endings, header row) to stdout or ``--output``. Diagnostics go to stderr.
"""

import argparse
import contextlib
import csv
import dataclasses
import io
import itertools
import logging
import os
import sys
import typing

from treematch import _utils
from treematch.after import after_log, after_nothing
from treematch.assignment import dumps_embedding, embed_dataset
from treematch.clustering import ClusterConfig
from treematch.costs import EditCosts
from treematch.errors import ArgumentError, ConfigurationError, FormatError, TreeMatchError, UsageError
from treematch.evaluation import (
    DistanceCache,
    GridSpec,
    bench_dataset_scaling,
    bench_scaling,
    compare_methods,
    compute_pairs,
    grid_search,
)
from treematch.graph import Dataset
from treematch.methods import METHODS, ged_linear, make_method, method_base
from treematch.sampling import sample_pairs, stratified_split
from treematch.stop import stop_after_delay, stop_base, stop_never
from treematch.tudataset import load_split, load_tudataset
from treematch.wl import WlConfig

LOG = logging.getLogger(__name__)

DATA_ENV = "TREEMATCH_DATA"
DEFAULT_LEAVES = 300

SCHEMAS = """\
output schemas:
  dist     g1,g2,distance,millis
  knn      dataset,method,k,tau_vertex,tau_edge,validation_accuracy,test_accuracy,tree_ms,validation_ms,test_ms
  embed    per graph a "# graph <i> class <c>" line, then "edge_id value" lines
  bench    n,method,mean_ms,stddev_ms  (n is the number of graphs with --mode dataset)
  compare  g1,g2,<method>,...
timings are milliseconds with three decimals; --no-timing writes 0.000.
"""


@dataclasses.dataclass
class CliConfig:
    command: str
    data_dir: str = "."
    dataset: typing.Optional[str] = None
    method: str = "linear"
    methods: typing.Sequence[str] = ("linear", "bp")
    tree: str = "auto"
    wl_iterations: int = 7
    leaves: typing.Optional[int] = None
    tau_vertex: float = 1.0
    tau_edge: float = 1.0
    seed: int = 0
    workers: int = 1
    output: typing.Optional[str] = None
    verbose: int = 0
    no_timing: bool = False
    pairs: typing.Optional[str] = None
    sample: typing.Optional[int] = None
    split: typing.Optional[str] = None
    cache: typing.Optional[str] = None
    k: typing.Sequence[int] = (1, 3, 5)
    tau_vertex_grid: typing.Sequence[float] = (0.1, 0.5, 0.9, 1.3, 1.7)
    tau_edge_grid: typing.Sequence[float] = (0.1, 0.5, 0.9, 1.3, 1.7)
    sizes: typing.Sequence[int] = (32, 64, 128, 256)
    p: float = 0.15
    reps: int = 10
    mode: str = "pairs"
    graph_size: int = 15
    budget: typing.Optional[float] = None

    @classmethod
    def from_namespace(cls, namespace: argparse.Namespace) -> "CliConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        return cls(**{k: v for k, v in vars(namespace).items() if k in names and v is not None})

    @property
    def costs(self) -> EditCosts:
        return EditCosts(tau_vertex=self.tau_vertex, tau_edge=self.tau_edge)

    @property
    def stop(self) -> stop_base:
        return stop_never if self.budget is None else stop_after_delay(self.budget)


def _list_of(kind: typing.Callable[[str], typing.Any]) -> typing.Callable[[str], typing.List[typing.Any]]:
    def parse(text: str) -> typing.List[typing.Any]:
        try:
            return [kind(part) for part in text.split(",") if part.strip()]
        except ValueError:
            raise argparse.ArgumentTypeError(f"not a comma separated list: {text!r}") from None

    return parse


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, help="seed of every random choice (default 0)")
    common.add_argument("--workers", type=int, help="processes computing distances (default 1)")
    common.add_argument("-o", "--output", help="write CSV here instead of stdout")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v for info, -vv for debug logging")
    common.add_argument("--no-timing", action="store_true", help="write 0.000 in timing columns")
    common.add_argument("--tau-vertex", type=float, help="vertex insertion/deletion cost (default 1)")
    common.add_argument("--tau-edge", type=float, help="edge insertion/deletion cost (default 1)")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--dataset", required=True, help="TUDataset name")
    data.add_argument("--data-dir", default=os.environ.get(DATA_ENV, "."), help=f"dataset root (${DATA_ENV})")
    data.add_argument("--tree", choices=("auto", "wl", "cluster"), help="cost tree of the linear method")
    data.add_argument("--wl-iterations", type=int, help="colour refinement iterations (default 7)")
    data.add_argument(
        "--leaves", type=int, help=f"cluster tree leaves, implies --tree cluster (default {DEFAULT_LEAVES})"
    )

    parser = argparse.ArgumentParser(
        prog="treematch",
        description="Graph edit distance through optimal assignments on trees.",
        epilog=SCHEMAS,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    commands = parser.add_subparsers(dest="command", required=True)
    method_names = sorted(METHODS)

    dist = commands.add_parser("dist", parents=[common, data], help="pairwise distances")
    dist.add_argument("--method", choices=method_names)
    dist.add_argument("--pairs", help="file of 'i j' lines; default all pairs i < j")
    dist.add_argument("--sample", type=int, help="number of random pairs i < j")

    knn = commands.add_parser("knn", parents=[common, data], help="k-NN classification with grid search")
    knn.add_argument("--method", choices=method_names)
    knn.add_argument("--split", help="split file with train/validation/test lines")
    knn.add_argument("--cache", help="directory caching distance matrices")
    knn.add_argument("--k", type=_list_of(int), help="k choices (default 1,3,5)")
    knn.add_argument("--tau-vertex-grid", type=_list_of(float), help="tau_vertex choices")
    knn.add_argument("--tau-edge-grid", type=_list_of(float), help="tau_edge choices")

    commands.add_parser("embed", parents=[common, data], help="sparse tree embeddings of all graphs")

    bench = commands.add_parser("bench", parents=[common], help="runtime scaling on random graphs")
    bench.add_argument("--sizes", type=_list_of(int), help="graph sizes, or dataset sizes with --mode dataset")
    bench.add_argument("--p", type=float, help="edge probability (default 0.15)")
    bench.add_argument("--reps", type=int, help="repetitions per size (default 10)")
    bench.add_argument("--methods", type=_list_of(str), help="comma separated methods (default linear,bp)")
    bench.add_argument("--mode", choices=("pairs", "dataset"), help="time pairs or whole datasets")
    bench.add_argument("--graph-size", type=int, help="vertices per graph with --mode dataset (default 15)")
    bench.add_argument("--budget", type=float, help="stop a method after a size taking this many seconds")

    compare = commands.add_parser("compare", parents=[common, data], help="distances of several methods")
    compare.add_argument("--methods", type=_list_of(str), help="comma separated methods (default linear,bp)")
    compare.add_argument("--pairs", help="file of 'i j' lines")
    compare.add_argument("--sample", type=int, help="number of random pairs (default 500)")
    return parser


def _configure_logging(verbose: int) -> None:
    level = logging.WARNING if verbose <= 0 else logging.INFO if verbose == 1 else logging.DEBUG
    logging.basicConfig(level=level, stream=sys.stderr, format="%(asctime)s %(name)s %(levelname)s %(message)s")


def _load_dataset(config: CliConfig) -> Dataset:
    directory = os.path.join(config.data_dir, config.dataset)
    if not os.path.isdir(directory):
        directory = config.data_dir
    if not os.path.isfile(os.path.join(directory, f"{config.dataset}_A.txt")):
        raise UsageError(f"dataset {config.dataset!r} not found under {config.data_dir!r}")
    return load_tudataset(directory, config.dataset)


def _tree_kind(config: CliConfig, dataset: Dataset) -> str:
    tree = config.tree
    if config.leaves is not None:
        if tree == "wl":
            raise UsageError("--leaves needs the cluster tree")
        tree = "cluster"
    if tree == "wl" and not dataset.has_vertex_labels:
        raise UsageError(f"--tree wl needs vertex labels, {dataset.name} has none")
    if tree == "cluster" and not dataset.has_vertex_attributes:
        raise UsageError(f"the cluster tree needs vertex attributes, {dataset.name} has none")
    if tree == "auto" and dataset.has_vertex_attributes and not dataset.has_vertex_labels:
        raise UsageError(f"{dataset.name} only has continuous attributes: pass --leaves or --tree cluster")
    return tree


def _build_method(config: CliConfig, dataset: Dataset, name: str) -> method_base:
    if name not in METHODS:
        raise UsageError(f"unknown method {name!r}, expected one of {sorted(METHODS)}")
    if name != "linear":
        return make_method(name, dataset, config.costs)
    return ged_linear(
        dataset,
        config.costs,
        tree=_tree_kind(config, dataset),
        wl=WlConfig(iterations=config.wl_iterations),
        cluster=ClusterConfig(leaves=config.leaves or DEFAULT_LEAVES, seed=config.seed),
    )


def _read_pairs(path: str, dataset_size: int) -> typing.List[typing.Tuple[int, int]]:
    pairs = []
    try:
        with open(path, encoding="utf-8") as f:
            for lineno, line in enumerate(f, start=1):
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                fields = line.replace(",", " ").split()
                if len(fields) != 2:
                    raise FormatError(f"expected two graph indices, got {line!r}", path, lineno)
                try:
                    i, j = int(fields[0]), int(fields[1])
                except ValueError as e:
                    raise FormatError(f"not a pair of integers: {line!r}", path, lineno) from e
                if not (0 <= i < dataset_size and 0 <= j < dataset_size):
                    raise FormatError(f"pair ({i}, {j}) outside of dataset of size {dataset_size}", path, lineno)
                pairs.append((i, j))
    except OSError as e:
        raise UsageError(f"cannot read pairs file {path}: {e.strerror}") from e
    return pairs


def _pairs(
    config: CliConfig, dataset: Dataset, default_sample: typing.Optional[int]
) -> typing.List[typing.Tuple[int, int]]:
    if config.pairs is not None and config.sample is not None:
        raise UsageError("--pairs and --sample exclude each other")
    if config.pairs is not None:
        return _read_pairs(config.pairs, len(dataset))
    if config.sample is not None:
        return sample_pairs(len(dataset), config.sample, config.seed)
    if default_sample is None:
        return list(itertools.combinations(range(len(dataset)), 2))
    total = len(dataset) * (len(dataset) - 1) // 2
    return sample_pairs(len(dataset), min(default_sample, total), config.seed)


def _millis(config: CliConfig, seconds: float) -> str:
    return "0.000" if config.no_timing else _utils.format_millis(seconds)


def _pair_logger(config: CliConfig) -> typing.Callable[..., None]:
    return after_log(LOG, logging.DEBUG) if config.verbose >= 2 else after_nothing


def _run_dist(config: CliConfig, out: typing.TextIO) -> None:
    dataset = _load_dataset(config)
    if config.method != "linear" and (config.leaves is not None or config.tree != "auto"):
        raise UsageError("--tree and --leaves only apply to the linear method")
    method = _build_method(config, dataset, config.method)
    pairs = _pairs(config, dataset, None)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["g1", "g2", "distance", "millis"])
    for (i, j), (cost, seconds) in zip(pairs, compute_pairs(method, pairs, config.workers, _pair_logger(config))):
        writer.writerow([i, j, repr(cost), _millis(config, seconds)])


def _run_knn(config: CliConfig, out: typing.TextIO) -> None:
    dataset = _load_dataset(config)
    if config.method != "linear" and (config.leaves is not None or config.tree != "auto"):
        raise UsageError("--tree and --leaves only apply to the linear method")
    split = load_split(config.split) if config.split else stratified_split(dataset, config.seed)
    grid = GridSpec(k=config.k, tau_vertex=config.tau_vertex_grid, tau_edge=config.tau_edge_grid)
    method = _build_method(config, dataset, config.method)
    cache = DistanceCache(config.cache) if config.cache else None
    report = grid_search(dataset, split, grid, method, config.workers, cache, _pair_logger(config))
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(
        [
            "dataset",
            "method",
            "k",
            "tau_vertex",
            "tau_edge",
            "validation_accuracy",
            "test_accuracy",
            "tree_ms",
            "validation_ms",
            "test_ms",
        ]
    )
    writer.writerow(
        [
            report.dataset,
            report.method,
            report.k,
            repr(report.tau_vertex),
            repr(report.tau_edge),
            f"{report.validation_accuracy:.6f}",
            f"{report.test_accuracy:.6f}",
            _millis(config, report.seconds["tree"]),
            _millis(config, report.seconds["validation"]),
            _millis(config, report.seconds["test"]),
        ]
    )


def _run_embed(config: CliConfig, out: typing.TextIO) -> None:
    dataset = _load_dataset(config)
    method = _build_method(config, dataset, "linear")
    embeddings = embed_dataset(method.tree, method.rho, range(len(dataset)))
    for gi, (embedding, label) in enumerate(zip(embeddings, dataset.class_labels)):
        out.write(f"# graph {gi} class {label}\n")
        out.write(dumps_embedding(embedding))


def _run_bench(config: CliConfig, out: typing.TextIO) -> None:
    for name in config.methods:
        if name not in METHODS:
            raise UsageError(f"unknown method {name!r}, expected one of {sorted(METHODS)}")
    if config.mode == "dataset":
        rows = bench_dataset_scaling(
            config.sizes,
            graph_size=config.graph_size,
            p=config.p,
            reps=config.reps,
            methods=config.methods,
            seed=config.seed,
            costs=config.costs,
            stop=config.stop,
            workers=config.workers,
        )
    else:
        rows = bench_scaling(
            config.sizes,
            p=config.p,
            reps=config.reps,
            methods=config.methods,
            seed=config.seed,
            costs=config.costs,
            stop=config.stop,
        )
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["n", "method", "mean_ms", "stddev_ms"])
    for row in rows:
        writer.writerow([row.n, row.method, _millis(config, row.mean_seconds), _millis(config, row.stddev_seconds)])


def _run_compare(config: CliConfig, out: typing.TextIO) -> None:
    dataset = _load_dataset(config)
    methods = [_build_method(config, dataset, name) for name in config.methods]
    pairs = _pairs(config, dataset, 500)
    comparison = compare_methods(dataset, pairs, methods, workers=config.workers)
    for name, (below, on, above) in comparison.diagonal().items():
        LOG.info("%s against %s: %d below, %d on, %d above", name, comparison.names[0], below, on, above)
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(["g1", "g2", *comparison.names])
    for (i, j), row in zip(comparison.pairs, comparison.distances.tolist()):
        writer.writerow([i, j, *(repr(x) for x in row)])


COMMANDS: typing.Dict[str, typing.Callable[[CliConfig, typing.TextIO], None]] = {
    "dist": _run_dist,
    "knn": _run_knn,
    "embed": _run_embed,
    "bench": _run_bench,
    "compare": _run_compare,
}


def run(config: CliConfig) -> int:
    """Execute one subcommand; 0 on success, 2 on usage errors, 1 on other failures."""
    if config.workers < 1:
        print(f"treematch {config.command}: --workers must be positive, got {config.workers}", file=sys.stderr)
        return 2
    # output is only written once the command has succeeded
    buffer = io.StringIO(newline="")
    try:
        COMMANDS[config.command](config, buffer)
        if config.output:
            sink: typing.ContextManager[typing.TextIO] = open(config.output, "w", encoding="utf-8", newline="")
        else:
            sink = contextlib.nullcontext(sys.stdout)
        with sink as out:
            out.write(buffer.getvalue())
    except (UsageError, ConfigurationError, ArgumentError) as e:
        print(f"treematch {config.command}: {e}", file=sys.stderr)
        return 2
    except (TreeMatchError, OSError) as e:
        print(f"treematch {config.command}: {e}", file=sys.stderr)
        return 1
    return 0


def main(argv: typing.Optional[typing.Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        namespace = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    config = CliConfig.from_namespace(namespace)
    _configure_logging(config.verbose)
    return run(config)
