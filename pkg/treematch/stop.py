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
import abc
import typing

if typing.TYPE_CHECKING:
    from treematch.evaluation import BenchState


class stop_base(abc.ABC):
    """Abstract base class for benchmark budgets."""

    @abc.abstractmethod
    def __call__(self, bench_state: "BenchState") -> bool:
        pass

    def __and__(self, other: "stop_base") -> "stop_all":
        return stop_all(self, other)

    def __or__(self, other: "stop_base") -> "stop_any":
        return stop_any(self, other)


class stop_any(stop_base):
    """Stop if any of the budgets is exhausted."""

    def __init__(self, *stops: stop_base) -> None:
        self.stops = stops

    def __call__(self, bench_state: "BenchState") -> bool:
        return any(x(bench_state) for x in self.stops)


class stop_all(stop_base):
    """Stop if all the budgets are exhausted."""

    def __init__(self, *stops: stop_base) -> None:
        self.stops = stops

    def __call__(self, bench_state: "BenchState") -> bool:
        return all(x(bench_state) for x in self.stops)


class _stop_never(stop_base):
    """Never stop."""

    def __call__(self, bench_state: "BenchState") -> bool:
        return False


stop_never = _stop_never()


class stop_after_delay(stop_base):
    """Stop a method once the last size took ``max_delay`` seconds or more in total."""

    def __init__(self, max_delay: float) -> None:
        self.max_delay = max_delay

    def __call__(self, bench_state: "BenchState") -> bool:
        return bench_state.seconds >= self.max_delay


class stop_after_size(stop_base):
    """Stop a method once a size of at least ``max_size`` has been measured."""

    def __init__(self, max_size: int) -> None:
        self.max_size = max_size

    def __call__(self, bench_state: "BenchState") -> bool:
        return bench_state.size >= self.max_size
