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
import unittest

import treematch
from treematch.evaluation import BenchState


def make_bench_state(size, seconds):
    """Construct BenchState for given size & seconds spent on it."""
    return BenchState("linear", size, seconds, seconds)


class TestStopConditions(unittest.TestCase):
    def test_never_stop(self):
        self.assertFalse(treematch.stop_never(make_bench_state(4096, 1e6)))

    def test_stop_any(self):
        stop = treematch.stop_any(treematch.stop_after_delay(1), treematch.stop_after_size(64))

        def s(*args):
            return stop(make_bench_state(*args))

        self.assertFalse(s(16, 0.1))
        self.assertFalse(s(32, 0.1))
        self.assertTrue(s(64, 0.1))
        self.assertTrue(s(32, 1))
        self.assertTrue(s(64, 1))

    def test_stop_all(self):
        stop = treematch.stop_all(treematch.stop_after_delay(1), treematch.stop_after_size(64))

        def s(*args):
            return stop(make_bench_state(*args))

        self.assertFalse(s(16, 0.1))
        self.assertFalse(s(64, 0.1))
        self.assertFalse(s(32, 1))
        self.assertTrue(s(64, 1))
        self.assertTrue(s(128, 1.5))

    def test_stop_or(self):
        stop = treematch.stop_after_delay(1) | treematch.stop_after_size(64)
        self.assertIsInstance(stop, treematch.stop_any)
        self.assertFalse(stop(make_bench_state(16, 0.1)))
        self.assertTrue(stop(make_bench_state(64, 0.1)))
        self.assertTrue(stop(make_bench_state(16, 2)))

    def test_stop_and(self):
        stop = treematch.stop_after_delay(1) & treematch.stop_after_size(64)
        self.assertIsInstance(stop, treematch.stop_all)
        self.assertFalse(stop(make_bench_state(64, 0.1)))
        self.assertTrue(stop(make_bench_state(64, 1)))

    def test_stop_after_size(self):
        stop = treematch.stop_after_size(100)
        self.assertFalse(stop(make_bench_state(99, 0)))
        self.assertTrue(stop(make_bench_state(100, 0)))
        self.assertTrue(stop(make_bench_state(101, 0)))

    def test_stop_after_delay(self):
        stop = treematch.stop_after_delay(2.5)
        self.assertFalse(stop(make_bench_state(8, 2.4)))
        self.assertTrue(stop(make_bench_state(8, 2.5)))
        self.assertTrue(stop(make_bench_state(8, 30)))
