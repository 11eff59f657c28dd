# Copyright 2016 Julien Danjou
# Copyright 2016 Joshua Harlow
# Copyright 2013-2014 Ray Holder
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

import math
import typing

from treematch.errors import ArgumentError

# Relative tolerance for comparing tree distances.
REL_TOL = 1e-9


def to_ordinal(pos_num: int) -> str:
    """``1`` becomes ``1st``, ``12`` becomes ``12th`` and ``112`` becomes ``112th``."""
    if 10 <= pos_num % 100 <= 20:
        suffix = "th"
    else:
        suffix = {1: "st", 2: "nd", 3: "rd"}.get(pos_num % 10, "th")
    return f"{pos_num}{suffix}"


def get_callback_name(cb: typing.Any) -> str:
    """Get a distance method or callback fully-qualified name.

    Strategy objects report their ``name`` attribute; everything else falls
    back to the qualified name, and ``repr(cb)`` if none can be produced.
    """
    name = getattr(cb, "name", None)
    if isinstance(name, str):
        return name
    qualname = getattr(cb, "__qualname__", None) or getattr(cb, "__name__", None)
    if qualname is None:
        return repr(cb)
    module = getattr(cb, "__module__", None)
    return f"{module}.{qualname}" if module else qualname


def isclose(a: float, b: float) -> bool:
    return math.isclose(a, b, rel_tol=REL_TOL, abs_tol=REL_TOL * 1e-3)


def check_probability(p: float, name: str = "p") -> float:
    if not 0.0 <= p <= 1.0:
        raise ArgumentError(f"{name} must lie in [0, 1], got {p!r}")
    return float(p)


def check_positive(value: float, name: str) -> float:
    if not value > 0:
        raise ArgumentError(f"{name} must be positive, got {value!r}")
    return value


def format_millis(seconds: float) -> str:
    """Render seconds as milliseconds with microsecond resolution."""
    micros = int(round(seconds * 1e6))
    return f"{micros // 1000}.{micros % 1000:03d}"
