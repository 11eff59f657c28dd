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

import typing

from treematch import _utils

if typing.TYPE_CHECKING:
    import logging


class PairCallState(typing.NamedTuple):
    """What the distance driver knows about a finished pair."""

    method: typing.Any
    i: int
    j: int
    seconds: float
    cost: float
    pair_number: int


def after_nothing(pair_state: PairCallState) -> None:
    """After pair strategy that does nothing."""


def after_log(
    logger: "logging.Logger",
    log_level: int,
    sec_format: str = "%0.3f",
) -> typing.Callable[[PairCallState], None]:
    """After pair strategy that logs the finished pair to some logger."""

    def log_it(pair_state: PairCallState) -> None:
        logger.log(
            log_level,
            f"Finished pair ({pair_state.i}, {pair_state.j}) with '{_utils.get_callback_name(pair_state.method)}' "
            f"after {sec_format % pair_state.seconds}(s), distance {pair_state.cost!r}, "
            f"this was the {_utils.to_ordinal(pair_state.pair_number)} pair.",
        )

    return log_it
