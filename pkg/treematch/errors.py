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


class TreeMatchError(Exception):
    """Base class of every error raised by treematch."""


class ArgumentError(TreeMatchError, ValueError):
    """An argument is outside of the domain of an operation."""


class IngestionError(TreeMatchError):
    """A dataset file is missing or cannot be read."""

    def __init__(self, message: str, path: typing.Optional[str] = None) -> None:
        self.path = path
        super().__init__(message)


class FormatError(IngestionError):
    """A dataset file is readable but malformed."""

    def __init__(self, message: str, path: typing.Optional[str] = None, line: typing.Optional[int] = None) -> None:
        self.line = line
        super().__init__(message, path)

    def __str__(self) -> str:
        where = self.path or "<unknown>"
        if self.line is not None:
            where = f"{where}:{self.line}"
        return f"{self.__class__.__name__}[{where}] {self.args[0]}"


class SplitError(TreeMatchError):
    """A dataset cannot be split into train, validation and test parts."""

    def __init__(self, message: str, class_label: typing.Optional[int] = None) -> None:
        self.class_label = class_label
        super().__init__(message)


class CostModelError(TreeMatchError):
    """The costs represented by a tree violate the edit cost model."""


class SolverError(TreeMatchError):
    """No bijection avoiding forbidden entries exists (or was found)."""


class DegenerateClusterError(TreeMatchError):
    """A 2-means problem was posed on fewer than two distinct points."""


class ConfigurationError(TreeMatchError):
    """A configuration value cannot be used with the given data."""


class CapacityError(TreeMatchError):
    """An exhaustive computation was requested on an input that is too large."""


class UsageError(TreeMatchError):
    """Command line flags are missing or incompatible."""
