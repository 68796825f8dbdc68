# Copyright 2024 The fracpg authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

from contextlib import contextmanager
import sys
import typing as t

from fracpg.exceptions import DomainError


def plural(quantity, one, plural):
    """
    >>> plural(1, '%d mesh', '%d meshes')
    '1 mesh'
    >>> plural(3, '%d mesh', '%d meshes')
    '3 meshes'
    """
    if quantity == 1:
        return one.replace("%d", "%d" % quantity)
    return plural.replace("%d", "%d" % quantity)


def parse_int_list(s: str) -> t.List[int]:
    """
    >>> parse_int_list("10, 20,40")
    [10, 20, 40]
    """
    try:
        return [int(item) for item in s.split(",") if item.strip()]
    except ValueError:
        raise DomainError(
            "Expected a comma separated list of integers, got {!r}".format(s)
        ) from None


@contextmanager
def open_output(path: t.Optional[str]) -> t.Iterator[t.TextIO]:
    """
    Open path for writing, or yield stdout when path is None or '-'
    """
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="utf-8", newline="") as f:
        yield f
