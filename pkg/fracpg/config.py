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

"""
Find and read ``fracpg.ini``.

Options under ``[DEFAULT]`` apply to every command. A section named after a
command (``[converge]``, ``[cond]`` ...) overrides them for that command
only. Values are checked the way the matching flag is, so a typo in the file
is reported before any work starts.
"""
from configparser import ConfigParser
import os
import typing as t

from fracpg import expr
from fracpg import report
from fracpg import utils
from fracpg.exceptions import ConfigError
from fracpg.exceptions import FracPGError
from fracpg.femcore import check_alpha
from fracpg.fraccalc import DerivativeKind

CONFIG_FILENAME = "fracpg.ini"

DEFAULT_SECTION = "DEFAULT"


def _positive_int(s: str) -> int:
    value = int(s)
    if value < 1:
        raise ValueError("expected a positive integer, got {}".format(value))
    return value


def _origin_exponent(s: str) -> float:
    value = float(s)
    if not -1.0 < value <= 0.0:
        raise ValueError("expected a value in (-1, 0], got {}".format(value))
    return value


def _expression(s: str) -> str:
    expr.parse(s)
    return s


def _mesh_list(s: str) -> str:
    if not utils.parse_int_list(s):
        raise ValueError("expected at least one mesh size")
    return s


def _format(s: str) -> str:
    if s not in report.FORMATS:
        raise ValueError("expected one of {}".format(", ".join(report.FORMATS)))
    return s


#: Every option a config file may set, with the check applied to its value
OPTIONS: t.Dict[str, t.Callable[[str], t.Any]] = {
    "alpha": lambda s: check_alpha(float(s)),
    "deriv": lambda s: DerivativeKind.parse(s).value,
    "b": _expression,
    "q": _expression,
    "f": _expression,
    "f_origin_exponent": _origin_exponent,
    "quad_order": _positive_int,
    "ref_m": _positive_int,
    "m": _positive_int,
    "m_list": _mesh_list,
    "format": _format,
    "verbosity": int,
}


def read_config(path: t.Optional[str]) -> ConfigParser:
    """
    Read the file at path. An empty parser is returned when path is None.
    """
    config = ConfigParser(interpolation=None)
    if path is not None:
        with open(path, encoding="utf-8") as f:
            config.read_file(f, source=path)
    return config


def check_sections(config: ConfigParser, commands: t.Iterable[str]) -> None:
    unknown = sorted(set(config.sections()) - set(commands))
    if unknown:
        raise ConfigError(
            "Unknown command section [{}], expected one of {}".format(
                unknown[0], ", ".join(sorted(commands))
            )
        )


def command_defaults(
    config: ConfigParser, command: t.Optional[str] = None
) -> t.Dict[str, t.Any]:
    """
    Checked option values for command, its own section layered over
    ``[DEFAULT]``. Without a command only ``[DEFAULT]`` is read.
    """
    section = DEFAULT_SECTION
    if command is not None and config.has_section(command):
        section = command
    defaults = {}
    for key, raw in config[section].items():
        try:
            convert = OPTIONS[key]
        except KeyError:
            raise ConfigError(
                "Unknown option {!r} in [{}]".format(key, section)
            ) from None
        try:
            defaults[key] = convert(raw)
        except (ValueError, FracPGError) as e:
            raise ConfigError(
                "Invalid value for {!r} in [{}]: {}".format(key, section, e)
            ) from e
    return defaults


def update_argparser_defaults(parser, defaults: t.Mapping[str, t.Any]) -> None:
    """
    Set defaults only for the arguments parser actually declares
    """
    known = {action.dest for action in parser._actions}
    parser.set_defaults(**{k: v for k, v in defaults.items() if k in known})


def find_config() -> t.Optional[str]:
    """Find the closest config file in the cwd or a parent directory"""
    d = os.getcwd()
    while d != os.path.dirname(d):
        path = os.path.join(d, CONFIG_FILENAME)
        if os.path.isfile(path):
            return path
        d = os.path.dirname(d)
    return None
