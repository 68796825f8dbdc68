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

import argparse
import configparser
import logging
import sys
import typing as t

from fracpg import logger
from fracpg.config import check_sections
from fracpg.config import command_defaults
from fracpg.config import find_config
from fracpg.config import read_config
from fracpg.config import update_argparser_defaults
from fracpg.exceptions import ConfigError
from fracpg.exceptions import DomainError
from fracpg.exceptions import ExpressionError
from fracpg.exceptions import FracPGError
from fracpg.femcore import ProblemSpec
from fracpg.fraccalc import DerivativeKind
from fracpg.special import DEFAULT_ORDER

verbosity_levels = {
    0: logging.ERROR,
    1: logging.WARN,
    2: logging.INFO,
    3: logging.DEBUG,
}

min_verbosity = min(verbosity_levels)
max_verbosity = max(verbosity_levels)

#: Exit status for numerical failures; usage errors exit with 1
EXIT_FAILURE = 2


class InvalidArgument(Exception):
    pass


class ArgumentParser(argparse.ArgumentParser):
    """
    Report usage errors with exit status 1
    """

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, "{}: error: {}\n".format(self.prog, message))


def parse_args(
    argv=None,
) -> t.Tuple[configparser.ConfigParser, argparse.ArgumentParser, argparse.Namespace]:
    """
    Parse the config file and command line args.

    :return: tuple of ``(parsed config file, argument parser, parsed arguments)``
    """
    globalparser, argparser, subparsers = make_argparser()

    # Initial parse to extract --config and any global arguments
    global_args, _ = globalparser.parse_known_args(argv)

    configfile = global_args.config or find_config()
    try:
        config = read_config(configfile if global_args.use_config_file else None)
    except (OSError, configparser.Error) as e:
        argparser.error("could not read config file: {}".format(e))

    try:
        check_sections(config, subparsers.choices)
        defaults = command_defaults(config)
        per_command = {
            name: command_defaults(config, name) for name in subparsers.choices
        }
    except ConfigError as e:
        argparser.error(str(e))

    update_argparser_defaults(globalparser, defaults)
    update_argparser_defaults(argparser, defaults)
    for name, subp in subparsers.choices.items():
        update_argparser_defaults(subp, per_command[name])

    args = argparser.parse_args(argv)

    # Global args (eg -v) count wherever they appear on the command line
    args.__dict__.update(globalparser.parse_known_args(argv)[0].__dict__)

    return config, argparser, args


def make_argparser():
    """
    Return the global options parser, the top-level parser and its
    subparsers
    """
    global_parser = ArgumentParser(add_help=False)
    global_parser.add_argument(
        "--config", "-c", default=None, help="Path to config file"
    )
    global_parser.add_argument(
        "-v",
        dest="verbosity",
        action="count",
        default=min_verbosity,
        help="Verbose output. Use multiple times to increase level of verbosity",
    )
    global_parser.add_argument(
        "--no-config-file",
        dest="use_config_file",
        action="store_false",
        default=True,
        help="Don't look for a fracpg.ini config file",
    )
    argparser = ArgumentParser(prog="fracpg", parents=[global_parser])

    subparsers = argparser.add_subparsers(help="Commands help")

    from . import solve
    from . import study

    solve.install_argparsers(global_parser, subparsers)
    study.install_argparsers(global_parser, subparsers)

    return global_parser, argparser, subparsers


def problem_options_parser() -> argparse.ArgumentParser:
    """
    Options describing the boundary value problem, shared by every command
    """
    parser = ArgumentParser(add_help=False)
    parser.add_argument(
        "--alpha", type=float, default=None, help="Fractional order in (1.5, 2)"
    )
    parser.add_argument(
        "--deriv",
        choices=[k.value for k in DerivativeKind],
        default=DerivativeKind.RIEMANN_LIOUVILLE.value,
        help="Leading derivative: Riemann-Liouville or Caputo",
    )
    parser.add_argument("--b", default="0", help="Convection coefficient b(x)")
    parser.add_argument("--q", default="0", help="Reaction coefficient q(x)")
    parser.add_argument("--f", default="1", help="Source term f(x)")
    parser.add_argument(
        "--f-origin-exponent",
        dest="f_origin_exponent",
        type=float,
        default=None,
        help="Exponent p in (-1, 0] with f ~ x^p near 0. Detected when f is a "
        "sum of powers of x",
    )
    parser.add_argument(
        "--quad-order",
        dest="quad_order",
        type=int,
        default=DEFAULT_ORDER,
        help="Gauss points per element",
    )
    parser.add_argument(
        "--out", "-o", default=None, help="Write results to this file"
    )
    return parser


def problem_from_args(args) -> ProblemSpec:
    if args.alpha is None:
        raise InvalidArgument("Please specify the fractional order with --alpha")
    if args.quad_order < 1:
        raise InvalidArgument("--quad-order must be positive")
    try:
        return ProblemSpec.from_strings(
            alpha=args.alpha,
            kind=args.deriv,
            b=args.b,
            q=args.q,
            f=args.f,
            f_origin_exponent=args.f_origin_exponent,
        )
    except DomainError as e:
        raise InvalidArgument(str(e))


def configure_logging(level):
    """
    Configure the python logging module with the requested loglevel
    """
    logging.basicConfig(level=verbosity_levels[level])


def main(argv=None):
    config, argparser, args = parse_args(argv)

    if getattr(args, "func", None) is None:
        argparser.print_usage(sys.stderr)
        argparser.exit(1)

    verbosity = min(max_verbosity, max(min_verbosity, args.verbosity))
    configure_logging(verbosity)

    try:
        return args.func(args, config)
    except InvalidArgument as e:
        argparser.error(e.args[0])
    except ExpressionError as e:
        argparser.error(str(e))
    except OSError as e:
        argparser.error("could not write output: {}".format(e))
    except FracPGError as e:
        logger.error("%s: %s", type(e).__name__, e)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main(sys.argv[1:]))
