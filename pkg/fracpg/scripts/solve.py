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
Single-mesh commands: ``solve`` and ``cond``
"""
from fracpg import logger
from fracpg import report
from fracpg import utils
from fracpg.analysis import solve_fbvp
from fracpg.exceptions import DomainError
from fracpg.femcore import Mesh
from fracpg.femcore import assemble
from fracpg.scripts.main import InvalidArgument
from fracpg.scripts.main import problem_from_args
from fracpg.scripts.main import problem_options_parser
from fracpg.solver import condition_number


def install_argparsers(global_parser, subparsers):
    problem_parser = problem_options_parser()

    parser_solve = subparsers.add_parser(
        "solve",
        parents=[global_parser, problem_parser],
        help="Solve the boundary value problem on one mesh",
    )
    parser_solve.set_defaults(func=solve)
    parser_solve.add_argument(
        "--m", type=int, default=None, help="Number of mesh elements"
    )

    parser_cond = subparsers.add_parser(
        "cond",
        parents=[global_parser, problem_parser],
        help="Report condition numbers of the assembled systems",
    )
    parser_cond.set_defaults(func=cond)
    parser_cond.add_argument(
        "--m-list",
        dest="m_list",
        default=None,
        help="Comma separated numbers of mesh elements, eg 20,40,80",
    )
    parser_cond.add_argument(
        "--format", choices=report.FORMATS, default="table", help="Output format"
    )


def mesh_list_from_args(args):
    if not args.m_list:
        raise InvalidArgument("Please specify the meshes with --m-list")
    try:
        meshes = utils.parse_int_list(args.m_list)
    except DomainError as e:
        raise InvalidArgument(str(e))
    if not meshes or min(meshes) < 2:
        raise InvalidArgument("Every mesh needs at least 2 elements")
    return meshes


def solve(args, config):
    spec = problem_from_args(args)
    if args.m is None:
        raise InvalidArgument("Please specify the number of elements with --m")
    if args.m < 4:
        raise InvalidArgument("--m must be at least 4")
    solution = solve_fbvp(spec, args.m, args.quad_order)
    text = report.emit_columns(
        [("x", solution.mesh.nodes), ("u_h", solution.nodal_values)]
    )
    with utils.open_output(args.out) as f:
        f.write(text)
    return 0


def cond(args, config):
    spec = problem_from_args(args)
    meshes = mesh_list_from_args(args)
    values = []
    for m in meshes:
        system = assemble(spec, Mesh(m), args.quad_order)
        value = condition_number(system.dense(), True, system.diag)
        logger.info("m=%d: condition number %.6g", m, value)
        values.append(value)
    text = report.emit_condition_numbers(meshes, values, args.format)
    with utils.open_output(args.out) as f:
        f.write(text)
    return 0
