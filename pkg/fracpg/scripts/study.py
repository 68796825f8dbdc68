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
Multi-mesh commands: ``converge`` and ``enrich``
"""
from fracpg import logger
from fracpg import report
from fracpg import utils
from fracpg.analysis import REFERENCE_M
from fracpg.analysis import check_mesh_list
from fracpg.analysis import convergence_study
from fracpg.analysis import default_reference
from fracpg.enriched import enriched_convergence_study
from fracpg.enriched import solve_enriched
from fracpg.exceptions import DomainError
from fracpg.fraccalc import DerivativeKind
from fracpg.scripts.main import InvalidArgument
from fracpg.scripts.main import problem_from_args
from fracpg.scripts.main import problem_options_parser
from fracpg.scripts.solve import mesh_list_from_args


def install_argparsers(global_parser, subparsers):
    study_parser = problem_options_parser()
    study_parser.add_argument(
        "--ref-m",
        dest="ref_m",
        type=int,
        default=REFERENCE_M,
        help="Elements of the fine reference mesh (default %(default)s)",
    )
    study_parser.add_argument(
        "--format",
        choices=report.FORMATS,
        default="table",
        help="Output format",
    )

    parser_converge = subparsers.add_parser(
        "converge",
        parents=[global_parser, study_parser],
        help="Measure convergence rates over a sequence of meshes",
    )
    parser_converge.set_defaults(func=converge)
    parser_converge.add_argument(
        "--m-list",
        dest="m_list",
        default=None,
        help="Comma separated numbers of mesh elements, eg 10,20,40",
    )

    parser_enrich = subparsers.add_parser(
        "enrich",
        parents=[global_parser, study_parser],
        help="Solve with the enriched scheme (Riemann-Liouville only)",
    )
    parser_enrich.set_defaults(func=enrich)
    meshes = parser_enrich.add_mutually_exclusive_group()
    meshes.add_argument(
        "--m", type=int, default=None, help="Solve on a single mesh"
    )
    meshes.add_argument(
        "--m-list",
        dest="m_list",
        default=None,
        help="Run a convergence study over these meshes",
    )


def study_options(args):
    spec = problem_from_args(args)
    meshes = mesh_list_from_args(args)
    if min(meshes) < 4:
        raise InvalidArgument("Every mesh needs at least 4 elements")
    policy = default_reference(spec, args.ref_m)
    try:
        check_mesh_list(meshes, policy)
    except DomainError as e:
        raise InvalidArgument(str(e))
    return spec, meshes, policy


def converge(args, config):
    spec, meshes, policy = study_options(args)
    logger.info(
        "Running %s against the %s reference",
        utils.plural(len(meshes), "%d mesh", "%d meshes"),
        policy,
    )
    result = convergence_study(spec, meshes, policy, args.quad_order)
    with utils.open_output(args.out) as f:
        f.write(report.emit_report(result, args.format))
    return 0


def enrich(args, config):
    if DerivativeKind.parse(args.deriv) is not DerivativeKind.RIEMANN_LIOUVILLE:
        raise InvalidArgument(
            "The enriched scheme needs the Riemann-Liouville derivative (--deriv rl)"
        )
    if args.m is not None:
        spec = problem_from_args(args)
        if args.m < 4:
            raise InvalidArgument("--m must be at least 4")
        solution = solve_enriched(spec, args.m, args.quad_order)
        nodes = solution.regular.mesh.nodes
        text = report.emit_columns(
            [
                ("x", nodes),
                ("u_r", solution.regular.nodal_values),
                ("u_h", solution(nodes)),
                ("mu_h", [solution.mu] * len(nodes)),
            ]
        )
    else:
        spec, meshes, policy = study_options(args)
        result = enriched_convergence_study(spec, meshes, policy, args.quad_order)
        text = report.emit_report(result, args.format)
    with utils.open_output(args.out) as f:
        f.write(text)
    return 0
