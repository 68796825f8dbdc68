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
Enriched scheme for the Riemann-Liouville problem.

The solution is split as u = u^r + μ u^s with the singular function
u^s = x^(α-1) - x². The regular part u^r solves a modified problem whose
lower order form picks up a rank one term, and the singularity strength μ is
recovered from a fractional integral of the residual data at x = 1.
"""
from dataclasses import dataclass
from logging import getLogger
import typing as t

import numpy as np

from fracpg.analysis import ConvergenceReport
from fracpg.analysis import ExactReference
from fracpg.analysis import FemSolution
from fracpg.analysis import FineMeshReference
from fracpg.analysis import ReferencePolicy
from fracpg.analysis import check_mesh_list
from fracpg.analysis import default_reference
from fracpg.analysis import error_norms
from fracpg.analysis import exact_solution_bq0
from fracpg.analysis import warn_on_rate_gap
from fracpg.exceptions import DomainError
from fracpg.exceptions import EnrichmentSetupError
from fracpg.femcore import AssembledSystem
from fracpg.femcore import Mesh
from fracpg.femcore import ProblemSpec
from fracpg.femcore import WeightedTerm
from fracpg.femcore import assemble_leading
from fracpg.femcore import assemble_load
from fracpg.femcore import assemble_lower_order
from fracpg.femcore import end_moment
from fracpg.femcore import test_basis
from fracpg.femcore import test_projection
from fracpg.fraccalc import DerivativeKind
from fracpg.fraccalc import PowerSum
from fracpg.fraccalc import frac_deriv_ps
from fracpg.fraccalc import frac_integral_point
from fracpg.fraccalc import frac_integral_ps
from fracpg.solver import solve_system
from fracpg.special import DEFAULT_ORDER
from fracpg.special import gamma

logger = getLogger("fracpg.enriched")

DENOMINATOR_TOLERANCE = 1e-8


def singular_function(alpha: float) -> PowerSum:
    return PowerSum([(1.0, alpha - 1), (-1.0, 2.0)])


def compute_c0(
    alpha: float,
    b: t.Callable,
    q: t.Callable,
    quad_order: int = DEFAULT_ORDER,
) -> float:
    """
    c₀ = 1 / (1 + I^α(b (u^s)' + q u^s)(1))

    ``b`` and ``q`` are coefficient expressions. When both are power sums the
    integral is exact, otherwise it is computed by quadrature.
    """
    u_s = singular_function(alpha)
    du_s = u_s.derivative()
    b_ps = b.classify() if hasattr(b, "classify") else None
    q_ps = q.classify() if hasattr(q, "classify") else None

    integral: t.Optional[float] = None
    if b_ps is not None and q_ps is not None:
        try:
            integral = frac_integral_ps(b_ps * du_s + q_ps * u_s, alpha)(1.0)
        except DomainError:
            integral = None
    if integral is None:
        integral = frac_integral_point(
            lambda x: b(x) * du_s(x) + q(x) * u_s(x),
            alpha,
            1.0,
            singular_exponent_at_origin=2 - alpha,
            quad_order=quad_order,
        )
    denominator = 1.0 + integral
    if abs(denominator) <= DENOMINATOR_TOLERANCE:
        raise EnrichmentSetupError(
            "1 + I^alpha(b u_s' + q u_s)(1) = {:.3e} vanishes for these "
            "coefficients; replace the x^2 term of the singular function by "
            "another function v with v(1) = 1 and v(0) = 0".format(denominator)
        )
    return 1.0 / denominator


@dataclass(frozen=True)
class EnrichedSetup:
    spec: ProblemSpec
    u_s: PowerSum
    dalpha_us: PowerSum
    c0: float
    i_alpha_f_at_1: float

    @property
    def alpha(self) -> float:
        return self.spec.alpha

    @property
    def b(self):
        return self.spec.b

    @property
    def q(self):
        return self.spec.q

    @property
    def f(self):
        return self.spec.f

    @classmethod
    def from_spec(
        cls, spec: ProblemSpec, quad_order: int = DEFAULT_ORDER
    ) -> "EnrichedSetup":
        if spec.kind is not DerivativeKind.RIEMANN_LIOUVILLE:
            raise DomainError(
                "The enriched scheme is only available for the "
                "Riemann-Liouville derivative"
            )
        alpha = spec.alpha
        u_s = singular_function(alpha)
        if spec.has_lower_order_terms():
            c0 = compute_c0(alpha, spec.b, spec.q, quad_order)
        else:
            c0 = 1.0
        setup = cls(
            spec=spec,
            u_s=u_s,
            dalpha_us=frac_deriv_ps(u_s, alpha, DerivativeKind.RIEMANN_LIOUVILLE),
            c0=c0,
            i_alpha_f_at_1=fractional_integral_at_one(spec, quad_order),
        )
        logger.debug(
            "Enrichment with c0=%.10g, I^alpha f(1)=%.10g", c0, setup.i_alpha_f_at_1
        )
        return setup

    def q_terms(self) -> t.List[WeightedTerm]:
        """
        Q = c₀ (D^α u^s - b (u^s)' - q u^s) split into origin powers
        """
        a = self.alpha
        c0 = self.c0
        terms = [
            WeightedTerm(p, lambda x, c=c: np.full_like(x, c0 * c))
            for c, p in self.dalpha_us.terms
        ]
        if not self.b.is_zero():
            b = self.b
            terms.append(WeightedTerm(a - 2, lambda x: -c0 * (a - 1) * b(x)))
            terms.append(WeightedTerm(0.0, lambda x: 2 * c0 * b(x) * x))
        if not self.q.is_zero():
            q = self.q
            terms.append(WeightedTerm(a - 1, lambda x: -c0 * q(x)))
            terms.append(WeightedTerm(0.0, lambda x: c0 * q(x) * x**2))
        return terms


def fractional_integral_at_one(
    spec: ProblemSpec, quad_order: int = DEFAULT_ORDER
) -> float:
    ps = spec.f_powersum
    if ps is not None:
        return frac_integral_ps(ps, spec.alpha)(1.0)
    return frac_integral_point(
        spec.f,
        spec.alpha,
        1.0,
        singular_exponent_at_origin=-spec.f_origin_exponent,
        quad_order=quad_order,
    )


def assemble_enriched(
    setup: EnrichedSetup, mesh: Mesh, quad_order: int = DEFAULT_ORDER
) -> AssembledSystem:
    """
    The system for the regular part. With w_j = ∫(bψ_j' + qψ_j)(1-x)^(α-1)dx
    the rank one vector becomes (Q, φ_i)/Γ(α) - c_i and the load gains
    (I^α f)(1) (Q, φ_i).
    """
    spec = setup.spec
    tb = test_basis(spec.kind, spec.alpha, mesh)
    lower, rank_u, w = assemble_lower_order(spec, tb, mesh, quad_order)
    load = assemble_load(spec, tb, mesh, quad_order)
    q_phi, _ = test_projection(setup.q_terms(), tb, quad_order)
    logger.info("Assembled enriched system with n=%d, alpha=%g", mesh.n, spec.alpha)
    return AssembledSystem(
        diag=assemble_leading(mesh, spec.alpha),
        lower=lower,
        rank_u=rank_u + q_phi / gamma(spec.alpha),
        rank_v=w,
        load=load + setup.i_alpha_f_at_1 * q_phi,
    )


@dataclass(frozen=True)
class EnrichedSolution:
    """
    u_h = u_h^r + μ_h u^s
    """

    regular: FemSolution
    mu: float
    u_s: PowerSum

    def __call__(self, x):
        return self.regular(x) + self.mu * self.u_s(x)

    def derivative(self, x) -> np.ndarray:
        """
        Derivative at points x > 0
        """
        return self.regular.derivative(x) + self.mu * self.u_s.derivative()(x)


def reconstruct(
    setup: EnrichedSetup, u_h_r: FemSolution, quad_order: int = DEFAULT_ORDER
) -> t.Tuple[float, EnrichedSolution]:
    """
    μ_h = c₀ I^α(f - b (u_h^r)' - q u_h^r)(1)
    """
    spec = setup.spec
    correction = 0.0
    if spec.has_lower_order_terms():
        b, q = spec.b, spec.q

        def residual_data(x):
            return b(x) * u_h_r.derivative(x) + q(x) * u_h_r(x)

        correction = end_moment(
            [WeightedTerm(0.0, residual_data)], u_h_r.mesh, spec.alpha, quad_order
        ) / gamma(spec.alpha)
    mu_h = setup.c0 * (setup.i_alpha_f_at_1 - correction)
    return mu_h, EnrichedSolution(u_h_r, mu_h, setup.u_s)


def solve_enriched(
    spec: ProblemSpec,
    m: int,
    quad_order: int = DEFAULT_ORDER,
    setup: t.Optional[EnrichedSetup] = None,
) -> EnrichedSolution:
    if m < 4:
        raise DomainError("Solving needs at least 4 elements, got {}".format(m))
    setup = setup or EnrichedSetup.from_spec(spec, quad_order)
    mesh = Mesh(m)
    interior = solve_system(assemble_enriched(setup, mesh, quad_order))
    regular = FemSolution.from_interior(mesh, interior, spec.alpha, spec.kind)
    _, solution = reconstruct(setup, regular, quad_order)
    return solution


def predicted_enriched_rates(alpha: float) -> t.Tuple[float, float]:
    l2 = min(2 * alpha - 1.5, 2.0)
    return l2, l2 - 1.0


def enriched_convergence_study(
    spec: ProblemSpec,
    m_list: t.Sequence[int],
    reference_policy: t.Optional[ReferencePolicy] = None,
    quad_order: int = DEFAULT_ORDER,
) -> ConvergenceReport:
    """
    Errors of the regular part in L² and H¹ and of the singularity strength
    """
    setup = EnrichedSetup.from_spec(spec, quad_order)
    policy = reference_policy or default_reference(spec)
    meshes = check_mesh_list(m_list, policy)

    reference_regular: t.Union[PowerSum, FemSolution]
    if isinstance(policy, ExactReference):
        ps = spec.f_powersum
        if spec.has_lower_order_terms() or ps is None:
            raise DomainError(
                "An exact reference needs b = q = 0 and a power sum source"
            )
        exact = exact_solution_bq0(ps, spec.alpha, spec.kind)
        mu = exact.coefficient_of(spec.alpha - 1)
        reference_regular = exact - mu * setup.u_s
    else:
        assert isinstance(policy, FineMeshReference)
        logger.debug("Solving enriched reference problem with m=%d", policy.m_ref)
        fine = solve_enriched(spec, policy.m_ref, quad_order, setup)
        mu = fine.mu
        reference_regular = fine.regular

    l2_errors, h1_errors, mu_errors = [], [], []
    for m in meshes:
        solution = solve_enriched(spec, m, quad_order, setup)
        l2, h1 = error_norms(solution.regular, reference_regular, spec.alpha)
        mu_error = abs(mu - solution.mu)
        logger.info(
            "m=%d: L2 error %.5e, H1 error %.5e, mu error %.5e",
            m,
            l2,
            h1,
            mu_error,
        )
        l2_errors.append(l2)
        h1_errors.append(h1)
        mu_errors.append(mu_error)

    predicted_l2, predicted_h1 = predicted_enriched_rates(spec.alpha)
    report = ConvergenceReport(
        mesh_sizes=meshes,
        l2_errors=l2_errors,
        h1_errors=h1_errors,
        reference=policy,
        predicted_l2=predicted_l2,
        predicted_h1=predicted_h1,
        mu_errors=mu_errors,
        predicted_mu=predicted_l2,
    )
    warn_on_rate_gap(report)
    return report
