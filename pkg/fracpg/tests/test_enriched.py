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

import numpy as np
import pytest
from scipy import integrate

from fracpg import expr
from fracpg import femcore
from fracpg.analysis import ExactReference
from fracpg.analysis import FineMeshReference
from fracpg.analysis import solve_fbvp
from fracpg.enriched import EnrichedSetup
from fracpg.enriched import compute_c0
from fracpg.enriched import enriched_convergence_study
from fracpg.enriched import predicted_enriched_rates
from fracpg.enriched import singular_function
from fracpg.enriched import solve_enriched
from fracpg.exceptions import DomainError
from fracpg.exceptions import EnrichmentSetupError
from fracpg.femcore import Mesh
from fracpg.femcore import ProblemSpec
from fracpg.special import gamma


def singular_integral(alpha):
    """
    I^α (u^s)'(1) in closed form
    """
    return gamma(alpha) / gamma(2 * alpha - 1) - 2 / gamma(alpha + 2)


class TestSetup:
    def test_singular_function(self, alpha):
        u_s = singular_function(alpha)
        assert u_s(0.0) == 0.0
        assert u_s(1.0) == 0.0
        assert u_s.min_exponent() == pytest.approx(alpha - 1)

    def test_c0_without_lower_order_terms(self, alpha):
        setup = EnrichedSetup.from_spec(ProblemSpec.from_strings(alpha, "rl"))
        assert setup.c0 == 1.0
        assert setup.i_alpha_f_at_1 == pytest.approx(1 / gamma(alpha + 1))

    def test_c0_for_unit_convection(self, alpha):
        c0 = compute_c0(alpha, expr.parse("1"), expr.parse("0"))
        assert c0 == pytest.approx(1 / (1 + singular_integral(alpha)), rel=1e-12)

    def test_c0_by_quadrature_matches_symbolic(self):
        alpha = 1.75
        symbolic = compute_c0(alpha, expr.parse("x*(1-x)"), expr.parse("x"))
        numeric = compute_c0(alpha, expr.parse("sqrt(x)^2*(1-x)"), expr.parse("x"))
        assert expr.parse("sqrt(x)^2*(1-x)").classify() is None
        assert numeric == pytest.approx(symbolic, rel=1e-8)

    def test_it_reports_a_vanishing_denominator(self):
        alpha = 1.75
        b = repr(-1 / singular_integral(alpha))
        spec = ProblemSpec.from_strings(alpha, "rl", b=b)
        with pytest.raises(EnrichmentSetupError):
            EnrichedSetup.from_spec(spec)

    def test_it_rejects_caputo(self):
        with pytest.raises(DomainError):
            EnrichedSetup.from_spec(ProblemSpec.from_strings(1.75, "caputo"))

    def test_q_terms(self):
        alpha = 1.6
        spec = ProblemSpec.from_strings(alpha, "rl", b="exp(x)", q="x*(1-x)")
        setup = EnrichedSetup.from_spec(spec)
        x = np.linspace(0.05, 0.95, 7)
        u_s = setup.u_s
        expected = setup.c0 * (
            -2 * x ** (2 - alpha) / gamma(3 - alpha)
            - np.exp(x) * u_s.derivative()(x)
            - x * (1 - x) * u_s(x)
        )
        got = sum(term.func(x) * x**term.exponent for term in setup.q_terms())
        np.testing.assert_allclose(got, expected, rtol=1e-12)

    def test_q_projection(self):
        alpha = 1.75
        spec = ProblemSpec.from_strings(alpha, "rl", q="x*(1-x)")
        setup = EnrichedSetup.from_spec(spec)
        terms = setup.q_terms()

        def q_func(x):
            return sum(term.func(x) * x**term.exponent for term in terms)

        mesh = Mesh(8)
        tb = femcore.test_basis("rl", alpha, mesh)
        projection, end = femcore.test_projection(terms, tb)
        expected_end, _ = integrate.quad(
            q_func, 0, 1, weight="alg", wvar=(0.0, alpha - 1), epsabs=1e-14
        )
        assert end == pytest.approx(expected_end, abs=1e-10)
        for i in range(1, mesh.m):
            nodal, _ = integrate.quad(
                q_func,
                0,
                mesh.node(i),
                weight="alg",
                wvar=(0.0, alpha - 1),
                epsabs=1e-14,
            )
            expected = nodal - tb.coefficient(i) * expected_end
            assert projection[i - 1] == pytest.approx(expected, abs=1e-10)


class TestSolveEnriched:
    @pytest.mark.parametrize("m", [8, 16])
    def test_regular_part_without_lower_order_terms(self, alpha, m):
        spec = ProblemSpec.from_strings(alpha, "rl", f="1")
        solution = solve_enriched(spec, m)
        g = gamma(alpha + 1)
        x = solution.regular.mesh.interior_nodes
        expected = (x**2 - x**alpha) / g
        assert np.max(np.abs(solution.regular.interior - expected)) < 1e-8
        assert solution.mu == pytest.approx(1 / g, rel=1e-12)

    def test_it_vanishes_at_the_boundary(self, convection_spec):
        solution = solve_enriched(convection_spec, 16)
        assert solution(0.0) == 0.0
        assert solution(1.0) == pytest.approx(0.0, abs=1e-15)

    @pytest.mark.parametrize("scale", [2.0, -3.0])
    def test_linearity_in_the_source(self, scale):
        base = ProblemSpec.from_strings(1.75, "rl", b="exp(x)", q="x*(1-x)", f="1")
        scaled = ProblemSpec.from_strings(
            1.75, "rl", b="exp(x)", q="x*(1-x)", f=repr(scale)
        )
        u = solve_enriched(base, 16)
        v = solve_enriched(scaled, 16)
        assert v.mu == pytest.approx(scale * u.mu, rel=1e-12)
        np.testing.assert_allclose(
            v.regular.nodal_values, scale * u.regular.nodal_values, rtol=1e-10
        )

    def test_combined_solution_matches_the_plain_scheme(self):
        # without b and q both schemes are nodally exact
        spec = ProblemSpec.from_strings(1.6, "rl", f="x")
        plain = solve_fbvp(spec, 16)
        enriched = solve_enriched(spec, 16)
        x = plain.mesh.interior_nodes
        np.testing.assert_allclose(enriched(x), plain(x), atol=1e-8)

    def test_it_needs_four_elements(self, convection_spec):
        with pytest.raises(DomainError):
            solve_enriched(convection_spec, 2)


class TestEnrichedStudy:
    def test_predicted_rates(self):
        assert predicted_enriched_rates(1.6) == pytest.approx((1.7, 0.7))
        assert predicted_enriched_rates(1.9) == pytest.approx((2.0, 1.0))

    def test_exact_reference(self):
        spec = ProblemSpec.from_strings(1.75, "rl", f="x")
        report = enriched_convergence_study(spec, [8, 16, 32])
        assert isinstance(report.reference, ExactReference)
        assert report.mu_errors is not None
        assert max(report.mu_errors) < 1e-12
        assert report.l2_errors == sorted(report.l2_errors, reverse=True)
        assert report.predicted_mu == report.predicted_l2

    def test_fine_mesh_reference(self, convection_spec):
        report = enriched_convergence_study(
            convection_spec, [8, 16, 32], FineMeshReference(256)
        )
        assert report.mu_errors is not None
        assert report.mu_errors == sorted(report.mu_errors, reverse=True)
        assert len(report.mu_rates) == 2

    def test_singularity_strength_on_refined_meshes(self):
        spec = ProblemSpec.from_strings(1.75, "rl", b="1", q="x*(1-x)", f="1")
        report = enriched_convergence_study(spec, [10, 20, 40, 80, 160, 320])
        assert report.l2_errors[0] == pytest.approx(3.86e-4, rel=0.1)
        assert report.mu_errors[0] == pytest.approx(1.59e-4, rel=0.1)
        assert report.mu_rates[-1] == pytest.approx(2.0, abs=0.15)

    @pytest.mark.parametrize(
        "alpha, expected", [(1.6, 1.74), (1.75, 1.98), (1.9, 1.98)]
    )
    def test_regular_part_rates(self, alpha, expected):
        spec = ProblemSpec.from_strings(alpha, "rl", b="1", q="x*(1-x)", f="1")
        report = enriched_convergence_study(spec, [10, 20, 40, 80, 160, 320])
        assert report.l2_rates[-1] == pytest.approx(expected, abs=0.10)
