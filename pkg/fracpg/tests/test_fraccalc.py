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

from fracpg.exceptions import DomainError
from fracpg.exceptions import UnsupportedExponent
from fracpg.fraccalc import DerivativeKind
from fracpg.fraccalc import PowerSum
from fracpg.fraccalc import Side
from fracpg.fraccalc import frac_deriv_ps
from fracpg.fraccalc import frac_integral_point
from fracpg.fraccalc import frac_integral_ps
from fracpg.fraccalc import riemann_liouville_terms
from fracpg.special import beta
from fracpg.special import gamma

RL = DerivativeKind.RIEMANN_LIOUVILLE
CAPUTO = DerivativeKind.CAPUTO


def random_powersum(rng, size=3):
    exponents = rng.uniform(-0.9, 3.0, size)
    coefficients = rng.uniform(-2.0, 2.0, size)
    return PowerSum(zip(coefficients, exponents))


def assert_same(a: PowerSum, b: PowerSum, tol=1e-12):
    x = np.linspace(0.05, 1.0, 20)
    scale = max(1.0, float(np.max(np.abs(b(x)))))
    assert np.max(np.abs(a(x) - b(x))) <= tol * scale


class TestDerivativeKind:
    @pytest.mark.parametrize(
        "s, kind",
        [("rl", RL), ("Riemann-Liouville", RL), ("caputo", CAPUTO), ("C", CAPUTO)],
    )
    def test_parse(self, s, kind):
        assert DerivativeKind.parse(s) is kind

    def test_parse_rejects_unknown_names(self):
        with pytest.raises(DomainError):
            DerivativeKind.parse("grunwald")


class TestPowerSum:
    def test_terms_are_sorted_and_merged(self):
        ps = PowerSum([(1.0, 2.0), (2.0, 0.5), (3.0, 2.0)])
        assert ps.terms == ((2.0, 0.5), (4.0, 2.0))

    def test_cancelling_terms_vanish(self):
        x = PowerSum.monomial(1.0, 1.0)
        assert not (x - x)
        assert len(x + x) == 1

    def test_it_rejects_exponents_at_or_below_minus_one(self):
        with pytest.raises(DomainError):
            PowerSum.monomial(1.0, -1.0)

    def test_arithmetic(self):
        x = PowerSum.monomial(1.0, 1.0)
        p = (1 - x) * x
        assert p == PowerSum([(1.0, 1.0), (-1.0, 2.0)])
        assert 2 * p == p + p
        assert p(0.5) == pytest.approx(0.25)

    def test_evaluates_arrays(self):
        ps = PowerSum([(1.0, 0.5), (2.0, 2.0)])
        x = np.array([0.0, 0.25, 1.0])
        np.testing.assert_allclose(ps(x), [0.0, 0.5 + 0.125, 3.0])

    def test_evaluating_a_negative_power_at_zero_is_an_error(self):
        with pytest.raises(DomainError):
            PowerSum.monomial(1.0, -0.5)(0.0)

    def test_derivative_and_integral(self):
        ps = PowerSum([(3.0, 0.0), (2.0, 1.5), (1.0, 3.0)])
        assert ps.derivative() == PowerSum([(3.0, 0.5), (3.0, 2.0)])
        assert ps.integrate(0.0, 1.0) == pytest.approx(3.0 + 2.0 / 2.5 + 0.25)

    def test_derivative_leaving_the_class_is_an_error(self):
        with pytest.raises(DomainError):
            PowerSum.monomial(1.0, -0.25).derivative()

    def test_min_exponent_and_coefficient_lookup(self):
        ps = PowerSum([(5.0, -0.25), (1.0, 2.0)])
        assert ps.min_exponent() == -0.25
        assert ps.coefficient_of(2.0) == 1.0
        assert ps.coefficient_of(1.0) == 0.0


class TestSymbolicOperators:
    def test_integral_power_rule(self):
        result = frac_integral_ps(PowerSum.monomial(1.0, 1.0), 0.6)
        expected = PowerSum.monomial(gamma(2) / gamma(2.6), 1.6)
        assert_same(result, expected)

    def test_riemann_liouville_kernel_is_annihilated(self):
        for alpha in (1.6, 1.75, 1.9):
            kernel = PowerSum.monomial(1.0, alpha - 1)
            assert not frac_deriv_ps(kernel, alpha, RL)
            assert riemann_liouville_terms(kernel, alpha) == []

    def test_caputo_annihilates_linear_functions(self):
        assert not frac_deriv_ps(PowerSum([(2.0, 0.0), (3.0, 1.0)]), 1.5, CAPUTO)

    def test_caputo_power_rule(self):
        alpha = 1.75
        result = frac_deriv_ps(PowerSum.monomial(1.0, alpha), alpha, CAPUTO)
        assert_same(result, PowerSum.constant(gamma(alpha + 1)))

    def test_rough_powers_are_unsupported(self):
        with pytest.raises(UnsupportedExponent):
            frac_deriv_ps(PowerSum.monomial(1.0, 0.5), 1.5, CAPUTO)
        with pytest.raises(UnsupportedExponent):
            frac_deriv_ps(PowerSum.monomial(1.0, 0.2), 1.5, RL)

    def test_order_outside_range_is_rejected(self):
        with pytest.raises(DomainError):
            frac_deriv_ps(PowerSum.constant(1.0), 2.5, RL)

    def test_semigroup_property(self):
        rng = np.random.default_rng(1)
        for _ in range(100):
            ps = random_powersum(rng)
            a, b = rng.uniform(0.1, 1.5, 2)
            assert_same(
                frac_integral_ps(frac_integral_ps(ps, a), b),
                frac_integral_ps(ps, a + b),
            )

    def test_derivative_is_a_left_inverse_of_the_integral(self):
        rng = np.random.default_rng(2)
        for _ in range(100):
            ps = random_powersum(rng)
            order = rng.uniform(0.1, 1.9)
            assert_same(frac_deriv_ps(frac_integral_ps(ps, order), order, RL), ps)

    def test_caputo_and_riemann_liouville_agree_on_smooth_vanishing_functions(self):
        # for u(0) = u'(0) = 0 the two derivatives coincide
        rng = np.random.default_rng(3)
        for _ in range(100):
            exponents = rng.uniform(1.05, 4.0, 3)
            ps = PowerSum(zip(rng.uniform(-2.0, 2.0, 3), exponents))
            order = rng.uniform(1.05, 1.95)
            assert_same(frac_deriv_ps(ps, order, CAPUTO), frac_deriv_ps(ps, order, RL))

    def test_change_of_integration_order(self):
        # ∫ (I^a f)(x) dx = ∫ f(x) (I_1^a 1)(x) dx = ∫ f(x) (1-x)^a / Γ(a+1) dx
        rng = np.random.default_rng(4)
        for _ in range(100):
            ps = random_powersum(rng)
            a = rng.uniform(0.1, 1.9)
            left = frac_integral_ps(ps, a).integrate(0.0, 1.0)
            right = sum(c * beta(p + 1, a + 1) for c, p in ps.terms) / gamma(a + 1)
            assert left == pytest.approx(right, rel=1e-11, abs=1e-12)


class TestFracIntegralPoint:
    def test_it_matches_the_symbolic_integral(self):
        ps = PowerSum([(1.0, -0.3), (2.0, 2.0)])
        order = 1.6
        for x in (0.3, 0.7, 1.0):
            numeric = frac_integral_point(
                ps, order, x, singular_exponent_at_origin=0.3
            )
            assert numeric == pytest.approx(frac_integral_ps(ps, order)(x), rel=1e-10)

    def test_right_sided_integral_of_one(self):
        order, x = 0.75, 0.4
        value = frac_integral_point(np.ones_like, order, x, side=Side.RIGHT)
        assert value == pytest.approx((1 - x) ** order / gamma(order + 1), rel=1e-12)

    def test_breakpoints(self):
        def kink(t):
            return np.abs(t - 0.5)

        assert frac_integral_point(
            kink, 1.0, 1.0, breakpoints=[0.5]
        ) == pytest.approx(0.25, rel=1e-13)

    def test_it_rejects_points_outside_the_interval(self):
        with pytest.raises(DomainError):
            frac_integral_point(np.ones_like, 0.5, 0.0)
        with pytest.raises(DomainError):
            frac_integral_point(np.ones_like, 0.5, 1.5)
