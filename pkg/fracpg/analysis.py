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
Closed-form solutions, error norms and convergence studies.
"""
from dataclasses import dataclass
from dataclasses import field
from logging import getLogger
import math
import typing as t

import numpy as np

from fracpg.exceptions import DomainError
from fracpg.exceptions import ResidualCheckFailed
from fracpg.exceptions import UnsupportedExponent
from fracpg.femcore import Mesh
from fracpg.femcore import ProblemSpec
from fracpg.femcore import assemble
from fracpg.fraccalc import DerivativeKind
from fracpg.fraccalc import PowerSum
from fracpg.fraccalc import evaluate_terms
from fracpg.fraccalc import frac_deriv_ps
from fracpg.fraccalc import frac_integral_ps
from fracpg.fraccalc import riemann_liouville_terms
from fracpg.solver import solve_system
from fracpg.special import DEFAULT_ORDER
from fracpg.special import gauss_legendre

logger = getLogger("fracpg.analysis")

#: Default number of elements of the fine reference mesh
REFERENCE_M = 5120

RESIDUAL_POINTS = 33
RESIDUAL_WINDOW = (0.01, 0.99)
RESIDUAL_TOLERANCE = 1e-8

#: Gauss points per fine element when comparing against a fine-mesh solution
FINE_MESH_POINTS = 4

#: Gap between the finest observed and the predicted L² rate worth a warning
RATE_WARNING_GAP = 0.25


@dataclass(frozen=True)
class FemSolution:
    """
    A continuous piecewise linear function on ``mesh`` vanishing at 0 and 1
    """

    mesh: Mesh
    nodal_values: np.ndarray = field(repr=False)
    alpha: float
    kind: DerivativeKind

    def __post_init__(self):
        values = np.array(self.nodal_values, dtype=float)
        if values.shape != (self.mesh.m + 1,):
            raise DomainError(
                "Expected {} nodal values, got {}".format(self.mesh.m + 1, values.size)
            )
        if values[0] != 0 or values[-1] != 0:
            raise DomainError("Nodal values must vanish at both boundary nodes")
        values.setflags(write=False)
        object.__setattr__(self, "nodal_values", values)

    @classmethod
    def from_interior(
        cls, mesh: Mesh, interior: np.ndarray, alpha: float, kind: DerivativeKind
    ) -> "FemSolution":
        values = np.zeros(mesh.m + 1)
        values[1:-1] = interior
        return cls(mesh, values, alpha, kind)

    @property
    def interior(self) -> np.ndarray:
        return self.nodal_values[1:-1]

    def __call__(self, x):
        xa = np.asarray(x, dtype=float)
        result = np.interp(xa.ravel(), self.mesh.nodes, self.nodal_values)
        if xa.ndim == 0:
            return float(result[0])
        return result.reshape(xa.shape)

    def derivative(self, x) -> np.ndarray:
        """
        Slope of the element containing each point (right-continuous at nodes)
        """
        k = self.mesh.element_of(x)
        return (self.nodal_values[k + 1] - self.nodal_values[k]) * self.mesh.m


def chebyshev_points(
    count: int = RESIDUAL_POINTS, window: t.Tuple[float, float] = RESIDUAL_WINDOW
) -> np.ndarray:
    lo, hi = window
    k = np.arange(count)
    x = np.cos((2 * k + 1) * np.pi / (2 * count))
    return np.sort(0.5 * (lo + hi) + 0.5 * (hi - lo) * x)


def _derivative_terms(u: PowerSum) -> t.List[t.Tuple[float, float]]:
    return [(c * p, p - 1) for c, p in u.terms if p != 0]


def strong_residual(
    u: PowerSum,
    alpha: float,
    kind: DerivativeKind,
    b: t.Optional[t.Callable] = None,
    q: t.Optional[t.Callable] = None,
    f: t.Optional[t.Callable] = None,
    points: t.Optional[np.ndarray] = None,
) -> np.ndarray:
    """
    -D^α u + b u' + q u - f at ``points``
    """
    x = chebyshev_points() if points is None else np.asarray(points, dtype=float)
    kind = DerivativeKind.parse(kind)
    if kind is DerivativeKind.RIEMANN_LIOUVILLE:
        residual = -evaluate_terms(riemann_liouville_terms(u, alpha), x)
    else:
        residual = -frac_deriv_ps(u, alpha, kind)(x)
    if b is not None:
        residual = residual + b(x) * evaluate_terms(_derivative_terms(u), x)
    if q is not None:
        residual = residual + q(x) * u(x)
    if f is not None:
        residual = residual - f(x)
    return residual


def residual_check(u: PowerSum, spec: ProblemSpec) -> float:
    """
    Maximum absolute residual of ``u`` in the strong equation over 33
    Chebyshev points of (0.01, 0.99).
    """
    residual = strong_residual(
        u,
        spec.alpha,
        spec.kind,
        None if spec.b.is_zero() else spec.b,
        None if spec.q.is_zero() else spec.q,
        spec.f,
    )
    return float(np.max(np.abs(residual)))


def exact_solution_bq0(
    f: PowerSum, alpha: float, kind: t.Union[str, DerivativeKind]
) -> PowerSum:
    """
    Closed-form solution of -D^α u = f, u(0) = u(1) = 0.

    Riemann-Liouville: u = -I^α f + (I^α f)(1) x^(α-1)
    Caputo:            u = -I^α f + (I^α f)(1) x
    """
    kind = DerivativeKind.parse(kind)
    integral = frac_integral_ps(f, alpha)
    at_one = integral(1.0)
    kernel = alpha - 1 if kind is DerivativeKind.RIEMANN_LIOUVILLE else 1.0
    u = PowerSum.monomial(at_one, kernel) - integral

    residual = float(np.max(np.abs(strong_residual(u, alpha, kind, f=f))))
    x = chebyshev_points()
    scale = max(1.0, float(np.max(np.abs(f(x)))) if f else 1.0)
    if residual > RESIDUAL_TOLERANCE * scale:
        raise ResidualCheckFailed(
            "Closed-form {} solution leaves a residual of {:.3e}".format(
                kind.value, residual
            )
        )
    return u


def solve_fbvp(
    spec: ProblemSpec, m: int, quad_order: int = DEFAULT_ORDER
) -> FemSolution:
    if m < 4:
        raise DomainError("Solving needs at least 4 elements, got {}".format(m))
    mesh = Mesh(m)
    interior = solve_system(assemble(spec, mesh, quad_order))
    return FemSolution.from_interior(mesh, interior, spec.alpha, spec.kind)


class ReferenceFunction(t.NamedTuple):
    """
    A reference solution given by its value and derivative
    """

    value: t.Callable[[np.ndarray], np.ndarray]
    derivative: t.Callable[[np.ndarray], np.ndarray]


Reference = t.Union[PowerSum, FemSolution, ReferenceFunction]


def _element_points(mesh: Mesh, order: int) -> t.Tuple[np.ndarray, np.ndarray]:
    local, weights = gauss_legendre(order).on_interval(0.0, mesh.h)
    return (np.arange(mesh.m)[:, None] * mesh.h + local[None, :]), weights


def _first_element_exact(u_h: FemSolution, u: PowerSum) -> t.Tuple[float, float]:
    h = u_h.mesh.h
    slope = u_h.nodal_values[1] / h
    diff = u - PowerSum.monomial(slope, 1.0)
    diff_prime = u.derivative() - PowerSum.constant(slope)
    return (diff * diff).integrate(0.0, h), (diff_prime * diff_prime).integrate(0.0, h)


def error_norms(
    u_h: FemSolution,
    reference: Reference,
    alpha: t.Optional[float] = None,
    quad_order: int = DEFAULT_ORDER,
) -> t.Tuple[float, float]:
    """
    L² norm and H¹ seminorm of ``reference - u_h``.

    A power sum reference is integrated exactly on the first element, where
    its derivative behaves like x^(α-2); a fine-mesh reference is integrated
    with 4 Gauss points per fine element.
    """
    alpha = u_h.alpha if alpha is None else alpha
    if alpha <= 1.5:
        raise DomainError(
            "Errors in H¹ need alpha > 3/2 for a square integrable derivative"
        )

    if isinstance(reference, FemSolution):
        x, w = _element_points(reference.mesh, FINE_MESH_POINTS)
        value, slope = reference(x), reference.derivative(x)
    elif isinstance(reference, PowerSum):
        x, w = _element_points(u_h.mesh, quad_order)
        x = x[1:]
        value = reference(x)
        slope = evaluate_terms(_derivative_terms(reference), x)
    else:
        x, w = _element_points(u_h.mesh, quad_order)
        value, slope = reference.value(x), reference.derivative(x)

    l2 = float(np.sum((value - u_h(x)) ** 2 * w))
    h1 = float(np.sum((slope - u_h.derivative(x)) ** 2 * w))
    if isinstance(reference, PowerSum):
        first_l2, first_h1 = _first_element_exact(u_h, reference)
        l2 += first_l2
        h1 += first_h1
    return math.sqrt(max(l2, 0.0)), math.sqrt(max(h1, 0.0))


def pairwise_rates(hs: t.Sequence[float], errors: t.Sequence[float]) -> t.List[float]:
    """
    log(e_k / e_k+1) / log(h_k / h_k+1) for consecutive meshes
    """
    h = np.asarray(hs, dtype=float)
    e = np.asarray(errors, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        rates = np.log(e[:-1] / e[1:]) / np.log(h[:-1] / h[1:])
    return [float(r) for r in rates]


def least_squares_rate(hs: t.Sequence[float], errors: t.Sequence[float]) -> float:
    """
    Slope of the least squares line through (log h, log e)
    """
    if len(hs) < 2:
        return float("nan")
    with np.errstate(divide="ignore", invalid="ignore"):
        slope, _ = np.polyfit(np.log(hs), np.log(errors), 1)
    return float(slope)


def smoothness_index(spec: ProblemSpec) -> float:
    """
    1/2 for a source bounded at 0, p + 1/2 for a leading power x^p with p < 0
    """
    ps = spec.f_powersum
    leading = spec.f_origin_exponent
    if ps is not None and ps:
        leading = min(leading, ps.min_exponent())
    return leading + 0.5 if leading < 0 else 0.5


def predicted_rates(spec: ProblemSpec) -> t.Tuple[float, float]:
    """
    Theoretical (L², H¹) convergence rates for the plain scheme
    """
    if spec.kind is DerivativeKind.RIEMANN_LIOUVILLE:
        return spec.alpha - 0.5, spec.alpha - 1.5
    l2 = min(spec.alpha + smoothness_index(spec), 2.0)
    return l2, l2 - 1.0


@dataclass(frozen=True)
class ExactReference:
    def __str__(self):
        return "exact"


@dataclass(frozen=True)
class FineMeshReference:
    m_ref: int = REFERENCE_M

    def __str__(self):
        return "fine mesh (m={})".format(self.m_ref)


ReferencePolicy = t.Union[ExactReference, FineMeshReference]


def default_reference(spec: ProblemSpec, m_ref: int = REFERENCE_M) -> ReferencePolicy:
    """
    Exact when b ≡ q ≡ 0 and f is a power sum whose closed-form solution
    can be checked, a fine mesh otherwise
    """
    ps = spec.f_powersum
    if spec.has_lower_order_terms() or ps is None:
        return FineMeshReference(m_ref)
    try:
        exact_solution_bq0(ps, spec.alpha, spec.kind)
    except (UnsupportedExponent, ResidualCheckFailed) as e:
        logger.info("No closed-form reference (%s), using a fine mesh", e)
        return FineMeshReference(m_ref)
    return ExactReference()


@dataclass
class ConvergenceReport:
    mesh_sizes: t.List[int]
    l2_errors: t.List[float]
    h1_errors: t.List[float]
    reference: ReferencePolicy
    predicted_l2: t.Optional[float] = None
    predicted_h1: t.Optional[float] = None
    mu_errors: t.Optional[t.List[float]] = None
    predicted_mu: t.Optional[float] = None

    @property
    def hs(self) -> t.List[float]:
        return [1.0 / m for m in self.mesh_sizes]

    @property
    def l2_rates(self) -> t.List[float]:
        return pairwise_rates(self.hs, self.l2_errors)

    @property
    def h1_rates(self) -> t.List[float]:
        return pairwise_rates(self.hs, self.h1_errors)

    @property
    def mu_rates(self) -> t.Optional[t.List[float]]:
        if self.mu_errors is None:
            return None
        return pairwise_rates(self.hs, self.mu_errors)

    @property
    def ls_rate_l2(self) -> float:
        return least_squares_rate(self.hs, self.l2_errors)

    @property
    def ls_rate_h1(self) -> float:
        return least_squares_rate(self.hs, self.h1_errors)

    @property
    def ls_rate_mu(self) -> t.Optional[float]:
        if self.mu_errors is None:
            return None
        return least_squares_rate(self.hs, self.mu_errors)


def check_mesh_list(
    m_list: t.Sequence[int], policy: ReferencePolicy
) -> t.List[int]:
    meshes = [int(m) for m in m_list]
    if not meshes:
        raise DomainError("The list of meshes is empty")
    if any(b <= a for a, b in zip(meshes, meshes[1:])):
        raise DomainError("Mesh sizes must be increasing, got {}".format(meshes))
    if isinstance(policy, FineMeshReference) and policy.m_ref <= max(meshes):
        raise DomainError(
            "Reference mesh m={} must be finer than every study mesh".format(
                policy.m_ref
            )
        )
    return meshes


def warn_on_rate_gap(report: "ConvergenceReport") -> None:
    rates = report.l2_rates
    if not rates or report.predicted_l2 is None or math.isnan(rates[-1]):
        return
    if abs(rates[-1] - report.predicted_l2) > RATE_WARNING_GAP:
        logger.warning(
            "Observed L2 rate %.2f is far from the predicted %.2f; "
            "the meshes may still be pre-asymptotic",
            rates[-1],
            report.predicted_l2,
        )


def convergence_study(
    spec: ProblemSpec,
    m_list: t.Sequence[int],
    reference_policy: t.Optional[ReferencePolicy] = None,
    quad_order: int = DEFAULT_ORDER,
) -> ConvergenceReport:
    policy = reference_policy or default_reference(spec)
    meshes = check_mesh_list(m_list, policy)

    reference: Reference
    if isinstance(policy, ExactReference):
        ps = spec.f_powersum
        if spec.has_lower_order_terms() or ps is None:
            raise DomainError(
                "An exact reference needs b = q = 0 and a power sum source"
            )
        try:
            reference = exact_solution_bq0(ps, spec.alpha, spec.kind)
        except UnsupportedExponent as e:
            raise DomainError(
                "No closed-form solution for this source: {}".format(e)
            ) from e
    else:
        logger.debug("Solving reference problem with m=%d", policy.m_ref)
        reference = solve_fbvp(spec, policy.m_ref, quad_order)

    l2_errors, h1_errors = [], []
    for m in meshes:
        l2, h1 = error_norms(solve_fbvp(spec, m, quad_order), reference, spec.alpha)
        logger.info("m=%d: L2 error %.5e, H1 error %.5e", m, l2, h1)
        l2_errors.append(l2)
        h1_errors.append(h1)

    predicted_l2, predicted_h1 = predicted_rates(spec)
    report = ConvergenceReport(
        mesh_sizes=meshes,
        l2_errors=l2_errors,
        h1_errors=h1_errors,
        reference=policy,
        predicted_l2=predicted_l2,
        predicted_h1=predicted_h1,
    )
    warn_on_rate_gap(report)
    return report
