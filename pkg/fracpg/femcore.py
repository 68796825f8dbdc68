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
Petrov-Galerkin discretization of

    -D^α u + b u' + q u = f  on (0, 1),  u(0) = u(1) = 0

with continuous piecewise linear trial functions ψ_j and shifted fractional
power test functions

    φ_i = (x_i - x)^(α-1) χ[0, x_i] - c_i (1 - x)^(α-1)

where c_i = x_i^(α-1) (Riemann-Liouville) or c_i = x_i (Caputo).

The leading block of the stiffness matrix is -Γ(α) times the identity. The
lower order block splits into a lower triangular part (from the shifted power)
and a rank one part (from the (1 - x)^(α-1) term).
"""
from dataclasses import dataclass
from dataclasses import field
from logging import getLogger
import typing as t

import numpy as np

from fracpg import expr
from fracpg.exceptions import DomainError
from fracpg.exceptions import EvaluationError
from fracpg.fraccalc import DerivativeKind
from fracpg.fraccalc import PowerSum
from fracpg.special import DEFAULT_ORDER
from fracpg.special import beta
from fracpg.special import gamma
from fracpg.special import gauss_jacobi
from fracpg.special import gauss_legendre

logger = getLogger("fracpg.femcore")

ALPHA_MIN = 1.5
ALPHA_MAX = 2.0


def check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not ALPHA_MIN < alpha < ALPHA_MAX:
        raise DomainError(
            "The fractional order alpha must lie strictly between "
            "{} and {}, got {}".format(ALPHA_MIN, ALPHA_MAX, alpha)
        )
    return alpha


@dataclass(frozen=True)
class Mesh:
    """
    Uniform partition of (0, 1) into ``m`` elements
    """

    m: int

    def __post_init__(self):
        if int(self.m) != self.m or self.m < 2:
            raise DomainError(
                "A mesh needs at least 2 elements, got {!r}".format(self.m)
            )

    @property
    def h(self) -> float:
        return 1.0 / self.m

    @property
    def nodes(self) -> np.ndarray:
        return np.arange(self.m + 1) / self.m

    @property
    def interior_nodes(self) -> np.ndarray:
        return np.arange(1, self.m) / self.m

    @property
    def n(self) -> int:
        """
        Number of interior nodes (unknowns)
        """
        return self.m - 1

    def node(self, i: int) -> float:
        return i / self.m

    def element_of(self, x) -> np.ndarray:
        """
        Index of the element containing each point, with x = 1 in the last
        """
        xa = np.asarray(x, dtype=float)
        return np.clip(np.floor(xa * self.m).astype(int), 0, self.m - 1)


@dataclass(frozen=True)
class ProblemSpec:
    """
    Coefficients and data of a fractional boundary value problem
    """

    alpha: float
    kind: DerivativeKind
    b: expr.CoefficientExpr
    q: expr.CoefficientExpr
    f: expr.CoefficientExpr
    f_origin_exponent: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "alpha", check_alpha(self.alpha))
        object.__setattr__(self, "kind", DerivativeKind.parse(self.kind))
        if not -1 < self.f_origin_exponent <= 0:
            raise DomainError(
                "The origin exponent of f must lie in (-1, 0], got {}".format(
                    self.f_origin_exponent
                )
            )

    @classmethod
    def from_strings(
        cls,
        alpha: float,
        kind: t.Union[str, DerivativeKind],
        b: str = "0",
        q: str = "0",
        f: str = "1",
        f_origin_exponent: t.Optional[float] = None,
    ) -> "ProblemSpec":
        """
        Parse the coefficient expressions. If ``f_origin_exponent`` is not
        given it is detected from the power sum form of ``f``, or taken as 0
        when ``f`` is not a power sum.
        """
        f_expr = expr.parse(f)
        if f_origin_exponent is None:
            f_origin_exponent = detect_origin_exponent(f_expr)
        return cls(
            alpha=alpha,
            kind=DerivativeKind.parse(kind),
            b=expr.parse(b),
            q=expr.parse(q),
            f=f_expr,
            f_origin_exponent=f_origin_exponent,
        )

    @property
    def f_powersum(self) -> t.Optional[PowerSum]:
        return self.f.classify()

    def has_lower_order_terms(self) -> bool:
        return not (self.b.is_zero() and self.q.is_zero())


def detect_origin_exponent(f: expr.CoefficientExpr) -> float:
    ps = f.classify()
    if ps is None or not ps:
        return 0.0
    return min(0.0, ps.min_exponent())


def hat(mesh: Mesh, j: int, x) -> t.Tuple[np.ndarray, np.ndarray]:
    """
    Value and derivative of the nodal basis function ψ_j at ``x``
    """
    if not 1 <= j <= mesh.m - 1:
        raise DomainError("Hat index {} outside 1..{}".format(j, mesh.m - 1))
    xa = np.asarray(x, dtype=float)
    h = mesh.h
    left, centre, right = mesh.node(j - 1), mesh.node(j), mesh.node(j + 1)
    rising = (xa >= left) & (xa < centre)
    falling = (xa >= centre) & (xa < right)
    value = np.where(rising, (xa - left) / h, 0.0)
    value = np.where(falling, (right - xa) / h, value)
    value = np.where(xa == centre, 1.0, value)
    slope = np.where(rising, 1.0 / h, 0.0)
    slope = np.where(falling, -1.0 / h, slope)
    return value, slope


@dataclass(frozen=True)
class TestBasis:
    """
    The test functions φ_1 .. φ_{m-1}
    """

    __test__ = False

    kind: DerivativeKind
    alpha: float
    mesh: Mesh
    c: np.ndarray = field(repr=False)

    def x(self, i: int) -> float:
        return self.mesh.node(i)

    def coefficient(self, i: int) -> float:
        return float(self.c[i - 1])

    def caputo_moment(self, i: int) -> t.Tuple[float, float]:
        """
        The two halves of (φ_i, x^(1-α)):
        ∫_0^x_i (x_i - x)^(α-1) x^(1-α) dx and
        c_i ∫_0^1 (1 - x)^(α-1) x^(1-α) dx
        """
        weight = beta(2 - self.alpha, self.alpha)
        return self.x(i) * weight, self.coefficient(i) * weight


def test_basis(
    kind: t.Union[str, DerivativeKind], alpha: float, mesh: Mesh
) -> TestBasis:
    kind = DerivativeKind.parse(kind)
    alpha = check_alpha(alpha)
    xi = mesh.interior_nodes
    if kind is DerivativeKind.RIEMANN_LIOUVILLE:
        c = np.power(xi, alpha - 1)
    else:
        c = xi.copy()
    c.setflags(write=False)
    return TestBasis(kind, alpha, mesh, c)


def test_eval(tb: TestBasis, i: int, x) -> np.ndarray:
    """
    φ_i(x) = (x_i - x)^(α-1) [x <= x_i] - c_i (1 - x)^(α-1)
    """
    xa = np.asarray(x, dtype=float)
    xi = tb.x(i)
    e = tb.alpha - 1
    shifted = np.where(xa <= xi, np.power(np.clip(xi - xa, 0, None), e), 0.0)
    return shifted - tb.coefficient(i) * np.power(np.clip(1 - xa, 0, None), e)


def test_fracderiv(tb: TestBasis, i: int, x) -> np.ndarray:
    """
    Right-sided Riemann-Liouville derivative of order α-1 of φ_i, which is
    piecewise constant: Γ(α) [x <= x_i] - c_i Γ(α)
    """
    xa = np.asarray(x, dtype=float)
    g = gamma(tb.alpha)
    return np.where(xa <= tb.x(i), g, 0.0) - tb.coefficient(i) * g


def assemble_leading(mesh: Mesh, alpha: float) -> float:
    """
    Diagonal value of the leading block a_ij = -(ψ_j', D^(α-1) φ_i).

    Since ∫_0^x_i ψ_j' dx = ψ_j(x_i) = δ_ij and ∫_0^1 ψ_j' dx = 0, the block is
    -Γ(α) I for either derivative.
    """
    return -gamma(check_alpha(alpha))


def leading_block_by_quadrature(tb: TestBasis) -> np.ndarray:
    """
    Evaluate -(ψ_j', D^(α-1) φ_i) for all i, j by elementwise Gauss quadrature.
    """
    mesh = tb.mesh
    x0, w0 = gauss_legendre(2).on_interval(0.0, mesh.h)
    n = mesh.n
    out = np.zeros((n, n))
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            total = 0.0
            for k in (j - 1, j):
                x = mesh.node(k) + x0
                _, slope = hat(mesh, j, x)
                total += float(np.dot(w0, slope * test_fracderiv(tb, i, x)))
            out[i - 1, j - 1] = -total
    return out


@dataclass(frozen=True)
class WeightedTerm:
    """
    The integrand ``x**exponent * func(x)`` with ``func`` smooth at 0
    """

    exponent: float
    func: t.Callable[[np.ndarray], np.ndarray]


class _Samples(t.NamedTuple):
    legendre: np.ndarray
    kernel: np.ndarray
    origin: t.Optional[np.ndarray]
    both: t.Optional[np.ndarray]


class ElementKernels:
    """
    Moments of a function against the shifted powers of the mesh.

    For each element e = [x_e, x_{e+1}] and each offset d >= 0 this computes

        P[e, d] = ∫_e x^σ g(x) (x_{e+1+d} - x)^(α-1) dx

    On a uniform mesh the kernel depends on d only, so one kernel table serves
    every element. The element touching the kernel's singular point (d = 0)
    uses a Gauss-Jacobi rule with weight (x_{e+1} - x)^(α-1); when σ != 0 the
    first element uses a rule with weight x^σ as well.
    """

    def __init__(
        self,
        mesh: Mesh,
        alpha: float,
        order: int = DEFAULT_ORDER,
        origin_exponent: float = 0.0,
    ):
        self.mesh = mesh
        self.alpha = alpha
        self.order = order
        self.sigma = float(origin_exponent)
        h = mesh.h
        m = mesh.m
        offsets = np.arange(m)

        self.x_legendre, self.w_legendre = gauss_legendre(order).on_interval(0.0, h)
        self.x_kernel, self.w_kernel = gauss_jacobi(order, alpha - 1, 0).on_interval(
            0.0, h
        )
        self.kernel_table = np.power(
            (offsets[None, :] + 1) * h - self.x_legendre[:, None], alpha - 1
        )

        self.x_origin: t.Optional[np.ndarray] = None
        self.x_both: t.Optional[np.ndarray] = None
        if self.sigma != 0.0:
            self.x_origin, self.w_origin = gauss_jacobi(
                order, 0, self.sigma
            ).on_interval(0.0, h)
            self.x_both, self.w_both = gauss_jacobi(
                order, alpha - 1, self.sigma
            ).on_interval(0.0, h)
            self.origin_table = np.power(
                (offsets[None, :] + 1) * h - self.x_origin[:, None], alpha - 1
            )

    def _grid(self, local: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray]:
        m = self.mesh.m
        s = local / self.mesh.h
        x = (np.arange(m)[:, None] + s[None, :]) / m
        return x, np.broadcast_to(s, x.shape)

    def sample(
        self, func: t.Callable[[np.ndarray, np.ndarray], np.ndarray]
    ) -> _Samples:
        """
        Evaluate ``func(x, s)`` on every quadrature grid, where ``s`` is the
        local coordinate in [0, 1] of ``x`` within its element.
        """

        def values(local):
            x, s = self._grid(local)
            v = np.asarray(func(x, s), dtype=float)
            v = np.broadcast_to(v, x.shape)
            if self.sigma != 0.0:
                v = v * np.power(x, self.sigma)
            return v

        def first_element(local):
            s = local / self.mesh.h
            return np.broadcast_to(
                np.asarray(func(local, s), dtype=float), local.shape
            )

        legendre = values(self.x_legendre)
        kernel = values(self.x_kernel)
        origin = both = None
        if self.x_origin is not None and self.x_both is not None:
            origin = first_element(self.x_origin)
            both = first_element(self.x_both)
        for v in (legendre, kernel, origin, both):
            if v is not None and not np.all(np.isfinite(v)):
                bad = np.argwhere(~np.isfinite(np.atleast_2d(v)))[0]
                raise EvaluationError(
                    "Integrand is not finite on element {}".format(int(bad[0]))
                )
        return _Samples(legendre, kernel, origin, both)

    def columns(self, samples: _Samples) -> t.Iterator[np.ndarray]:
        """
        Yield P[:, d] for d = 0 .. m-1
        """
        weighted = samples.legendre * self.w_legendre
        for d in range(self.mesh.m):
            if d == 0:
                col = samples.kernel @ self.w_kernel
                if samples.both is not None:
                    col[0] = float(np.dot(samples.both, self.w_both))
            else:
                col = weighted @ self.kernel_table[:, d]
                if samples.origin is not None:
                    col[0] = float(
                        np.dot(samples.origin * self.w_origin, self.origin_table[:, d])
                    )
            yield col

    def end_column(self, samples: _Samples) -> np.ndarray:
        """
        P[e, m-1-e] for every element, the moments against (1 - x)^(α-1)
        """
        m = self.mesh.m
        offsets = m - 1 - np.arange(m - 1)
        weighted = samples.legendre[:-1] * self.w_legendre
        out = np.empty(m)
        out[:-1] = np.einsum("eq,qe->e", weighted, self.kernel_table[:, offsets])
        out[-1] = float(np.dot(samples.kernel[-1], self.w_kernel))
        if samples.origin is not None:
            out[0] = float(
                np.dot(samples.origin * self.w_origin, self.origin_table[:, m - 1])
            )
        return out


def shifted_moments(
    terms: t.Iterable[WeightedTerm], mesh: Mesh, alpha: float, order: int
) -> t.Tuple[np.ndarray, float]:
    """
    For g = Σ x^σ_k func_k(x) return

        (∫_0^x_i g(x) (x_i - x)^(α-1) dx for i = 1..m-1,
         ∫_0^1 g(x) (1 - x)^(α-1) dx)
    """
    m = mesh.m
    n = mesh.n
    nodal = np.zeros(n)
    end = 0.0
    for term in terms:
        grid = ElementKernels(mesh, alpha, order, term.exponent)
        samples = grid.sample(lambda x, s, term=term: term.func(x))
        for d, col in enumerate(grid.columns(samples)):
            if d < n:
                nodal[d:] += col[: n - d]
            end += col[m - 1 - d]
    return nodal, end


def end_moment(
    terms: t.Iterable[WeightedTerm], mesh: Mesh, alpha: float, order: int
) -> float:
    """
    ∫_0^1 g(x) (1 - x)^(α-1) dx for g = Σ x^σ_k func_k(x), summed elementwise
    """
    total = 0.0
    for term in terms:
        grid = ElementKernels(mesh, alpha, order, term.exponent)
        samples = grid.sample(lambda x, s, term=term: term.func(x))
        total += float(np.sum(grid.end_column(samples)))
    return total


def load_terms(spec: ProblemSpec) -> t.List[WeightedTerm]:
    """
    Split f into singular powers and smooth factors.
    """
    ps = spec.f_powersum
    if ps is not None:
        return [
            WeightedTerm(p, lambda x, c=c: np.full_like(x, c)) for c, p in ps.terms
        ]
    sigma = spec.f_origin_exponent
    if sigma == 0.0:
        return [WeightedTerm(0.0, spec.f)]
    return [WeightedTerm(sigma, lambda x: spec.f(x) * np.power(x, -sigma))]


def test_projection(
    terms: t.Iterable[WeightedTerm], tb: TestBasis, order: int = DEFAULT_ORDER
) -> t.Tuple[np.ndarray, float]:
    """
    Return ((g, φ_i) for i = 1..m-1, ∫_0^1 g(x) (1 - x)^(α-1) dx).
    """
    nodal, end = shifted_moments(terms, tb.mesh, tb.alpha, order)
    return nodal - tb.c * end, end


def assemble_load(
    spec: ProblemSpec, tb: TestBasis, mesh: Mesh, quad_order: int = DEFAULT_ORDER
) -> np.ndarray:
    """
    F_i = (f, φ_i)
    """
    load, _ = test_projection(load_terms(spec), tb, quad_order)
    return load


def assemble_lower_order(
    spec: ProblemSpec, tb: TestBasis, mesh: Mesh, quad_order: int = DEFAULT_ORDER
) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Return ``(L, u, w)`` with r_ij = L_ij + u_i w_j, where

        L_ij = ∫ (b ψ_j' + q ψ_j)(x) (x_i - x)^(α-1) dx over [0, x_i]  (j <= i)
        w_j  = ∫ (b ψ_j' + q ψ_j)(x) (1 - x)^(α-1) dx
        u_i  = -c_i
    """
    m = mesh.m
    n = mesh.n
    h = mesh.h
    lower = np.zeros((n, n))
    w = np.zeros(n)
    u = -np.asarray(tb.c, dtype=float)
    if not spec.has_lower_order_terms():
        return lower, u, w

    grid = ElementKernels(mesh, spec.alpha, quad_order)

    def rising(x, s):
        return spec.b(x) / h + spec.q(x) * s

    def falling(x, s):
        return -spec.b(x) / h + spec.q(x) * (1 - s)

    columns = zip(
        grid.columns(grid.sample(rising)), grid.columns(grid.sample(falling))
    )
    for d, (up, down) in enumerate(columns):
        if d < n:
            idx = np.arange(n - d)
            lower[idx + d, idx] += up[idx]
            if d + 1 < n:
                idx = idx[:-1]
                lower[idx + d + 1, idx] += down[idx + 1]
        if d >= 1:
            w[m - 1 - d] += up[m - 1 - d]
        if d <= m - 2:
            w[m - 2 - d] += down[m - 1 - d]
    return lower, u, w


@dataclass(frozen=True)
class AssembledSystem:
    """
    The linear system S U = F with S = diag I + lower + rank_u rank_vᵀ
    """

    diag: float
    lower: np.ndarray = field(repr=False)
    rank_u: np.ndarray = field(repr=False)
    rank_v: np.ndarray = field(repr=False)
    load: np.ndarray = field(repr=False)

    @property
    def n(self) -> int:
        return len(self.load)

    def dense(self) -> np.ndarray:
        s = self.lower + np.outer(self.rank_u, self.rank_v)
        s[np.diag_indices_from(s)] += self.diag
        return s

    def matvec(self, x: np.ndarray) -> np.ndarray:
        return self.diag * x + self.lower @ x + self.rank_u * float(self.rank_v @ x)

    def with_load(self, load: np.ndarray) -> "AssembledSystem":
        return AssembledSystem(self.diag, self.lower, self.rank_u, self.rank_v, load)


def assemble(
    spec: ProblemSpec, mesh: Mesh, quad_order: int = DEFAULT_ORDER
) -> AssembledSystem:
    tb = test_basis(spec.kind, spec.alpha, mesh)
    diag = assemble_leading(mesh, spec.alpha)
    lower, u, w = assemble_lower_order(spec, tb, mesh, quad_order)
    load = assemble_load(spec, tb, mesh, quad_order)
    logger.info(
        "Assembled %s system with n=%d, alpha=%g, diag=%.6g",
        spec.kind.value,
        mesh.n,
        spec.alpha,
        diag,
    )
    return AssembledSystem(diag, lower, u, w, load)
