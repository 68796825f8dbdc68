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
Fractional integrals and derivatives.

Power sums ``Σ c_k x**p_k`` are closed under left-sided Riemann-Liouville
integration and differentiation, so they are handled exactly. Anything else is
integrated pointwise by composite Gauss-Jacobi quadrature.
"""
from enum import Enum
import math
import typing as t

import numpy as np
from scipy import special as sps

from fracpg.exceptions import DomainError
from fracpg.exceptions import EvaluationError
from fracpg.exceptions import UnsupportedExponent
from fracpg.special import DEFAULT_ORDER
from fracpg.special import gamma
from fracpg.special import gauss_jacobi
from fracpg.special import gauss_legendre

#: Exponents closer than this are merged
EXPONENT_TOLERANCE = 1e-12

#: Geometric refinement levels toward each end of a quadrature piece
GRADING_LEVELS = 40

Term = t.Tuple[float, float]
Integrand = t.Callable[[np.ndarray], np.ndarray]


class DerivativeKind(Enum):
    RIEMANN_LIOUVILLE = "rl"
    CAPUTO = "caputo"

    @classmethod
    def parse(cls, s: t.Union[str, "DerivativeKind"]) -> "DerivativeKind":
        if isinstance(s, cls):
            return s
        aliases = {
            "rl": cls.RIEMANN_LIOUVILLE,
            "riemann-liouville": cls.RIEMANN_LIOUVILLE,
            "caputo": cls.CAPUTO,
            "c": cls.CAPUTO,
        }
        try:
            return aliases[str(s).strip().lower()]
        except KeyError:
            raise DomainError("Unknown derivative kind {!r}".format(s))


class Side(Enum):
    LEFT = "left"
    RIGHT = "right"


def _is_integer(v: float) -> bool:
    return abs(v - round(v)) <= EXPONENT_TOLERANCE


class PowerSum:
    """
    A finite sum ``Σ c_k x**p_k`` with every exponent ``p_k > -1``.

    Terms are kept in canonical order: exponents strictly increasing, no
    duplicates and no zero coefficients.
    """

    __slots__ = ("terms",)

    terms: t.Tuple[Term, ...]

    def __init__(self, terms: t.Iterable[Term] = ()):
        self.terms = _canonical(terms)

    @classmethod
    def monomial(cls, coeff: float, exponent: float) -> "PowerSum":
        return cls([(coeff, exponent)])

    @classmethod
    def constant(cls, value: float) -> "PowerSum":
        return cls([(value, 0.0)])

    def __repr__(self):
        if not self.terms:
            return "PowerSum(0)"
        body = " + ".join("{!r}*x^{!r}".format(c, p) for c, p in self.terms)
        return "PowerSum({})".format(body)

    def __eq__(self, other):
        if not isinstance(other, PowerSum):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms)

    def __bool__(self):
        return bool(self.terms)

    @property
    def exponents(self) -> t.List[float]:
        return [p for _, p in self.terms]

    @property
    def coefficients(self) -> t.List[float]:
        return [c for c, _ in self.terms]

    def min_exponent(self) -> float:
        """
        Smallest exponent, or 0 for the zero sum
        """
        return self.terms[0][1] if self.terms else 0.0

    def coefficient_of(self, exponent: float) -> float:
        for c, p in self.terms:
            if abs(p - exponent) <= EXPONENT_TOLERANCE:
                return c
        return 0.0

    def __call__(self, x):
        return ps_eval(self, x)

    def __neg__(self):
        return PowerSum((-c, p) for c, p in self.terms)

    def __add__(self, other):
        if isinstance(other, (int, float)):
            other = PowerSum.constant(float(other))
        if not isinstance(other, PowerSum):
            return NotImplemented
        return PowerSum(self.terms + other.terms)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, float)):
            other = PowerSum.constant(float(other))
        if not isinstance(other, PowerSum):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, float)):
            return PowerSum((c * other, p) for c, p in self.terms)
        if not isinstance(other, PowerSum):
            return NotImplemented
        return PowerSum(
            (c1 * c2, p1 + p2) for c1, p1 in self.terms for c2, p2 in other.terms
        )

    __rmul__ = __mul__

    def derivative(self) -> "PowerSum":
        """
        Return the ordinary derivative.

        Raises :class:`DomainError` if a term x**p with -1 < p < 0 would
        leave the admissible class.
        """
        out = []
        for c, p in self.terms:
            if _is_integer(p) and round(p) == 0:
                continue
            if p - 1 <= -1:
                raise DomainError(
                    "Derivative of x^{} is not integrable at the origin".format(p)
                )
            out.append((c * p, p - 1))
        return PowerSum(out)

    def integrate(self, lo: float, hi: float) -> float:
        """
        Return the exact integral over [lo, hi], 0 <= lo <= hi.
        """
        if lo < 0 or hi < lo:
            raise DomainError("Invalid interval [{}, {}]".format(lo, hi))
        total = 0.0
        for c, p in self.terms:
            q = p + 1.0
            total += c * (hi**q - lo**q) / q
        return total


def _canonical(terms: t.Iterable[Term]) -> t.Tuple[Term, ...]:
    items = sorted(((float(c), float(p)) for c, p in terms), key=lambda cp: cp[1])
    for _, p in items:
        if not p > -1:
            raise DomainError(
                "PowerSum exponents must exceed -1, got {!r}".format(p)
            )
    merged: t.List[t.List[float]] = []
    for c, p in items:
        if merged and abs(p - merged[-1][1]) <= EXPONENT_TOLERANCE:
            merged[-1][0] += c
            merged[-1][2] += abs(c)
        else:
            merged.append([c, p, abs(c)])
    eps = np.finfo(float).eps
    return tuple(
        (c, p) for c, p, magnitude in merged if c != 0 and abs(c) > 4 * eps * magnitude
    )


def ps_eval(ps: PowerSum, x):
    """
    Evaluate ``ps`` at ``x`` (a float or an array of points in [0, 1]).
    """
    xa = np.asarray(x, dtype=float)
    if np.any(xa < 0):
        raise DomainError("PowerSum evaluated at a negative point")
    if ps.terms and ps.terms[0][1] < 0 and np.any(xa == 0):
        raise DomainError(
            "PowerSum with exponent {} evaluated at 0".format(ps.terms[0][1])
        )
    result = np.zeros_like(xa)
    for c, p in ps.terms:
        result = result + c * np.power(xa, p)
    if result.ndim == 0:
        return float(result)
    return result


def evaluate_terms(terms: t.Iterable[Term], x):
    """
    Evaluate a raw list of ``(coeff, exponent)`` pairs at points ``x > 0``.
    Exponents are not restricted.
    """
    xa = np.asarray(x, dtype=float)
    result = np.zeros_like(xa)
    for c, p in terms:
        result = result + c * np.power(xa, p)
    return result


def frac_integral_ps(ps: PowerSum, order: float) -> PowerSum:
    """
    Left-sided Riemann-Liouville integral of ``order`` > 0, applied termwise:
    ``x**p -> Γ(p+1)/Γ(p+1+order) x**(p+order)``.
    """
    if not order > 0:
        raise DomainError("Fractional integral order must be positive")
    return PowerSum(
        (c * gamma(p + 1) / gamma(p + 1 + order), p + order) for c, p in ps.terms
    )


def riemann_liouville_terms(ps: PowerSum, order: float) -> t.List[Term]:
    """
    Termwise Riemann-Liouville derivative without the admissibility
    check on the result, for pointwise evaluation.

    Terms whose Γ argument hits a pole vanish, e.g. D^a x^(a-1) = 0.
    """
    out = []
    for c, p in ps.terms:
        arg = p + 1 - order
        if arg <= EXPONENT_TOLERANCE and _is_integer(arg):
            continue
        out.append((c * gamma(p + 1) * float(sps.rgamma(arg)), p - order))
    return out


def frac_deriv_ps(
    ps: PowerSum,
    order: float,
    kind: t.Union[DerivativeKind, str] = DerivativeKind.RIEMANN_LIOUVILLE,
) -> PowerSum:
    """
    Left-sided fractional derivative of ``order`` in (0, 2).

    Riemann-Liouville: ``x**p -> Γ(p+1)/Γ(p+1-order) x**(p-order)``.
    Caputo: differentiate ``ceil(order)`` times, then integrate to the
    fractional remainder. Powers x**p with a non-integer p below
    ``ceil(order) - 1`` have no classical Caputo derivative and raise
    :class:`UnsupportedExponent`.
    """
    kind = DerivativeKind.parse(kind)
    if not 0 < order < 2:
        raise DomainError("Derivative order must lie in (0, 2), got {}".format(order))

    if kind is DerivativeKind.RIEMANN_LIOUVILLE:
        terms = riemann_liouville_terms(ps, order)
        rough = [p for _, p in terms if p <= -1]
        if rough:
            raise UnsupportedExponent(
                "Riemann-Liouville derivative produces the non-integrable power "
                "x^{}".format(rough[0])
            )
        return PowerSum(terms)

    n = math.ceil(order - EXPONENT_TOLERANCE)
    kept = []
    for c, p in ps.terms:
        if _is_integer(p) and 0 <= round(p) <= n - 1:
            continue
        if p <= n - 1:
            raise UnsupportedExponent(
                "Caputo derivative of order {} needs x^{} to be {} times "
                "differentiable".format(order, p, n)
            )
        kept.append((c, p))
    result = PowerSum(kept)
    for _ in range(n):
        result = result.derivative()
    if _is_integer(order):
        return result
    return frac_integral_ps(result, n - order)


def _rule_points(
    lo: float, hi: float, left_exponent: float, right_exponent: float, order: int
) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Return ``(x, w, weight)`` where ``sum(w * g(x))`` integrates
    ``g * weight`` over [lo, hi] and ``weight`` is the singular factor
    ``(x - lo)**left_exponent * (hi - x)**right_exponent`` at the nodes.
    """
    rule = gauss_jacobi(order, right_exponent, left_exponent)
    x, w = rule.on_interval(lo, hi)
    weight = np.power(x - lo, left_exponent) * np.power(hi - x, right_exponent)
    return x, w, weight


def _graded_piece(
    lo: float,
    hi: float,
    left_exponent: float,
    right_exponent: float,
    order: int,
    levels: int,
) -> t.Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Quadrature points for [lo, hi], graded geometrically (factor 2) toward
    both ends. The innermost panels absorb the declared endpoint powers.
    Returns concatenated ``(x, w, weight)`` as in :func:`_rule_points`.
    """
    legendre = gauss_legendre(order)
    mid = 0.5 * (lo + hi)
    xs, ws, weights = [], [], []

    for end, other, exponent, toward_left in (
        (lo, mid, left_exponent, True),
        (hi, mid, right_exponent, False),
    ):
        length = abs(other - end)
        for k in range(levels):
            a = length / 2.0 ** (k + 1)
            b = length / 2.0**k
            if toward_left:
                x, w = legendre.on_interval(end + a, end + b)
            else:
                x, w = legendre.on_interval(end - b, end - a)
            xs.append(x)
            ws.append(w)
            weights.append(np.ones_like(x))
        tiny = length / 2.0**levels
        if toward_left:
            x, w, wt = _rule_points(end, end + tiny, exponent, 0.0, order)
        else:
            x, w, wt = _rule_points(end - tiny, end, 0.0, exponent, order)
        xs.append(x)
        ws.append(w)
        weights.append(wt)
    return np.concatenate(xs), np.concatenate(ws), np.concatenate(weights)


def frac_integral_point(
    f: Integrand,
    order: float,
    x: float,
    side: t.Union[Side, str] = Side.LEFT,
    singular_exponent_at_origin: float = 0.0,
    breakpoints: t.Iterable[float] = (),
    quad_order: int = DEFAULT_ORDER,
    levels: int = GRADING_LEVELS,
) -> float:
    """
    Evaluate a Riemann-Liouville integral of ``order`` at the point ``x``.

    left:  1/Γ(order) ∫_0^x (x - t)**(order - 1) f(t) dt
    right: 1/Γ(order) ∫_x^1 (t - x)**(order - 1) f(t) dt

    ``f`` must accept an array of points. If ``f`` behaves like
    ``t**-singular_exponent_at_origin`` near 0, declare it. ``breakpoints``
    are interior points where ``f`` is only piecewise smooth.
    """
    side = Side(side)
    if not order > 0:
        raise DomainError("Fractional integral order must be positive")
    if not 0 < x <= 1:
        raise DomainError("Evaluation point must lie in (0, 1], got {}".format(x))
    sigma = float(singular_exponent_at_origin)
    if not 0 <= sigma < 1:
        raise DomainError("Origin singularity exponent must lie in [0, 1)")

    if side is Side.LEFT:
        lo, hi = 0.0, float(x)
    else:
        lo, hi = float(x), 1.0
    if hi <= lo:
        return 0.0

    cuts = sorted({lo, hi} | {float(b) for b in breakpoints if lo < b < hi})
    kernel_exponent = order - 1.0
    total = 0.0
    for a, b in zip(cuts[:-1], cuts[1:]):
        left_exponent = 0.0
        right_exponent = 0.0
        if side is Side.LEFT:
            if a == 0.0:
                left_exponent = -sigma
            if b == hi:
                right_exponent = kernel_exponent
        elif a == lo:
            left_exponent = kernel_exponent
        pts, w, weight = _graded_piece(
            a, b, left_exponent, right_exponent, quad_order, levels
        )
        if side is Side.LEFT:
            kernel = np.power(x - pts, kernel_exponent)
        else:
            kernel = np.power(pts - x, kernel_exponent)
        values = np.asarray(f(pts), dtype=float) * kernel / weight
        if not np.all(np.isfinite(values)):
            raise EvaluationError(
                "Integrand is not finite on [{}, {}] while integrating at "
                "x={}".format(a, b, x)
            )
        total += float(np.dot(w, values))
    return total / gamma(order)
