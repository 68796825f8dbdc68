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
Gamma and Beta functions and Gauss-Jacobi quadrature rules.
"""
from dataclasses import dataclass
from functools import lru_cache
from logging import getLogger
import typing as t

import numpy as np
from scipy import special as sps

from fracpg.exceptions import DomainError
from fracpg.exceptions import QuadratureError

logger = getLogger("fracpg.special")

#: Default number of points per element
DEFAULT_ORDER = 16


def gamma(x: float) -> float:
    """
    Return Γ(x) for x > 0.
    """
    if not x > 0:
        raise DomainError("gamma is only defined here for x > 0, got {!r}".format(x))
    return float(sps.gamma(x))


def beta(a: float, b: float) -> float:
    """
    Return B(a, b) = Γ(a)Γ(b)/Γ(a+b), evaluated in log space.
    """
    if not (a > 0 and b > 0):
        raise DomainError("beta requires a, b > 0, got ({!r}, {!r})".format(a, b))
    return float(np.exp(sps.betaln(a, b)))


@dataclass(frozen=True)
class QuadRule:
    """
    An ``order``-point Gauss rule on (-1, 1) for the weight
    ``(1 - t)**jacobi_a * (1 + t)**jacobi_b``.
    """

    nodes: np.ndarray
    weights: np.ndarray
    jacobi_a: float
    jacobi_b: float
    order: int

    def weight_sum(self) -> float:
        return float(np.sum(self.weights))

    def on_interval(self, lo: float, hi: float) -> t.Tuple[np.ndarray, np.ndarray]:
        """
        Map the rule to [lo, hi].

        The returned weights integrate ``g`` against
        ``(hi - x)**jacobi_a * (x - lo)**jacobi_b`` so that
        ``sum(w * g(x))`` approximates that weighted integral.
        """
        half = 0.5 * (hi - lo)
        x = lo + half * (self.nodes + 1.0)
        scale = half ** (1.0 + self.jacobi_a + self.jacobi_b)
        return x, self.weights * scale

    def local_coordinates(self) -> np.ndarray:
        """
        Nodes mapped to the unit interval [0, 1]
        """
        return 0.5 * (self.nodes + 1.0)


@lru_cache(maxsize=256)
def gauss_jacobi(n: int, a: float = 0.0, b: float = 0.0) -> QuadRule:
    """
    Return the ``n``-point Gauss-Jacobi rule for the weight
    ``(1 - t)**a * (1 + t)**b`` on (-1, 1).

    The rule is exact for polynomials of degree ``2n - 1``. Nodes come from the
    eigenvalues of the Jacobi matrix of the three-term recurrence
    (Golub-Welsch), refined by Newton's method.
    """
    if n < 1:
        raise DomainError("Quadrature order must be positive, got {!r}".format(n))
    if not (a > -1 and b > -1):
        raise DomainError(
            "Jacobi exponents must exceed -1, got ({!r}, {!r})".format(a, b)
        )
    try:
        nodes, weights = sps.roots_jacobi(n, a, b)
    except (ValueError, np.linalg.LinAlgError) as e:
        raise QuadratureError(
            "Gauss-Jacobi node solve failed for n={}, a={}, b={}".format(n, a, b)
        ) from e
    nodes = np.asarray(nodes, dtype=float)
    weights = np.asarray(weights, dtype=float)
    if not (np.all(np.isfinite(nodes)) and np.all(np.isfinite(weights))):
        raise QuadratureError(
            "Gauss-Jacobi node solve did not converge for n={}, a={}, b={}".format(
                n, a, b
            )
        )
    order = np.argsort(nodes)
    nodes = nodes[order]
    weights = weights[order]
    nodes.setflags(write=False)
    weights.setflags(write=False)
    logger.debug("Built %d-point Gauss-Jacobi rule (a=%g, b=%g)", n, a, b)
    return QuadRule(nodes, weights, float(a), float(b), n)


def gauss_legendre(n: int) -> QuadRule:
    return gauss_jacobi(n, 0.0, 0.0)

