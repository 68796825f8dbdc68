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
Linear solves and condition numbers for assembled systems.
"""
from logging import getLogger
import typing as t
import warnings

import numpy as np
from scipy import linalg

from fracpg.exceptions import ConditionEstimateError
from fracpg.exceptions import DomainError
from fracpg.exceptions import SingularMatrixError
from fracpg.exceptions import StructuredSolveBreakdown
from fracpg.femcore import AssembledSystem

logger = getLogger("fracpg.solver")

#: Largest dimension for which singular values are computed directly
DENSE_CONDITION_LIMIT = 1024

#: Iteration cap for the power and inverse power methods
MAX_POWER_ITERATIONS = 1000

BREAKDOWN_TOLERANCE = 1e-12


def _square(S: np.ndarray) -> np.ndarray:
    S = np.asarray(S, dtype=float)
    if S.ndim != 2 or S.shape[0] != S.shape[1]:
        raise DomainError("Expected a square matrix, got shape {}".format(S.shape))
    return S


def lu_factor(S: np.ndarray) -> t.Tuple[np.ndarray, np.ndarray]:
    """
    LU factorization with partial pivoting of a private copy of ``S``.

    :raises SingularMatrixError: if a pivot vanishes to working precision
    """
    S = _square(S)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", linalg.LinAlgWarning)
        lu, piv = linalg.lu_factor(S, overwrite_a=False, check_finite=True)
    pivots = np.abs(np.diag(lu))
    threshold = len(pivots) * np.finfo(float).eps * max(float(np.max(pivots)), 1e-300)
    small = np.flatnonzero(pivots <= threshold)
    if small.size:
        raise SingularMatrixError(
            "Matrix is singular to working precision at pivot {}".format(
                int(small[0])
            ),
            pivot=int(small[0]),
        )
    return lu, piv


def solve_dense(S: np.ndarray, F: np.ndarray) -> np.ndarray:
    F = np.asarray(F, dtype=float)
    S = _square(S)
    if F.shape != (S.shape[0],):
        raise DomainError(
            "Right hand side of length {} does not match a {}x{} matrix".format(
                F.size, *S.shape
            )
        )
    return linalg.lu_solve(lu_factor(S), F)


def solve_structured(
    diag: float,
    lower: np.ndarray,
    rank_u: np.ndarray,
    rank_v: np.ndarray,
    F: np.ndarray,
) -> np.ndarray:
    """
    Solve (diag I + lower + rank_u rank_vᵀ) x = F by forward substitution and
    the Sherman-Morrison formula.

    :raises StructuredSolveBreakdown: if 1 + rank_vᵀ T⁻¹ rank_u vanishes
    """
    if diag == 0:
        raise DomainError("The diagonal shift must be nonzero")
    T = np.array(lower, dtype=float)
    T[np.diag_indices_from(T)] += diag
    rhs = np.column_stack([np.asarray(F, dtype=float), np.asarray(rank_u, dtype=float)])
    yz = linalg.solve_triangular(T, rhs, lower=True, check_finite=False)
    y, z = yz[:, 0], yz[:, 1]
    denominator = 1.0 + float(np.dot(rank_v, z))
    if abs(denominator) < BREAKDOWN_TOLERANCE:
        raise StructuredSolveBreakdown(
            "Sherman-Morrison denominator {:.3e} is too close to zero".format(
                denominator
            )
        )
    return y - (float(np.dot(rank_v, y)) / denominator) * z


def solve_system(system: AssembledSystem) -> np.ndarray:
    """
    Solve an assembled system, preferring the structured path.
    """
    try:
        x = solve_structured(
            system.diag, system.lower, system.rank_u, system.rank_v, system.load
        )
        logger.debug("Solved n=%d system by structured elimination", system.n)
        return x
    except StructuredSolveBreakdown as e:
        logger.warning("%s; falling back to a dense solve", e)
    return solve_dense(system.dense(), system.load)


def condition_number(
    S: np.ndarray, precondition: bool = False, diag: t.Optional[float] = None
) -> float:
    """
    2-norm condition number σ_max / σ_min.

    With ``precondition`` the matrix is first divided by its leading diagonal
    ``diag``, the scaling that turns the leading block into the identity.
    A scalar scaling leaves the 2-norm condition number unchanged, so both
    forms give the same value up to rounding.
    """
    S = _square(S)
    if precondition:
        if not diag:
            raise DomainError("Preconditioning needs the nonzero leading diagonal")
        S = S / diag
    if S.shape[0] <= DENSE_CONDITION_LIMIT:
        sigma = linalg.svdvals(S)
        if sigma[-1] == 0:
            return float("inf")
        return float(sigma[0] / sigma[-1])
    return _iterative_condition(S)


def _power_iterate(
    apply: t.Callable[[np.ndarray], np.ndarray], n: int, what: str
) -> float:
    rng = np.random.default_rng(0)
    x = rng.standard_normal(n)
    x /= np.linalg.norm(x)
    estimate = 0.0
    for iteration in range(1, MAX_POWER_ITERATIONS + 1):
        y = apply(x)
        value = float(np.linalg.norm(y))
        if value == 0:
            return 0.0
        x = y / value
        if abs(value - estimate) <= 1e-10 * value:
            logger.debug("%s converged after %d iterations", what, iteration)
            return value
        estimate = value
    raise ConditionEstimateError(
        "{} did not converge within {} iterations".format(what, MAX_POWER_ITERATIONS)
    )


def _iterative_condition(S: np.ndarray) -> float:
    n = S.shape[0]
    lu = lu_factor(S)
    largest = _power_iterate(lambda x: S.T @ (S @ x), n, "Power iteration")

    def inverse(x):
        return linalg.lu_solve(lu, linalg.lu_solve(lu, x, trans=1))

    smallest_inverse = _power_iterate(inverse, n, "Inverse power iteration")
    # both estimates are eigenvalues of SᵀS (or its inverse)
    return float(np.sqrt(largest * smallest_inverse))
