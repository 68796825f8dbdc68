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

import typing as t


class FracPGError(Exception):
    """
    Base class for all errors raised by fracpg
    """


class DomainError(FracPGError, ValueError):
    """
    An argument lies outside the domain of the requested function
    """


class QuadratureError(FracPGError):
    """
    A quadrature rule could not be constructed
    """


class EvaluationError(FracPGError):
    """
    An integrand produced a non-finite value at a quadrature node
    """


class UnsupportedExponent(FracPGError):
    """
    A power is too rough for the symbolic fractional derivative.
    Callers must fall back to a numeric path.
    """


class ExpressionError(FracPGError):
    """
    A coefficient expression could not be parsed
    """

    def __init__(self, message: str, source: str, offset: int):
        super().__init__(message)
        self.source = source
        self.offset = offset

    def __str__(self):
        return "{} at offset {} in {!r}".format(self.args[0], self.offset, self.source)


class ExpressionSyntaxError(ExpressionError):
    def __init__(
        self, message: str, source: str, offset: int, expected: t.Iterable[str] = ()
    ):
        super().__init__(message, source, offset)
        self.expected = frozenset(expected)

    def __str__(self):
        s = super().__str__()
        if self.expected:
            s += " (expected one of: {})".format(", ".join(sorted(self.expected)))
        return s


class UnknownIdentifier(ExpressionError):
    def __init__(self, name: str, source: str, offset: int):
        super().__init__("Unknown identifier {!r}".format(name), source, offset)
        self.name = name


class SingularMatrixError(FracPGError):
    """
    LU factorization met a pivot that vanishes to working precision
    """

    def __init__(self, message: str, pivot: int):
        super().__init__(message)
        self.pivot = pivot


class StructuredSolveBreakdown(FracPGError):
    """
    The Sherman-Morrison denominator vanished; solve densely instead
    """


class ConditionEstimateError(FracPGError):
    """
    Iterative singular value estimation did not converge
    """


class ResidualCheckFailed(FracPGError):
    """
    A closed-form solution does not satisfy the strong equation
    """


class EnrichmentSetupError(FracPGError):
    """
    The singular function cannot be used with the given coefficients
    """


class ConfigError(DomainError):
    """
    A config file names an unknown command or option, or holds a value the
    matching command line flag would reject
    """
