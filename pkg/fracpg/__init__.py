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

__all__ = [
    "DerivativeKind",
    "Mesh",
    "PowerSum",
    "ProblemSpec",
    "assemble",
    "convergence_study",
    "exact_solution_bq0",
    "logger",
    "solve_enriched",
    "solve_fbvp",
]

from logging import getLogger

logger = getLogger("fracpg")

from fracpg.analysis import convergence_study  # noqa: E402
from fracpg.analysis import exact_solution_bq0  # noqa: E402
from fracpg.analysis import solve_fbvp  # noqa: E402
from fracpg.enriched import solve_enriched  # noqa: E402
from fracpg.femcore import Mesh  # noqa: E402
from fracpg.femcore import ProblemSpec  # noqa: E402
from fracpg.femcore import assemble  # noqa: E402
from fracpg.fraccalc import DerivativeKind  # noqa: E402
from fracpg.fraccalc import PowerSum  # noqa: E402

__version__ = "0.1.0.dev0"
