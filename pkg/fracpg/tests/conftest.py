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

import pytest

from fracpg.femcore import ProblemSpec

ALPHAS = [1.6, 1.75, 1.9]
KINDS = ["rl", "caputo"]


@pytest.fixture(params=ALPHAS)
def alpha(request):
    return request.param


@pytest.fixture(params=KINDS)
def kind(request):
    return request.param


@pytest.fixture
def convection_spec():
    """
    Riemann-Liouville problem with b = exp(x), q = x(1 - x), f = 1
    """
    return ProblemSpec.from_strings(1.75, "rl", b="exp(x)", q="x*(1-x)", f="1")


@pytest.fixture
def in_tmpdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path
