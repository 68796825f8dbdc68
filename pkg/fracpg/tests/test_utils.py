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

from fracpg import utils
from fracpg.exceptions import DomainError


class TestParseIntList:
    def test_it_parses_a_list(self):
        assert utils.parse_int_list("10,20, 40") == [10, 20, 40]

    def test_it_ignores_a_trailing_comma(self):
        assert utils.parse_int_list("10,20,") == [10, 20]

    def test_it_rejects_other_values(self):
        with pytest.raises(DomainError):
            utils.parse_int_list("10,twenty")


class TestOpenOutput:
    def test_it_writes_to_stdout(self, capsys):
        with utils.open_output("-") as f:
            f.write("x,u_h\n")
        assert capsys.readouterr().out == "x,u_h\n"

    def test_it_writes_to_a_file(self, in_tmpdir):
        with utils.open_output("out.csv") as f:
            f.write("x,u_h\n")
        assert (in_tmpdir / "out.csv").read_text() == "x,u_h\n"
