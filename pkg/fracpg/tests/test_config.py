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

import argparse
import os

import pytest

from fracpg.config import check_sections
from fracpg.config import command_defaults
from fracpg.config import find_config
from fracpg.config import read_config
from fracpg.config import update_argparser_defaults
from fracpg.exceptions import ConfigError
from fracpg.exceptions import DomainError

COMMANDS = ["solve", "cond", "converge", "enrich"]


@pytest.fixture
def config_from(in_tmpdir):
    def config_from(text):
        path = in_tmpdir / "fracpg.ini"
        path.write_text(text)
        return read_config(str(path))

    return config_from


class TestReadConfig:
    def test_read_config_returns_empty_on_None(self):
        config = read_config(None)
        assert config.sections() == []
        assert command_defaults(config) == {}

    def test_percent_signs_are_kept(self, config_from):
        config = config_from("[DEFAULT]\nf = 100%\n")
        assert config["DEFAULT"]["f"] == "100%"

    def test_missing_file(self, in_tmpdir):
        with pytest.raises(OSError):
            read_config(str(in_tmpdir / "missing.ini"))


class TestCommandDefaults:
    def test_values_are_converted(self, config_from):
        config = config_from(
            "[DEFAULT]\nalpha = 1.75\nderiv = C\nquad_order = 8\n"
            "f = x^(-0.25)\nf_origin_exponent = -0.25\nverbosity = 2\n"
        )
        assert command_defaults(config) == {
            "alpha": 1.75,
            "deriv": "caputo",
            "quad_order": 8,
            "f": "x^(-0.25)",
            "f_origin_exponent": -0.25,
            "verbosity": 2,
        }

    def test_command_sections_override_the_defaults(self, config_from):
        config = config_from(
            "[DEFAULT]\nalpha = 1.75\nref_m = 2560\n"
            "[converge]\nref_m = 640\nm_list = 10,20,40\n"
        )
        assert command_defaults(config, "converge") == {
            "alpha": 1.75,
            "ref_m": 640,
            "m_list": "10,20,40",
        }
        assert command_defaults(config, "enrich") == {"alpha": 1.75, "ref_m": 2560}
        assert command_defaults(config) == {"alpha": 1.75, "ref_m": 2560}

    @pytest.mark.parametrize(
        "option, value",
        [
            ("alpha", "1.4"),
            ("alpha", "steep"),
            ("deriv", "grunwald"),
            ("b", "exp(x"),
            ("q", "y*x"),
            ("f_origin_exponent", "-1"),
            ("quad_order", "0"),
            ("m_list", "10,twenty"),
            ("format", "json"),
        ],
    )
    def test_invalid_values(self, config_from, option, value):
        config = config_from("[DEFAULT]\n{} = {}\n".format(option, value))
        with pytest.raises(ConfigError) as excinfo:
            command_defaults(config)
        assert repr(option) in str(excinfo.value)
        assert isinstance(excinfo.value, DomainError)

    def test_errors_name_the_section(self, config_from):
        config = config_from("[cond]\nformat = json\n")
        assert command_defaults(config, "solve") == {}
        with pytest.raises(ConfigError, match=r"\[cond\]"):
            command_defaults(config, "cond")

    def test_unknown_options(self, config_from):
        config = config_from("[DEFAULT]\nrefm = 640\n")
        with pytest.raises(ConfigError, match="refm"):
            command_defaults(config)

    def test_unknown_sections(self, config_from):
        check_sections(config_from("[solve]\nm = 8\n"), COMMANDS)
        with pytest.raises(ConfigError, match="convergence"):
            check_sections(config_from("[convergence]\nref_m = 640\n"), COMMANDS)


class TestFindConfig:
    def test_it_searches_parent_directories(self, in_tmpdir, monkeypatch):
        (in_tmpdir / "fracpg.ini").write_text("[DEFAULT]\nalpha = 1.75\n")
        subdir = in_tmpdir / "runs" / "nested"
        subdir.mkdir(parents=True)
        monkeypatch.chdir(subdir)
        assert find_config() == os.path.join(os.path.realpath(in_tmpdir), "fracpg.ini")

    def test_it_returns_none_without_a_config_file(self, in_tmpdir, monkeypatch):
        monkeypatch.setattr(os.path, "isfile", lambda path: False)
        assert find_config() is None


class TestArgparserDefaults:
    def test_it_only_sets_declared_options(self):
        parser = argparse.ArgumentParser()
        parser.add_argument("--alpha", type=float)
        update_argparser_defaults(parser, {"alpha": 1.6, "m_list": "10,20"})
        args = parser.parse_args([])
        assert args.alpha == 1.6
        assert not hasattr(args, "m_list")
