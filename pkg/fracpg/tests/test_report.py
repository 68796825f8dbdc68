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

import csv
import io
import math

import pytest

from fracpg import report
from fracpg.analysis import ConvergenceReport
from fracpg.analysis import ExactReference
from fracpg.analysis import FineMeshReference
from fracpg.exceptions import DomainError


@pytest.fixture
def study():
    return ConvergenceReport(
        mesh_sizes=[10, 20, 40],
        l2_errors=[4e-2, 1e-2, 2.5e-3],
        h1_errors=[0.2, 0.1, 0.05],
        reference=ExactReference(),
        predicted_l2=2.0,
        predicted_h1=1.0,
    )


class TestFormatting:
    def test_format_float(self):
        assert report.format_float(3.1e-3) == "3.10000e-03"

    def test_format_rate(self):
        assert report.format_rate(1.1) == "1.100000"
        assert report.format_rate(None) == ""
        assert report.format_rate(math.nan) == ""


class TestEmitReport:
    def test_csv(self, study):
        assert report.emit_report(study, "csv").splitlines() == [
            "m,h,l2_error,l2_rate,h1_error,h1_rate",
            "10,1.00000e-01,4.00000e-02,,2.00000e-01,",
            "20,5.00000e-02,1.00000e-02,2.000000,1.00000e-01,1.000000",
            "40,2.50000e-02,2.50000e-03,2.000000,5.00000e-02,1.000000",
        ]

    def test_csv_values_keep_six_significant_digits(self):
        study = ConvergenceReport(
            mesh_sizes=[10, 20, 40],
            l2_errors=[3.0981234e-3, 1.4412345e-3, 6.7123456e-4],
            h1_errors=[0.19412345, 0.17987654, 0.16712345],
            reference=ExactReference(),
        )
        rows = list(csv.DictReader(io.StringIO(report.emit_report(study, "csv"))))
        assert [int(row["m"]) for row in rows] == study.mesh_sizes
        for row, h, l2, h1 in zip(rows, study.hs, study.l2_errors, study.h1_errors):
            assert float(row["h"]) == pytest.approx(h, rel=1e-5)
            assert float(row["l2_error"]) == pytest.approx(l2, rel=1e-5)
            assert float(row["h1_error"]) == pytest.approx(h1, rel=1e-5)
        for row, l2_rate, h1_rate in zip(rows[1:], study.l2_rates, study.h1_rates):
            assert float(row["l2_rate"]) == pytest.approx(l2_rate, rel=1e-5)
            assert float(row["h1_rate"]) == pytest.approx(h1_rate, rel=1e-5)
        assert rows[0]["l2_rate"] == ""

    def test_table(self, study):
        text = report.emit_report(study)
        lines = text.splitlines()
        assert lines[0].split() == [
            "m",
            "h",
            "l2_error",
            "l2_rate",
            "h1_error",
            "h1_rate",
        ]
        assert "L2 rate ≈ 2.00 (2.00)" in lines
        assert "H1 rate ≈ 1.00 (1.00)" in lines
        assert lines[-1] == "reference: exact"

    def test_singularity_strength_columns(self, study):
        study.mu_errors = [1.6e-4, 4e-5, 1e-5]
        study.predicted_mu = 2.0
        study.reference = FineMeshReference(5120)
        text = report.emit_report(study, "csv")
        assert text.splitlines()[0].endswith(",mu_error,mu_rate")
        assert text.splitlines()[2].endswith(",4.00000e-05,2.000000")
        table = report.emit_report(study).splitlines()
        assert "mu rate ≈ 2.00 (2.00)" in table
        assert table[-1] == "reference: fine mesh (m=5120)"

    def test_it_rejects_unknown_formats(self, study):
        with pytest.raises(DomainError):
            report.emit_report(study, "json")


class TestOtherOutputs:
    def test_condition_numbers(self):
        assert report.emit_condition_numbers([20, 40], [1.5, 1.25], "csv") == (
            "m,cond\n20,1.5\n40,1.25\n"
        )

    def test_columns(self):
        assert report.emit_columns([("x", [0.0, 0.5]), ("u_h", [0, 0.25])]) == (
            "x,u_h\n0.0,0.0\n0.5,0.25\n"
        )
