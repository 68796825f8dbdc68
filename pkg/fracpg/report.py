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
Render convergence reports, condition numbers and solutions as CSV or as
aligned tables.
"""
import csv
import io
import math
import typing as t

import tabulate

from fracpg.analysis import ConvergenceReport
from fracpg.exceptions import DomainError

FORMATS = ("table", "csv")


def format_float(value: float) -> str:
    return "%.5e" % value


def format_rate(value: t.Optional[float]) -> str:
    if value is None or math.isnan(value):
        return ""
    return "%.6f" % value


def _check_format(format: str) -> None:
    if format not in FORMATS:
        raise DomainError(
            "Unknown output format {!r}, expected one of {}".format(
                format, ", ".join(FORMATS)
            )
        )


def _report_rows(report: ConvergenceReport) -> t.List[t.List[str]]:
    Column = t.Tuple[t.List[float], t.List[t.Optional[float]]]
    columns: t.List[Column] = [
        (report.l2_errors, [None, *report.l2_rates]),
        (report.h1_errors, [None, *report.h1_rates]),
    ]
    mu_rates = report.mu_rates
    if report.mu_errors is not None and mu_rates is not None:
        columns.append((report.mu_errors, [None, *mu_rates]))
    rows = []
    for k, m in enumerate(report.mesh_sizes):
        row = [str(m), format_float(1.0 / m)]
        for errors, rates in columns:
            row += [format_float(errors[k]), format_rate(rates[k])]
        rows.append(row)
    return rows


def _report_headers(report: ConvergenceReport) -> t.List[str]:
    headers = ["m", "h", "l2_error", "l2_rate", "h1_error", "h1_rate"]
    if report.mu_errors is not None:
        headers += ["mu_error", "mu_rate"]
    return headers


def _to_csv(headers: t.Sequence[str], rows: t.Iterable[t.Sequence[str]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(headers)
    writer.writerows(rows)
    return buf.getvalue()


def _rate_summary(label: str, rate: t.Optional[float], predicted) -> str:
    s = "{} rate ≈ {}".format(label, "%.2f" % rate if rate is not None else "n/a")
    if predicted is not None:
        s += " ({:.2f})".format(predicted)
    return s


def emit_report(report: ConvergenceReport, format: str = "table") -> str:
    """
    Render report.

    csv writes one row per mesh with empty rates on the first row;
    table aligns the same columns and appends the least squares rates,
    with the predicted rates in brackets.
    """
    _check_format(format)
    headers = _report_headers(report)
    rows = _report_rows(report)
    if format == "csv":
        return _to_csv(headers, rows)

    lines = [
        tabulate.tabulate(rows, headers=headers, disable_numparse=True),
        "",
        _rate_summary("L2", report.ls_rate_l2, report.predicted_l2),
        _rate_summary("H1", report.ls_rate_h1, report.predicted_h1),
    ]
    if report.mu_errors is not None:
        lines.append(_rate_summary("mu", report.ls_rate_mu, report.predicted_mu))
    lines.append("reference: {}".format(report.reference))
    return "\n".join(lines) + "\n"


def emit_condition_numbers(
    mesh_sizes: t.Sequence[int],
    values: t.Sequence[float],
    format: str = "table",
) -> str:
    _check_format(format)
    headers = ["m", "cond"]
    rows = [[str(m), "%.6g" % value] for m, value in zip(mesh_sizes, values)]
    if format == "csv":
        return _to_csv(headers, rows)
    return tabulate.tabulate(rows, headers=headers, disable_numparse=True) + "\n"


def emit_columns(columns: t.Sequence[t.Tuple[str, t.Sequence[float]]]) -> str:
    """
    CSV with one column per (name, values) pair
    """
    headers = [name for name, _ in columns]
    rows = zip(*([repr(float(v)) for v in values] for _, values in columns))
    return _to_csv(headers, rows)
