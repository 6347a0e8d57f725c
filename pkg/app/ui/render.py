"""Plain-text tables and JSON documents for CLI reports.

Exact values are always printed in full (``num/2^exp`` or ``num/den``); the
decimal column is labelled "approx" and is never used for any decision.
"""

import json
from collections.abc import Sequence
from typing import Any, Optional

from app.core.analysis import InstanceReport, InstanceRow, Prob, ProbReport, SweepReport, TransformReport
from app.core.constants import APPROX_DIGITS
from app.core.exact import format_exact, to_rational


def approx(value: Optional[Prob]) -> str:
    if value is None:
        return "-"
    return f"{float(to_rational(value)):.{APPROX_DIGITS}g}"


def exact(value: Optional[Prob]) -> str:
    return "-" if value is None else format_exact(value)


def format_table(headers: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    """Left-aligned columns separated by two spaces."""
    widths = [len(h) for h in headers]
    for row in rows:
        widths = [max(w, len(cell)) for w, cell in zip(widths, row)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in (headers, *rows)]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def render_json(doc: dict[str, Any]) -> str:
    """Stable serialization: sorted keys, fixed indentation."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


_ROW_HEADERS = ("w", "k", "p", "p_pred", "p_acc", "p_acc_pred", "approx", "equal")


def _row_cells(row: InstanceRow) -> list[str]:
    return [
        row.w or "-",
        str(row.k),
        exact(row.p_measured),
        exact(row.p_predicted),
        exact(row.p_acc_measured),
        exact(row.p_acc_predicted),
        approx(row.p_acc_measured),
        "yes" if row.equal else "NO",
    ]


def render_rows(rows: Sequence[InstanceRow]) -> str:
    return format_table(_ROW_HEADERS, [_row_cells(row) for row in rows])


def render_prob(report: ProbReport) -> str:
    lines = [
        f"witness      {report.w or '-'}",
        f"circuit      width={report.width} gates={report.gates} hadamards={report.hadamards}",
        f"probability  {format_exact(report.probability)}  (approx {approx(report.probability)})",
        "",
        format_table(
            ("l_mode", "l", "k_xw"),
            [[mode.value, str(l), str(report.k_xw(mode))] for mode, l in report.l_by_mode.items()],
        ),
    ]
    return "\n".join(lines) + "\n"


def render_transform(report: TransformReport) -> str:
    row = report.row
    lines = [
        f"witness      {row.w or '-'}",
        f"k            {row.k} (l={row.l}, l_mode={report.l_mode.value}, k_xw={row.k_xw})",
        f"c            {format_exact(report.c)}",
        f"register     width={report.width} q_gates={report.q_gates}",
        f"accept iff   {report.formula}",
    ]
    if report.step1_reason is not None:
        lines.append(report.step1_reason)
    lines += [
        f"p            {exact(row.p_measured)}  predicted {exact(row.p_predicted)}",
        f"second       {exact(row.second_measured)}  conditional {exact(row.conditional_second)}",
        f"p_acc        {exact(row.p_acc_measured)}  predicted {exact(row.p_acc_predicted)}"
        f"  (approx {approx(row.p_acc_measured)})",
    ]
    if row.p_acc_deferred is not None:
        lines.append(f"deferred     {exact(row.p_acc_deferred)}")
    lines.append(f"equal        {'yes' if row.equal else 'NO'}")
    if row.perfect:
        lines.append("PERFECT")
    return "\n".join(lines) + "\n"


def render_sweep(report: SweepReport) -> str:
    header = (
        f"witness {report.w or '-'}  p={format_exact(report.acceptance)}  "
        f"l={report.l}  k_xw={report.k_xw}  c={format_exact(report.c)}"
    )
    return f"{header}\n\n{render_rows(report.rows)}\n"


def render_verify(report: InstanceReport) -> str:
    lines = [
        f"c={format_exact(report.c)}  s={format_exact(report.s)}  "
        f"s'={format_exact(report.s_prime)}  p_ceiling={format_exact(report.p_ceiling)}",
        f"best witness {report.best_witness or '-'}  p={format_exact(report.best_probability)}",
        f"promise      {report.promise.value}",
        "",
        format_table(("w", "p", "approx"), [[w or "-", format_exact(p), approx(p)] for w, p in report.witnesses]),
    ]
    if report.rows:
        lines += ["", render_rows(report.rows)]
    lines.append("")
    lines += [f"{name:<14}{status.value}" for name, status in report.certificates.items()]
    if report.max_p_acc is not None:
        lines.append(f"max p_acc     {format_exact(report.max_p_acc)}")
    lines.append("PASS" if report.passed else "FAIL")
    return "\n".join(lines) + "\n"
