"""Aligned text tables: sweep grids, the budget study, significance.

Win rates render as percentages with the standard error in brackets,
``47.50 (2.33)``, so tables can be eyeballed against their published
counterparts directly.
"""

from __future__ import annotations

from ..stats import SampleSummary
from .runner import BudgetStudyResult, SignificanceReport, SweepResult


def _fmt_cell(summary: SampleSummary | None, percent: bool) -> str:
    if summary is None:
        return "-"
    scale = 100.0 if percent else 1.0
    return f"{summary.mean * scale:.2f} ({summary.std_error * scale:.2f})"


def _table(headers: list[str], rows: list[list[str]]) -> str:
    widths = [len(h) for h in headers]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = []
    def emit(cells):
        lines.append("  ".join(c.rjust(w) for c, w in zip(cells, widths)).rstrip())
    emit(headers)
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        emit(row)
    return "\n".join(lines) + "\n"


def render_grid(sweep: SweepResult, metric: str = "win",
                group: str = "all") -> str:
    """P x L grid of ``mean (SE)`` cells for one metric and game group."""
    percent = metric == "win"
    headers = ["P"] + [f"L={length}" for length in sweep.l_values]
    rows = []
    for p in sweep.p_values:
        row = [str(p)]
        for length in sweep.l_values:
            cell = sweep.cells.get((p, length))
            summary = cell.groups.get(group, {}).get(metric) if cell else None
            row.append(_fmt_cell(summary, percent))
        rows.append(row)
    title = f"{metric} rate, {group} games" if percent else f"{metric}, {group} games"
    return f"{title}\n" + _table(headers, rows)


def render_budget_table(study: BudgetStudyResult) -> str:
    """The five-row budget comparison: wins and points for T/D/S."""
    headers = ["Algorithm", "Average Wins (T)", "Points (T)",
               "Average Wins (D)", "Points (D)",
               "Average Wins (S)", "Points (S)"]
    rows = []
    for label in study.row_labels:
        wins = study.wins.get(label, {})
        points = study.points.get(label, {})
        rows.append([
            label,
            _fmt_cell(wins.get("T"), percent=True),
            str(points.get("T", 0)),
            _fmt_cell(wins.get("D"), percent=True),
            str(points.get("D", 0)),
            _fmt_cell(wins.get("S"), percent=True),
            str(points.get("S", 0)),
        ])
    return _table(headers, rows)


def render_significance(report: SignificanceReport, metric: str = "win") -> str:
    """One matrix per game: pairwise p-values, ``*`` when significant."""
    agents = report.agents()
    blocks = []
    for game in sorted(report.tests):
        headers = [game] + agents
        rows = []
        for a in agents:
            row = [a]
            for b in agents:
                if a == b:
                    row.append(".")
                    continue
                try:
                    res = report.result(game, metric, a, b)
                except KeyError:
                    row.append("-")
                    continue
                mark = "*" if res.p_value < report.alpha else ""
                row.append(f"{res.p_value:.3f}{mark}")
            rows.append(row)
        blocks.append(_table(headers, rows))
    return f"pairwise Mann-Whitney on {metric} (alpha={report.alpha})\n" + "\n".join(blocks)
