"""Benchmark harness: configuration, execution, persistence, rendering."""

from .config import (
    DEFAULT_BUDGET,
    DEFAULT_L_VALUES,
    DEFAULT_P_VALUES,
    DEFAULT_STUDY_BUDGETS,
    ConfigError,
    ExperimentConfig,
    load_config,
)
from .records import CSV_COLUMNS, ParseError, RunRecord, read_results, write_results
from .render import render_budget_table, render_grid, render_significance
from .runner import (
    BudgetAudit,
    BudgetStudyResult,
    CellSummary,
    SignificanceReport,
    SweepResult,
    group_summary,
    run_budget_study,
    run_game,
    run_sweep,
    significance_matrix,
    study_rows,
    summarize_games,
)

__all__ = [
    "BudgetAudit",
    "BudgetStudyResult",
    "CSV_COLUMNS",
    "CellSummary",
    "ConfigError",
    "DEFAULT_BUDGET",
    "DEFAULT_L_VALUES",
    "DEFAULT_P_VALUES",
    "DEFAULT_STUDY_BUDGETS",
    "ExperimentConfig",
    "ParseError",
    "RunRecord",
    "SignificanceReport",
    "SweepResult",
    "group_summary",
    "load_config",
    "read_results",
    "render_budget_table",
    "render_grid",
    "render_significance",
    "run_budget_study",
    "run_game",
    "run_sweep",
    "significance_matrix",
    "study_rows",
    "summarize_games",
    "write_results",
]
