"""Experiment configuration: fields, validation, and TOML loading."""

from __future__ import annotations

import sys
from dataclasses import dataclass, field, replace
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .. import games
from ..agents import parse_agent_spec

DEFAULT_LEVELS = (0, 1, 2, 3, 4)
DEFAULT_REPEATS = 20
DEFAULT_BUDGET = 480
DEFAULT_P_VALUES = (1, 2, 5, 7, 10, 13, 20)
DEFAULT_L_VALUES = (6, 8, 10, 12, 14, 16, 20)
DEFAULT_STUDY_BUDGETS = (480, 960, 1440, 1920)

#: CI profile: two levels, two repeats.
SMOKE_LEVELS = (0, 1)
SMOKE_REPEATS = 2


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class ExperimentConfig:
    name: str = "experiment"
    agents: tuple[str, ...] = ("rs",)
    games: tuple[str, ...] = tuple(games.GAMES)
    levels: tuple[int, ...] = DEFAULT_LEVELS
    repeats: int = DEFAULT_REPEATS
    budget: int = DEFAULT_BUDGET
    master_seed: int = 1
    parallelism: int = 1
    p_values: tuple[int, ...] = DEFAULT_P_VALUES
    l_values: tuple[int, ...] = DEFAULT_L_VALUES
    study_budgets: tuple[int, ...] = DEFAULT_STUDY_BUDGETS
    mcts_depth: int = 10

    def __post_init__(self) -> None:
        if self.repeats < 1:
            raise ConfigError("repeats must be >= 1")
        if self.budget < 1:
            raise ConfigError("budget must be >= 1")
        if self.parallelism < 1:
            raise ConfigError("parallelism must be >= 1")
        if not self.agents:
            raise ConfigError("need at least one agent")
        for spec in self.agents:
            parse_agent_spec(spec)
        for game_id in self.games:
            games.rules_for(game_id)
        for level in self.levels:
            if not (0 <= level < games.LEVELS_PER_GAME):
                raise ConfigError(f"level index {level} out of range")
        if not self.p_values or not self.l_values:
            raise ConfigError("sweep value sets must be non-empty")

    def smoke(self) -> "ExperimentConfig":
        return replace(self, levels=SMOKE_LEVELS, repeats=SMOKE_REPEATS)

    def as_dict(self) -> dict:
        return {
            "name": self.name,
            "agents": list(self.agents),
            "games": list(self.games),
            "levels": list(self.levels),
            "repeats": self.repeats,
            "budget": self.budget,
            "master_seed": self.master_seed,
            "parallelism": self.parallelism,
            "p_values": list(self.p_values),
            "l_values": list(self.l_values),
            "study_budgets": list(self.study_budgets),
            "mcts_depth": self.mcts_depth,
        }


def _game_list(value) -> tuple[str, ...]:
    if isinstance(value, str):
        return tuple(games.game_ids(value))
    if isinstance(value, list):
        return tuple(value)
    raise ConfigError(f"games must be a selector string or a list, got {value!r}")


def load_config(path: str | Path) -> ExperimentConfig:
    """Load a TOML experiment file; unknown keys are errors."""
    path = Path(path)
    try:
        raw = tomllib.loads(path.read_text(encoding="utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"{path}: {exc}") from None

    sweep = raw.pop("sweep", {})
    study = raw.pop("budget_study", {})
    known = {"name", "agents", "games", "levels", "repeats", "budget",
             "master_seed", "parallelism"}
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"{path}: unknown keys {sorted(unknown)}")
    unknown = set(sweep) - {"p_values", "l_values"}
    if unknown:
        raise ConfigError(f"{path}: unknown sweep keys {sorted(unknown)}")
    unknown = set(study) - {"budgets", "mcts_depth"}
    if unknown:
        raise ConfigError(f"{path}: unknown budget_study keys {sorted(unknown)}")

    kwargs = {}
    for key in ("name", "repeats", "budget", "master_seed", "parallelism"):
        if key in raw:
            kwargs[key] = raw[key]
    if "agents" in raw:
        kwargs["agents"] = tuple(raw["agents"])
    if "games" in raw:
        kwargs["games"] = _game_list(raw["games"])
    if "levels" in raw:
        kwargs["levels"] = tuple(raw["levels"])
    if "p_values" in sweep:
        kwargs["p_values"] = tuple(sweep["p_values"])
    if "l_values" in sweep:
        kwargs["l_values"] = tuple(sweep["l_values"])
    if "budgets" in study:
        kwargs["study_budgets"] = tuple(study["budgets"])
    if "mcts_depth" in study:
        kwargs["mcts_depth"] = study["mcts_depth"]
    try:
        return ExperimentConfig(**kwargs)
    except TypeError as exc:
        raise ConfigError(f"{path}: {exc}") from None
