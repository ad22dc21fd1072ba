"""Bundled game corpus: three deterministic and three stochastic grid games.

The normative rule tables live in ``docs/games.md``; each game module
implements one. Levels are ASCII files shipped as package data, five
per game.
"""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from ..engine import GameState, RngStream
from .base import (
    BaseRules,
    GameError,
    GameSpec,
    MalformedLevel,
    Nature,
    ParsedLevel,
    Scoring,
    TimeoutRule,
    UnknownGame,
    build_state,
    parse_level,
)
from .butterfly_catch import RULES as _butterfly_catch
from .corridor_race import RULES as _corridor_race
from .invaders import RULES as _invaders
from .maze_escape import RULES as _maze_escape
from .missile_defense import RULES as _missile_defense
from .zombie_survival import RULES as _zombie_survival

#: Canonical game order: deterministic trio first, then stochastic.
GAMES: dict[str, BaseRules] = {
    rules.game_id: rules
    for rules in (
        _corridor_race,
        _maze_escape,
        _missile_defense,
        _butterfly_catch,
        _invaders,
        _zombie_survival,
    )
}

LEVELS_PER_GAME = 5


def list_games() -> list[GameSpec]:
    return [rules.spec for rules in GAMES.values()]


def game_ids(selector: str = "all") -> list[str]:
    """Game ids for a selector: all | deterministic | stochastic."""
    if selector == "all":
        return list(GAMES)
    if selector == "deterministic":
        return [g for g, r in GAMES.items() if not r.stochastic]
    if selector == "stochastic":
        return [g for g, r in GAMES.items() if r.stochastic]
    raise UnknownGame(f"unknown game selector {selector!r}")


def rules_for(game_id: str) -> BaseRules:
    try:
        return GAMES[game_id]
    except KeyError:
        raise UnknownGame(f"no bundled game named {game_id!r}") from None


@lru_cache(maxsize=None)
def level_text(game_id: str, level_index: int) -> str:
    """Raw text of a bundled level file."""
    rules_for(game_id)
    if not (0 <= level_index < LEVELS_PER_GAME):
        raise UnknownGame(f"level index must be 0..4, got {level_index}")
    ref = resources.files(__package__) / "levels" / game_id / f"level_{level_index}.txt"
    return ref.read_text(encoding="utf-8")


def state_from_text(game_id: str, text: str, master_seed: int,
                    label: object = "custom") -> GameState:
    """Build a fresh state from level text (tests and tooling)."""
    rules = rules_for(game_id)
    parsed = parse_level(text, rules.legend)
    rng = RngStream(master_seed).derive("game", game_id, label)
    return build_state(rules, parsed, rng)


def load_level(game_id: str, level_index: int, master_seed: int) -> GameState:
    """Fresh state for a bundled level: tick 0, score 0, status ongoing.

    The state's random stream is derived from (master_seed, game_id,
    level_index), so identical arguments always produce identical games.
    """
    return state_from_text(game_id, level_text(game_id, level_index),
                           master_seed, label=level_index)
