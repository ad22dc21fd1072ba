"""Corridor race: reach the exit at the right edge before the timer runs out.

Deterministic, binary scoring (1 point on the win), timeout is a loss.
"""

from __future__ import annotations

from ..engine import ActionSet, DOWN, GameState, GameStatus, LEFT, NIL, RIGHT, UP
from .base import BaseRules, GameSpec, Nature, ParsedLevel, Scoring, TimeoutRule


class CorridorRaceRules(BaseRules):
    game_id = "corridor_race"
    stochastic = False
    action_set = ActionSet((NIL, LEFT, RIGHT, UP, DOWN))
    timeout_win = False
    legend = frozenset({"E"})
    spec = GameSpec(
        id=game_id,
        nature=Nature.DETERMINISTIC,
        action_set=action_set,
        scoring=Scoring.BINARY,
        timeout_rule=TimeoutRule.TIMEOUT_LOSS,
    )

    def build(self, state: GameState, parsed: ParsedLevel) -> None:
        if not any("E" in row for row in state.terrain):
            raise ValueError("corridor_race level needs an exit cell")

    def step(self, state: GameState, action: str) -> None:
        self.move_avatar(state, action)
        if state.terrain[state.avatar.y][state.avatar.x] == "E":
            state.score += 1.0
            state.status = GameStatus.WIN


RULES = CorridorRaceRules()
