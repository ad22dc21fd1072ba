"""Missile defense: intercept falling missiles before they level the cities.

Deterministic. Missiles descend one cell every second tick down their
starting column. USE detonates a charge that destroys every missile on
the avatar's cell or the four orthogonal neighbors (+2 each, the
discontinuous payoff). A missile that lands on a city removes the city
(-1); missiles expire on walls. Clearing all missiles wins, losing all
cities loses, and the timeout resolves as a win for the defender.
"""

from __future__ import annotations

from ..engine import (
    ActionSet,
    DOWN,
    GameState,
    GameStatus,
    LEFT,
    NIL,
    RIGHT,
    UP,
    USE,
)
from .base import BaseRules, GameSpec, Nature, ParsedLevel, Scoring, TimeoutRule


class MissileDefenseRules(BaseRules):
    game_id = "missile_defense"
    stochastic = False
    action_set = ActionSet((NIL, LEFT, RIGHT, UP, DOWN, USE))
    timeout_win = True
    legend = frozenset({"M", "C"})
    spec = GameSpec(
        id=game_id,
        nature=Nature.DETERMINISTIC,
        action_set=action_set,
        scoring=Scoring.DISCONTINUOUS,
        timeout_rule=TimeoutRule.TIMEOUT_WIN,
    )

    def build(self, state: GameState, parsed: ParsedLevel) -> None:
        for x, y, ch in parsed.cells():
            if ch == "M":
                state.add_sprite("missile", x, y)
            elif ch == "C":
                state.add_sprite("city", x, y)

    def step(self, state: GameState, action: str) -> None:
        missiles: list = []
        cities: list = []
        for s in state.sprites:
            if s.kind == "missile":
                missiles.append(s)
            else:
                cities.append(s)

        dead: set[int] = set()

        # avatar phase
        if action == USE:
            ax, ay = state.avatar.x, state.avatar.y
            for s in missiles:
                if abs(s.x - ax) + abs(s.y - ay) <= 1:
                    dead.add(s.id)
                    state.score += 2.0
        else:
            self.move_avatar(state, action)

        # projectile phase: missiles fall on every second tick
        if (state.tick + 1) % 2 == 0:
            terrain = state.terrain
            for s in missiles:
                if s.id in dead:
                    continue
                s.y += 1
                if terrain[s.y][s.x] == "#":
                    dead.add(s.id)

        # collision phase: missile on a city cell destroys the city
        for s in missiles:
            if s.id in dead:
                continue
            for c in cities:
                if c.id not in dead and c.x == s.x and c.y == s.y:
                    dead.add(c.id)
                    dead.add(s.id)
                    state.score -= 1.0
                    break

        if dead:
            state.remove_sprites(dead)
            missiles = [s for s in missiles if s.id not in dead]
            cities = [c for c in cities if c.id not in dead]

        # end conditions: losing the last city dominates clearing the sky
        if not cities:
            state.status = GameStatus.LOSS
        elif not missiles:
            state.status = GameStatus.WIN


RULES = MissileDefenseRules()
