"""Zombie survival: stay alive until the clock runs out, snacking on honey.

Stochastic. Zombies act on every second tick (half the avatar's pace,
so fleeing is possible at all); each acting zombie (sprite-id order)
first draws once: with probability 0.6 it steps toward the avatar
(when the two axes tie a second draw breaks the tie; a wall in the way
means it stays), else it takes a uniform random step over open
neighbors (one more draw). Honey pickup scores +1. A zombie touching
the avatar (coincidence or swap-through) loses; surviving to
``max_ticks`` wins.
"""

from __future__ import annotations

from ..engine import ActionSet, DOWN, GameState, GameStatus, LEFT, NIL, RIGHT, UP
from .base import BaseRules, GameSpec, Nature, ParsedLevel, Scoring, TimeoutRule

CHASE_PROBABILITY = 0.6


class ZombieSurvivalRules(BaseRules):
    game_id = "zombie_survival"
    stochastic = True
    action_set = ActionSet((NIL, LEFT, RIGHT, UP, DOWN))
    timeout_win = True
    legend = frozenset({"z", "h"})
    spec = GameSpec(
        id=game_id,
        nature=Nature.STOCHASTIC,
        action_set=action_set,
        scoring=Scoring.INCREMENTAL,
        timeout_rule=TimeoutRule.TIMEOUT_WIN,
    )

    def build(self, state: GameState, parsed: ParsedLevel) -> None:
        for x, y, ch in parsed.cells():
            if ch == "z":
                state.add_sprite("zombie", x, y)
            elif ch == "h":
                state.add_sprite("honey", x, y)
        state.meta["chase_prob"] = float(parsed.headers.get("chase_prob", CHASE_PROBABILITY))

    def step(self, state: GameState, action: str) -> None:
        avatar_was = (state.avatar.x, state.avatar.y)
        self.move_avatar(state, action)
        ax, ay = state.avatar.x, state.avatar.y

        zombies: list = []
        honeys: list = []
        for s in state.sprites:
            if s.kind == "zombie":
                zombies.append(s)
            else:
                honeys.append(s)

        # NPC phase: zombies act on every second tick only
        came_from = {}
        if (state.tick + 1) % 2 == 0:
            chase_prob = state.meta["chase_prob"]
            rng = state.rng
            for s in zombies:
                came_from[s.id] = (s.x, s.y)
                if rng.random() < chase_prob:
                    self._chase(state, s, ax, ay)
                else:
                    options = self.open_neighbors(state, s.x, s.y)
                    if options:
                        s.x, s.y = rng.choice(options)

        # collision phase: zombie touch loses, honey feeds
        for s in zombies:
            if (s.x == ax and s.y == ay) or (
                (s.x, s.y) == avatar_was and came_from.get(s.id) == (ax, ay)
            ):
                state.status = GameStatus.LOSS
                return
        eaten = None
        for s in honeys:
            if s.x == ax and s.y == ay:
                eaten = s.id
                state.score += 1.0
        if eaten is not None:
            state.remove_sprites({eaten})

    def _chase(self, state: GameState, s, ax: int, ay: int) -> None:
        dx = (ax > s.x) - (ax < s.x)
        dy = (ay > s.y) - (ay < s.y)
        if dx != 0 and dy != 0:
            if state.rng.randrange(2) == 0:
                dy = 0
            else:
                dx = 0
        elif dx == 0 and dy == 0:
            return
        nx, ny = s.x + dx, s.y + dy
        if state.terrain[ny][nx] != "#":
            s.x, s.y = nx, ny


RULES = ZombieSurvivalRules()
