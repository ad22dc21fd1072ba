"""Butterfly catch: net every butterfly before they open all the cocoons.

Stochastic. Each butterfly takes one uniform random step per tick over
the open 4-neighbors of its cell (one rng draw each, sprite-id order;
a fully boxed-in butterfly stays put without a draw). Touching a
butterfly scores +2 and removes it; catches also trigger on a
swap-through with the avatar. A butterfly standing on a cocoon opens
it, spawning a new butterfly there. All butterflies caught wins (this
is checked first); all cocoons opened loses; timeout is a loss.
"""

from __future__ import annotations

from ..engine import ActionSet, DOWN, GameState, GameStatus, LEFT, NIL, RIGHT, UP
from .base import BaseRules, GameSpec, Nature, ParsedLevel, Scoring, TimeoutRule


class ButterflyCatchRules(BaseRules):
    game_id = "butterfly_catch"
    stochastic = True
    action_set = ActionSet((NIL, LEFT, RIGHT, UP, DOWN))
    timeout_win = False
    legend = frozenset({"b", "c"})
    spec = GameSpec(
        id=game_id,
        nature=Nature.STOCHASTIC,
        action_set=action_set,
        scoring=Scoring.INCREMENTAL,
        timeout_rule=TimeoutRule.TIMEOUT_LOSS,
    )

    def build(self, state: GameState, parsed: ParsedLevel) -> None:
        for x, y, ch in parsed.cells():
            if ch == "b":
                state.add_sprite("butterfly", x, y)
            elif ch == "c":
                state.add_sprite("cocoon", x, y)
        state.meta["caught"] = 0
        state.meta["spawned"] = 0

    def step(self, state: GameState, action: str) -> None:
        avatar_was = (state.avatar.x, state.avatar.y)
        self.move_avatar(state, action)
        avatar_now = (state.avatar.x, state.avatar.y)

        flies: list = []
        cocoon_at: dict[tuple[int, int], object] = {}
        for s in state.sprites:
            if s.kind == "butterfly":
                flies.append(s)
            else:
                cocoon_at[(s.x, s.y)] = s

        # NPC phase: random walk, one draw per butterfly in id order
        rng = state.rng
        came_from = {}
        for s in flies:
            came_from[s.id] = (s.x, s.y)
            options = self.open_neighbors(state, s.x, s.y)
            if options:
                s.x, s.y = rng.choice(options)

        # collision phase: catches (coincidence or swap-through)
        dead: set[int] = set()
        caught = 0
        for s in flies:
            here = (s.x, s.y)
            if here == avatar_now or (
                here == avatar_was and came_from[s.id] == avatar_now
            ):
                dead.add(s.id)
                caught += 1
                state.score += 2.0
        if caught:
            state.meta["caught"] += caught

        # spawn phase: surviving butterflies open cocoons they stand on
        for s in flies:
            if s.id in dead:
                continue
            hit = cocoon_at.get((s.x, s.y))
            if hit is not None and hit.id not in dead:
                dead.add(hit.id)
                state.add_sprite("butterfly", hit.x, hit.y)
                state.meta["spawned"] += 1

        if dead:
            state.remove_sprites(dead)

        # end conditions: win (all caught) is checked before cocoon loss
        has_fly = False
        has_cocoon = False
        for s in state.sprites:
            if s.kind == "butterfly":
                has_fly = True
            else:
                has_cocoon = True
        if not has_fly:
            state.status = GameStatus.WIN
        elif not has_cocoon:
            state.status = GameStatus.LOSS


RULES = ButterflyCatchRules()
