"""Invaders: shoot down the marching alien rank before it reaches you.

Stochastic. The rank marches deterministically (one cell per tick,
bouncing off the walls and descending one row on each bounce); the
randomness is each alien's 0.02-per-tick bomb drop, one rng draw per
alien per tick in sprite-id order. USE fires the player missile (one in
flight, two cells per tick; the missile also hits an alien that steps
into a cell it swept this tick). Each kill scores +1. A bomb hitting
the avatar or an alien reaching the avatar's row loses; clearing the
rank wins; timeout is a loss.
"""

from __future__ import annotations

from ..engine import ActionSet, GameState, GameStatus, LEFT, NIL, RIGHT, USE
from .base import BaseRules, GameSpec, Nature, ParsedLevel, Scoring, TimeoutRule

BOMB_PROBABILITY = 0.02
MISSILE_SPEED = 2


class InvadersRules(BaseRules):
    game_id = "invaders"
    stochastic = True
    action_set = ActionSet((NIL, LEFT, RIGHT, USE))
    timeout_win = False
    legend = frozenset({"a"})
    spec = GameSpec(
        id=game_id,
        nature=Nature.STOCHASTIC,
        action_set=action_set,
        scoring=Scoring.INCREMENTAL,
        timeout_rule=TimeoutRule.TIMEOUT_LOSS,
    )

    def build(self, state: GameState, parsed: ParsedLevel) -> None:
        for x, y, ch in parsed.cells():
            if ch == "a":
                state.add_sprite("alien", x, y)
        state.meta["alien_dir"] = 1
        state.meta["bomb_prob"] = float(parsed.headers.get("bomb_prob", BOMB_PROBABILITY))
        state.meta["ground_row"] = parsed.avatar_y

    def step(self, state: GameState, action: str) -> None:
        terrain = state.terrain
        aliens: list = []
        bombs: list = []
        missile = None
        for s in state.sprites:
            k = s.kind
            if k == "alien":
                aliens.append(s)
            elif k == "bomb":
                bombs.append(s)
            else:
                missile = s

        # avatar phase: sidestep or fire (one missile in flight at a time)
        if action == LEFT or action == RIGHT:
            self.move_avatar(state, action)
        elif action == USE and missile is None:
            mx, my = state.avatar.x, state.avatar.y - 1
            if terrain[my][mx] != "#":
                missile = state.add_sprite("pmissile", mx, my)

        dead: set[int] = set()

        # projectile phase: player missile up (cell by cell), bombs down
        missile_path = ()
        if missile is not None:
            alien_at = {(a.x, a.y): a for a in aliens}
            swept = []
            for _ in range(MISSILE_SPEED):
                missile.y -= 1
                if terrain[missile.y][missile.x] == "#":
                    dead.add(missile.id)
                    missile = None
                    break
                cell = (missile.x, missile.y)
                swept.append(cell)
                hit = alien_at.get(cell)
                if hit is not None:
                    dead.add(hit.id)
                    dead.add(missile.id)
                    missile = None
                    state.score += 1.0
                    break
            if missile is not None:
                missile_path = tuple(swept)
        for b in bombs:
            b.y += 1
            if terrain[b.y][b.x] == "#":
                dead.add(b.id)

        # NPC phase: the surviving rank marches as one body
        direction = state.meta["alien_dir"]
        marching = [a for a in aliens if a.id not in dead]
        bounce = False
        for a in marching:
            if terrain[a.y][a.x + direction] == "#":
                bounce = True
                break
        if marching:
            if bounce:
                for a in marching:
                    a.y += 1
                state.meta["alien_dir"] = -direction
            else:
                for a in marching:
                    a.x += direction

        # collision phase: cell coincidence plus missile sweep
        if missile is not None:
            mcell = (missile.x, missile.y)
            for a in marching:
                cell = (a.x, a.y)
                if cell == mcell or cell in missile_path:
                    dead.add(a.id)
                    dead.add(missile.id)
                    missile = None
                    state.score += 1.0
                    break
        ax, ay = state.avatar.x, state.avatar.y
        for b in bombs:
            if b.id not in dead and b.x == ax and b.y == ay:
                state.status = GameStatus.LOSS

        # spawn phase: one bomb-drop draw per surviving alien, id order
        bomb_prob = state.meta["bomb_prob"]
        rng = state.rng
        ground = state.meta["ground_row"]
        survivors = 0
        landed = False
        for a in aliens:
            if a.id in dead:
                continue
            survivors += 1
            if a.y >= ground:
                landed = True
            if rng.random() < bomb_prob:
                by = a.y + 1
                if terrain[by][a.x] != "#":
                    state.add_sprite("bomb", a.x, by)

        if dead:
            state.remove_sprites(dead)

        # end conditions
        if state.status is GameStatus.ONGOING:
            if survivors == 0:
                state.status = GameStatus.WIN
            elif landed:
                state.status = GameStatus.LOSS


RULES = InvadersRules()
