#!/usr/bin/env python3
"""Level QA tool: solvability search plus playability probes.

For deterministic games, breadth-first search over full game states
finds the shortest winning action sequence (or proves a level dead).
For stochastic games, a fixed batch of seeded planner episodes
estimates winnability. Run after editing any level file.
"""

from __future__ import annotations

import sys
from collections import deque

sys.path.insert(0, "src")

from gridplan import agents, games
from gridplan.engine import GameStatus, RngStream, advance, copy_state


def solve_deterministic(game_id: str, level: int, cap: int = 400_000):
    start = games.load_level(game_id, level, 0)
    n = len(games.GAMES[game_id].action_set)
    seen = {start.observation()[:-1]}  # meta-insensitive? keep full obs minus none
    queue = deque([(start, ())])
    expanded = 0
    while queue:
        state, path = queue.popleft()
        expanded += 1
        if expanded > cap:
            return None, expanded
        for action in range(n):
            child = copy_state(state)
            advance(child, action, None)
            if child.status is GameStatus.WIN:
                return path + (action,), expanded
            if child.status is not GameStatus.ONGOING:
                continue
            key = (
                child.avatar.x, child.avatar.y,
                tuple((s.kind, s.x, s.y) for s in child.sprites),
                child.tick if game_id == "missile_defense" else None,
            )
            if key in seen:
                continue
            seen.add(key)
            queue.append((child, path + (action,)))
    return None, expanded


def probe_stochastic(game_id: str, level: int, spec: str = "rhea:P=10,L=14",
                     reps: int = 10) -> int:
    wins = 0
    for seed in range(reps):
        agent = agents.make_agent(spec, 480)
        arng = RngStream(seed).derive("agent", spec, game_id, level)
        state = games.load_level(game_id, level, 5000 + seed)
        while state.status is GameStatus.ONGOING:
            action, _ = agent.decide(copy_state(state, reseed=arng), arng)
            advance(state, action, None)
        wins += state.status is GameStatus.WIN
    return wins


def main() -> None:
    only = sys.argv[1] if len(sys.argv) > 1 else None
    for game_id, rules in games.GAMES.items():
        if only and game_id != only:
            continue
        for level in range(5):
            state = games.load_level(game_id, level, 0)
            tag = f"{game_id:16s} L{level}"
            if not rules.stochastic:
                path, expanded = solve_deterministic(game_id, level)
                if path is None:
                    print(f"{tag}  UNSOLVABLE (searched {expanded} states)")
                else:
                    print(f"{tag}  shortest win {len(path):3d} moves"
                          f"  (max_ticks {state.max_ticks}, {expanded} states)")
            else:
                wins = probe_stochastic(game_id, level)
                print(f"{tag}  planner wins {wins}/10  (max_ticks {state.max_ticks})")


if __name__ == "__main__":
    main()
