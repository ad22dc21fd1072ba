#!/usr/bin/env python3
"""Regenerate tests/data/witnesses.json: a winning action sequence per level.

Deterministic games use the exhaustive shortest-win search; stochastic
games replay a strong planner under increasing seeds until a win comes
out, then store the executed action sequence together with the master
seed that reproduces it. Rerun after any level or rule change.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

sys.path.insert(0, "src")
sys.path.insert(0, "scripts")

from validate_levels import solve_deterministic

from gridplan import agents, games
from gridplan.engine import GameStatus, RngStream, advance, copy_state


def stochastic_witness(game_id: str, level: int) -> dict:
    for seed in range(200):
        agent = agents.make_agent("rhea:P=10,L=14", 960)
        arng = RngStream(seed).derive("witness", game_id, level)
        state = games.load_level(game_id, level, seed)
        actions = []
        while state.status is GameStatus.ONGOING:
            action, _ = agent.decide(copy_state(state, reseed=arng), arng)
            actions.append(action)
            advance(state, action, None)
        if state.status is GameStatus.WIN:
            return {"level": level, "seed": seed, "actions": actions}
    raise SystemExit(f"no witness found for {game_id} level {level}")


def main() -> None:
    out: dict[str, list[dict]] = {}
    for game_id, rules in games.GAMES.items():
        entries = []
        for level in range(games.LEVELS_PER_GAME):
            if rules.stochastic:
                entry = stochastic_witness(game_id, level)
            else:
                path, _ = solve_deterministic(game_id, level)
                if path is None:
                    raise SystemExit(f"{game_id} level {level} is unsolvable")
                entry = {"level": level, "seed": 0, "actions": list(path)}
            entries.append(entry)
            print(f"{game_id} L{level}: win in {len(entry['actions'])} moves"
                  f" (seed {entry['seed']})")
        out[game_id] = entries
    target = Path("tests/data/witnesses.json")
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(json.dumps(out, indent=1) + "\n", encoding="utf-8")
    print(f"wrote {target}")


if __name__ == "__main__":
    main()
