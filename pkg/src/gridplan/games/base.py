"""Shared machinery for the bundled games: specs, level parsing, state setup.

Level file format (bit-exact, golden-tested): UTF-8 text, optional
header lines ``#key=value`` first, then a rectangular ASCII grid with
one character per cell. Common characters: ``.`` floor, ``#`` wall,
``A`` avatar (exactly one), ``E`` exit. Game letters are declared by
each game's legend; anything else is a load error, never a silent
floor. A line starting with ``#`` counts as a header only when it has
the ``#key=value`` shape, so wall border rows parse as grid.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum

from ..engine import (
    ActionSet,
    Avatar,
    GameState,
    GameStatus,
    MOVE_DELTAS,
    RngStream,
)

DEFAULT_MAX_TICKS = 2000

_HEADER_RE = re.compile(r"^#([a-z_]+)=(.*)$")

#: Characters every game understands; `E` only where the legend allows it.
COMMON_CHARS = frozenset({".", "#", "A"})


class GameError(Exception):
    """Base class for game-corpus errors."""


class UnknownGame(GameError):
    pass


class MalformedLevel(GameError):
    def __init__(self, message: str, line: int, column: int | None = None):
        at = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{message} ({at})")
        self.line = line
        self.column = column


class Nature(Enum):
    DETERMINISTIC = "deterministic"
    STOCHASTIC = "stochastic"


class Scoring(Enum):
    BINARY = "binary"
    INCREMENTAL = "incremental"
    DISCONTINUOUS = "discontinuous"


class TimeoutRule(Enum):
    TIMEOUT_WIN = "timeout_win"
    TIMEOUT_LOSS = "timeout_loss"


@dataclass(frozen=True)
class GameSpec:
    id: str
    nature: Nature
    action_set: ActionSet
    scoring: Scoring
    timeout_rule: TimeoutRule
    n_levels: int = 5

    def __post_init__(self) -> None:
        if self.n_levels != 5:
            raise ValueError("every bundled game ships exactly 5 levels")


@dataclass(frozen=True)
class ParsedLevel:
    headers: dict
    rows: tuple[str, ...]
    width: int
    height: int
    avatar_x: int
    avatar_y: int

    def cells(self):
        for y, row in enumerate(self.rows):
            for x, ch in enumerate(row):
                yield x, y, ch


def parse_level(text: str, legend: frozenset[str]) -> ParsedLevel:
    """Parse level text against a game legend (extra allowed characters)."""
    headers: dict = {}
    lines = text.splitlines()
    grid_start = 0
    for i, line in enumerate(lines):
        m = _HEADER_RE.match(line)
        if m and line.strip():
            headers[m.group(1)] = m.group(2)
            grid_start = i + 1
        else:
            break
    rows = [line for line in lines[grid_start:] if line != ""]
    if not rows:
        raise MalformedLevel("level has no grid rows", grid_start + 1)

    width = len(rows[0])
    allowed = COMMON_CHARS | legend
    avatar = None
    for y, row in enumerate(rows):
        line_no = grid_start + y + 1
        if len(row) != width:
            raise MalformedLevel(
                f"ragged grid: row is {len(row)} cells, expected {width}", line_no
            )
        for x, ch in enumerate(row):
            if ch not in allowed:
                raise MalformedLevel(f"unknown character {ch!r}", line_no, x + 1)
            if ch == "A":
                if avatar is not None:
                    raise MalformedLevel("second avatar cell", line_no, x + 1)
                avatar = (x, y)
    if avatar is None:
        raise MalformedLevel("level has no avatar cell", grid_start + 1)
    return ParsedLevel(headers, tuple(rows), width, len(rows), avatar[0], avatar[1])


class BaseRules:
    """Skeleton every game rules singleton fills in.

    Subclasses set the class attributes, implement ``build`` to turn
    legend characters into sprites/meta, and ``step`` for the per-tick
    transition. ``step`` runs before tick/timeout bookkeeping in
    ``engine.advance``.
    """

    game_id: str
    stochastic: bool
    action_set: ActionSet
    timeout_win: bool
    spec: GameSpec
    legend: frozenset[str] = frozenset()

    def build(self, state: GameState, parsed: ParsedLevel) -> None:
        raise NotImplementedError

    def step(self, state: GameState, action: str) -> None:
        raise NotImplementedError

    # -- helpers shared by the rule tables --

    def move_avatar(self, state: GameState, action: str) -> bool:
        """Cardinal 1-cell move; walls and the border block. True if moved."""
        delta = MOVE_DELTAS.get(action)
        if delta is None:
            return False
        nx = state.avatar.x + delta[0]
        ny = state.avatar.y + delta[1]
        if not (0 <= nx < state.width and 0 <= ny < state.height):
            return False
        state.avatar.orientation = delta
        if state.terrain[ny][nx] == "#":
            return False
        state.avatar.x = nx
        state.avatar.y = ny
        return True

    def open_neighbors(self, state: GameState, x: int, y: int) -> list[tuple[int, int]]:
        out = []
        for dx, dy in ((-1, 0), (1, 0), (0, -1), (0, 1)):
            nx, ny = x + dx, y + dy
            if 0 <= nx < state.width and 0 <= ny < state.height and state.terrain[ny][nx] != "#":
                out.append((nx, ny))
        return out


def make_terrain(parsed: ParsedLevel, keep: frozenset[str]) -> tuple[str, ...]:
    """Static layer: keep walls plus ``keep`` characters, floor the rest."""
    rows = []
    for row in parsed.rows:
        rows.append("".join(ch if ch == "#" or ch in keep else "." for ch in row))
    return tuple(rows)


def build_state(rules: BaseRules, parsed: ParsedLevel, rng: RngStream,
                terrain_keep: frozenset[str] = frozenset({"E"})) -> GameState:
    max_ticks = int(parsed.headers.get("max_ticks", DEFAULT_MAX_TICKS))
    if max_ticks < 1:
        raise MalformedLevel("max_ticks must be >= 1", 1)
    state = GameState(
        rules=rules,
        terrain=make_terrain(parsed, terrain_keep),
        width=parsed.width,
        height=parsed.height,
        avatar=Avatar(parsed.avatar_x, parsed.avatar_y),
        sprites=[],
        score=0.0,
        tick=0,
        max_ticks=max_ticks,
        status=GameStatus.ONGOING,
        rng=rng,
        next_sprite_id=0,
        meta={},
    )
    rules.build(state, parsed)
    return state
