"""Game-state contract, forward-model semantics, and budget metering.

The engine is game-agnostic: a :class:`GameState` carries the world
snapshot plus a reference to its (stateless) rules object, and
:func:`advance` drives one transition while charging a
:class:`BudgetMeter`. Simulation copies are made with
:func:`copy_state`; in stochastic games a copy normally receives a
fresh random stream derived from the planning agent's stream, so
simulated futures never replay the real game's randomness.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass, field
from enum import Enum
from typing import Protocol, Sequence

NIL = "NIL"
LEFT = "LEFT"
RIGHT = "RIGHT"
UP = "UP"
DOWN = "DOWN"
USE = "USE"

#: Canonical ordering of action identifiers; per-game sets are subsequences.
ALL_ACTIONS = (NIL, LEFT, RIGHT, UP, DOWN, USE)

#: (dx, dy) deltas for the movement actions; NIL and USE do not move.
MOVE_DELTAS = {LEFT: (-1, 0), RIGHT: (1, 0), UP: (0, -1), DOWN: (0, 1)}


class EngineError(Exception):
    """Base class for engine contract violations."""


class BudgetExhausted(EngineError):
    """Raised when an advance is attempted on a spent meter."""


class TerminalState(EngineError):
    """Raised when advancing a state whose game already ended."""


class InvalidAction(EngineError):
    """Raised for an action index outside the game's action set."""


class GameStatus(Enum):
    ONGOING = "ongoing"
    WIN = "win"
    LOSS = "loss"


@dataclass(frozen=True)
class ActionSet:
    """Ordered, dense action space of one game.

    Indices 0..N-1 map stably to identifiers for the whole game; NIL is
    always present.
    """

    actions: tuple[str, ...]

    def __post_init__(self) -> None:
        if not (1 <= len(self.actions) <= len(ALL_ACTIONS)):
            raise ValueError(f"action set size must be 1..6, got {len(self.actions)}")
        if NIL not in self.actions:
            raise ValueError("NIL must be present in every action set")
        unknown = set(self.actions) - set(ALL_ACTIONS)
        if unknown:
            raise ValueError(f"unknown action identifiers: {sorted(unknown)}")

    def __len__(self) -> int:
        return len(self.actions)

    def __iter__(self):
        return iter(self.actions)

    def index(self, name: str) -> int:
        return self.actions.index(name)

    @property
    def nil_index(self) -> int:
        return self.actions.index(NIL)


def _mix_seed(parent_seed: int, labels: tuple) -> int:
    """Stable 64-bit child seed from a parent seed and a label tuple."""
    h = hashlib.blake2b(digest_size=8)
    h.update(parent_seed.to_bytes(8, "little", signed=False))
    for label in labels:
        h.update(repr(label).encode("utf-8"))
        h.update(b"\x1f")
    return int.from_bytes(h.digest(), "little")


class RngStream:
    """Seeded pseudo-random stream with reproducible child derivation.

    Same seed produces the identical draw sequence on every platform
    (Mersenne Twister via ``random.Random``, whose integer-seeded output
    is stable across CPython versions). ``derive`` creates independent
    children keyed by labels; ``spawn`` creates children keyed by an
    internal counter, so successive spawns differ but the whole family
    is a pure function of the root seed.

    ``draws`` counts every consuming call; deterministic games are
    audited by asserting it stays 0 over a full playthrough.
    """

    __slots__ = ("seed", "_rng", "draws", "_spawn_count")

    def __init__(self, seed: int):
        self.seed = seed & 0xFFFFFFFFFFFFFFFF
        self._rng = random.Random(self.seed)
        self.draws = 0
        self._spawn_count = 0

    def random(self) -> float:
        self.draws += 1
        return self._rng.random()

    def randrange(self, n: int) -> int:
        # one double draw per integer; bias of ~n/2**53 is negligible for
        # the small n used here and keeps the draw protocol uniform
        self.draws += 1
        return int(self._rng.random() * n)

    def choice(self, seq: Sequence):
        self.draws += 1
        return seq[int(self._rng.random() * len(seq))]

    def distinct_pair(self, n: int) -> tuple[int, int]:
        """Two distinct indices in 0..n-1, uniform over ordered pairs."""
        i = self.randrange(n)
        j = self.randrange(n - 1)
        if j >= i:
            j += 1
        return i, j

    def derive(self, *labels) -> "RngStream":
        return RngStream(_mix_seed(self.seed, labels))

    def spawn(self) -> "RngStream":
        child = self.derive("spawn", self._spawn_count)
        self._spawn_count += 1
        return child

    def clone(self) -> "RngStream":
        """Exact copy, including generator state and counters."""
        twin = object.__new__(RngStream)
        twin.seed = self.seed
        twin._rng = random.Random(0)
        twin._rng.setstate(self._rng.getstate())
        twin.draws = self.draws
        twin._spawn_count = self._spawn_count
        return twin

    def __eq__(self, other) -> bool:
        if not isinstance(other, RngStream):
            return NotImplemented
        return self.seed == other.seed and self._rng.getstate() == other._rng.getstate()

    def __repr__(self) -> str:
        return f"RngStream(seed={self.seed:#018x}, draws={self.draws})"


@dataclass
class BudgetMeter:
    """Hard cap and counter on forward-model advance calls per decision."""

    cap: int
    used: int = 0

    def __post_init__(self) -> None:
        if self.cap < 0:
            raise ValueError("budget cap must be >= 0")

    def consume(self) -> None:
        if self.used >= self.cap:
            raise BudgetExhausted(f"budget of {self.cap} advance calls spent")
        self.used += 1

    @property
    def remaining(self) -> int:
        return self.cap - self.used

    def exhausted(self) -> bool:
        return self.used >= self.cap

    def reset(self) -> None:
        self.used = 0


@dataclass(slots=True)
class Avatar:
    x: int
    y: int
    orientation: tuple[int, int] = (0, -1)
    resources: dict[str, int] = field(default_factory=dict)

    def copy(self) -> "Avatar":
        twin = object.__new__(Avatar)
        twin.x = self.x
        twin.y = self.y
        twin.orientation = self.orientation
        twin.resources = dict(self.resources)
        return twin


@dataclass(slots=True)
class Sprite:
    """Typed world object (NPC, projectile, portal, static piece).

    ``data`` holds small per-kind counters; sprites keep creation order
    in ``GameState.sprites`` so per-tick random draws are replayable.
    """

    id: int
    kind: str
    x: int
    y: int
    data: dict = field(default_factory=dict)

    def copy(self) -> "Sprite":
        twin = object.__new__(Sprite)
        twin.id = self.id
        twin.kind = self.kind
        twin.x = self.x
        twin.y = self.y
        twin.data = dict(self.data)
        return twin


class GameRules(Protocol):
    """Per-game rule table consumed by :func:`advance`.

    Implementations are stateless singletons: all mutable data lives in
    the GameState, so one rules object is shared by every copy.
    """

    game_id: str
    stochastic: bool
    action_set: ActionSet
    timeout_win: bool

    def step(self, state: "GameState", action: str) -> None:
        """Apply one tick's transition (except tick/timeout bookkeeping)."""
        ...


@dataclass(slots=True, eq=False)
class GameState:
    """Copyable world snapshot, advanced one action at a time.

    Terrain is immutable and shared between copies; everything that can
    change during play lives in ``avatar``, ``sprites``, or ``meta``.
    Equality is observational: the random stream is excluded, so a
    re-seeded simulation copy still compares equal to its source.
    """

    rules: "GameRules"
    terrain: tuple[str, ...]
    width: int
    height: int
    avatar: Avatar
    sprites: list[Sprite]
    score: float
    tick: int
    max_ticks: int
    status: GameStatus
    rng: RngStream
    next_sprite_id: int
    meta: dict

    @property
    def game_id(self) -> str:
        return self.rules.game_id

    def terrain_at(self, x: int, y: int) -> str:
        return self.terrain[y][x]

    def is_wall(self, x: int, y: int) -> bool:
        return self.terrain[y][x] == "#"

    def add_sprite(self, kind: str, x: int, y: int, **data) -> Sprite:
        sprite = Sprite(self.next_sprite_id, kind, x, y, data)
        self.next_sprite_id += 1
        self.sprites.append(sprite)
        return sprite

    def sprites_of(self, kind: str) -> list[Sprite]:
        return [s for s in self.sprites if s.kind == kind]

    def remove_sprites(self, doomed: set[int]) -> None:
        if doomed:
            self.sprites = [s for s in self.sprites if s.id not in doomed]

    def observation(self) -> tuple:
        """Hashable tuple of everything observable; basis of equality."""
        return (
            self.rules.game_id,
            self.terrain,
            (self.avatar.x, self.avatar.y, self.avatar.orientation,
             tuple(sorted(self.avatar.resources.items()))),
            tuple((s.id, s.kind, s.x, s.y, tuple(sorted(s.data.items())))
                  for s in self.sprites),
            self.score,
            self.tick,
            self.max_ticks,
            self.status,
            tuple(sorted(self.meta.items())),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GameState):
            return NotImplemented
        return self.observation() == other.observation()


def copy_state(state: GameState, reseed: RngStream | None = None) -> GameState:
    """Independent copy of ``state``; advancing either never touches the other.

    With ``reseed`` given and a stochastic game, the copy's stream is
    replaced by a fresh child spawned from the caller's (agent) stream:
    simulations must not be able to replay the true game's randomness.
    Without ``reseed`` the stream is cloned exactly, which is what
    replay audits and the true-game bookkeeping need. Deterministic
    games never consume their stream (audited by the zero-draw
    tripwire), so their copies share it.
    """
    twin = object.__new__(GameState)
    twin.rules = state.rules
    twin.terrain = state.terrain
    twin.width = state.width
    twin.height = state.height
    twin.avatar = state.avatar.copy()
    twin.sprites = [s.copy() for s in state.sprites]
    twin.score = state.score
    twin.tick = state.tick
    twin.max_ticks = state.max_ticks
    twin.status = state.status
    if state.rules.stochastic:
        twin.rng = reseed.spawn() if reseed is not None else state.rng.clone()
    else:
        twin.rng = state.rng
    twin.next_sprite_id = state.next_sprite_id
    twin.meta = dict(state.meta)
    return twin


def legal_actions(state: GameState) -> ActionSet:
    """The game's fixed action set (constant across all of its states)."""
    return state.rules.action_set


def advance(state: GameState, action_index: int, meter: BudgetMeter | None) -> GameState:
    """Advance ``state`` in place by one action, charging ``meter``.

    ``meter=None`` is the true-game mode used by the harness: only
    simulation advances count against a planning budget. Timeout at
    ``max_ticks`` resolves to Win or Loss per the game's timeout rule,
    so a state never sits at ``tick == max_ticks`` still ongoing.
    """
    if state.status is not GameStatus.ONGOING:
        raise TerminalState(f"cannot advance a {state.status.value} state")
    actions = state.rules.action_set
    if not (0 <= action_index < len(actions)):
        raise InvalidAction(f"action index {action_index} not in [0, {len(actions)})")
    if meter is not None:
        meter.consume()
    state.rules.step(state, actions.actions[action_index])
    state.tick += 1
    if state.status is GameStatus.ONGOING and state.tick >= state.max_ticks:
        state.status = GameStatus.WIN if state.rules.timeout_win else GameStatus.LOSS
    return state
