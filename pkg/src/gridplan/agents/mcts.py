"""Open-loop Monte Carlo tree search under an advance-call budget.

The tree stores no game states, only visit counts and value sums per
action edge. Each iteration re-simulates from a fresh copy of the
decision state, descending the tree (UCB1 over values normalized to
[0, 1] by the running min/max of observed returns), expanding one
child, then rolling out uniformly at random until the total depth from
the root reaches the playout limit or the game ends. The reached
state's valuation is averaged up the path. Every advance of the copy
is charged to the meter; an iteration cut off mid-way backs up the
deepest state it actually reached.

The recommended move is the root child visited most often, ties broken
uniformly at random (visit ties are routine at small budgets and a
fixed rule would bias the first action).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..engine import (
    BudgetMeter,
    GameState,
    GameStatus,
    RngStream,
    advance,
    copy_state,
    legal_actions,
)
from .core import DecisionTrace, value_heuristic

DEFAULT_DEPTH = 10
DEFAULT_EXPLORATION = math.sqrt(2.0)


@dataclass(frozen=True)
class MctsConfig:
    budget: int
    max_depth: int = DEFAULT_DEPTH
    exploration: float = DEFAULT_EXPLORATION

    def __post_init__(self) -> None:
        if self.max_depth < 1:
            raise ValueError("playout depth must be >= 1")
        if self.exploration < 0:
            raise ValueError("exploration constant must be >= 0")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")


class _Node:
    __slots__ = ("children", "visits", "value_sum")

    def __init__(self, n_actions: int):
        self.children: list[_Node | None] = [None] * n_actions
        self.visits = 0
        self.value_sum = 0.0


def olmcts_decide(root: GameState, cfg: MctsConfig,
                  rng: RngStream) -> tuple[int, DecisionTrace]:
    """One planned action for ``root`` under a fresh budget meter."""
    if root.status is not GameStatus.ONGOING:
        raise ValueError("cannot decide on a finished game")
    actions = legal_actions(root)
    n = len(actions)
    meter = BudgetMeter(cfg.budget)
    trace = DecisionTrace(budget_cap=cfg.budget)
    tree = _Node(n)
    explore = cfg.exploration
    lo = math.inf
    hi = -math.inf

    while not meter.exhausted():
        state = copy_state(root, reseed=rng)
        node = tree
        path = [tree]
        depth = 0

        # descent through fully expanded nodes
        while (depth < cfg.max_depth and state.status is GameStatus.ONGOING
               and not meter.exhausted()):
            untried = [a for a, child in enumerate(node.children) if child is None]
            if untried:
                # expansion: attach one uniformly chosen new child
                action = untried[rng.randrange(len(untried))]
                advance(state, action, meter)
                depth += 1
                child = _Node(n)
                node.children[action] = child
                node = child
                path.append(node)
                break
            action = _select_ucb(node, explore, lo, hi, rng)
            advance(state, action, meter)
            depth += 1
            node = node.children[action]
            path.append(node)

        # rollout: uniform random to the depth limit
        while (depth < cfg.max_depth and state.status is GameStatus.ONGOING
               and not meter.exhausted()):
            advance(state, rng.randrange(n), meter)
            depth += 1

        value = value_heuristic(state)
        if value < lo:
            lo = value
        if value > hi:
            hi = value
        for visited in path:
            visited.visits += 1
            visited.value_sum += value
        trace.evaluations += 1
        if state.status is not GameStatus.ONGOING:
            trace.terminal_cutoffs += 1
        if trace.best_fitness is None or value > trace.best_fitness:
            trace.best_fitness = value

    trace.advance_calls_used = meter.used
    trace.root_child_visits = [
        0 if child is None else child.visits for child in tree.children
    ]
    if tree.visits == 0:
        trace.no_evaluation = True
        trace.chosen_action = actions.nil_index
        return actions.nil_index, trace

    top = max(
        child.visits for child in tree.children if child is not None
    )
    contenders = [
        a for a, child in enumerate(tree.children)
        if child is not None and child.visits == top
    ]
    choice = contenders[rng.randrange(len(contenders))]
    trace.chosen_action = choice
    return choice, trace


def _select_ucb(node: _Node, explore: float, lo: float, hi: float,
                rng: RngStream) -> int:
    """UCB1 over min-max normalized mean values; ties uniform random."""
    log_parent = math.log(node.visits)
    spread = hi - lo
    best_score = -math.inf
    best: list[int] = []
    for action, child in enumerate(node.children):
        mean = child.value_sum / child.visits
        if spread > 0:
            mean = (mean - lo) / spread
        score = mean + explore * math.sqrt(log_parent / child.visits)
        if score > best_score:
            best_score = score
            best = [action]
        elif score == best_score:
            best.append(action)
    if len(best) == 1:
        return best[0]
    return best[rng.randrange(len(best))]


class MctsAgent:
    """Harness-facing wrapper binding a configuration to ``olmcts_decide``."""

    def __init__(self, cfg: MctsConfig, name: str | None = None):
        self.cfg = cfg
        self.name = name or f"olmcts:depth={cfg.max_depth},c={cfg.exploration:g}"

    def decide(self, root: GameState, rng: RngStream) -> tuple[int, DecisionTrace]:
        return olmcts_decide(root, self.cfg, rng)
