"""Planning agents and the factory grammar the harness and CLI consume.

Agent specification strings:

* ``random`` — uniform baseline, ignores the budget.
* ``rs`` — random search (the 24x20 preset of the evolver).
* ``rhea:P=5,L=10`` — rolling-horizon evolution; both keys required.
* ``olmcts`` or ``olmcts:depth=10,c=1.414`` — open-loop MCTS.

Unknown names or keys are errors, never ignored.
"""

from __future__ import annotations

from ..engine import GameState, RngStream, legal_actions
from .core import (
    DecisionTrace,
    Individual,
    Population,
    ZeroBudget,
    evaluate,
    init_population,
    mutate,
    tournament_select,
    uniform_crossover,
    value_heuristic,
    LOSS_PENALTY,
    WIN_BONUS,
)
from .mcts import DEFAULT_DEPTH, DEFAULT_EXPLORATION, MctsAgent, MctsConfig, olmcts_decide
from .rhea import (
    RS_LENGTH,
    RS_POPULATION,
    RheaAgent,
    RheaConfig,
    rhea_decide,
    rs_config,
    rs_decide,
)


class AgentSpecError(ValueError):
    """Malformed agent specification string."""


def random_decide(root: GameState, rng: RngStream) -> int:
    """Uniform action choice; consumes no budget."""
    return rng.randrange(len(legal_actions(root)))


class RandomAgent:
    name = "random"

    def __init__(self, budget: int = 0):
        self.budget = budget

    def decide(self, root: GameState, rng: RngStream) -> tuple[int, DecisionTrace]:
        action = random_decide(root, rng)
        return action, DecisionTrace(budget_cap=self.budget, chosen_action=action)


def _parse_params(text: str, spec: str) -> dict[str, str]:
    params: dict[str, str] = {}
    for part in text.split(","):
        if "=" not in part:
            raise AgentSpecError(f"bad parameter {part!r} in agent spec {spec!r}")
        key, value = part.split("=", 1)
        key = key.strip()
        if key in params:
            raise AgentSpecError(f"duplicate key {key!r} in agent spec {spec!r}")
        params[key] = value.strip()
    return params


def parse_agent_spec(spec: str) -> tuple[str, dict[str, str]]:
    """Split an agent spec into (kind, params) and validate the keys."""
    name, _, rest = spec.strip().partition(":")
    name = name.strip()
    params = _parse_params(rest, spec) if rest else {}
    allowed = {"random": set(), "rs": set(), "rhea": {"P", "L"},
               "olmcts": {"depth", "c"}}
    if name not in allowed:
        raise AgentSpecError(f"unknown agent {name!r} (expected one of {sorted(allowed)})")
    extra = set(params) - allowed[name]
    if extra:
        raise AgentSpecError(f"unknown keys {sorted(extra)} for agent {name!r}")
    if name == "rhea" and set(params) != {"P", "L"}:
        raise AgentSpecError("rhea spec requires both P and L, e.g. rhea:P=5,L=10")
    return name, params


def make_agent(spec: str, budget: int):
    """Instantiate an agent from its spec string and a per-decision budget."""
    name, params = parse_agent_spec(spec)
    try:
        if name == "random":
            return RandomAgent(budget)
        if name == "rs":
            return RheaAgent(rs_config(budget), name="rs")
        if name == "rhea":
            cfg = RheaConfig(int(params["P"]), int(params["L"]), budget)
            return RheaAgent(cfg, name=spec.strip())
        cfg = MctsConfig(
            budget,
            max_depth=int(params.get("depth", DEFAULT_DEPTH)),
            exploration=float(params.get("c", DEFAULT_EXPLORATION)),
        )
        return MctsAgent(cfg, name=spec.strip())
    except (ValueError, TypeError) as exc:
        if isinstance(exc, AgentSpecError):
            raise
        raise AgentSpecError(f"bad agent spec {spec!r}: {exc}") from exc
