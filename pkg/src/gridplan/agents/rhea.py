"""Rolling-horizon evolution over action plans, plus its random-search preset.

Every decision starts from scratch: draw a random population, value it
(initialization is charged to the budget), then evolve generation by
generation until the advance-call budget is spent, and play the first
action of the best plan ever valued this decision.

The evolutionary scheme depends on the population size:

* size 1: hill climbing; mutate the incumbent and replace it only on a
  strictly better valuation.
* size 2: the best plan survives unchanged, the other slot is refilled
  by mutating the crossover of the two.
* size 3+: best survives unchanged; every other slot is refilled by
  mutating the crossover of two tournament winners (tournaments of 2).

With population 24, length 20, and the default 480-call budget, the
budget is gone right after initialization: the scheme degenerates to
random search over 24 random walks, exposed as the ``rs`` preset.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from ..engine import BudgetMeter, GameState, GameStatus, RngStream, legal_actions
from .core import (
    DecisionTrace,
    Individual,
    ZeroBudget,
    evaluate,
    init_population,
    mutate,
    tournament_select,
    uniform_crossover,
)

RS_POPULATION = 24
RS_LENGTH = 20


@dataclass(frozen=True)
class RheaConfig:
    population_size: int
    individual_length: int
    budget: int
    elitism: int = 1
    tournament_size: int = 2

    def __post_init__(self) -> None:
        if self.population_size < 1:
            raise ValueError("population size must be >= 1")
        if self.individual_length < 1:
            raise ValueError("individual length must be >= 1")
        if self.budget < 0:
            raise ValueError("budget must be >= 0")
        if self.elitism != 1 or self.tournament_size != 2:
            raise ValueError("the vanilla scheme fixes elitism=1, tournament=2")


def rs_config(budget: int) -> RheaConfig:
    return RheaConfig(RS_POPULATION, RS_LENGTH, budget)


def rhea_decide(root: GameState, cfg: RheaConfig,
                rng: RngStream) -> tuple[int, DecisionTrace]:
    """One planned action for ``root`` under a fresh budget meter.

    Returns the first gene of the best evaluated plan seen this
    decision (valuation ties keep the earliest discovered). If the
    budget cannot value even one gene, the no-plan fallback is NIL with
    the trace flagged.
    """
    if root.status is not GameStatus.ONGOING:
        raise ValueError("cannot decide on a finished game")
    actions = legal_actions(root)
    n = len(actions)
    size = cfg.population_size
    meter = BudgetMeter(cfg.budget)
    trace = DecisionTrace(budget_cap=cfg.budget)

    best: Individual | None = None
    best_fitness = float("-inf")

    def consider(ind: Individual) -> None:
        nonlocal best, best_fitness
        trace.evaluations += 1
        if ind.hit_terminal:
            trace.terminal_cutoffs += 1
        if ind.fitness > best_fitness:
            best = ind
            best_fitness = ind.fitness

    # initialization, charged against the same budget as evolution
    pop = init_population(size, cfg.individual_length, n, rng)
    evaluated: list[Individual] = []
    for ind in pop:
        try:
            evaluate(ind, root, meter, rng)
        except ZeroBudget:
            break
        consider(ind)
        evaluated.append(ind)

    if best is None:
        trace.no_evaluation = True
        trace.advance_calls_used = meter.used
        trace.chosen_action = actions.nil_index
        return actions.nil_index, trace

    pop = sorted(evaluated, key=lambda ind: -ind.fitness)

    # generations: only populations that were fully initialized evolve,
    # which is guaranteed here because a cut-short initialization has
    # already exhausted the meter
    while not meter.exhausted():
        if size == 1:
            child = mutate(pop[0], n, rng, trace)
            evaluate(child, root, meter, rng)
            consider(child)
            if child.fitness > pop[0].fitness:
                pop[0] = child
            trace.generations_completed += 1
            continue

        next_pop = [pop[0]]
        complete = True
        for slot in range(1, size):
            if meter.exhausted():
                next_pop.append(pop[slot])
                complete = False
                continue
            if size == 2:
                parent_a, parent_b = pop[0], pop[1]
            else:
                parent_a = tournament_select(pop, rng)
                parent_b = tournament_select(pop, rng)
            child = mutate(uniform_crossover(parent_a, parent_b, rng, trace),
                           n, rng, trace)
            evaluate(child, root, meter, rng)
            consider(child)
            next_pop.append(child)
        pop = sorted(next_pop, key=lambda ind: -ind.fitness)
        if complete:
            trace.generations_completed += 1

    trace.advance_calls_used = meter.used
    trace.best_fitness = best_fitness
    trace.chosen_action = best.genes[0]
    return best.genes[0], trace


def rs_decide(root: GameState, budget: int,
              rng: RngStream) -> tuple[int, DecisionTrace]:
    """Random search: structurally the 24x20 configuration of the evolver."""
    return rhea_decide(root, rs_config(budget), rng)


class RheaAgent:
    """Harness-facing wrapper binding a configuration to ``rhea_decide``."""

    def __init__(self, cfg: RheaConfig, name: str | None = None):
        self.cfg = cfg
        self.name = name or f"rhea:P={cfg.population_size},L={cfg.individual_length}"
        if cfg.population_size * cfg.individual_length > cfg.budget:
            warnings.warn(
                f"{self.name}: P*L = {cfg.population_size * cfg.individual_length} "
                f"exceeds the budget {cfg.budget}; initialization will be cut short",
                stacklevel=2,
            )

    def decide(self, root: GameState, rng: RngStream) -> tuple[int, DecisionTrace]:
        return rhea_decide(root, self.cfg, rng)
