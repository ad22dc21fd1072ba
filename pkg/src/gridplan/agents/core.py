"""Plan encoding, state valuation, and the evolutionary operators.

A candidate plan is a fixed-length sequence of action indices. Plans
are valued by simulating them on a copy of the decision state and
scoring the reached state; simulation charges the decision's budget
meter, and exhausting the budget mid-plan keeps the partial valuation
(every paid call contributes).
"""

from __future__ import annotations

from dataclasses import dataclass

from ..engine import (
    BudgetMeter,
    GameState,
    GameStatus,
    RngStream,
    advance,
    copy_state,
)

#: Terminal offsets dominating every bundled game's score range (|score| < 1e4).
WIN_BONUS = 1_000_000.0
LOSS_PENALTY = 1_000_000.0


class ZeroBudget(Exception):
    """Evaluation was requested with the meter already spent."""


def value_heuristic(state: GameState) -> float:
    """Score of a state: the game score, shifted hard by a decided end."""
    if state.status is GameStatus.WIN:
        return state.score + WIN_BONUS
    if state.status is GameStatus.LOSS:
        return state.score - LOSS_PENALTY
    return state.score


@dataclass
class Individual:
    """Fixed-length action plan with its latest valuation."""

    genes: list[int]
    fitness: float | None = None
    genes_consumed: int = 0
    hit_terminal: bool = False

    def copy_unevaluated(self) -> "Individual":
        return Individual(list(self.genes))


Population = list[Individual]


@dataclass
class DecisionTrace:
    """Audit record of one decision (all planners emit one)."""

    advance_calls_used: int = 0
    budget_cap: int = 0
    generations_completed: int = 0
    crossovers: int = 0
    mutations: int = 0
    evaluations: int = 0
    chosen_action: int = 0
    best_fitness: float | None = None
    degenerate_mutations: int = 0
    terminal_cutoffs: int = 0
    no_evaluation: bool = False
    root_child_visits: list[int] | None = None  # tree searcher only


def init_population(size: int, length: int, n_actions: int,
                    rng: RngStream) -> Population:
    """Uniform random plans; genes drawn plan-major, position-minor."""
    if n_actions < 1:
        raise ValueError("need at least one action")
    return [
        Individual([rng.randrange(n_actions) for _ in range(length)])
        for _ in range(size)
    ]


def evaluate(ind: Individual, root: GameState, meter: BudgetMeter,
             agent_rng: RngStream) -> float:
    """Simulate the plan from ``root`` and set the individual's fitness.

    Advances genes in order on a fresh copy (re-seeded from the agent
    stream in stochastic games), stopping at a terminal state, gene
    exhaustion, or budget exhaustion; exactly ``genes_consumed`` meter
    calls are charged. Raises ZeroBudget when the meter is already
    spent, leaving the individual unevaluated.
    """
    if meter.exhausted():
        raise ZeroBudget
    sim = copy_state(root, reseed=agent_rng)
    consumed = 0
    for gene in ind.genes:
        if sim.status is not GameStatus.ONGOING or meter.exhausted():
            break
        advance(sim, gene, meter)
        consumed += 1
    ind.fitness = value_heuristic(sim)
    ind.genes_consumed = consumed
    ind.hit_terminal = sim.status is not GameStatus.ONGOING
    return ind.fitness


def mutate(ind: Individual, n_actions: int, rng: RngStream,
           trace: DecisionTrace | None = None) -> Individual:
    """New plan differing in exactly one uniformly chosen position.

    The gene is redrawn from the other n-1 values, so the change is
    guaranteed; with a single-action game no alternative exists and the
    copy is returned unchanged (recorded as a degenerate mutation).
    """
    child = ind.copy_unevaluated()
    if trace is not None:
        trace.mutations += 1
    if n_actions == 1:
        if trace is not None:
            trace.degenerate_mutations += 1
        return child
    pos = rng.randrange(len(child.genes))
    offset = 1 + rng.randrange(n_actions - 1)
    child.genes[pos] = (child.genes[pos] + offset) % n_actions
    return child


def uniform_crossover(a: Individual, b: Individual, rng: RngStream,
                      trace: DecisionTrace | None = None) -> Individual:
    """Child taking each gene from either parent with probability 1/2."""
    if len(a.genes) != len(b.genes):
        raise ValueError("parents must have equal length")
    if trace is not None:
        trace.crossovers += 1
    genes = [
        ga if rng.random() < 0.5 else gb
        for ga, gb in zip(a.genes, b.genes)
    ]
    return Individual(genes)


def tournament_select(pop: Population, rng: RngStream, size: int = 2) -> Individual:
    """Winner among ``size`` distinct uniformly drawn evaluated plans.

    Fitness ties keep the lower population index.
    """
    if size != 2:
        raise ValueError("only tournaments of size 2 are supported")
    if len(pop) < 2:
        raise ValueError("tournament needs at least 2 individuals")
    i, j = rng.distinct_pair(len(pop))
    lo, hi = (i, j) if i < j else (j, i)
    first, second = pop[lo], pop[hi]
    if first.fitness is None or second.fitness is None:
        raise ValueError("tournament over unevaluated individuals")
    return second if second.fitness > first.fitness else first
