"""Strategic play on top of democratic action plans.

The setting is a utility-constant election where the distance and every
voter's state utilities are common knowledge. A pebble marks the current
Reality on the complete weighted digraph of states. Each player submits a
complete Reality-indexed ranking up front (possibly insincere); the rule then
moves the pebble exactly as an action plan would, until convergence, a
repeated state, or the horizon. Payoffs use the true utilities: either the
utility of the final Reality or the mean over all visited Realities.

The turn structure is one reasonable choice among several: ballots are
submitted once, simultaneously, and the dynamics are deterministic up to a
bounded horizon.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from realitychoice.actionplan import AccessibilityMask, ActionPlan, unfold_plan
from realitychoice.core import (
    LinearOrder,
    Pseudoquasimetric,
    RealityAwareElection,
    TableBallot,
)
from realitychoice.restrictions import StateUtilityTable, induced_order, state_names
from realitychoice.rules import Rule

MAX_SEARCH_STATES = 5


@dataclass(frozen=True)
class GameGraph:
    """Complete arc-weighted digraph with ``weights[a][b] = d(a, b)``."""

    weights: tuple[tuple[float, ...], ...]

    @classmethod
    def from_distance(cls, d: Pseudoquasimetric) -> "GameGraph":
        return cls(tuple(tuple(row) for row in d.dist))

    def __len__(self):
        return len(self.weights)

    def arcs(self):
        n = len(self.weights)
        return [(a, b, self.weights[a][b]) for a in range(n) for b in range(n) if a != b]


@dataclass(frozen=True)
class StrategyProfile:
    """The Reality-indexed ballot each player submits."""

    ballots: tuple[TableBallot, ...]

    def __post_init__(self):
        object.__setattr__(self, "ballots", tuple(self.ballots))

    def __len__(self):
        return len(self.ballots)

    def __getitem__(self, voter: int) -> TableBallot:
        return self.ballots[voter]

    def with_ballot(self, voter: int, ballot: TableBallot) -> "StrategyProfile":
        ballots = list(self.ballots)
        ballots[voter] = ballot
        return StrategyProfile(tuple(ballots))


@dataclass(frozen=True)
class Game:
    names: tuple[str, ...]
    distance: Pseudoquasimetric
    utilities: StateUtilityTable
    graph: GameGraph
    truthful: StrategyProfile

    @property
    def n_states(self) -> int:
        return len(self.names)

    @property
    def n_players(self) -> int:
        return len(self.utilities)

    def election(self, strategies: StrategyProfile, reality: int) -> RealityAwareElection:
        return RealityAwareElection(self.names, strategies.ballots, reality)


@dataclass(frozen=True)
class GameResult:
    plan: ActionPlan
    terminal: tuple[float, ...]
    averaged: tuple[float, ...]

    def to_dict(self, names) -> dict:
        return {
            "trajectory": self.plan.to_dict(names),
            "payoffs": [
                {"voter": v, "terminal": t, "averaged": a}
                for v, (t, a) in enumerate(zip(self.terminal, self.averaged))
            ],
        }


def build_game(d: Pseudoquasimetric, utilities: StateUtilityTable,
               names: Optional[Sequence[str]] = None) -> Game:
    """Game graph and sincere strategies for a known distance and utility table.

    Raises UtilityTieError if some voter's induced order is not strict.
    """
    if not isinstance(d, Pseudoquasimetric):
        d = Pseudoquasimetric(d)
    if not isinstance(utilities, StateUtilityTable):
        utilities = StateUtilityTable(utilities)
    n = len(d)
    if utilities.n_states != n:
        raise ValueError("utility rows do not match the distance table")
    names = tuple(names) if names is not None else state_names(n)
    truthful = StrategyProfile(tuple(
        TableBallot(tuple(induced_order(d, row, r) for r in range(n)))
        for row in utilities.rows
    ))
    return Game(names, d, utilities, GameGraph.from_distance(d), truthful)


def payoffs(game: Game, plan: ActionPlan) -> tuple[tuple[float, ...], tuple[float, ...]]:
    """Terminal and averaged payoffs of every player along ``plan``."""
    terminal = tuple(row[plan.final] for row in game.utilities.rows)
    averaged = tuple(sum(row[s] for s in plan.states) / len(plan.states)
                     for row in game.utilities.rows)
    return terminal, averaged


def play(game: Game, strategies: StrategyProfile, rule: Rule, start: int, horizon: int,
         mask: Optional[AccessibilityMask] = None) -> GameResult:
    if horizon < 1:
        raise ValueError("horizon must be at least 1")
    plan = unfold_plan(game.election(strategies, start), rule, horizon, mask)
    terminal, averaged = payoffs(game, plan)
    return GameResult(plan, terminal, averaged)


def best_response_exists(game: Game, rule: Rule, start: int, horizon: int, voter: int,
                         mask: Optional[AccessibilityMask] = None) -> Optional[StrategyProfile]:
    """Search ``voter``'s submissions for one that raises their terminal payoff.

    All other players stay truthful. Only the ranking at Realities the pebble
    actually visits can matter, and at each of those only the resulting winner
    matters, so the search branches once per distinct winner at each visited
    Reality; unvisited Realities keep the sincere ranking. Candidates are
    explored in lexicographic order of submitted rankings and the first
    strictly improving profile is returned.
    """
    n = game.n_states
    if n > MAX_SEARCH_STATES:
        raise ValueError(f"best-response search is capped at {MAX_SEARCH_STATES} states, got {n}")
    if not 0 <= voter < game.n_players:
        raise ValueError(f"no player {voter}")
    sincere = game.truthful[voter]
    baseline = play(game, game.truthful, rule, start, horizon, mask).terminal[voter]
    all_orders = [LinearOrder(p) for p in itertools.permutations(range(n))]

    def profile_for(assigned: dict) -> StrategyProfile:
        orders = tuple(assigned.get(r, sincere.order_at(r)) for r in range(n))
        return game.truthful.with_ballot(voter, TableBallot(orders))

    def search(assigned: dict) -> Optional[StrategyProfile]:
        strategies = profile_for(assigned)
        result = play(game, strategies, rule, start, horizon, mask)
        visited = result.plan.states[:len(result.plan.outcomes)]
        pending = [r for r in visited if r not in assigned]
        if not pending:
            return strategies if result.terminal[voter] > baseline else None
        r = pending[0]
        offered = (mask or AccessibilityMask.complete()).offered(r, range(n))
        tried = set()
        for order in all_orders:
            trial = dict(assigned)
            trial[r] = order
            election = game.election(profile_for(trial), r)
            winner = rule(election, offered=offered).winner
            if winner in tried:
                continue
            tried.add(winner)
            found = search(trial)
            if found is not None:
                return found
        return None

    return search({})
