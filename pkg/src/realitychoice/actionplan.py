"""Democratic action plans.

Starting from the present Reality, a rule is applied repeatedly and the winner
becomes the next Reality. Unfolding stops when the rule retains Reality
(convergence), when a state repeats (the plan is then an infinite cycle, since
rules are deterministic), or after ``max_steps`` rule applications.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

from realitychoice.core import RealityAwareElection
from realitychoice.rules import Rule, RuleOutcome

CONVERGED = "converged"
CYCLE = "cycle"
HORIZON = "horizon"


@dataclass(frozen=True)
class AccessibilityMask:
    """Which states may be offered when Reality is a given state.

    ``pairs`` holds ``(s, t)`` meaning ``t`` is on the ballot in world ``s``.
    Reality itself is always offered. ``None`` means every transition is
    feasible.
    """

    pairs: Optional[frozenset[tuple[int, int]]] = None

    @classmethod
    def complete(cls) -> "AccessibilityMask":
        return cls(None)

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[int, int]]) -> "AccessibilityMask":
        return cls(frozenset((int(s), int(t)) for s, t in pairs))

    def offered(self, reality: int, alternatives: Iterable[int]) -> Optional[frozenset[int]]:
        if self.pairs is None:
            return None
        return frozenset(t for t in alternatives if t == reality or (reality, t) in self.pairs)


@dataclass(frozen=True)
class ActionPlan:
    """States visited, why unfolding stopped, and the rule outcome of each step.

    ``states[0]`` is the initial Reality. On a cycle the repeated state is
    appended once more, so ``states[first_repeat] == states[-1]``.
    ``outcomes[i]`` is the rule's verdict with Reality ``states[i]``.
    """

    states: tuple[int, ...]
    termination: str
    outcomes: tuple[RuleOutcome, ...]
    first_repeat: Optional[int] = None
    period: Optional[int] = None

    @property
    def final(self) -> int:
        return self.states[-1]

    def to_dict(self, names) -> dict:
        return {
            "states": [names[s] for s in self.states],
            "termination": self.termination,
            "first_repeat": self.first_repeat,
            "period": self.period,
            "steps": [o.to_dict(names) for o in self.outcomes],
        }


def unfold_plan(election: RealityAwareElection, rule: Rule, max_steps: int,
                mask: Optional[AccessibilityMask] = None,
                start: Optional[int] = None) -> ActionPlan:
    """Unfold the plan from ``start`` (default: the election's Reality)."""
    if max_steps < 1:
        raise ValueError("max_steps must be at least 1")
    mask = mask or AccessibilityMask.complete()
    current = election.reality if start is None else start
    states = [current]
    outcomes = []
    for _ in range(max_steps):
        here = election.at(current)
        outcome = rule(here, offered=mask.offered(current, election.alternatives))
        outcomes.append(outcome)
        winner = outcome.winner
        if winner == current:
            return ActionPlan(tuple(states), CONVERGED, tuple(outcomes))
        if winner in states:
            states.append(winner)
            first = states.index(winner)
            return ActionPlan(tuple(states), CYCLE, tuple(outcomes), first,
                              len(states) - 1 - first)
        states.append(winner)
        current = winner
    return ActionPlan(tuple(states), HORIZON, tuple(outcomes))


def detect_cycle(plan: Union[ActionPlan, Sequence[int]]) -> Optional[tuple[int, int]]:
    """``(first_index, period)`` of the first repeated state, or None."""
    states = plan.states if isinstance(plan, ActionPlan) else plan
    seen = {}
    for i, s in enumerate(states):
        if s in seen:
            return seen[s], i - seen[s]
        seen[s] = i
    return None
