"""Reality-aware voting rules.

Every rule first computes the Reality-viable set S_R (alternatives beating the
current Reality by strict majority). If S_R is empty, Reality is retained; if
S_R has a Condorcet winner it is elected. The rules differ only in how they
resolve a cycle inside S_R:

========================  ==================================================
rule                      cycle fallback
========================  ==================================================
conservative              retain Reality
permissive                lexicographically smallest member of S_R
preference                member of S_R with the largest net margin over R
distance                  member of S_R closest to R, measured as d(R, s)
top-cycle                 lexicographically smallest member of the top cycle
========================  ==================================================

"Lexicographic" always means by alternative name. Rules read only the ballots
at the election's current Reality. Each takes an optional ``offered`` set of
alternatives (Reality is always added back) so action plans can honour an
accessibility relation.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

from realitychoice.core import (
    Pseudoquasimetric,
    RealityAwareElection,
    condorcet_winner,
    margin,
    reality_viable_set,
    top_cycle,
)

NO_VIABLE = "no-viable"
CONDORCET = "condorcet-of-SR"
CYCLE_FALLBACK = "cycle-fallback"


@dataclass(frozen=True)
class RuleOutcome:
    """Winner plus the case split that produced it.

    ``net_margins`` maps each member of S_R to its margin over Reality.
    ``candidates`` is the set the fallback chose from (empty unless the cycle
    fallback applied), and ``tie_break`` records whether lexicographic order had
    to decide among several equally good candidates.
    """

    rule: str
    reality: int
    winner: int
    case: str
    viable: frozenset[int]
    net_margins: dict = field(default_factory=dict, compare=False)
    candidates: frozenset[int] = frozenset()
    tie_break: bool = False

    @property
    def retains_reality(self) -> bool:
        return self.winner == self.reality

    def to_dict(self, names=None) -> dict:
        label = (lambda a: names[a]) if names is not None else (lambda a: a)
        order = sorted(self.viable, key=label)
        return {
            "rule": self.rule,
            "reality": label(self.reality),
            "winner": label(self.winner),
            "case": self.case,
            "viable": [label(a) for a in order],
            "net_margins": {str(label(a)): self.net_margins[a] for a in order},
            "candidates": [label(a) for a in sorted(self.candidates, key=label)],
            "tie_break": self.tie_break,
        }


Rule = Callable[..., RuleOutcome]


def _offered(election: RealityAwareElection, offered: Optional[Iterable[int]]):
    if offered is None:
        return None
    return frozenset(offered) | {election.reality}


def _prelude(rule: str, election: RealityAwareElection, offered):
    """Shared first two cases; returns (outcome or None, S_R, net margins)."""
    r = election.reality
    viable = reality_viable_set(election, _offered(election, offered))
    nets = {s: margin(election, s, r) for s in viable}
    if not viable:
        return RuleOutcome(rule, r, r, NO_VIABLE, viable, nets), viable, nets
    cw = condorcet_winner(election, election.sorted(viable))
    if cw is not None:
        return RuleOutcome(rule, r, cw, CONDORCET, viable, nets), viable, nets
    return None, viable, nets


def _pick(election: RealityAwareElection, rule: str, viable, nets, candidates) -> RuleOutcome:
    candidates = frozenset(candidates)
    return RuleOutcome(rule, election.reality, election.lexmin(candidates), CYCLE_FALLBACK,
                       viable, nets, candidates, len(candidates) > 1)


def elect_conservative(election: RealityAwareElection, offered=None) -> RuleOutcome:
    """Condorcet winner of S_R if there is one, otherwise keep Reality."""
    done, viable, nets = _prelude("conservative", election, offered)
    if done is not None:
        return done
    return RuleOutcome("conservative", election.reality, election.reality, CYCLE_FALLBACK,
                       viable, nets)


def elect_permissive(election: RealityAwareElection, offered=None) -> RuleOutcome:
    done, viable, nets = _prelude("permissive", election, offered)
    if done is not None:
        return done
    return _pick(election, "permissive", viable, nets, viable)


def elect_preference_over_reality(election: RealityAwareElection, offered=None) -> RuleOutcome:
    """On a cycle, elect the member of S_R with the largest net margin over Reality."""
    done, viable, nets = _prelude("preference", election, offered)
    if done is not None:
        return done
    best = max(nets.values())
    return _pick(election, "preference", viable, nets, [s for s in viable if nets[s] == best])


def elect_distance_from_reality(election: RealityAwareElection, d: Pseudoquasimetric,
                                offered=None) -> RuleOutcome:
    """On a cycle, elect the member of S_R cheapest to reach from Reality.

    Distance is read as ``d(R, s)``, the cost of moving away from Reality.
    """
    if not isinstance(d, Pseudoquasimetric):
        d = Pseudoquasimetric(d)
    if len(d) != election.n_alternatives:
        raise ValueError("distance table does not match the alternative set")
    done, viable, nets = _prelude("distance", election, offered)
    if done is not None:
        return done
    r = election.reality
    best = min(d(r, s) for s in viable)
    return _pick(election, "distance", viable, nets, [s for s in viable if d(r, s) == best])


def elect_top_cycle(election: RealityAwareElection, offered=None) -> RuleOutcome:
    done, viable, nets = _prelude("top-cycle", election, offered)
    if done is not None:
        return done
    return _pick(election, "top-cycle", viable, nets, top_cycle(election, viable))


def plurality(election: RealityAwareElection, offered=None) -> int:
    """Most first places at the current Reality; ties go to the smallest name.

    Reality-oblivious baseline. With ``offered``, each ballot counts for its
    highest-ranked offered alternative.
    """
    pool = set(election.alternatives) if offered is None else set(_offered(election, offered))
    tops = Counter(next(a for a in order if a in pool) for order in election.current_orders())
    best = max(tops.values())
    return election.lexmin(a for a, n in tops.items() if n == best)


RULES: dict[str, Rule] = {
    "conservative": elect_conservative,
    "permissive": elect_permissive,
    "preference": elect_preference_over_reality,
    "distance": elect_distance_from_reality,
    "top-cycle": elect_top_cycle,
}


def get_rule(name: str, d: Optional[Pseudoquasimetric] = None) -> Rule:
    """Look up a Reality-aware rule by name, binding ``d`` for the distance rule."""
    try:
        rule = RULES[name]
    except KeyError:
        raise ValueError(f"unknown rule {name!r}; choose from {sorted(RULES)}") from None
    if rule is elect_distance_from_reality:
        if d is None:
            raise ValueError("the distance rule needs a distance table")
        return functools.partial(elect_distance_from_reality, d=d)
    return rule
