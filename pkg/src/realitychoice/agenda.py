"""Reality-aware amendment agenda.

A show-of-hands procedure. Reality opens as the incumbent and every
Reality-viable alternative challenges the incumbent in turn. The final
incumbent then faces each member of S_R it has not already beaten. If it wins
all of those votes it is elected; otherwise the variant decides:

* ``conservative`` keeps Reality,
* ``permissive`` elects the lexicographically smallest member of S_R,
* ``preference`` elects the member of S_R with the largest net margin over
  Reality (smallest name on ties).

A tied vote never unseats the incumbent and never counts as a win in the
extra phase.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from realitychoice.core import (
    MajorityTally,
    RealityAwareElection,
    condorcet_winner,
    margin,
    pairwise_tally,
    reality_viable_set,
)
from realitychoice.rules import (
    CONDORCET,
    CYCLE_FALLBACK,
    NO_VIABLE,
    RuleOutcome,
    elect_conservative,
)

VARIANTS = ("conservative", "permissive", "preference")

AMENDMENT = "amendment"
EXTRA = "extra"

MAX_ENUMERATION = 7


@dataclass(frozen=True)
class Vote:
    incumbent: int
    challenger: int
    tally: MajorityTally
    survivor: int
    phase: str

    def to_dict(self, names) -> dict:
        return {
            "phase": self.phase,
            "incumbent": names[self.incumbent],
            "challenger": names[self.challenger],
            "for_incumbent": self.tally.for_x,
            "for_challenger": self.tally.for_y,
            "survivor": names[self.survivor],
        }


@dataclass(frozen=True)
class VoteTrace:
    """Every pairwise vote taken, in order, plus the final disposition.

    ``reason`` is one of ``"no-viable"``, ``"won-all"`` or
    ``"<variant>-fallback"``.
    """

    reality: int
    arrangement: tuple[int, ...]
    votes: tuple[Vote, ...]
    elected: int
    reason: str
    amendment_winner: Optional[int] = None

    @property
    def amendment_votes(self) -> tuple[Vote, ...]:
        return tuple(v for v in self.votes if v.phase == AMENDMENT)

    @property
    def extra_votes(self) -> tuple[Vote, ...]:
        return tuple(v for v in self.votes if v.phase == EXTRA)

    def to_dict(self, names) -> dict:
        return {
            "reality": names[self.reality],
            "arrangement": [names[a] for a in self.arrangement],
            "votes": [v.to_dict(names) for v in self.votes],
            "amendment_winner": None if self.amendment_winner is None
            else names[self.amendment_winner],
            "elected": names[self.elected],
            "reason": self.reason,
        }


def _vote(election, incumbent, challenger, phase) -> Vote:
    tally = pairwise_tally(election, incumbent, challenger)
    survivor = challenger if tally.for_y > tally.for_x else incumbent
    return Vote(incumbent, challenger, tally, survivor, phase)


def run_agenda(election: RealityAwareElection, variant: str = "conservative",
               arrangement: Optional[Sequence[int]] = None):
    """Run the agenda at the election's current Reality.

    ``arrangement`` orders the members of S_R for the amendment phase and
    must be a permutation of S_R; it defaults to ascending name order.

    Returns ``(RuleOutcome, VoteTrace)``.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown agenda variant {variant!r}; choose from {VARIANTS}")
    r = election.reality
    viable = reality_viable_set(election)
    nets = {s: margin(election, s, r) for s in viable}
    if arrangement is None:
        arrangement = tuple(election.sorted(viable))
    else:
        arrangement = tuple(arrangement)
        if len(arrangement) != len(viable) or set(arrangement) != viable:
            raise ValueError(
                f"arrangement {[election.name(a) for a in arrangement]} is not a permutation "
                f"of the Reality-viable set {[election.name(a) for a in election.sorted(viable)]}")
    rule = f"agenda-{variant}"
    if not viable:
        outcome = RuleOutcome(rule, r, r, NO_VIABLE, viable, nets)
        return outcome, VoteTrace(r, (), (), r, "no-viable")

    votes = []
    incumbent = r
    for challenger in arrangement:
        vote = _vote(election, incumbent, challenger, AMENDMENT)
        votes.append(vote)
        incumbent = vote.survivor
    winner = incumbent

    # skip only opponents the winner has already beaten; a tied vote is retaken
    beaten = set()
    for vote in votes:
        if winner in (vote.incumbent, vote.challenger):
            other = vote.challenger if vote.incumbent == winner else vote.incumbent
            if vote.tally.winner == winner:
                beaten.add(other)
    won_all = True
    for opponent in arrangement:
        if opponent == winner or opponent in beaten:
            continue
        vote = _vote(election, winner, opponent, EXTRA)
        votes.append(vote)
        if vote.tally.winner != winner:
            won_all = False
            break

    if won_all:
        outcome = RuleOutcome(rule, r, winner, CONDORCET, viable, nets)
        return outcome, VoteTrace(r, arrangement, tuple(votes), winner, "won-all", winner)

    if variant == "conservative":
        elected, candidates = r, frozenset()
    elif variant == "permissive":
        candidates = viable
        elected = election.lexmin(candidates)
    else:
        best = max(nets.values())
        candidates = frozenset(s for s in viable if nets[s] == best)
        elected = election.lexmin(candidates)
    outcome = RuleOutcome(rule, r, elected, CYCLE_FALLBACK, viable, nets, candidates,
                          len(candidates) > 1)
    return outcome, VoteTrace(r, arrangement, tuple(votes), elected, f"{variant}-fallback",
                              winner)


def _arrangements(election, viable, all_arrangements):
    if not all_arrangements:
        return [None]
    if len(viable) > MAX_ENUMERATION:
        raise ValueError(
            f"|S_R| = {len(viable)} exceeds the enumeration guard of {MAX_ENUMERATION}")
    return itertools.permutations(election.sorted(viable))


@dataclass
class CriterionReport:
    ok: bool
    checked: int = 0
    discrepancies: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def agenda_matches_criterion(election: RealityAwareElection, variant: str,
                             all_arrangements: bool = False) -> CriterionReport:
    """Check the agenda's winner against its Reality-aware Condorcet criterion.

    With ``all_arrangements`` every ordering of S_R is tried (guarded at
    ``|S_R| <= 7``); otherwise only the default ordering.
    """
    if variant not in VARIANTS:
        raise ValueError(f"unknown agenda variant {variant!r}")
    r = election.reality
    viable = reality_viable_set(election)
    cw = condorcet_winner(election, election.sorted(viable))
    nets = {s: margin(election, s, r) for s in viable}
    expected = elect_conservative(election).winner
    report = CriterionReport(True)
    for arrangement in _arrangements(election, viable, all_arrangements):
        outcome, _ = run_agenda(election, variant, arrangement)
        w = outcome.winner
        report.checked += 1
        problem = None
        if variant == "conservative":
            if w != expected:
                problem = f"elected {w}, conservative rule elects {expected}"
        elif not viable:
            if w != r:
                problem = f"S_R empty but elected {w} instead of Reality {r}"
        elif w not in viable:
            problem = f"elected {w} outside S_R"
        elif cw is not None and w != cw:
            problem = f"elected {w} but {cw} is the Condorcet winner of S_R"
        elif variant == "preference" and cw is None and nets[w] != max(nets.values()):
            problem = f"fallback {w} does not maximise the net margin over Reality"
        if problem is not None:
            report.ok = False
            report.discrepancies.append((arrangement, problem))
    return report


def vote_bound(n_viable: int) -> int:
    """Upper bound on pairwise votes in one agenda run."""
    return 0 if n_viable == 0 else 2 * n_viable - 1
