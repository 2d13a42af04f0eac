"""Naive reference implementations used to certify the production code.

Nothing here calls into the tally, Condorcet or top-cycle code of
:mod:`realitychoice.core`; rankings are read straight off the ballots and
compared with ``list.index``. Everything is deliberately slow and guarded to
desk-scale inputs.
"""

import itertools

from realitychoice.core import MajorityTally

MAX_ALTERNATIVES = 9
MAX_VIABLE = 7


def _guard(election):
    if election.n_alternatives > MAX_ALTERNATIVES:
        raise ValueError(f"oracle refuses more than {MAX_ALTERNATIVES} alternatives")


def _rankings(election):
    r = election.reality
    return [list(ballot.order_at(r).ranking) for ballot in election.ballots]


def brute_pairwise(election, x, y):
    if x == y:
        raise ValueError(f"self-comparison of alternative {x}")
    _guard(election)
    for_x = 0
    for_y = 0
    for ranking in _rankings(election):
        if ranking.index(x) < ranking.index(y):
            for_x += 1
        else:
            for_y += 1
    return MajorityTally(x, y, for_x, for_y)


def _brute_beats(election, x, y):
    t = brute_pairwise(election, x, y)
    return t.for_x > t.for_y


def brute_viable_set(election):
    r = election.reality
    return frozenset(s for s in range(election.n_alternatives)
                     if s != r and _brute_beats(election, s, r))


def brute_condorcet(election, subset):
    subset = list(subset)
    winners = [x for x in subset
               if all(_brute_beats(election, x, y) for y in subset if y != x)]
    assert len(winners) <= 1, "two Condorcet winners cannot exist"
    return winners[0] if winners else None


def brute_top_cycle(election, subset):
    """Smallest dominant subset, by trying every subset in order of size."""
    subset = sorted(set(subset))
    if not subset:
        raise ValueError("empty tournament")
    for size in range(1, len(subset) + 1):
        for cand in itertools.combinations(subset, size):
            rest = [y for y in subset if y not in cand]
            if all(_brute_beats(election, d, y) for d in cand for y in rest):
                return frozenset(cand)
    raise AssertionError("the full set is always dominant")


def enumerate_agenda_outcomes(election, variant):
    """Winners of the agenda over every arrangement of the Reality-viable set."""
    from realitychoice.agenda import run_agenda

    viable = sorted(brute_viable_set(election), key=lambda a: election.names[a])
    if len(viable) > MAX_VIABLE:
        raise ValueError(f"oracle refuses |S_R| > {MAX_VIABLE}")
    if not viable:
        return {run_agenda(election, variant)[0].winner}
    return {run_agenda(election, variant, arrangement)[0].winner
            for arrangement in itertools.permutations(viable)}
