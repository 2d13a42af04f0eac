import inspect
import itertools
import re

import pytest

from realitychoice.core import (
    condorcet_winner,
    pairwise_tally,
    reality_viable_set,
    top_cycle,
)
import realitychoice.oracle as oracle
from realitychoice.oracle import (
    MAX_ALTERNATIVES,
    brute_condorcet,
    brute_pairwise,
    brute_top_cycle,
    brute_viable_set,
    enumerate_agenda_outcomes,
)
from realitychoice.restrictions import generate_table_election

from corpus import constant_election

A, B, C, R = 0, 1, 2, 3

# the nine ballots of the Richelson example, written out by hand
RICHELSON_BALLOTS = ["asbc"] * 3 + ["csab"] * 4 + ["bsca"] * 2


def test_hand_count_richelson(richelson):
    c_over_s = sum(1 for b in RICHELSON_BALLOTS if b.index("c") < b.index("s"))
    assert (c_over_s, len(RICHELSON_BALLOTS) - c_over_s) == (4, 5)
    t = brute_pairwise(richelson, richelson.index("c"), richelson.index("s"))
    assert (t.for_x, t.for_y) == (4, 5)
    assert brute_viable_set(richelson) == frozenset()


class TestExamples:
    def test_single_voter_margins(self):
        e = constant_election("abc", ["bca"], "a")
        for x, y in itertools.permutations(range(3), 2):
            assert abs(brute_pairwise(e, x, y).margin) == 1

    def test_e4(self, e4):
        assert brute_condorcet(e4, {A, B, C}) is None
        assert brute_top_cycle(e4, {A, B, C}) == {A, B, C}

    def test_unanimous(self, unanimous):
        assert brute_condorcet(unanimous, {0, 1}) == 0
        assert brute_top_cycle(unanimous, {0, 1, 2}) == {0}

    def test_self_comparison(self, e4):
        with pytest.raises(ValueError):
            brute_pairwise(e4, A, A)

    def test_size_guard(self):
        e = generate_table_election(0, MAX_ALTERNATIVES + 1, 1)
        with pytest.raises(ValueError, match="refuses"):
            brute_pairwise(e, 0, 1)


class TestAgendaEnumeration:
    def test_unanimous(self, unanimous):
        assert enumerate_agenda_outcomes(unanimous, "conservative") == {0}

    def test_e4_conservative(self, e4):
        assert enumerate_agenda_outcomes(e4, "conservative") == {R}

    def test_e4_permissive(self, e4):
        assert enumerate_agenda_outcomes(e4, "permissive") <= {A, B, C}

    def test_richelson(self, richelson):
        assert enumerate_agenda_outcomes(richelson, "preference") == {richelson.reality}


class TestAgreement:
    def test_pairwise(self, table_corpus):
        for e in table_corpus:
            for x, y in itertools.permutations(e.alternatives, 2):
                assert brute_pairwise(e, x, y) == pairwise_tally(e, x, y)

    def test_viable_set(self, table_corpus):
        for e in table_corpus:
            for r in e.alternatives:
                assert brute_viable_set(e.at(r)) == reality_viable_set(e.at(r))

    def test_condorcet_and_top_cycle(self, table_corpus):
        for e in table_corpus:
            for k in range(1, e.n_alternatives + 1):
                for subset in itertools.combinations(e.alternatives, k):
                    assert brute_condorcet(e, subset) == condorcet_winner(e, subset)
                    assert brute_top_cycle(e, subset) == top_cycle(e, subset)


def test_oracle_shares_no_tally_code():
    source = inspect.getsource(oracle)
    for name in ("pairwise_tally", "condorcet_winner", "top_cycle", "reality_viable_set",
                 "preference_counts", "margin", "beats"):
        assert not re.search(rf"(?<![\w.]){name}\(", source), name
