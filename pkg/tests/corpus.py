"""Seeded election corpora shared by the property and acceptance tests."""

from pathlib import Path

from realitychoice.core import RealityAwareElection, TableBallot
from realitychoice.electionfile import load_election
from realitychoice.restrictions import generate_table_election, generate_utility_constant_election

DATA = Path(__file__).parent / "data"


def load(name):
    return load_election(DATA / f"{name}.json")


def table_corpus(count=600):
    """3-6 alternatives, 1-9 voters, odd and even; every third profile is Reality-constant."""
    out = []
    for seed in range(count):
        m = 3 + seed % 4
        n = 1 + (seed // 4) % 9
        out.append(generate_table_election(seed, m, n, constant=seed % 3 == 0))
    return out


def utility_corpus(count=1000):
    """Utility-constant instances with 2-5 states and 1-6 voters."""
    return [generate_utility_constant_election(seed, 2 + seed % 4, 1 + (seed // 4) % 6)
            for seed in range(count)]


def constant_election(names, rankings, reality):
    """Election whose voters rank identically under every Reality.

    ``rankings`` are strings of single-letter names, best first.
    """
    idx = {n: i for i, n in enumerate(names)}
    ballots = [TableBallot.constant([idx[c] for c in r]) for r in rankings]
    return RealityAwareElection(tuple(names), tuple(ballots), idx[reality])
