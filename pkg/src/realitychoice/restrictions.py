"""Domain restrictions on Reality-aware preferences.

Three nested restrictions are checked here, from weakest to strongest:

* abstract constancy -- a state ranked first from everywhere else stays first
  once it becomes Reality;
* distance constancy -- moving Reality closer to ``a`` and farther from ``b``
  never flips ``a`` above ``b`` into ``b`` above ``a``;
* utility constancy -- each ranking is the decreasing order of transition
  utilities ``U(s') - U(R) - d(R, s')``.

The checkers are exhaustive scans and report the first violation found in
lexicographic (voter, Reality, ...) order, so a witness is deterministic and
can be replayed by hand.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from realitychoice.core import (
    LinearOrder,
    Pseudoquasimetric,
    RealityAwareElection,
    RealityChoiceError,
    TableBallot,
    UtilityTieError,
)


@dataclass(frozen=True)
class StateUtilityTable:
    """``rows[v][s]`` is voter v's utility for state s."""

    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        rows = tuple(tuple(float(u) for u in row) for row in self.rows)
        if not rows:
            raise ValueError("utility table has no voters")
        if len({len(r) for r in rows}) != 1:
            raise ValueError("utility rows must all cover the same states")
        object.__setattr__(self, "rows", rows)

    def __getitem__(self, voter: int) -> tuple[float, ...]:
        return self.rows[voter]

    def __len__(self):
        return len(self.rows)

    @property
    def n_states(self) -> int:
        return len(self.rows[0])


@dataclass(frozen=True)
class Witness:
    """A concrete counterexample to a restriction.

    ``realities`` and ``states`` are listed in the order the definition names
    them. ``template`` spells out the violated condition; ``labels`` maps its
    state placeholders to alternative ids and ``values`` holds the numbers.
    """

    voter: int
    realities: tuple[int, ...]
    states: tuple[int, ...]
    template: str
    labels: dict = field(default_factory=dict, compare=False)
    values: dict = field(default_factory=dict, compare=False)

    def describe(self, names: Optional[Sequence[str]] = None) -> str:
        label = (lambda a: names[a]) if names is not None else str
        return self.template.format(
            **{k: label(a) for k, a in self.labels.items()}, **self.values)

    @property
    def inequality(self) -> str:
        return self.describe()

    def to_dict(self, names: Optional[Sequence[str]] = None) -> dict:
        label = (lambda a: names[a]) if names is not None else (lambda a: a)
        return {
            "voter": self.voter,
            "realities": [label(r) for r in self.realities],
            "states": [label(s) for s in self.states],
            "inequality": self.describe(names),
        }


@dataclass(frozen=True)
class RestrictionVerdict:
    restriction: str
    holds: bool
    witness: Optional[Witness] = None

    def __post_init__(self):
        if not self.holds and self.witness is None:
            raise ValueError("a failing verdict needs a witness")

    def __bool__(self):
        return self.holds


def _realities(election: RealityAwareElection, realities: Optional[Iterable[int]]) -> list[int]:
    if realities is None:
        return list(election.alternatives)
    return sorted(set(realities))


def check_abstract_constancy(election: RealityAwareElection,
                             realities: Optional[Iterable[int]] = None) -> RestrictionVerdict:
    """Abstract constancy over the materialized Realities.

    ``realities`` limits which Realities have known ballots; by default every
    alternative is a materialized Reality.
    """
    scope = _realities(election, realities)
    for v in range(election.n_voters):
        for s in scope:
            others = [r for r in scope if r != s]
            # a lone Reality satisfies the restriction in the empty sense
            if others and all(election.order(v, r).top == s for r in others):
                at_home = election.order(v, s)
                if at_home.top != s:
                    return RestrictionVerdict("abstract", False, Witness(
                        v, (s,), (s, at_home.top),
                        "{s} is top under every other Reality but has position {pos} "
                        "under Reality {s}",
                        {"s": s}, {"pos": at_home.position(s)},
                    ))
    return RestrictionVerdict("abstract", True)


def check_distance_constancy(election: RealityAwareElection, d: Pseudoquasimetric,
                             realities: Optional[Iterable[int]] = None) -> RestrictionVerdict:
    """Distance constancy with respect to ``d``.

    Reads the definition as quantified over every quadruple ``(R, R', a, b)``:
    whenever ``a`` is above ``b`` at ``R``, ``d(R', a) <= d(R, a)`` and
    ``d(R', b) >= d(R, b)``, then ``a`` must stay above ``b`` at ``R'``.
    """
    if not isinstance(d, Pseudoquasimetric):
        d = Pseudoquasimetric(d)
    if len(d) != election.n_alternatives:
        raise ValueError("distance table does not match the alternative set")
    scope = _realities(election, realities)
    m = election.n_alternatives
    for v in range(election.n_voters):
        orders = {r: election.order(v, r) for r in scope}
        for r in scope:
            for r2 in scope:
                if r2 == r:
                    continue
                for a in range(m):
                    for b in range(m):
                        if a == b or not orders[r].prefers(a, b):
                            continue
                        if d(r2, a) <= d(r, a) and d(r2, b) >= d(r, b) \
                                and not orders[r2].prefers(a, b):
                            return RestrictionVerdict("distance", False, Witness(
                                v, (r, r2), (a, b),
                                "{a} above {b} at Reality {R} but not at {R2} although "
                                "d({R2},{a})={d2a} <= d({R},{a})={d1a} and "
                                "d({R2},{b})={d2b} >= d({R},{b})={d1b}",
                                {"R": r, "R2": r2, "a": a, "b": b},
                                {"d1a": d(r, a), "d2a": d(r2, a),
                                 "d1b": d(r, b), "d2b": d(r2, b)},
                            ))
    return RestrictionVerdict("distance", True)


def transition_utility(d: Pseudoquasimetric, utility: Sequence[float], s: int, t: int) -> float:
    """Gain of moving from ``s`` to ``t``: ``U(t) - U(s) - d(s, t)``."""
    return utility[t] - utility[s] - d(s, t)


def induced_order(d: Pseudoquasimetric, utility: Sequence[float], reality: int) -> LinearOrder:
    """Rank states by strictly decreasing transition utility from ``reality``.

    Raises UtilityTieError if two states share a transition utility.
    """
    gains = [transition_utility(d, utility, reality, s) for s in range(len(utility))]
    ranking = sorted(range(len(gains)), key=lambda s: -gains[s])
    for hi, lo in zip(ranking, ranking[1:]):
        if gains[hi] == gains[lo]:
            raise UtilityTieError(reality, (min(hi, lo), max(hi, lo)))
    return LinearOrder(tuple(ranking))


def check_utility_constancy(election: RealityAwareElection, d: Pseudoquasimetric,
                            utilities: StateUtilityTable) -> RestrictionVerdict:
    """Utility constancy: ``s`` above ``s'`` at R iff ``T(R, s) > T(R, s')``.

    Raises UtilityTieError on a transition-utility tie, where the strict
    biconditional cannot be satisfied by any linear order.
    """
    if not isinstance(d, Pseudoquasimetric):
        d = Pseudoquasimetric(d)
    m = election.n_alternatives
    if len(d) != m or utilities.n_states != m:
        raise ValueError("distance/utility tables do not match the alternative set")
    if len(utilities) != election.n_voters:
        raise ValueError("utility table needs one row per voter")
    for v in range(election.n_voters):
        u = utilities[v]
        for r in range(m):
            order = election.order(v, r)
            gains = [transition_utility(d, u, r, s) for s in range(m)]
            for s in range(m):
                for t in range(s + 1, m):
                    if gains[s] == gains[t]:
                        raise UtilityTieError(r, (s, t))
                    above = order.prefers(s, t)
                    if above != (gains[s] > gains[t]):
                        hi, lo = (s, t) if above else (t, s)
                        return RestrictionVerdict("utility", False, Witness(
                            v, (r,), (hi, lo),
                            "{hi} above {lo} at Reality {R} but "
                            "T({R},{hi})={t_hi} < T({R},{lo})={t_lo}",
                            {"R": r, "hi": hi, "lo": lo},
                            {"t_hi": gains[hi], "t_lo": gains[lo]},
                        ))
    return RestrictionVerdict("utility", True)


class GeneratorError(RealityChoiceError):
    """Random instance generation gave up after too many retries."""


def state_names(n: int) -> tuple[str, ...]:
    if n <= 26:
        return tuple(chr(ord("a") + i) for i in range(n))
    return tuple(f"s{i}" for i in range(n))


def shortest_path_closure(weights: Sequence[Sequence[float]]) -> list[list[float]]:
    """Floyd-Warshall closure of a complete nonnegative weighted digraph."""
    n = len(weights)
    dist = [[0 if i == j else weights[i][j] for j in range(n)] for i in range(n)]
    for k in range(n):
        dk = dist[k]
        for i in range(n):
            di = dist[i]
            dik = di[k]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return dist


@dataclass(frozen=True)
class GeneratedInstance:
    election: RealityAwareElection
    distance: Pseudoquasimetric
    utilities: StateUtilityTable
    attempts: int = field(default=1, compare=False)

    def __iter__(self):
        return iter((self.election, self.distance, self.utilities))


def generate_utility_constant_election(seed, n_states: int, n_voters: int,
                                       weight_range: tuple[int, int] = (0, 10),
                                       utility_range: tuple[float, float] = (0.0, 10.0),
                                       max_attempts: int = 100) -> GeneratedInstance:
    """Random utility-constant election, deterministic in ``seed``.

    Distances are the shortest-path closure of integer arc weights drawn from
    ``weight_range``; utilities are uniform in ``utility_range`` and get
    re-perturbed until every voter's transition utilities are pairwise
    distinct at every Reality. Ballots are the induced orders, materialized
    into tables. The result unpacks as ``(election, d, U)``.
    """
    if n_states < 1 or n_voters < 1:
        raise ValueError("n_states and n_voters must be positive")
    rng = random.Random(seed)
    lo_w, hi_w = weight_range
    weights = [[rng.randint(lo_w, hi_w) for _ in range(n_states)] for _ in range(n_states)]
    d = Pseudoquasimetric(shortest_path_closure(weights))
    lo_u, hi_u = utility_range
    rows = []
    attempts = 0
    for _ in range(n_voters):
        row = [rng.uniform(lo_u, hi_u) for _ in range(n_states)]
        while True:
            attempts += 1
            try:
                ballot = TableBallot(tuple(induced_order(d, row, r) for r in range(n_states)))
                break
            except UtilityTieError as exc:
                if attempts >= max_attempts * n_voters:
                    raise GeneratorError(
                        f"could not break utility ties after {attempts} attempts"
                    ) from exc
                s, t = exc.pair
                row[t] += rng.uniform(1e-6, 1e-3) * (1 + abs(hi_u - lo_u))
        rows.append((tuple(row), ballot))
    election = RealityAwareElection(
        state_names(n_states), tuple(b for _, b in rows), rng.randrange(n_states))
    return GeneratedInstance(election, d, StateUtilityTable(tuple(r for r, _ in rows)), attempts)


def generate_table_election(seed, n_alternatives: int, n_voters: int,
                            constant: bool = False) -> RealityAwareElection:
    """Impartial-culture Reality-aware election, deterministic in ``seed``.

    Each voter draws an independent uniform ranking for every Reality (or one
    ranking shared by all Realities when ``constant``).
    """
    if n_alternatives < 1 or n_voters < 1:
        raise ValueError("n_alternatives and n_voters must be positive")
    rng = random.Random(seed)

    def draw():
        ranking = list(range(n_alternatives))
        rng.shuffle(ranking)
        return LinearOrder(tuple(ranking))

    ballots = []
    for _ in range(n_voters):
        if constant:
            ballots.append(TableBallot.constant(draw()))
        else:
            ballots.append(TableBallot(tuple(draw() for _ in range(n_alternatives))))
    return RealityAwareElection(state_names(n_alternatives), tuple(ballots),
                                rng.randrange(n_alternatives))
