"""Foundational types for Reality-aware elections.

Alternatives are dense integer ids ``0..m-1`` into ``RealityAwareElection.names``.
Every alternative doubles as a possible Reality, so a voter's ballot is a map
from Reality to a :class:`LinearOrder` over all alternatives.

Tournament primitives (pairwise tallies, the Reality-viable set, Condorcet
winners and the top cycle) always read the ballots at the election's current
Reality.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence, Union


class RealityChoiceError(Exception):
    """Base class for errors raised by this package."""


class MetricError(RealityChoiceError, ValueError):
    """A distance table violates a pseudoquasimetric axiom."""

    def __init__(self, report: "MetricReport"):
        super().__init__(report.describe())
        self.report = report


class UtilityTieError(RealityChoiceError, ValueError):
    """Two transition utilities coincide, so no strict induced order exists."""

    def __init__(self, reality: int, pair: tuple[int, int]):
        super().__init__(
            f"utility tie at Reality {reality}: states {pair[0]} and {pair[1]}"
        )
        self.reality = reality
        self.pair = pair


@dataclass(frozen=True)
class LinearOrder:
    """A strict ranking of alternatives ``0..m-1``, best first."""

    ranking: tuple[int, ...]
    _rank: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ranking = tuple(int(x) for x in self.ranking)
        if sorted(ranking) != list(range(len(ranking))):
            raise ValueError(f"not a permutation of 0..{len(ranking) - 1}: {ranking}")
        rank = [0] * len(ranking)
        for pos, alt in enumerate(ranking, start=1):
            rank[alt] = pos
        object.__setattr__(self, "ranking", ranking)
        object.__setattr__(self, "_rank", tuple(rank))

    def __len__(self):
        return len(self.ranking)

    def __iter__(self):
        return iter(self.ranking)

    def __getitem__(self, index):
        return self.ranking[index]

    @property
    def top(self) -> int:
        return self.ranking[0]

    def position(self, alt: int) -> int:
        """1-based rank of ``alt``; 1 is the most preferred."""
        if not isinstance(alt, int) or not 0 <= alt < len(self._rank):
            raise ValueError(f"alternative not in order: {alt!r}")
        return self._rank[alt]

    def prefers(self, x: int, y: int) -> bool:
        return self.position(x) < self.position(y)


def position(order: LinearOrder, alt: int) -> int:
    return order.position(alt)


# ---------------------------------------------------------------------------
# Distances

@dataclass(frozen=True)
class MetricReport:
    """Outcome of :func:`validate_pseudoquasimetric`.

    ``axiom`` is one of ``"finite"``, ``"nonnegativity"``, ``"zero-diagonal"``
    or ``"triangle"``; ``witness`` holds the offending indices (a pair for the
    first three, the triple ``(s, s', s'')`` for the triangle inequality).
    """

    ok: bool
    axiom: Optional[str] = None
    witness: tuple[int, ...] = ()

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "ok"
        w = ", ".join(str(i) for i in self.witness)
        return f"{self.axiom} violated at ({w})"


def validate_pseudoquasimetric(table, rel_tol: float = 1e-9) -> MetricReport:
    """Check nonnegativity, zero self-distance and the triangle inequality.

    Symmetry is not required. The triangle check allows a relative slack of
    ``rel_tol`` so that tables produced by floating-point shortest-path
    closures are accepted; pass ``rel_tol=0`` for an exact check.

    Raises ValueError if ``table`` is not square.
    """
    rows = [list(r) for r in table]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError(f"distance table is not square: {[len(r) for r in rows]} x {n}")
    for i in range(n):
        for j in range(n):
            if not math.isfinite(rows[i][j]):
                return MetricReport(False, "finite", (i, j))
    for i in range(n):
        for j in range(n):
            if rows[i][j] < 0:
                return MetricReport(False, "nonnegativity", (i, j))
    for i in range(n):
        if rows[i][i] != 0:
            return MetricReport(False, "zero-diagonal", (i, i))
    for s in range(n):
        for mid in range(n):
            for t in range(n):
                rhs = rows[s][mid] + rows[mid][t]
                if rows[s][t] > rhs + rel_tol * max(1.0, abs(rhs)):
                    return MetricReport(False, "triangle", (s, mid, t))
    return MetricReport(True)


@dataclass(frozen=True)
class Pseudoquasimetric:
    """Validated, possibly asymmetric, distance table over states.

    ``d(s, t)`` reads as the cost of moving from ``s`` to ``t``.
    """

    dist: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        dist = tuple(tuple(row) for row in self.dist)
        report = validate_pseudoquasimetric(dist)
        if not report.ok:
            raise MetricError(report)
        object.__setattr__(self, "dist", dist)

    @classmethod
    def zeros(cls, n: int) -> "Pseudoquasimetric":
        return cls(tuple((0,) * n for _ in range(n)))

    def __call__(self, s: int, t: int) -> float:
        return self.dist[s][t]

    def __len__(self):
        return len(self.dist)

    def scaled(self, factor: float) -> "Pseudoquasimetric":
        if factor <= 0:
            raise ValueError("scale factor must be positive")
        return Pseudoquasimetric(tuple(tuple(x * factor for x in row) for row in self.dist))

    def to_lists(self) -> list[list[float]]:
        return [list(row) for row in self.dist]


# ---------------------------------------------------------------------------
# Ballots and elections

@dataclass(frozen=True)
class TableBallot:
    """Explicit Reality-indexed ballot: ``orders[R]`` is the ranking under Reality R."""

    orders: tuple[LinearOrder, ...]

    def __post_init__(self):
        orders = tuple(o if isinstance(o, LinearOrder) else LinearOrder(o) for o in self.orders)
        if not orders:
            raise ValueError("ballot has no orders")
        if any(len(o) != len(orders) for o in orders):
            raise ValueError("each order must rank every alternative, one order per Reality")
        object.__setattr__(self, "orders", orders)

    @classmethod
    def constant(cls, order: Union[LinearOrder, Sequence[int]]) -> "TableBallot":
        """Same ranking under every Reality."""
        order = order if isinstance(order, LinearOrder) else LinearOrder(order)
        return cls((order,) * len(order))

    @property
    def n_states(self) -> int:
        return len(self.orders)

    def order_at(self, reality: int) -> LinearOrder:
        return self.orders[reality]


@dataclass(frozen=True)
class UtilityBallot:
    """Ballot derived from a distance table and one voter's state utilities.

    Orders are materialized on first use and cached per Reality.
    """

    distance: Pseudoquasimetric
    utility: tuple[float, ...]
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "utility", tuple(self.utility))
        if len(self.utility) != len(self.distance):
            raise ValueError("utility row and distance table sizes differ")

    @property
    def n_states(self) -> int:
        return len(self.utility)

    def order_at(self, reality: int) -> LinearOrder:
        order = self._cache.get(reality)
        if order is None:
            from realitychoice.restrictions import induced_order

            order = induced_order(self.distance, self.utility, reality)
            self._cache[reality] = order
        return order

    def materialize(self) -> TableBallot:
        return TableBallot(tuple(self.order_at(r) for r in range(self.n_states)))


Ballot = Union[TableBallot, UtilityBallot]


@dataclass(frozen=True)
class RealityAwareElection:
    """Alternatives, Reality-indexed ballots and the current Reality."""

    names: tuple[str, ...]
    ballots: tuple[Ballot, ...]
    reality: int
    _counts: dict = field(default_factory=dict, init=False, repr=False, compare=False)

    def __post_init__(self):
        names = tuple(self.names)
        ballots = tuple(self.ballots)
        object.__setattr__(self, "names", names)
        object.__setattr__(self, "ballots", ballots)
        if not names:
            raise ValueError("election needs at least one alternative")
        if any(not isinstance(n, str) or not n for n in names):
            raise ValueError("alternative names must be nonempty strings")
        if len(set(names)) != len(names):
            raise ValueError("alternative names must be unique")
        if not ballots:
            raise ValueError("election needs at least one voter")
        for v, b in enumerate(ballots):
            if b.n_states != len(names):
                raise ValueError(
                    f"voter {v} ballot covers {b.n_states} alternatives, expected {len(names)}"
                )
        if not isinstance(self.reality, int) or not 0 <= self.reality < len(names):
            raise ValueError(f"reality {self.reality!r} is not an alternative")

    @property
    def n_alternatives(self) -> int:
        return len(self.names)

    @property
    def n_voters(self) -> int:
        return len(self.ballots)

    @property
    def alternatives(self) -> range:
        return range(len(self.names))

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown alternative {name!r}") from None

    def name(self, alt: int) -> str:
        return self.names[alt]

    def sorted(self, alts: Iterable[int]) -> list[int]:
        """Alternatives in lexicographic order of their names."""
        return sorted(alts, key=lambda a: self.names[a])

    def lexmin(self, alts: Iterable[int]) -> int:
        return min(alts, key=lambda a: self.names[a])

    def at(self, reality: int) -> "RealityAwareElection":
        """The same electorate with a different current Reality."""
        if reality == self.reality:
            return self
        return replace(self, reality=reality)

    def order(self, voter: int, reality: Optional[int] = None) -> LinearOrder:
        return self.ballots[voter].order_at(self.reality if reality is None else reality)

    def current_orders(self) -> list[LinearOrder]:
        return [b.order_at(self.reality) for b in self.ballots]

    def preference_counts(self) -> tuple[tuple[int, ...], ...]:
        """``counts[x][y]`` voters ranking x above y at the current Reality (cached)."""
        counts = self._counts.get(self.reality)
        if counts is None:
            m = self.n_alternatives
            table = [[0] * m for _ in range(m)]
            for order in self.current_orders():
                ranking = order.ranking
                for i, x in enumerate(ranking):
                    row = table[x]
                    for y in ranking[i + 1:]:
                        row[y] += 1
            counts = tuple(tuple(row) for row in table)
            self._counts[self.reality] = counts
        return counts


# ---------------------------------------------------------------------------
# Tournament primitives

@dataclass(frozen=True)
class MajorityTally:
    """Head-to-head count of ``x`` against ``y`` at one Reality."""

    x: int
    y: int
    for_x: int
    for_y: int

    @property
    def margin(self) -> int:
        return self.for_x - self.for_y

    @property
    def winner(self) -> Optional[int]:
        """``x`` or ``y`` on a strict majority, ``None`` on a tie."""
        if self.for_x > self.for_y:
            return self.x
        if self.for_y > self.for_x:
            return self.y
        return None


def pairwise_tally(election: RealityAwareElection, x: int, y: int) -> MajorityTally:
    if x == y:
        raise ValueError(f"self-comparison of alternative {x}")
    m = election.n_alternatives
    for alt in (x, y):
        if not isinstance(alt, int) or not 0 <= alt < m:
            raise ValueError(f"alternative not in election: {alt!r}")
    for_x = election.preference_counts()[x][y]
    return MajorityTally(x, y, for_x, election.n_voters - for_x)


def margin(election: RealityAwareElection, x: int, y: int) -> int:
    return pairwise_tally(election, x, y).margin


def beats(election: RealityAwareElection, x: int, y: int) -> bool:
    """Strict majority of ``x`` over ``y``; ties do not beat."""
    return x != y and margin(election, x, y) > 0


def reality_viable_set(election: RealityAwareElection, offered: Optional[Iterable[int]] = None
                       ) -> frozenset[int]:
    """Alternatives beating the current Reality by strict majority.

    ``offered`` restricts the candidates (Reality itself is never a member).
    """
    r = election.reality
    pool = election.alternatives if offered is None else offered
    return frozenset(s for s in pool if s != r and margin(election, s, r) > 0)


def condorcet_winner(election: RealityAwareElection, subset: Iterable[int]) -> Optional[int]:
    subset = list(dict.fromkeys(subset))
    for x in subset:
        if all(beats(election, x, y) for y in subset if y != x):
            return x
    return None


def top_cycle(election: RealityAwareElection, subset: Iterable[int]) -> frozenset[int]:
    """Smallest nonempty ``D`` within ``subset`` whose members all beat every outsider.

    Pairwise ties count as no edge. Dominant sets are nested, so the minimum is
    unique: for each ``x`` take everything that reaches ``x`` through "beats or
    ties" steps, and keep the smallest such closure.
    """
    subset = list(dict.fromkeys(subset))
    if not subset:
        raise ValueError("empty tournament")
    not_beaten_by = {
        x: [y for y in subset if y != x and not beats(election, x, y)] for x in subset
    }
    best = None
    for x in subset:
        closure = {x}
        stack = [x]
        while stack:
            z = stack.pop()
            for y in not_beaten_by[z]:
                if y not in closure:
                    closure.add(y)
                    stack.append(y)
        if best is None or len(closure) < len(best):
            best = closure
    return frozenset(best)
