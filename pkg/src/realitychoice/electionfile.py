"""JSON election files and replayable trace files.

An election file looks like::

    {
      "alternatives": ["a", "b", "c", "r"],
      "reality": "r",
      "voters": [
        {"table": {"a": ["b", "c", "a", "r"], "b": [...], "c": [...], "r": [...]}},
        {"utility": [0.0, 4.5, 2.0, 1.0]}
      ],
      "distance": [[0, 1, 2, 1], ...],
      "accessibility": [["r", "a"], ["a", "b"]]
    }

Table voters give one ranking per Reality, keyed by Reality name. Utility
voters give one utility per alternative and need ``distance``; their
rankings are the induced orders. A table voter may also carry a
``utility`` row, which is then only used by the utility-constancy check and
the strategic game.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

from realitychoice.actionplan import AccessibilityMask
from realitychoice.core import (
    LinearOrder,
    MetricError,
    Pseudoquasimetric,
    RealityAwareElection,
    TableBallot,
    UtilityBallot,
    UtilityTieError,
)
from realitychoice.restrictions import StateUtilityTable

TRACE_KINDS = ("rule", "agenda", "plan", "game", "check")


class ElectionFileError(ValueError):
    """Malformed or inconsistent election file; ``where`` locates the problem."""

    def __init__(self, where: str, message: str):
        super().__init__(f"{where}: {message}")
        self.where = where


@dataclass(frozen=True)
class ElectionData:
    election: RealityAwareElection
    distance: Optional[Pseudoquasimetric] = None
    utility_rows: tuple = ()
    accessibility: Optional[AccessibilityMask] = None

    @property
    def utilities(self) -> Optional[StateUtilityTable]:
        """Utility table if every voter has a utility row, else None."""
        rows = self.utility_rows
        if not rows or any(row is None for row in rows):
            return None
        return StateUtilityTable(tuple(rows))


def _require(cond, where, message):
    if not cond:
        raise ElectionFileError(where, message)


def _number(x, where):
    _require(isinstance(x, (int, float)) and not isinstance(x, bool), where,
             f"expected a number, got {x!r}")
    return x


def parse_election(doc: dict) -> ElectionData:
    """Validate a decoded election document and build the data model."""
    _require(isinstance(doc, dict), "$", "top level must be an object")
    unknown = set(doc) - {"alternatives", "reality", "voters", "distance", "accessibility"}
    _require(not unknown, "$", f"unknown keys {sorted(unknown)}")
    names = doc.get("alternatives")
    _require(isinstance(names, list) and names, "$.alternatives",
             "must be a nonempty list of names")
    for i, name in enumerate(names):
        _require(isinstance(name, str) and name, f"$.alternatives[{i}]",
                 "names must be nonempty strings")
    _require(len(set(names)) == len(names), "$.alternatives", "names must be unique")
    index = {name: i for i, name in enumerate(names)}
    m = len(names)

    def resolve(name, where):
        _require(name in index, where, f"unknown alternative {name!r}")
        return index[name]

    reality = resolve(doc.get("reality"), "$.reality")

    distance = None
    if "distance" in doc:
        table = doc["distance"]
        _require(isinstance(table, list) and len(table) == m
                 and all(isinstance(row, list) and len(row) == m for row in table),
                 "$.distance", f"must be a {m}x{m} matrix")
        rows = [[_number(x, f"$.distance[{i}][{j}]") for j, x in enumerate(row)]
                for i, row in enumerate(table)]
        try:
            distance = Pseudoquasimetric(rows)
        except MetricError as exc:
            w = exc.report.witness
            raise ElectionFileError(
                "$.distance", f"{exc.report.axiom} violated at "
                f"({', '.join(names[i] for i in w)})") from None

    voters = doc.get("voters")
    _require(isinstance(voters, list) and voters, "$.voters", "need at least one voter")
    ballots = []
    utility_rows = []
    for v, entry in enumerate(voters):
        where = f"$.voters[{v}]"
        _require(isinstance(entry, dict) and entry and set(entry) <= {"table", "utility"},
                 where, "voter must have a 'table' and/or a 'utility' entry")
        row = None
        if "utility" in entry:
            raw = entry["utility"]
            _require(isinstance(raw, list) and len(raw) == m, f"{where}.utility",
                     f"must list {m} utilities")
            row = tuple(_number(x, f"{where}.utility[{i}]") for i, x in enumerate(raw))
        if "table" in entry:
            table = entry["table"]
            _require(isinstance(table, dict), f"{where}.table", "must map Reality names to rankings")
            missing = [n for n in names if n not in table]
            _require(not missing, f"{where}.table", f"missing Realities {missing}")
            extra = [k for k in table if k not in index]
            _require(not extra, f"{where}.table", f"unknown Realities {extra}")
            orders = []
            for name in names:
                ranking = table[name]
                w = f"{where}.table.{name}"
                _require(isinstance(ranking, list), w, "ranking must be a list")
                ids = [resolve(x, w) for x in ranking]
                _require(sorted(ids) == list(range(m)), w,
                         "ranking must list every alternative exactly once")
                orders.append(LinearOrder(tuple(ids)))
            ballots.append(TableBallot(tuple(orders)))
        else:
            _require(distance is not None, f"{where}.utility", "utility voters need 'distance'")
            ballot = UtilityBallot(distance, row)
            try:
                for r in range(m):
                    ballot.order_at(r)
            except UtilityTieError as exc:
                raise ElectionFileError(
                    f"{where}.utility", f"transition-utility tie at Reality {names[exc.reality]} "
                    f"between {names[exc.pair[0]]} and {names[exc.pair[1]]}") from None
            ballots.append(ballot)
        utility_rows.append(row)

    mask = None
    if "accessibility" in doc:
        pairs = doc["accessibility"]
        _require(isinstance(pairs, list), "$.accessibility", "must be a list of [from, to] pairs")
        resolved = []
        for i, pair in enumerate(pairs):
            w = f"$.accessibility[{i}]"
            _require(isinstance(pair, list) and len(pair) == 2, w, "must be a [from, to] pair")
            resolved.append((resolve(pair[0], w), resolve(pair[1], w)))
        mask = AccessibilityMask.from_pairs(resolved)

    election = RealityAwareElection(tuple(names), tuple(ballots), reality)
    return ElectionData(election, distance, tuple(utility_rows), mask)


def loads_election(text: str) -> ElectionData:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ElectionFileError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    return parse_election(doc)


def load_election(path) -> ElectionData:
    with open(path, encoding="utf-8") as f:
        return loads_election(f.read())


def serialize_election(data: ElectionData) -> dict:
    election = data.election
    names = election.names
    voters = []
    for ballot, row in zip(election.ballots, data.utility_rows or (None,) * election.n_voters):
        if isinstance(ballot, UtilityBallot):
            voters.append({"utility": list(ballot.utility)})
            continue
        entry = {"table": {names[r]: [names[a] for a in ballot.order_at(r)]
                           for r in election.alternatives}}
        if row is not None:
            entry["utility"] = list(row)
        voters.append(entry)
    doc = {"alternatives": list(names), "reality": names[election.reality], "voters": voters}
    if data.distance is not None:
        doc["distance"] = data.distance.to_lists()
    if data.accessibility is not None and data.accessibility.pairs is not None:
        doc["accessibility"] = [[names[s], names[t]]
                                for s, t in sorted(data.accessibility.pairs)]
    return doc


def dumps_json(doc) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def digest(data: ElectionData) -> str:
    """Content hash of the parsed election, independent of file formatting."""
    canonical = json.dumps(serialize_election(data), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(canonical.encode("utf-8")).hexdigest()


def make_trace(kind: str, data: ElectionData, params: dict, result: dict) -> dict:
    if kind not in TRACE_KINDS:
        raise ValueError(f"unknown trace kind {kind!r}")
    return {"kind": kind, "input_digest": digest(data), "params": params, "result": result}
