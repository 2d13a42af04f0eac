import json
from pathlib import Path

import pytest

from realitychoice import cli
from realitychoice.cli import main
from realitychoice.electionfile import (
    ElectionFileError,
    digest,
    dumps_json,
    load_election,
    loads_election,
    parse_election,
    serialize_election,
)
from realitychoice.restrictions import GeneratorError

from corpus import DATA

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


def write(tmp_path, doc, name="e.json"):
    path = tmp_path / name
    path.write_text(doc if isinstance(doc, str) else json.dumps(doc), encoding="utf-8")
    return path


class TestCheck:
    def test_richelson_holds(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "richelson.json")
        assert code == 0
        assert "abstract constancy: holds" in out

    def test_example4_violated(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "example4.json")
        assert code == 1
        assert "abstract constancy: holds" in out
        assert "distance constancy: VIOLATED" in out
        assert "voter 0" in out

    def test_utility_file_holds(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "strategic_game.json")
        assert code == 0
        assert "utility constancy: holds" in out

    def test_malformed_json(self, capsys, tmp_path):
        code, _, err = run(capsys, "check", write(tmp_path, '{"alternatives": ['))
        assert code == 2
        assert "line 1" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "check", tmp_path / "nope.json")[0] == 2

    def test_json_verdicts(self, capsys):
        code, out, _ = run(capsys, "check", DATA / "example4.json", "--json")
        doc = json.loads(out)
        assert code == 1 and doc["kind"] == "check"
        distance = doc["result"]["verdicts"][1]
        assert distance["restriction"] == "distance" and not distance["holds"]
        assert "witness" in distance


class TestElect:
    @pytest.mark.parametrize("rule,winner", [
        ("plurality", "c"), ("conservative", "s"), ("permissive", "s"),
        ("preference", "s"), ("top-cycle", "s")])
    def test_richelson(self, capsys, rule, winner):
        code, out, _ = run(capsys, "elect", DATA / "richelson.json", "--rule", rule)
        assert code == 0
        assert f"winner: {winner}" in out

    def test_e4_preference_tie_noted(self, capsys):
        code, out, _ = run(capsys, "elect", DATA / "e4.json", "--rule", "preference")
        assert code == 0
        assert "winner: a" in out
        assert "three-way N_R tie" in out

    def test_distance_needs_matrix(self, capsys):
        code, _, err = run(capsys, "elect", DATA / "e4.json", "--rule", "distance")
        assert code == 2 and "distance" in err

    def test_reality_override(self, capsys):
        code, out, _ = run(capsys, "elect", DATA / "example4.json", "--rule", "conservative",
                           "--reality", "b")
        assert code == 0 and "winner: c" in out

    def test_unknown_reality(self, capsys):
        assert run(capsys, "elect", DATA / "e4.json", "--rule", "conservative",
                   "--reality", "zz")[0] == 2

    def test_unknown_rule(self, capsys):
        assert run(capsys, "elect", DATA / "e4.json", "--rule", "borda")[0] == 2


class TestAgenda:
    def test_e4(self, capsys):
        code, out, _ = run(capsys, "agenda", DATA / "e4.json")
        lines = out.strip().splitlines()
        assert code == 0
        assert lines[1] == "[amendment] r vs a: 0-3 -> a"
        assert sum(1 for line in lines if line.startswith("[")) == 4
        assert lines[-1] == "elect r (conservative-fallback)"

    def test_unanimous(self, capsys):
        _, out, _ = run(capsys, "agenda", DATA / "unanimous.json")
        lines = out.strip().splitlines()
        assert sum(1 for line in lines if line.startswith("[")) == 2
        assert lines[-1] == "elect a (won-all)"

    def test_richelson(self, capsys):
        _, out, _ = run(capsys, "agenda", DATA / "richelson.json")
        assert out.strip() == "S_R empty; elect s"

    def test_arrangement(self, capsys):
        code, out, _ = run(capsys, "agenda", DATA / "e4.json", "--arrangement", "c,b,a")
        assert code == 0 and "[amendment] r vs c" in out

    @pytest.mark.parametrize("arrangement", ["a,b", "a,b,r", "a,b,zz"])
    def test_bad_arrangement(self, capsys, arrangement):
        assert run(capsys, "agenda", DATA / "e4.json", "--arrangement", arrangement)[0] == 2


class TestPlan:
    def test_example4(self, capsys):
        code, out, _ = run(capsys, "plan", DATA / "example4.json")
        assert code == 0
        assert out.splitlines() == ["a -> b -> c -> a", "termination: cycle(period 3)"]

    def test_unanimous(self, capsys):
        _, out, _ = run(capsys, "plan", DATA / "unanimous.json")
        assert out.splitlines() == ["r -> a", "termination: converged"]

    def test_bad_steps(self, capsys):
        assert run(capsys, "plan", DATA / "example4.json", "--max-steps", "0")[0] == 2

    def test_accessibility_from_file(self, capsys, tmp_path):
        doc = json.loads((DATA / "unanimous.json").read_text())
        doc["accessibility"] = [["r", "b"]]
        code, out, _ = run(capsys, "plan", write(tmp_path, doc))
        assert code == 0 and out.splitlines()[0] == "r -> b"


class TestGame:
    def test_truthful(self, capsys):
        code, out, _ = run(capsys, "game", DATA / "strategic_game.json")
        assert code == 0
        assert out.splitlines()[0] == "trajectory: c (converged)"

    def test_deviation(self, capsys):
        code, out, _ = run(capsys, "game", DATA / "strategic_game.json", "--deviate", "0")
        assert code == 0
        assert "improving deviation found" in out
        assert "trajectory: c -> a -> b" in out

    def test_no_deviation(self, capsys):
        _, out, _ = run(capsys, "game", DATA / "strategic_game.json", "--deviate", "2")
        assert "voter 2: no improving deviation" in out

    def test_horizon_one(self, capsys):
        _, out, _ = run(capsys, "game", DATA / "strategic_game.json", "--horizon", "1", "--json")
        payoffs = json.loads(out)["result"]["payoffs"]
        assert [p["terminal"] for p in payoffs] == [4.5, 6.5, 1.0]

    @pytest.mark.parametrize("extra", [["--horizon", "0"], ["--deviate", "7"]])
    def test_bad_arguments(self, capsys, extra):
        assert run(capsys, "game", DATA / "strategic_game.json", *extra)[0] == 2

    def test_needs_utilities(self, capsys):
        assert run(capsys, "game", DATA / "e4.json")[0] == 2


class TestGen:
    @pytest.mark.parametrize("model", ["table", "utility"])
    def test_deterministic(self, tmp_path, capsys, model):
        paths = [tmp_path / f"{i}.json" for i in range(2)]
        for p in paths:
            assert run(capsys, "gen", "--seed", 11, "--model", model, "-o", p)[0] == 0
        assert paths[0].read_bytes() == paths[1].read_bytes()
        load_election(paths[0])

    def test_utility_output_passes_check(self, tmp_path, capsys):
        path = tmp_path / "u.json"
        run(capsys, "gen", "--seed", 3, "--model", "utility", "--states", 4, "-o", path)
        code, out, _ = run(capsys, "check", path)
        assert code == 0 and out.count("holds") == 3

    def test_seed_required(self, capsys):
        assert run(capsys, "gen")[0] == 2

    def test_bad_sizes(self, capsys):
        assert run(capsys, "gen", "--seed", 1, "--states", 0)[0] == 2

    def test_retry_exhaustion(self, capsys, monkeypatch):
        def exhausted(*args, **kwargs):
            raise GeneratorError("utility ties persisted after 100 attempts")

        monkeypatch.setattr(cli, "generate_utility_constant_election", exhausted)
        code, _, err = run(capsys, "gen", "--seed", 1, "--model", "utility")
        assert code == 2 and "utility ties" in err


class TestGolden:
    @pytest.mark.parametrize("argv,golden", [
        (["elect", DATA / "richelson.json", "--rule", "conservative"], "richelson.rule.json"),
        (["plan", DATA / "example4.json"], "example4.plan.json"),
        (["agenda", DATA / "e4.json"], "e4.agenda.json"),
    ])
    def test_byte_exact(self, capsys, argv, golden):
        code, out, _ = run(capsys, *argv, "--json")
        assert code == 0
        assert out == (GOLDEN / golden).read_text(encoding="utf-8")

    @pytest.mark.parametrize("stem", ["richelson", "example4", "e4"])
    def test_digest_matches_input(self, stem):
        trace = json.loads(next(GOLDEN.glob(f"{stem}.*.json")).read_text())
        assert trace["input_digest"] == digest(load_election(DATA / f"{stem}.json"))

    def test_golden_contents(self):
        rule = json.loads((GOLDEN / "richelson.rule.json").read_text())
        assert rule["result"]["winner"] == "s" and rule["result"]["viable"] == []
        plan = json.loads((GOLDEN / "example4.plan.json").read_text())
        assert plan["result"]["states"] == ["a", "b", "c", "a"]
        agenda = json.loads((GOLDEN / "e4.agenda.json").read_text())
        assert agenda["result"]["trace"]["elected"] == "r"

    def test_out_dir_from_env(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("REALITYCHOICE_OUTPUT_DIR", str(tmp_path))
        code, out, _ = run(capsys, "plan", DATA / "example4.json", "--json")
        assert code == 0
        assert (tmp_path / "example4.plan.json").read_text(encoding="utf-8") == out

    def test_out_dir_flag_wins(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("REALITYCHOICE_OUTPUT_DIR", str(tmp_path / "env"))
        run(capsys, "plan", DATA / "example4.json", "--json", "--out-dir", tmp_path / "flag")
        assert (tmp_path / "flag" / "example4.plan.json").exists()
        assert not (tmp_path / "env").exists()


class TestElectionFile:
    @pytest.mark.parametrize("stem", ["richelson", "e4", "unanimous", "example4", "strategic_game"])
    def test_round_trip(self, stem):
        data = load_election(DATA / f"{stem}.json")
        again = parse_election(serialize_election(data))
        assert again.election.names == data.election.names
        assert again.election.reality == data.election.reality
        assert again.distance == data.distance
        for r in data.election.alternatives:
            assert again.election.at(r).current_orders() == data.election.at(r).current_orders()
        assert serialize_election(again) == serialize_election(data)

    def test_dumps_is_stable(self):
        data = load_election(DATA / "e4.json")
        assert dumps_json(serialize_election(data)).endswith("}\n")

    @pytest.mark.parametrize("doc,where", [
        ({"alternatives": ["a", "a"], "reality": "a", "voters": []}, "$.alternatives"),
        ({"alternatives": ["a", "b"], "reality": "z", "voters": [{"table": {}}]}, "$.reality"),
        ({"alternatives": ["a", "b"], "reality": "a", "voters": [{"utility": [1, 2]}]},
         "$.voters[0]"),
        ({"alternatives": ["a", "b"], "reality": "a",
          "voters": [{"table": {"a": ["a", "b"]}}]}, "$.voters[0].table"),
        ({"alternatives": ["a", "b"], "reality": "a",
          "voters": [{"table": {"a": ["a", "b"], "b": ["a", "a"]}}]}, "$.voters[0].table.b"),
        ({"alternatives": ["a", "b"], "reality": "a", "voters": [{"utility": [1, 2]}],
          "distance": [[0, -1], [0, 0]]}, "$.distance"),
    ])
    def test_errors_are_anchored(self, doc, where):
        with pytest.raises(ElectionFileError) as info:
            parse_election(doc)
        assert where in str(info.value)

    def test_syntax_error_has_line(self):
        with pytest.raises(ElectionFileError, match="line 3"):
            loads_election('{\n "alternatives": ["a"],\n "reality": ,\n}')
