import json
import subprocess
import sys
from pathlib import Path

import pytest

from dslogic.cli import main, run_scenario
from dslogic.scenario import ScenarioError, parse_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv, "--json")
    assert code == 0, err
    return json.loads(out)


def write(tmp_path, doc, name="s.json"):
    p = tmp_path / name
    p.write_text(json.dumps(doc), encoding="utf-8")
    return str(p)


class TestSubcommands:
    def test_lottery_flags(self, capsys):
        r = run_json(capsys, "lottery", "--n", "112", "--m1", "1/10")["result"]
        assert r["m3x1"]["exact"] == "1/1000" and r["bel"]["exact"] == "1/1000"
        assert r["posterior"] == {"exact": "1/10", "decimal": "0.100000"}

    def test_odds_flags(self, capsys):
        r = run_json(capsys, "odds", "--m1", "9/10", "--m2", "9/10", "--prior", "999/1000")["result"]
        assert r["dempster"] == {"exact": "81/82", "decimal": "0.987805"}
        assert r["problogic"] == {"exact": "3/40", "decimal": "0.075000"}

    def test_decimal_flags_are_exact(self, capsys):
        r = run_json(capsys, "odds", "--m1", "0.9", "--m2", "0.9", "--prior", "0.999")["result"]
        assert r["problogic"]["exact"] == "3/40"

    def test_total_conflict_exit_1(self, capsys):
        code, out, err = run(capsys, "combine", "-f", str(SCENARIOS / "total_conflict.json"))
        assert code == 1 and "K = 1" in err and out == ""

    def test_combine_file(self, capsys):
        r = run_json(capsys, "combine", "-f", str(SCENARIOS / "combine_overlap.json"))["result"]
        assert {x["focal"]: x["mass"]["exact"] for x in r["combined"]} == {"b": "1/2", "a,b": "1/4", "b,c": "1/4"}
        assert r["conflict"]["exact"] == "0"

    def test_bounds_file(self, capsys):
        r = run_json(capsys, "bounds", "-f", str(SCENARIOS / "bounds_dependent.json"))["result"]
        assert (r["lo"]["exact"], r["hi"]["exact"]) == ("0", "1") and r["attained"]

    def test_bounds_linear_constraint(self, capsys, tmp_path):
        doc = {
            "version": 1, "kind": "bounds", "frame": ["a", "b"],
            "constraints": [{"linear": {"a|E1E2": "1", "a|E1~E2": "1"}, "relation": ">=", "rhs": "3/10"}],
            "query": {"event": {"theta": "b"}},
        }
        r = run_json(capsys, "bounds", "-f", write(tmp_path, doc))["result"]
        assert (r["lo"]["exact"], r["hi"]["exact"]) == ("0", "7/10")

    def test_agree_file(self, capsys):
        r = run_json(capsys, "agree", "-f", str(SCENARIOS / "agree_k3.json"))["result"]
        assert r["blocks_agree"] and r["belief_is_min"]
        assert r["bel"]["exact"] == r["constructed_min"]["exact"] == "1/4"

    def test_nonpartition(self, capsys):
        r = run_json(capsys, "nonpartition")["result"]
        assert r["combined"]["b"]["exact"] == "1/2"
        assert r["conditional_b_given_E1E2"]["exact"] == "0"
        assert all(r["conditions"].values())

    def test_paper(self, capsys):
        code, out, _ = run(capsys, "paper")
        assert code == 0 and "all match: True" in out
        doc = run_json(capsys, "paper")
        assert doc["result"]["all_match"] and len(doc["result"]["rows"]) >= 5

    def test_text_tables(self, capsys):
        code, out, _ = run(capsys, "lottery", "--n", "112", "--m1", "9/10")
        assert code == 0 and "3/40 (0.075000)" in out
        assert all(line == line.rstrip() for line in out.splitlines())


class TestUsageErrors:
    @pytest.mark.parametrize("doc,msg", [
        ({"version": 1, "kind": "lottery", "n": 5, "m1": "1/2", "extra": 1}, "unknown fields"),
        ({"kind": "lottery", "n": 5, "m1": "1/2"}, "version"),
        ({"version": 1, "kind": "odds", "m1": "1/2", "m2": "1/2", "prior": "1/2"}, "does not match"),
        ({"version": 1, "kind": "lottery", "n": 5}, "missing"),
        ({"version": 1, "kind": "lottery", "n": "5", "m1": "1/2"}, "integer"),
        ({"version": 1, "kind": "lottery", "n": 5, "m1": 0.5}, "numbers"),
    ])
    def test_bad_scenario_exit_2(self, capsys, tmp_path, doc, msg):
        code, _, err = run(capsys, "lottery", "-f", write(tmp_path, doc))
        assert code == 2 and msg in err

    def test_bad_json(self, capsys, tmp_path):
        p = tmp_path / "bad.json"
        p.write_text("{nope")
        assert run(capsys, "combine", "-f", str(p))[0] == 2

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "combine", "-f", str(tmp_path / "none.json"))[0] == 2

    def test_combine_needs_file(self, capsys):
        assert run(capsys, "combine")[0] == 2

    def test_unknown_label(self, capsys, tmp_path):
        doc = {"version": 1, "kind": "combine", "frame": ["a"], "masses": [{"z": "1"}, {"a": "1"}]}
        code, _, err = run(capsys, "combine", "-f", write(tmp_path, doc))
        assert code == 2 and "unknown element" in err

    def test_argparse_error(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["lottery", "--bogus"])
        assert exc.value.code == 2


class TestDomainErrors:
    def test_mass_sum(self, capsys, tmp_path):
        doc = {"version": 1, "kind": "combine", "frame": ["a", "b"], "masses": [{"a": "1/2"}, {"b": "1"}]}
        code, _, err = run(capsys, "combine", "-f", write(tmp_path, doc))
        assert code == 1 and "sum" in err

    def test_lottery_bad_n(self, capsys):
        assert run(capsys, "lottery", "--n", "1", "--m1", "1/2")[0] == 1

    def test_odds_boundary(self, capsys):
        assert run(capsys, "odds", "--m1", "1", "--m2", "1/2", "--prior", "1/2")[0] == 1

    def test_agree_needs_partition(self, capsys, tmp_path):
        doc = {"version": 1, "kind": "agree", "frame": ["a", "b", "c"],
               "masses": [{"a,b": "1/2", "b,c": "1/2"}, {"a,b": "1/2", "b,c": "1/2"}], "query": "b"}
        assert run(capsys, "agree", "-f", write(tmp_path, doc))[0] == 1


class TestDeterminismAndRoundTrip:
    @pytest.mark.parametrize("argv", [
        ["agree", "-f", str(SCENARIOS / "agree_k3.json")],
        ["bounds", "-f", str(SCENARIOS / "bounds_dependent.json")],
        ["paper"],
    ])
    def test_byte_identical(self, capsys, argv):
        a = run(capsys, *argv, "--json")[1]
        b = run(capsys, *argv, "--json")[1]
        assert a == b and a

    @pytest.mark.parametrize("name", ["agree_k3.json", "bounds_dependent.json", "combine_overlap.json", "lottery.json"])
    def test_echoed_scenario_reruns_identically(self, capsys, tmp_path, name):
        kind = json.loads((SCENARIOS / name).read_text())["kind"]
        first = run(capsys, kind, "-f", str(SCENARIOS / name), "--json")[1]
        echoed = json.loads(first)["scenario"]
        second = run(capsys, kind, "-f", write(tmp_path, echoed), "--json")[1]
        assert first == second

    def test_canonical_form(self):
        sc = parse_scenario({"version": 1, "kind": "combine", "frame": ["a", "b", "c"],
                             "masses": [{"b,a": "0.5", "c,b": "2/4"}, {"a,b,c": 1}]})
        assert sc["masses"] == [{"a,b": "1/2", "b,c": "1/2"}, {"a,b,c": "1"}]
        with pytest.raises(ScenarioError):
            parse_scenario([1, 2])

    def test_run_scenario_api(self):
        out = run_scenario({"version": 1, "kind": "lottery", "n": 2, "m1": "1/3"})
        assert out["result"]["m3x1"]["exact"] == "1/3"


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "dslogic", "paper", "--json"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["all_match"] is True
