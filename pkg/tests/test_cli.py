from __future__ import annotations

import csv
import io
import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ratiocycle.cli import BENCH_COLUMNS, main
from ratiocycle.context import ConcreteContext
from ratiocycle.graph import parse_ratio_graph, substitute_lambda
from ratiocycle.sssp import check_potential


def run(capsys, *argv):
    code = main(list(map(str, argv)))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def k4_path(tmp_path):
    p = tmp_path / "k4.txt"
    rows = [(0, 1, 4, 1), (1, 0, -2, 3), (0, 2, 5, 2), (2, 0, 1, 1), (0, 3, -3, 4), (3, 0, 7, 1),
            (1, 2, 2, 2), (2, 1, 0, 1), (1, 3, 3, 3), (3, 1, -1, 2), (2, 3, 6, 1), (3, 2, -4, 4)]
    p.write_text(f"p ratio 4 {len(rows)}\n" + "".join(f"a {u} {v} {c} {t}\n" for u, v, c, t in rows))
    return p


class TestSolve:
    def test_json(self, capsys, fixture_path):
        code, out, err = run(capsys, "solve", "--alg", "parametric-greedy", fixture_path, "--json")
        assert code == 0 and err == ""
        sol = json.loads(out)
        assert sol["lambda_star"] == {"num": "2", "den": "1"}
        assert Fraction(int(sol["cost_sum"]), int(sol["time_sum"])) == 2
        assert sol["algorithm"] == "parametric-greedy"

    @pytest.mark.parametrize("alg", ["parametric-randomized", "parametric-full", "lawler", "brute"])
    def test_k4_algorithms_agree(self, capsys, k4_path, alg):
        code, out, _ = run(capsys, "solve", "--alg", alg, k4_path, "--json")
        base = json.loads(run(capsys, "solve", "--alg", "brute", k4_path, "--json")[1])
        assert code == 0
        assert json.loads(out)["lambda_star"] == base["lambda_star"]

    def test_json_round_trip_certificate(self, capsys, k4_path):
        sol = json.loads(run(capsys, "solve", k4_path, "--json")[1])
        g = parse_ratio_graph(k4_path.read_text())
        cyc = sol["cycle"]
        assert cyc[0] == cyc[-1]
        lam = Fraction(int(sol["lambda_star"]["num"]), int(sol["lambda_star"]["den"]))
        assert Fraction(int(sol["cost_sum"]), int(sol["time_sum"])) == lam
        # the vertex walk is realized by edges whose ratio matches
        pairs = {(e.src, e.dst) for e in g.edges}
        assert all((a, b) in pairs for a, b in zip(cyc, cyc[1:]))

    def test_text_output(self, capsys, fixture_path):
        code, out, _ = run(capsys, "solve", fixture_path)
        assert code == 0 and "2" in out

    def test_acyclic(self, capsys, tmp_path):
        p = tmp_path / "dag.txt"
        p.write_text("p ratio 2 1\na 0 1 1 1\n")
        code, out, err = run(capsys, "solve", p)
        assert code == 2 and "Acyclic" in err and out == ""

    def test_zero_transit_cycle(self, capsys, tmp_path):
        p = tmp_path / "z.txt"
        p.write_text("p ratio 1 1\na 0 0 1 0\n")
        code, _, err = run(capsys, "solve", p)
        assert code == 2 and "ZeroTransitCycle" in err

    def test_parse_error(self, capsys, tmp_path):
        p = tmp_path / "bad.txt"
        p.write_text("p ratio 2 1\na 0 5 1 1\n")
        code, _, err = run(capsys, "solve", p)
        assert code == 1 and "line 2" in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "solve", tmp_path / "nope.txt")[0] == 1

    def test_karp_requires_unit_times(self, capsys, fixture_path, tmp_path):
        assert run(capsys, "solve", "--alg", "karp", fixture_path)[0] == 0
        p = tmp_path / "t2.txt"
        p.write_text("p ratio 1 1\na 0 0 1 2\n")
        assert run(capsys, "solve", "--alg", "karp", p)[0] == 2

    def test_stdin(self, monkeypatch, capsys):
        monkeypatch.setattr(sys, "stdin", io.StringIO("p ratio 1 1\na 0 0 7 3\n"))
        code, out, _ = run(capsys, "solve", "-", "--json")
        assert code == 0 and json.loads(out)["lambda_star"] == {"num": "7", "den": "3"}


class TestDetectAndOracle:
    def test_detect_true(self, capsys, fixture_path):
        code, out, _ = run(capsys, "detect", fixture_path, "--lambda", "3")
        assert code == 0 and out.startswith("negative cycle: true")

    def test_detect_false_ships_potential(self, capsys, fixture_path):
        code, out, _ = run(capsys, "detect", fixture_path, "--lambda", "1", "--json")
        verdict = json.loads(out)
        assert code == 0 and verdict["negative_cycle"] is False
        p = [Fraction(int(x["num"]), int(x["den"])) for x in verdict["potential"]]
        g = substitute_lambda(parse_ratio_graph(fixture_path.read_text()), 1)
        assert check_potential(ConcreteContext(), g, p).ok

    @pytest.mark.parametrize("alg", ["parametric-randomized", "parametric-greedy", "parametric-full"])
    def test_detect_boundary(self, capsys, fixture_path, alg):
        code, out, _ = run(capsys, "detect", fixture_path, "--lambda", "2", "--alg", alg)
        assert code == 0 and out.startswith("negative cycle: false")

    @pytest.mark.parametrize("lam, word", [("2", "equal"), ("0", "less"), ("100", "greater"), ("4/2", "equal")])
    def test_oracle(self, capsys, fixture_path, lam, word):
        code, out, _ = run(capsys, "oracle", fixture_path, "--lambda", lam)
        assert code == 0 and out.strip() == word

    def test_decimal_lambda_rejected(self, capsys, fixture_path):
        with pytest.raises(SystemExit) as err:
            main(["oracle", str(fixture_path), "--lambda", "0.5"])
        assert err.value.code == 2


class TestGenerate:
    def test_random_round_trip(self, capsys):
        code, out, _ = run(capsys, "generate", "--n", 5, "--m", 9, "--seed", 4)
        g = parse_ratio_graph(out)
        assert code == 0 and (g.n, g.m) == (5, 9)

    def test_planted(self, capsys, tmp_path):
        out = run(capsys, "generate", "--n", 6, "--m", 9, "--planted=-1/2", "--seed", 3)[1]
        p = tmp_path / "g.txt"
        p.write_text(out)
        sol = json.loads(run(capsys, "solve", "--alg", "brute", p, "--json")[1])
        assert sol["lambda_star"] == {"num": "-1", "den": "2"}

    def test_invalid(self, capsys):
        assert run(capsys, "generate", "--n", 3, "--m", 2)[0] == 2


class TestBench:
    def test_single_row(self, capsys):
        code, out, _ = run(capsys, "bench", "--n", 30, "--m", 90, "--h", "4")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert code == 0 and len(rows) == 1
        assert tuple(rows[0]) == BENCH_COLUMNS

    def test_deterministic_counters(self, capsys):
        argv = ("bench", "--n", 25, "--m", 80, "--h", "2,4,8", "--format", "json")
        a = json.loads(run(capsys, *argv)[1])
        b = json.loads(run(capsys, *argv)[1])
        strip = lambda rows: [{k: v for k, v in r.items() if k != "wall_time_s"} for r in rows]
        assert strip(a) == strip(b) and len(a) == 3

    def test_parametric_row(self, capsys):
        code, out, _ = run(capsys, "bench", "--n", 8, "--m", 20, "--h", "3", "--alg", "parametric-full",
                           "--format", "json")
        row = json.loads(out)[0]
        assert code == 0 and row["oracle_calls"] > 0


class TestSelftest:
    def test_default_passes(self, capsys):
        code, out, _ = run(capsys, "selftest")
        assert code == 0 and "60 instances agree" in out

    def test_instances_per_family(self, capsys):
        code, out, _ = run(capsys, "selftest", "--instances", 10)
        assert code == 0 and "random=10, planted=10, unit-time=10" in out

    def test_injected_fault(self, capsys):
        code, out, _ = run(capsys, "selftest", "--inject-fault", "--instances", 5)
        assert code == 3
        assert "DISAGREEMENT" in out
        dump = out.split("minimized counterexample:\n", 1)[1]
        graph_text = "".join(l + "\n" for l in dump.splitlines() if l[:1] in "pa")
        assert parse_ratio_graph(graph_text).m >= 1
        assert "brute:" in out


def test_module_entry_point(fixture_path):
    res = subprocess.run(
        [sys.executable, "-m", "ratiocycle", "oracle", str(fixture_path), "--lambda", "2"],
        capture_output=True, text=True, check=False,
    )
    assert res.returncode == 0 and res.stdout.strip() == "equal"
