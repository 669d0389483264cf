"""Command line interface.

Exit codes: 0 success, 1 I/O or parse error, 2 invalid or acyclic graph (or an
algorithm that does not apply to it), 3 self-test disagreement.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
import time
from fractions import Fraction

from .baselines import (
    PreconditionViolated,
    brute_force_min_ratio,
    karp_min_mean,
    lawler_binary_search,
)
from .context import ConcreteContext
from .graph import (
    InvalidGraph,
    InvalidParams,
    NoCycle,
    ParseError,
    RatioGraph,
    WeightedDigraph,
    format_ratio_graph,
    gen_planted_ratio,
    gen_random_graph,
    parse_ratio_graph,
    parse_rational,
    require_cycle_graph,
    substitute_lambda,
    validate,
)
from .parametric import RatioSolution, auto_h, parametric_min_ratio, solution_from_lambda
from .sssp import compare_to_lambda_star, detect_negative_cycle

EXIT_OK, EXIT_IO, EXIT_GRAPH, EXIT_DISAGREE = 0, 1, 2, 3

SOLVE_ALGS = (
    "parametric-randomized",
    "parametric-greedy",
    "parametric-full",
    "lawler",
    "brute",
    "karp",
)
DETECT_ALGS = SOLVE_ALGS[:3]
BENCH_ALGS = ("detect-randomized", "detect-greedy", "detect-full") + DETECT_ALGS
BENCH_COLUMNS = (
    "n",
    "m",
    "h",
    "algorithm",
    "centers",
    "wall_time_s",
    "comparisons",
    "comparison_rounds",
    "parallel_steps",
    "oracle_calls",
    "work_units",
)


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


def _read_graph(path: str) -> RatioGraph:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise CliError(EXIT_IO, f"cannot read {path}: {exc}") from exc
    try:
        return parse_ratio_graph(text)
    except ParseError as exc:
        raise CliError(EXIT_IO, f"parse error: {exc}") from exc


def _parse_h(text: str) -> int | str:
    if text == "auto":
        return "auto"
    h = int(text)
    if h < 1:
        raise argparse.ArgumentTypeError("h must be >= 1 or 'auto'")
    return h


def _lambda(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _int_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def solve(g: RatioGraph, alg: str, h="auto", seed: int = 0, c: float = 1.0) -> RatioSolution:
    if alg.startswith("parametric-"):
        return parametric_min_ratio(g, h, alg.split("-", 1)[1], seed=seed, c=c)
    if alg == "lawler":
        return lawler_binary_search(g)
    if alg == "brute":
        return brute_force_min_ratio(g)
    if alg == "karp":
        lam = karp_min_mean(g)
        return solution_from_lambda(g, lam, "karp")
    raise ValueError(f"unknown algorithm {alg}")


def _format_solution(sol: RatioSolution) -> str:
    counters = " ".join(f"{k}={v}" for k, v in sol.counters.as_dict().items())
    return "\n".join(
        [
            f"lambda* = {sol.lambda_star.numerator}/{sol.lambda_star.denominator}",
            "cycle: " + " ".join(map(str, sol.cycle)),
            f"cost_sum: {sol.cost_sum}",
            f"time_sum: {sol.time_sum}",
            f"algorithm: {sol.algorithm}",
            f"counters: {counters}",
        ]
    )


def cmd_solve(args) -> int:
    g = _read_graph(args.input)
    sol = solve(g, args.alg, args.h, args.seed, args.c_constant)
    if args.json:
        print(json.dumps(sol.to_json()))
    else:
        print(_format_solution(sol))
    return EXIT_OK


def _h_for_detect(g: RatioGraph, h) -> int:
    if h == "auto":
        return auto_h(g.n, g.m)
    return min(h, g.n + 1)


def cmd_detect(args) -> int:
    g = _read_graph(args.input)
    report = validate(g)
    bad = [c for c in report.codes if c != "Acyclic"]
    if bad:
        raise InvalidGraph(report)
    wg = substitute_lambda(g, args.lam)
    ctx = ConcreteContext()
    mode = args.alg.split("-", 1)[1]
    verdict = detect_negative_cycle(
        ctx, wg, _h_for_detect(g, args.h), mode, seed=args.seed, c=args.c_constant
    )
    if args.json:
        out = verdict.to_json()
        out["lambda"] = {"num": str(args.lam.numerator), "den": str(args.lam.denominator)}
        out["counters"] = ctx.counters.as_dict()
        print(json.dumps(out))
        return EXIT_OK
    print(f"negative cycle: {'true' if verdict.has_negative_cycle else 'false'}")
    if verdict.has_negative_cycle:
        idx, u, v = verdict.violated_edge
        print(f"violated edge: #{idx} {u} -> {v}")
    else:
        print("potential: " + " ".join(f"{v}={p}" for v, p in enumerate(verdict.potential)))
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = _read_graph(args.input)
    require_cycle_graph(g)
    print(str(compare_to_lambda_star(g, args.lam)))
    return EXIT_OK


def cmd_generate(args) -> int:
    if args.planted is not None:
        g, lam = gen_planted_ratio(args.n, args.m, args.planted, args.seed)
        comments = [f"planted lambda* = {lam.numerator}/{lam.denominator}", f"seed {args.seed}"]
    else:
        g = gen_random_graph(args.n, args.m, args.cost_range, args.time_range, args.seed)
        comments = [f"random graph, seed {args.seed}"]
    sys.stdout.write(format_ratio_graph(g, comments))
    return EXIT_OK


def bench_record(g: RatioGraph, h: int, alg: str, lam: Fraction, seed: int, c: float) -> dict:
    t0 = time.perf_counter()
    if alg.startswith("detect-"):
        wg = substitute_lambda(g, lam)
        if all(w.denominator == 1 for _, _, w in wg.edges):
            wg = WeightedDigraph(wg.n, tuple((u, v, int(w)) for u, v, w in wg.edges))
        ctx = ConcreteContext()
        verdict = detect_negative_cycle(ctx, wg, min(h, g.n + 1), alg.split("-", 1)[1], seed, c)
        counters, centers = ctx.counters, len(verdict.centers)
    else:
        sol = parametric_min_ratio(g, h, alg.split("-", 1)[1], seed=seed, c=c)
        counters, centers = sol.counters, sol.meta.get("centers")
    wall = time.perf_counter() - t0
    return {
        "n": g.n,
        "m": g.m,
        "h": h,
        "algorithm": alg,
        "centers": centers,
        "wall_time_s": round(wall, 4),
        **counters.as_dict(),
    }


def cmd_bench(args) -> int:
    if args.input:
        g = _read_graph(args.input)
    else:
        g = gen_random_graph(args.n, args.m, args.cost_range, args.time_range, args.seed)
    hs = [int(x) for x in args.h_grid.split(",")]
    records = [bench_record(g, h, args.alg, args.lam, args.seed, args.c_constant) for h in hs]
    if args.format == "json":
        print(json.dumps(records))
    else:
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        writer.writeheader()
        writer.writerows(records)
        sys.stdout.write(buf.getvalue())
    return EXIT_OK


# -- self-test -----------------------------------------------------------------


def _selftest_instances(count: int, seed: int):
    rng = random.Random(seed)
    for _ in range(count):
        n = rng.randint(1, 8)
        m = rng.randint(n, 3 * n)
        yield "random", gen_random_graph(n, m, (-9, 9), (1, 4), rng.getrandbits(32))
    for _ in range(count):
        n = rng.randint(2, 8)
        m = rng.randint(n, 3 * n)
        planted = Fraction(rng.randint(-6, 6), rng.randint(1, 3))
        yield "planted", gen_planted_ratio(n, m, planted, rng.getrandbits(32))[0]
    for _ in range(count):
        n = rng.randint(1, 8)
        m = rng.randint(n, 3 * n)
        yield "unit-time", gen_random_graph(n, m, (-9, 9), (1, 1), rng.getrandbits(32))


def _answers(g: RatioGraph, seed: int, fault: int | None) -> dict[str, object]:
    out: dict[str, object] = {}
    algs = ["brute", "lawler", *DETECT_ALGS]
    if all(e.time == 1 for e in g.edges):
        algs.append("karp")
    for alg in algs:
        try:
            if alg.startswith("parametric-") and fault is not None:
                sol = parametric_min_ratio(g, "auto", alg.split("-", 1)[1], seed, fault=fault)
            else:
                sol = solve(g, alg, seed=seed)
            out[alg] = sol.lambda_star
        except Exception as exc:  # a crash counts as a disagreement
            out[alg] = f"error: {type(exc).__name__}: {exc}"
    return out


def _agree(answers: dict) -> bool:
    return len({str(v) for v in answers.values()}) == 1


def _minimize(g: RatioGraph, seed: int, fault: int | None) -> RatioGraph:
    """Drop edges while the graph stays cyclic and valid and the solvers still disagree."""
    changed = True
    while changed:
        changed = False
        for i in range(g.m):
            cand = RatioGraph(g.n, g.edges[:i] + g.edges[i + 1 :])
            if not validate(cand).ok:
                continue
            if not _agree(_answers(cand, seed, fault)):
                g = cand
                changed = True
                break
    return g


def cmd_selftest(args) -> int:
    fault = 0 if args.inject_fault else None
    checked = 0
    per_family: dict[str, int] = {}
    for family, g in _selftest_instances(args.instances, args.seed):
        answers = _answers(g, args.seed, fault)
        checked += 1
        per_family[family] = per_family.get(family, 0) + 1
        if not _agree(answers):
            small = _minimize(g, args.seed, fault)
            print(f"DISAGREEMENT on a {family} instance; minimized counterexample:")
            sys.stdout.write(format_ratio_graph(small))
            for alg, val in _answers(small, args.seed, fault).items():
                print(f"  {alg}: {val}")
            return EXIT_DISAGREE
    summary = ", ".join(f"{k}={v}" for k, v in per_family.items())
    print(f"selftest ok: {checked} instances agree ({summary})")
    return EXIT_OK


# -- argument parsing ------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ratiocycle", description="Exact minimum cost-to-time ratio cycles."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, alg_choices=None, alg_default=None):
        if alg_choices:
            p.add_argument("--alg", choices=alg_choices, default=alg_default)
        p.add_argument("--h", type=_parse_h, default="auto", help="hop bound or 'auto'")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--c-constant", type=float, default=1.0, dest="c_constant")

    p = sub.add_parser("solve", help="compute the minimum ratio cycle")
    p.add_argument("input", help="graph file or '-' for stdin")
    common(p, SOLVE_ALGS, "parametric-greedy")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("detect", help="negative cycle test at a given lambda")
    p.add_argument("input")
    common(p, DETECT_ALGS, "parametric-full")
    p.add_argument("--lambda", dest="lam", type=_lambda, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("oracle", help="compare lambda with the optimum")
    p.add_argument("input")
    p.add_argument("--lambda", dest="lam", type=_lambda, required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("generate", help="write a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--cost-range", type=_int_range, default=(-9, 9), dest="cost_range")
    p.add_argument("--time-range", type=_int_range, default=(1, 4), dest="time_range")
    p.add_argument("--planted", type=_lambda, default=None)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="sweep the hop bound and report counters")
    p.add_argument("--input", default=None, help="graph file instead of a generated one")
    p.add_argument("--n", type=int, default=200)
    p.add_argument("--m", type=int, default=2000)
    p.add_argument("--h", dest="h_grid", default="4,8,16,32", help="comma-separated hop bounds")
    p.add_argument("--alg", choices=BENCH_ALGS, default="detect-randomized")
    p.add_argument("--lambda", dest="lam", type=_lambda, default=Fraction(0))
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--c-constant", type=float, default=1.0, dest="c_constant")
    p.add_argument("--cost-range", type=_int_range, default=(-9, 9), dest="cost_range")
    p.add_argument("--time-range", type=_int_range, default=(1, 4), dest="time_range")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("selftest", help="cross-check all solvers on small instances")
    p.add_argument("--instances", type=int, default=20, help="instances per family")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(exc, file=sys.stderr)
        return exc.code
    except NoCycle as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRAPH
    except InvalidGraph as exc:
        print(f"error: {exc}", file=sys.stderr)
        for code, msg in exc.report.violations:
            print(f"  {code}: {msg}", file=sys.stderr)
        return EXIT_GRAPH
    except (PreconditionViolated, InvalidParams) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GRAPH


if __name__ == "__main__":
    sys.exit(main())
