"""Parametric search for the minimum cost-to-time ratio.

The negative cycle detector is run once on symbolic weights ``cost - lam*time``.
Every batch of comparisons is resolved at the unknown optimum ``lam*``: the
roots of the compared differences that fall inside the current interval are
binary-searched with an exact three-way oracle, which shrinks the interval
until no root is left inside, after which all signs are constant on it.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import partial
from typing import Callable, Sequence

from .context import Counters, LinearWeight, Ordering, ParametricContext
from .graph import RatioGraph, WeightedDigraph, require_cycle_graph, substitute_lambda
from .hitting_set import CenterMode
from .sssp import (
    CycleResult,
    compare_to_lambda_star,
    detect_negative_cycle,
    min_weight_cycle_seq,
    select_centers,
)


class InvariantViolation(RuntimeError):
    """A checked internal invariant failed. This indicates a bug."""


_SIGN = (Ordering.EQUAL, Ordering.GREATER, Ordering.LESS)


def _sign(x) -> Ordering:
    return _SIGN[(x > 0) - (x < 0)]


@dataclass
class ResolverState:
    """Open interval ``(lo, hi)`` known to contain ``lam*``; None is infinite.

    Once the oracle answers Equal the interval collapses to ``lo == hi == lam*``.
    """

    lo: Fraction | None
    hi: Fraction | None
    oracle: Callable[[Fraction], Ordering]
    star_found: Fraction | None = None
    counters: Counters = field(default_factory=Counters)
    probes: list[tuple[Fraction, Ordering]] = field(default_factory=list)

    def inside(self, r: Fraction) -> bool:
        return (self.lo is None or self.lo < r) and (self.hi is None or r < self.hi)

    def interior_point(self) -> Fraction:
        if self.lo is None and self.hi is None:
            return Fraction(0)
        if self.lo is None:
            return self.hi - 1
        if self.hi is None:
            return self.lo + 1
        return (self.lo + self.hi) / 2

    def probe(self, r: Fraction) -> Ordering:
        out = self.oracle(r)
        self.counters.oracle_calls += 1
        self.probes.append((r, out))
        if out is Ordering.LESS:
            self.lo = r
        elif out is Ordering.GREATER:
            self.hi = r
        else:
            self.star_found = self.lo = self.hi = r
        return out


def resolve_diffs(state: ResolverState, diffs: Sequence[LinearWeight]) -> list[Ordering]:
    """Signs at ``lam*`` of the given differences (one parallel step)."""
    out: list[Ordering | None] = [None] * len(diffs)
    pending = []
    roots = set()
    star = state.star_found
    for i, d in enumerate(diffs):
        if d.b == 0:
            out[i] = _sign(d.a)
        elif star is not None:
            out[i] = _sign(d.a - star * d.b)
        else:
            pending.append(i)
            r = Fraction(d.a) / d.b
            if state.inside(r):
                roots.add(r)
    if not pending:
        return out  # type: ignore[return-value]

    if roots:
        rs = sorted(roots)
        lo_i, hi_i = 0, len(rs) - 1
        while lo_i <= hi_i:
            mid = (lo_i + hi_i) // 2
            o = state.probe(rs[mid])
            if o is Ordering.EQUAL:
                break
            if o is Ordering.LESS:
                lo_i = mid + 1
            else:
                hi_i = mid - 1

    at = state.star_found if state.star_found is not None else state.interior_point()
    for i in pending:
        d = diffs[i]
        out[i] = _sign(d.a - at * d.b)
    return out  # type: ignore[return-value]


def resolve_batch(
    state: ResolverState, comparisons: Sequence[tuple[LinearWeight, LinearWeight]]
) -> list[Ordering]:
    """Order each pair ``(x, y)`` as ``x(lam*)`` versus ``y(lam*)``."""
    return resolve_diffs(state, [x - y for x, y in comparisons])


def sign_at_star(state: ResolverState, w: LinearWeight) -> Ordering:
    return resolve_diffs(state, [w])[0]


def make_oracle(g: RatioGraph, fault: int | None = None) -> Callable[[Fraction], Ordering]:
    """Cached exact oracle. ``fault=k`` mirrors the k-th non-equal answer."""
    cache: dict[Fraction, Ordering] = {}
    skip = [fault]

    def oracle(lam: Fraction) -> Ordering:
        if lam not in cache:
            out = compare_to_lambda_star(g, lam)
            if skip[0] is not None and out is not Ordering.EQUAL:
                if skip[0] == 0:
                    out = out.mirror()
                    skip[0] = None
                else:
                    skip[0] -= 1
            cache[lam] = out
        return cache[lam]

    return oracle


def initial_bound(g: RatioGraph) -> int:
    """Every cycle ratio lies strictly inside ``(-bound, bound)``."""
    return g.n * g.max_abs_cost + 1


def auto_h(n: int, m: int) -> int:
    """``round(sqrt(n) * m**(-1/4) * ln n)`` clamped to ``[1, n]``."""
    if n <= 1 or m == 0:
        return 1
    h = round(math.sqrt(n) * m ** -0.25 * math.log(n))
    return max(1, min(n, h))


@dataclass
class RatioSolution:
    lambda_star: Fraction
    cycle: list[int]
    cost_sum: int
    time_sum: int
    algorithm: str
    counters: Counters = field(default_factory=Counters)
    edges: list[int] = field(default_factory=list)
    meta: dict = field(default_factory=dict)
    trace: dict | None = field(default=None, repr=False)
    """Comparison, probe and interval logs when requested; never serialized."""

    def to_json(self) -> dict:
        return {
            "lambda_star": {
                "num": str(self.lambda_star.numerator),
                "den": str(self.lambda_star.denominator),
            },
            "cycle": list(self.cycle),
            "cost_sum": str(self.cost_sum),
            "time_sum": str(self.time_sum),
            "algorithm": self.algorithm,
            "counters": self.counters.as_dict(),
            "meta": self.meta,
        }


def solution_from_lambda(
    g: RatioGraph, lam: Fraction, algorithm: str, counters: Counters | None = None
) -> RatioSolution:
    """Extract a minimum ratio cycle as a zero-weight cycle at ``lam``."""
    found = min_weight_cycle_seq(substitute_lambda(g, lam))
    if not isinstance(found, CycleResult) or found.value != 0:
        raise InvariantViolation(
            f"minimum cycle weight at lambda={lam} is not zero: {found!r}"
        )
    cost = sum(g.edges[i].cost for i in found.edges)
    time = sum(g.edges[i].time for i in found.edges)
    if Fraction(cost, time) != lam:
        raise InvariantViolation(f"witness ratio {cost}/{time} differs from {lam}")
    return RatioSolution(
        lam, found.cycle, cost, time, algorithm, counters or Counters(), found.edges
    )


def parametric_min_ratio(
    g: RatioGraph,
    h: int | str = "auto",
    mode: CenterMode | str = CenterMode.GREEDY,
    seed: int = 0,
    c: float = 1.0,
    log_comparisons: bool = False,
    fault: int | None = None,
) -> RatioSolution:
    """Minimum ratio cycle by parametric search over the negative cycle detector.

    ``mode`` selects how centers are chosen: ``randomized`` samples them once
    before any lambda-dependent work, ``greedy`` covers the half-hop path family
    computed symbolically, ``full`` uses every vertex. ``fault=k`` mirrors the
    k-th non-equal oracle answer (self-test hook).
    """
    require_cycle_graph(g)
    mode = CenterMode(mode)
    h_val = auto_h(g.n, g.m) if h == "auto" else max(1, min(int(h), g.n + 1))

    counters = Counters()
    bound = initial_bound(g)
    state = ResolverState(
        Fraction(-bound), Fraction(bound), make_oracle(g, fault), counters=counters
    )
    ctx = ParametricContext(partial(resolve_diffs, state), counters, log=log_comparisons)

    wg = WeightedDigraph(
        g.n, tuple((e.src, e.dst, LinearWeight(e.cost, e.time)) for e in g.edges)
    )
    centers = None
    fallback = False
    if mode is CenterMode.RANDOMIZED:
        # lambda-independent, so drawn before the symbolic run
        n_super = g.n + 1
        centers, fallback = select_centers(
            ctx, WeightedDigraph(n_super), h_val, mode, random.Random(seed), c
        )
    verdict = detect_negative_cycle(ctx, wg, h_val, mode, seed=seed, c=c, centers=centers)

    lam = state.star_found
    if lam is None:
        lo = state.lo
        if lo is not None and state.oracle(lo) is Ordering.EQUAL:
            lam = lo
        elif mode is CenterMode.RANDOMIZED:
            # sampled centers missed a path; the full center set cannot
            sol = parametric_min_ratio(g, h_val, CenterMode.FULL, seed, c, log_comparisons)
            sol.algorithm = "parametric-randomized"
            sol.counters.comparisons += counters.comparisons
            sol.counters.comparison_rounds += counters.comparison_rounds
            sol.counters.oracle_calls += counters.oracle_calls
            sol.counters.work_units += counters.work_units
            sol.meta["sampling_miss_rerun"] = True
            return sol
        else:
            raise InvariantViolation(
                f"lambda* never surfaced as a probed root; final interval ({state.lo}, {state.hi})"
            )

    sol = solution_from_lambda(g, lam, f"parametric-{mode.value}", counters)
    sol.meta.update(
        h=h_val,
        centers=len(verdict.centers) if verdict.centers is not None else None,
        center_fallback=fallback,
        generic_verdict_negative=verdict.has_negative_cycle,
        probes=len(state.probes),
    )
    if log_comparisons:
        sol.trace = {
            "comparisons": ctx.log,
            "final_interval": (state.lo, state.hi),
            "probes": list(state.probes),
        }
    return sol
