"""Reference solvers used to cross-check the parametric solver."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .context import Counters, Ordering
from .graph import RatioGraph, require_cycle_graph
from .parametric import InvariantViolation, RatioSolution, initial_bound, solution_from_lambda
from .sssp import compare_to_lambda_star

BRUTE_FORCE_MAX_N = 14


class TooLarge(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


class PreconditionViolated(ValueError):
    pass


@dataclass
class EnumeratedCycle:
    vertices: list[int]
    """Closed walk starting and ending at the cycle's smallest vertex."""
    edges: list[int]
    cost_sum: int
    time_sum: int


def enumerate_simple_cycles(g: RatioGraph, max_steps: int | None = None) -> list[EnumeratedCycle]:
    """All simple directed cycles, parallel edges giving distinct cycles.

    Each cycle is found exactly once, from its smallest vertex, by a DFS that
    only visits larger vertices. ``max_steps`` bounds the number of edge
    traversals.
    """
    out_edges: list[list[tuple[int, int]]] = [[] for _ in range(g.n)]
    for idx, e in enumerate(g.edges):
        out_edges[e.src].append((e.dst, idx))
    cycles: list[EnumeratedCycle] = []
    steps = 0
    for s in range(g.n):
        on_path = [False] * g.n
        on_path[s] = True
        vpath = [s]
        epath: list[int] = []
        stack = [iter(out_edges[s])]
        while stack:
            nxt = next(stack[-1], None)
            if nxt is None:
                stack.pop()
                if epath:
                    epath.pop()
                    on_path[vpath.pop()] = False
                continue
            steps += 1
            if max_steps is not None and steps > max_steps:
                raise BudgetExceeded(f"cycle enumeration exceeded {max_steps} steps")
            v, idx = nxt
            if v == s:
                es = epath + [idx]
                cycles.append(
                    EnumeratedCycle(
                        vpath + [s],
                        es,
                        sum(g.edges[i].cost for i in es),
                        sum(g.edges[i].time for i in es),
                    )
                )
            elif v > s and not on_path[v]:
                on_path[v] = True
                vpath.append(v)
                epath.append(idx)
                stack.append(iter(out_edges[v]))
    return cycles


def brute_force_min_ratio(g: RatioGraph, max_steps: int | None = None) -> RatioSolution:
    require_cycle_graph(g)
    if g.n > BRUTE_FORCE_MAX_N:
        raise TooLarge(f"brute force is limited to n <= {BRUTE_FORCE_MAX_N}, got {g.n}")
    best = None
    for cyc in enumerate_simple_cycles(g, max_steps):
        key = (Fraction(cyc.cost_sum, cyc.time_sum), cyc.vertices)
        if best is None or key < best[0]:
            best = (key, cyc)
    (ratio, _), cyc = best
    counters = Counters()
    return RatioSolution(ratio, cyc.vertices, cyc.cost_sum, cyc.time_sum, "brute", counters, cyc.edges)


def simplest_between(lo: Fraction, hi: Fraction) -> Fraction:
    """The fraction with the smallest denominator strictly inside ``(lo, hi)``.

    Stern-Brocot descent, taking whole runs of same-direction steps at once
    via the continued fraction expansion. Ties among integers go to the one
    closest to zero.
    """
    lo, hi = Fraction(lo), Fraction(hi)
    if not lo < hi:
        raise ValueError("empty interval")
    if lo < 0 < hi:
        return Fraction(0)
    if hi <= 0:
        return -simplest_between(-hi, -lo)
    fl = math.floor(lo)
    if fl + 1 < hi:
        return Fraction(fl + 1)
    # (lo, hi) lies in [fl, fl + 1]; recurse on the reciprocal of the fractional part
    if lo == fl:
        y = Fraction(math.floor(1 / (hi - fl)) + 1)
    else:
        y = simplest_between(1 / (hi - fl), 1 / (lo - fl))
    return fl + 1 / y


def lawler_binary_search(g: RatioGraph) -> RatioSolution:
    """Bisection with the exact oracle, then a Stern-Brocot snap.

    ``lam*`` has denominator at most ``N = n * max time``; once the interval
    is no wider than ``1 / N**2`` it holds no other such fraction, so the
    simplest fraction inside is ``lam*``.
    """
    require_cycle_graph(g)
    counters = Counters()

    def probe(x: Fraction) -> Ordering:
        counters.oracle_calls += 1
        return compare_to_lambda_star(g, x)

    den_bound = g.n * g.max_time
    width_target = Fraction(1, den_bound * den_bound)
    bound = initial_bound(g)
    lo, hi = Fraction(-bound), Fraction(bound)
    while hi - lo > width_target:
        mid = (lo + hi) / 2
        o = probe(mid)
        if o is Ordering.EQUAL:
            return solution_from_lambda(g, mid, "lawler", counters)
        if o is Ordering.LESS:
            lo = mid
        else:
            hi = mid
    cand = simplest_between(lo, hi)
    if probe(cand) is not Ordering.EQUAL:
        raise InvariantViolation(f"snapped candidate {cand} is not the optimum")
    return solution_from_lambda(g, cand, "lawler", counters)


def lawler_call_budget(g: RatioGraph) -> float:
    """``2 log2(2 n Cmax (n Tmax)^2) + 8``, with ``Cmax`` floored at 1."""
    n, cmax, tmax = g.n, max(g.max_abs_cost, 1), g.max_time
    return 2 * math.log2(2 * n * cmax * (n * tmax) ** 2) + 8


def karp_min_mean(g: RatioGraph) -> Fraction:
    """Minimum cycle mean for unit transit times (Karp's recurrence)."""
    if any(e.time != 1 for e in g.edges):
        raise PreconditionViolated("karp_min_mean requires every transit time to be 1")
    require_cycle_graph(g)
    n = g.n
    INF = None
    D = [[0] * n]
    for _ in range(n):
        prev = D[-1]
        cur = [INF] * n
        for e in g.edges:
            du = prev[e.src]
            if du is INF:
                continue
            cand = du + e.cost
            if cur[e.dst] is INF or cand < cur[e.dst]:
                cur[e.dst] = cand
        D.append(cur)
    best = None
    for v in range(n):
        dn = D[n][v]
        if dn is INF:
            continue
        worst = max(
            Fraction(dn - D[k][v], n - k) for k in range(n) if D[k][v] is not INF
        )
        if best is None or worst < best:
            best = worst
    if best is None:
        raise InvariantViolation("no walk of length n found in a cyclic graph")
    return best
