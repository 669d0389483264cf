"""Center-based SSSP, potential-based negative cycle detection, and the
sequential minimum weight cycle routine used as the exact lambda oracle.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .context import INF, Context, Ordering
from .graph import RatioGraph, WeightedDigraph, _has_cycle
from .hitting_set import (
    CenterMode,
    CenterSet,
    TooLarge,
    all_centers,
    build_path_family,
    greedy_hitting_set,
    sample_centers,
)
from .hop_paths import (
    HopTable,
    apsp_repeated_squaring,
    bellman_ford_hop_multi,
    matrix_from_tables,
    tournament,
)

RANDOMIZED_RETRIES = 3


@dataclass
class SsspResult:
    source: int
    delta: list
    cert: list[int | None]
    """Center through which ``delta[t]`` was realized (None if unreached)."""
    tables: list[HopTable] = field(repr=False, default_factory=list)
    center_dist: list = field(repr=False, default_factory=list)


def hitting_set_sssp(
    ctx: Context,
    g: WeightedDigraph,
    source: int,
    centers: CenterSet | Sequence[int],
    h: int,
) -> SsspResult:
    """Distances from ``source`` stitched from ``h``-hop paths between centers.

    Exact when ``g`` has no negative cycle and the centers hit every canonical
    ``h // 2``-edge shortest path (always the case for all vertices).
    """
    if not 1 <= h:
        raise ValueError("hop bound must be at least 1")
    members = centers.members if isinstance(centers, CenterSet) else centers
    sources = sorted(set(members) | {source})
    tables = bellman_ford_hop_multi(ctx, g, sources, h)
    closed = apsp_repeated_squaring(ctx, matrix_from_tables(tables, sources))
    row = closed.entries[sources.index(source)]

    groups = []
    additions = 0
    for t in range(g.n):
        cands = []
        for xi, x in enumerate(sources):
            a, b = row[xi], tables[xi].dist[t]
            if a is INF or b is INF:
                continue
            cands.append((a + b, x))
            additions += 1
        groups.append(cands)
    ctx.counters.work_units += additions
    ctx.counters.parallel_steps += 1
    winners = tournament(ctx, groups)
    delta = [INF if c is None else c[0] for c in winners]
    cert = [None if c is None else c[1] for c in winners]
    return SsspResult(source, delta, cert, tables, row)


def add_super_source(g: WeightedDigraph, zero=0) -> WeightedDigraph:
    """Append vertex ``n`` with a ``zero``-weight edge to every original vertex."""
    extra = tuple((g.n, v, zero) for v in range(g.n))
    return WeightedDigraph(g.n + 1, g.edges + extra)


@dataclass
class PotentialCheck:
    ok: bool
    violated_edge: int | None = None

    def __bool__(self):
        return self.ok


def check_potential(ctx: Context, g: WeightedDigraph, p: Sequence) -> PotentialCheck:
    """Test ``p[u] + w(u, v) >= p[v]`` on every edge in a single batch."""
    if any(x is INF for x in p[: g.n]):
        raise ValueError("potential must be finite on every vertex")
    pairs = [(p[u] + w, p[v]) for u, v, w in g.edges]
    ctx.counters.work_units += len(pairs)
    ctx.counters.parallel_steps += 1
    outcomes = ctx.compare_all(pairs) if pairs else []
    for idx, o in enumerate(outcomes):
        if o is Ordering.LESS:
            return PotentialCheck(False, idx)
    return PotentialCheck(True)


@dataclass
class NegCycleVerdict:
    has_negative_cycle: bool
    violated_edge: tuple[int, int, int] | None = None
    """``(edge index, u, v)`` with ``p[u] + w < p[v]``."""
    potential: list | None = None
    centers: CenterSet | None = None
    fallback: bool = False
    """Randomized sampling gave up and all vertices were used as centers."""

    def to_json(self) -> dict:
        out: dict = {"negative_cycle": self.has_negative_cycle}
        if self.violated_edge is not None:
            idx, u, v = self.violated_edge
            out["violated_edge"] = {"index": idx, "src": u, "dst": v}
        if self.potential is not None:
            out["potential"] = [_num_json(x) for x in self.potential]
        if self.centers is not None:
            out["centers"] = self.centers.to_json()
        out["fallback_to_all_centers"] = self.fallback
        return out


def _num_json(x):
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def select_centers(
    ctx: Context,
    g: WeightedDigraph,
    h: int,
    mode: CenterMode | str,
    rng: random.Random | None = None,
    c: float = 1.0,
) -> tuple[CenterSet, bool]:
    """Centers for the graph ``g`` (already including the super-source).

    Returns ``(centers, fell_back)``. Randomized sampling is retried
    ``RANDOMIZED_RETRIES`` times before falling back to all vertices.
    """
    mode = CenterMode(mode)
    n = g.n
    if mode is CenterMode.FULL or n < 2:
        return all_centers(n), False
    if mode is CenterMode.RANDOMIZED:
        rng = rng if rng is not None else random.Random(0)
        for _ in range(1 + RANDOMIZED_RETRIES):
            got = sample_centers(n, min(h, n), c, rng)
            if not isinstance(got, TooLarge):
                return got, False
        return all_centers(n), True
    if mode is CenterMode.GREEDY:
        half = h // 2
        if half == 0:
            return all_centers(n), False
        tables = bellman_ford_hop_multi(ctx, g, range(n), half)
        return greedy_hitting_set(build_path_family(tables), n), False
    raise ValueError(f"cannot select centers in mode {mode}")


def detect_negative_cycle(
    ctx: Context,
    g: WeightedDigraph,
    h: int,
    mode: CenterMode | str = CenterMode.FULL,
    seed: int = 0,
    c: float = 1.0,
    centers: CenterSet | None = None,
) -> NegCycleVerdict:
    """Negative cycle test via distances from a super-source.

    A "no" answer ships the potential that passed the check. Passing
    ``centers`` skips center selection (the randomized parametric solver
    samples them once up front).
    """
    if not 1 <= h <= g.n + 1:
        raise ValueError(f"hop bound {h} outside [1, {g.n + 1}]")
    gs = add_super_source(g, ctx.zero)
    s = g.n
    fallback = False
    if centers is None:
        centers, fallback = select_centers(ctx, gs, h, mode, random.Random(seed), c)
    res = hitting_set_sssp(ctx, gs, s, centers, h)
    p = res.delta[: g.n]
    check = check_potential(ctx, g, p)
    if check.ok:
        return NegCycleVerdict(False, None, p, centers, fallback)
    u, v, _ = g.edges[check.violated_edge]
    return NegCycleVerdict(True, (check.violated_edge, u, v), None, centers, fallback)


# -- sequential exact routines ------------------------------------------------


@dataclass
class CycleResult:
    value: Fraction
    cycle: list[int]
    edges: list[int]


@dataclass
class NegativeCycle:
    walk: list[int]
    edges: list[int]
    weight: Fraction


def _bellman_ford_full(n: int, edges, source: int | None):
    """Bellman-Ford to fixpoint. ``source=None`` starts every vertex at zero.

    Returns ``(dist, parent_edge, last_relaxed)``; ``last_relaxed`` is a vertex
    updated in pass ``n`` (a negative cycle is then reachable) or None.
    """
    dist: list = [0] * n if source is None else [INF] * n
    if source is not None:
        dist[source] = 0
    parent = [None] * n
    for _ in range(n):
        last = None
        for idx, (u, v, w) in enumerate(edges):
            du = dist[u]
            if du is INF:
                continue
            nd = du + w
            if dist[v] is INF or nd < dist[v]:
                dist[v] = nd
                parent[v] = idx
                last = v
        if last is None:
            return dist, parent, None
    return dist, parent, last


def min_weight_cycle_seq(g: WeightedDigraph) -> NegativeCycle | CycleResult:
    """Minimum weight cycle, or an explicit negative cycle if one exists.

    Without negative cycles the value is ``min over edges (u, v)`` of
    ``w(u, v) + d(v, u)``, using one Bellman-Ford run per vertex.
    """
    n, edges = g.n, g.edges
    _, parent, last = _bellman_ford_full(n, edges, None)
    if last is not None:
        y = last
        for _ in range(n):
            y = edges[parent[y]][0]
        cyc_edges = []
        v = y
        while True:
            idx = parent[v]
            cyc_edges.append(idx)
            v = edges[idx][0]
            if v == y:
                break
        cyc_edges.reverse()
        walk = [edges[cyc_edges[0]][0]] + [edges[i][1] for i in cyc_edges]
        weight = sum((Fraction(edges[i][2]) for i in cyc_edges), Fraction(0))
        assert weight < 0, "predecessor cycle must be negative"
        return NegativeCycle(walk, cyc_edges, weight)

    runs = {}
    best = None
    for idx, (u, v, w) in enumerate(edges):
        if v not in runs:
            runs[v] = _bellman_ford_full(n, edges, v)[:2]
        dist, _ = runs[v]
        if dist[u] is INF:
            continue
        val = w + dist[u]
        if best is None or val < best[0]:
            best = (val, idx)
    if best is None:
        raise ValueError("graph has no cycle")
    val, idx = best
    u, v, _ = edges[idx]
    dist, parent = runs[v]
    back = []
    x = u
    while x != v:
        pidx = parent[x]
        back.append(pidx)
        x = edges[pidx][0]
    back.reverse()
    cyc_edges = [idx] + back
    cycle = [u] + [edges[i][1] for i in cyc_edges]
    return CycleResult(Fraction(val), cycle, cyc_edges)


def compare_to_lambda_star(g: RatioGraph, lam) -> Ordering:
    """Where ``lam`` lies relative to the minimum ratio: LESS means ``lam < lam*``.

    The sign of the minimum cycle weight of the graph reweighted at ``lam``
    is computed on integers scaled by the denominator of ``lam``: a negative
    cycle means GREATER; otherwise the potential from Bellman-Ford makes all
    reduced weights nonnegative, and a zero cycle exists exactly when the
    subgraph of tight edges has a cycle.
    """
    lam = Fraction(lam)
    p, q = lam.numerator, lam.denominator
    edges = [(e.src, e.dst, q * e.cost - p * e.time) for e in g.edges]
    dist, _, last = _bellman_ford_full(g.n, edges, None)
    if last is not None:
        return Ordering.GREATER
    tight = ((u, v) for u, v, w in edges if dist[u] + w == dist[v])
    return Ordering.EQUAL if _has_cycle(g.n, tight) else Ordering.LESS
