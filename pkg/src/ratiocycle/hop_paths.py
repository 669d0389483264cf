"""Hop-limited Bellman-Ford and min-plus repeated squaring.

Both routines take a minimum over many candidates per output cell. The minimum
is a knockout tournament: in every round the surviving candidates of every
cell are paired up in index order and all pairs, across all cells, are sent to
the context as one batch. A cell with ``F`` finite candidates therefore costs
``F - 1`` comparisons spread over ``ceil(log2 F)`` rounds.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .context import INF, ConcreteContext, Context, Ordering
from .graph import WeightedDigraph


class Unreached(LookupError):
    pass


def tournament(
    ctx: Context,
    groups: Sequence[Sequence[tuple]],
    prefer_left: Callable[[tuple, tuple], bool] | None = None,
) -> list[tuple | None]:
    """Minimum of each group by weight (element 0 of every candidate).

    On equal weight ``prefer_left(a, b)`` decides; without it the earlier
    candidate wins. Empty groups yield None.
    """
    level = [list(g) for g in groups]
    while True:
        pairs = []
        for cands in level:
            for j in range(0, len(cands) - 1, 2):
                pairs.append((cands[j][0], cands[j + 1][0]))
        if not pairs:
            break
        outcomes = iter(ctx.compare_all(pairs))
        for gi, cands in enumerate(level):
            size = len(cands)
            if size < 2:
                continue
            nxt = []
            for j in range(0, size - 1, 2):
                a, b = cands[j], cands[j + 1]
                o = next(outcomes)
                if o is Ordering.LESS:
                    nxt.append(a)
                elif o is Ordering.GREATER:
                    nxt.append(b)
                elif prefer_left is None or prefer_left(a, b):
                    nxt.append(a)
                else:
                    nxt.append(b)
            if size % 2:
                nxt.append(cands[-1])
            level[gi] = nxt
    return [c[0] if c else None for c in level]


# -- h-hop Bellman-Ford --------------------------------------------------------


@dataclass
class HopTable:
    """Shortest at-most-``h``-edge paths from one source.

    Among minimum-weight paths the one with fewest edges is kept, and among
    those the lexicographically smallest vertex sequence. ``paths[v]`` is that
    vertex sequence; ``parent[v]`` is its last edge as ``(pred, edge index)``.
    """

    source: int
    h: int
    dist: list
    hops: list[int]
    parent: list[tuple[int, int] | None]
    paths: list[tuple[int, ...] | None] = field(repr=False)


def _in_edges(g: WeightedDigraph):
    inn: list[list[tuple[int, int, object]]] = [[] for _ in range(g.n)]
    for idx, (u, v, w) in enumerate(g.edges):
        inn[v].append((u, idx, w))
    return inn


def bellman_ford_hop_multi(
    ctx: Context, g: WeightedDigraph, sources: Sequence[int], h: int
) -> list[HopTable]:
    """Run :func:`bellman_ford_hop` from several sources in lockstep.

    Iteration ``i`` of every source shares the same tournament rounds, which is
    what lets a parametric run resolve them together.
    """
    if h < 0:
        raise ValueError("hop bound must be nonnegative")
    n = g.n
    inn = _in_edges(g)
    zero = ctx.zero
    S = len(sources)
    dist = [[INF] * n for _ in range(S)]
    hops = [[0] * n for _ in range(S)]
    paths: list[list] = [[None] * n for _ in range(S)]
    pedge: list[list] = [[None] * n for _ in range(S)]
    for si, s in enumerate(sources):
        dist[si][s] = zero
        paths[si][s] = (s,)

    def prefer_left(a, b):
        # candidates: (weight, hops, pred or -1 to keep, edge index, source slot, v)
        if a[1] != b[1]:
            return a[1] < b[1]
        pa = old_paths[a[4]]
        v = a[5]
        if a[2] == b[2]:
            return a[3] <= b[3]
        path_a = pa[v] if a[2] < 0 else pa[a[2]] + (v,)
        path_b = pa[v] if b[2] < 0 else pa[b[2]] + (v,)
        if path_a != path_b:
            return path_a < path_b
        return a[3] <= b[3]

    for _ in range(h):
        old_dist, old_hops, old_paths = dist, hops, paths
        groups = []
        additions = 0
        for si in range(S):
            od, oh = old_dist[si], old_hops[si]
            pe = pedge[si]
            for v in range(n):
                cands = []
                if od[v] is not INF:
                    cands.append((od[v], oh[v], -1, pe[v] and pe[v][1], si, v))
                for u, idx, w in inn[v]:
                    du = od[u]
                    if du is INF:
                        continue
                    cands.append((du + w, oh[u] + 1, u, idx, si, v))
                    additions += 1
                groups.append(cands)
        ctx.counters.work_units += additions
        ctx.counters.parallel_steps += 1
        winners = tournament(ctx, groups, prefer_left)

        dist = [[INF] * n for _ in range(S)]
        hops = [[0] * n for _ in range(S)]
        paths = [[None] * n for _ in range(S)]
        new_pedge: list[list] = [[None] * n for _ in range(S)]
        it = iter(winners)
        for si in range(S):
            for v in range(n):
                c = next(it)
                if c is None:
                    continue
                dist[si][v] = c[0]
                hops[si][v] = c[1]
                if c[2] < 0:
                    paths[si][v] = old_paths[si][v]
                    new_pedge[si][v] = pedge[si][v]
                else:
                    paths[si][v] = old_paths[si][c[2]] + (v,)
                    new_pedge[si][v] = (c[2], c[3])
        pedge = new_pedge

    return [
        HopTable(s, h, dist[si], hops[si], pedge[si], paths[si])
        for si, s in enumerate(sources)
    ]


def bellman_ford_hop(ctx: Context, g: WeightedDigraph, source: int, h: int) -> HopTable:
    """``h`` synchronous Bellman-Ford rounds from ``source``.

    ``dist[v]`` is the minimum weight of a walk with at most ``h`` edges. If a
    negative cycle is reachable within ``h`` edges the recorded paths may be
    non-simple walks.
    """
    return bellman_ford_hop_multi(ctx, g, [source], h)[0]


def extract_path(table: HopTable, t: int) -> list[int]:
    path = table.paths[t]
    if path is None:
        raise Unreached(f"vertex {t} is not reachable from {table.source} within {table.h} hops")
    return list(path)


# -- min-plus ----------------------------------------------------------------


@dataclass
class DistMatrix:
    order: tuple[int, ...]
    entries: list[list]

    def __post_init__(self):
        self.order = tuple(self.order)
        k = len(self.order)
        if len(self.entries) != k or any(len(row) != k for row in self.entries):
            raise ValueError("entries must be a square matrix matching order")

    @property
    def k(self) -> int:
        return len(self.order)


_BIG = 1 << 61
_SAFE = 1 << 59


def _int_fast_path_ok(ctx: Context, *mats: DistMatrix) -> bool:
    if type(ctx) is not ConcreteContext or ctx._in_batch:
        return False
    for M in mats:
        for row in M.entries:
            for x in row:
                if x is INF:
                    continue
                if type(x) is not int or not -_SAFE < x < _SAFE:
                    return False
    return True


def _to_np(M: DistMatrix) -> np.ndarray:
    return np.array(
        [[_BIG if x is INF else x for x in row] for row in M.entries], dtype=np.int64
    )


def _minplus_np(ctx: Context, A: DistMatrix, B: DistMatrix, keep: DistMatrix | None):
    """Integer min-plus on numpy with the same counters as the tournament."""
    a, b = _to_np(A), _to_np(B)
    af = (a < _BIG).astype(np.int64)
    bf = (b < _BIG).astype(np.int64)
    pair_count = af @ bf
    cand = pair_count.copy()
    k = A.k
    c = np.empty((k, k), dtype=np.int64)
    for i in range(k):
        c[i] = (a[i][:, None] + b).min(axis=0)
    if keep is not None:
        kp = _to_np(keep)
        cand += kp < _BIG
        c = np.minimum(c, kp)
    comparisons = int(np.maximum(cand - 1, 0).sum())
    max_cand = int(cand.max()) if cand.size else 0
    rounds = math.ceil(math.log2(max_cand)) if max_cand >= 2 else 0
    cnt = ctx.counters
    cnt.work_units += int(pair_count.sum()) + comparisons
    cnt.comparisons += comparisons
    cnt.comparison_rounds += rounds
    cnt.parallel_steps += 1
    entries = [[INF if x >= _BIG // 2 else int(x) for x in row] for row in c.tolist()]
    return DistMatrix(A.order, entries)


def _minplus(ctx: Context, A: DistMatrix, B: DistMatrix, keep: DistMatrix | None):
    if A.order != B.order or (keep is not None and keep.order != A.order):
        raise ValueError("matrices must share the same vertex order")
    mats = (A, B) if keep is None else (A, B, keep)
    if _int_fast_path_ok(ctx, *mats):
        return _minplus_np(ctx, A, B, keep)
    k = A.k
    groups = []
    additions = 0
    for i in range(k):
        Ai = A.entries[i]
        for j in range(k):
            cands = []
            if keep is not None and keep.entries[i][j] is not INF:
                cands.append((keep.entries[i][j],))
            for t in range(k):
                x = Ai[t]
                y = B.entries[t][j]
                if x is INF or y is INF:
                    continue
                cands.append((x + y,))
                additions += 1
            groups.append(cands)
    ctx.counters.work_units += additions
    ctx.counters.parallel_steps += 1
    winners = tournament(ctx, groups)
    it = iter(winners)
    entries = [[(c[0] if (c := next(it)) is not None else INF) for _ in range(k)] for _ in range(k)]
    return DistMatrix(A.order, entries)


def minplus_product(ctx: Context, A: DistMatrix, B: DistMatrix) -> DistMatrix:
    """``C[i][j] = min_k A[i][k] + B[k][j]``."""
    return _minplus(ctx, A, B, None)


def apsp_repeated_squaring(ctx: Context, M: DistMatrix) -> DistMatrix:
    """Close ``M`` under min-plus by ``ceil(log2(k-1))`` squarings.

    Each step keeps the previous matrix in the minimum, which is a no-op when
    the diagonal is zero. Requires that the encoded graph has no negative cycle.
    """
    k = M.k
    steps = math.ceil(math.log2(k - 1)) if k > 2 else 0
    for _ in range(steps):
        M = _minplus(ctx, M, M, M)
    return M


def matrix_from_tables(tables: Sequence[HopTable], order: Sequence[int]) -> DistMatrix:
    """Center-graph matrix: entry (x, y) is the hop-limited distance x -> y."""
    by_source = {t.source: t for t in tables}
    return DistMatrix(tuple(order), [[by_source[x].dist[y] for y in order] for x in order])
