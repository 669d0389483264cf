"""Center sets that hit every canonical half-hop shortest path.

Two constructions: independent random sampling, and the greedy
max-coverage heuristic over an explicit path family.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Sequence

from .context import INF
from .hop_paths import HopTable


class CenterMode(str, Enum):
    RANDOMIZED = "randomized"
    GREEDY = "greedy"
    EXPLICIT = "explicit"
    FULL = "full"


@dataclass(frozen=True)
class CenterSet:
    members: tuple[int, ...]
    mode: CenterMode
    size_bound: int

    def __post_init__(self):
        object.__setattr__(self, "members", tuple(sorted(set(self.members))))

    def __len__(self):
        return len(self.members)

    def __contains__(self, v):
        return v in self.members

    def to_json(self) -> list[int]:
        return list(self.members)


@dataclass(frozen=True)
class TooLarge:
    """Sampling drew more centers than the size bound allows."""

    size: int
    size_bound: int


def ln_upper(n: int) -> float:
    """``ln(n)`` rounded up to the next double."""
    return math.nextafter(math.log(n), math.inf)


def sampling_probability(n: int, h: int, c: float = 1.0) -> float:
    return min(3 * c * ln_upper(n) / h, 1.0)


def size_limit(n: int, h: int, c: float = 1.0) -> float:
    return 9 * c * n * ln_upper(n) / h


def sample_centers(
    n: int, h: int, c: float = 1.0, rng: random.Random | None = None
) -> CenterSet | TooLarge:
    """Keep each vertex independently with probability ``min(3 c ln(n) / h, 1)``.

    Returns :class:`TooLarge` (not an exception) if more than
    ``9 c n ln(n) / h`` vertices were drawn.
    """
    if n < 2 or not 1 <= h <= n or c < 1:
        raise ValueError(f"need n >= 2, 1 <= h <= n, c >= 1 (got n={n}, h={h}, c={c})")
    rng = rng if rng is not None else random.Random()
    p = sampling_probability(n, h, c)
    limit = size_limit(n, h, c)
    bound = math.ceil(limit)
    if p >= 1.0:
        members = list(range(n))
    else:
        members = [v for v in range(n) if rng.random() < p]
    if len(members) > limit:
        return TooLarge(len(members), bound)
    return CenterSet(tuple(members), CenterMode.RANDOMIZED, bound)


def all_centers(n: int) -> CenterSet:
    return CenterSet(tuple(range(n)), CenterMode.FULL, n)


@dataclass(frozen=True)
class PathFamily:
    sets: tuple[frozenset[int], ...]

    def __len__(self):
        return len(self.sets)

    @property
    def min_size(self) -> int:
        return min((len(s) for s in self.sets), default=0)


def build_path_family(tables: Iterable[HopTable]) -> PathFamily:
    """Vertex sets of canonical paths that use exactly the hop bound.

    ``tables`` are per-source hop tables all computed with the same bound
    (half of the SSSP hop bound, rounded down).
    """
    sets = []
    for table in tables:
        for v, d in enumerate(table.dist):
            if d is INF or table.hops[v] != table.h:
                continue
            sets.append(frozenset(table.paths[v]))
    return PathFamily(tuple(sets))


def greedy_hitting_set(family: PathFamily | Sequence[Iterable[int]], n: int) -> CenterSet:
    """Repeatedly take the element lying in the most unhit sets (ties: smallest id)."""
    sets = [frozenset(s) for s in (family.sets if isinstance(family, PathFamily) else family)]
    if any(not s for s in sets):
        raise ValueError("family contains an empty set")
    containing: list[list[int]] = [[] for _ in range(n)]
    for i, s in enumerate(sets):
        for v in s:
            containing[v].append(i)
    count = [len(c) for c in containing]
    alive = [True] * len(sets)
    remaining = len(sets)
    chosen = []
    while remaining:
        best = max(range(n), key=lambda v: (count[v], -v))
        chosen.append(best)
        for i in containing[best]:
            if alive[i]:
                alive[i] = False
                remaining -= 1
                for v in sets[i]:
                    count[v] -= 1
    k, q = len(sets), min((len(s) for s in sets), default=1)
    bound = greedy_size_bound(n, q, k)
    return CenterSet(tuple(chosen), CenterMode.GREEDY, bound)


def greedy_size_bound(n: int, q: int, k: int) -> int:
    """``ceil((n / q) * (ln k + 1))``; zero for an empty family."""
    if k == 0:
        return 0
    return math.ceil(n / q * (math.log(k) + 1))


def hits_all(centers: Iterable[int], family: PathFamily) -> bool:
    members = set(centers)
    return all(members & s for s in family.sets)
