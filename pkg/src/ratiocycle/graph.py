"""Graph data model, text format, validation and instance generators.

Costs and transit times are integers in the interchange format; every derived
quantity (a value of lambda, an edge weight at lambda, a distance) is an exact
:class:`fractions.Fraction`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import IO, Iterable, Sequence

Rational = Fraction


class ParseError(ValueError):
    """Malformed input text. ``line`` is 1-based."""

    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line
        self.message = message


class InvalidParams(ValueError):
    pass


class NoCycle(ValueError):
    """The graph has no directed cycle, so no ratio is defined."""


class InvalidGraph(ValueError):
    """Raised by solvers when :func:`validate` reports violations."""

    def __init__(self, report: "ValidationReport"):
        codes = ", ".join(code for code, _ in report.violations)
        super().__init__(f"invalid graph: {codes}")
        self.report = report


@dataclass(frozen=True)
class Edge:
    src: int
    dst: int
    cost: int
    time: int


@dataclass(frozen=True)
class RatioGraph:
    n: int
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        if not isinstance(self.edges, tuple):
            object.__setattr__(self, "edges", tuple(self.edges))

    @classmethod
    def from_tuples(cls, n: int, edges: Iterable[Sequence[int]]) -> "RatioGraph":
        return cls(n, tuple(Edge(*map(int, e)) for e in edges))

    @property
    def m(self) -> int:
        return len(self.edges)

    def as_tuples(self) -> list[tuple[int, int, int, int]]:
        return [(e.src, e.dst, e.cost, e.time) for e in self.edges]

    @property
    def max_abs_cost(self) -> int:
        return max((abs(e.cost) for e in self.edges), default=0)

    @property
    def max_time(self) -> int:
        return max((e.time for e in self.edges), default=0)


@dataclass(frozen=True)
class WeightedDigraph:
    """Directed graph whose weights are exact rationals or symbolic weights.

    The weight type is whatever the comparison context in use expects; the
    graph itself never inspects weights.
    """

    n: int
    edges: tuple[tuple[int, int, object], ...] = ()

    def __post_init__(self):
        if not isinstance(self.edges, tuple):
            object.__setattr__(self, "edges", tuple(tuple(e) for e in self.edges))


@dataclass
class ValidationReport:
    violations: list[tuple[str, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def codes(self) -> list[str]:
        return [code for code, _ in self.violations]


# -- text format -------------------------------------------------------------


def parse_ratio_graph(text: str | bytes | IO) -> RatioGraph:
    """Parse the line-oriented ``p ratio``/``a`` format.

    Comment lines start with ``c``; blank lines are ignored. Edges keep file
    order and parallel edges are preserved.
    """
    if hasattr(text, "read"):
        text = text.read()
    if isinstance(text, bytes):
        text = text.decode("utf-8")

    n = m = None
    header_line = 0
    edges: list[Edge] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split()
        if not tokens or tokens[0] == "c":
            continue
        kind = tokens[0]
        if kind == "p":
            if n is not None:
                raise ParseError(lineno, "duplicate header")
            if len(tokens) != 4 or tokens[1] != "ratio":
                raise ParseError(lineno, "expected 'p ratio <n> <m>'")
            n, m = _ints(tokens[2:], lineno)
            if n < 0 or m < 0:
                raise ParseError(lineno, "negative size in header")
            header_line = lineno
        elif kind == "a":
            if n is None:
                raise ParseError(lineno, "edge before header")
            if len(tokens) != 5:
                raise ParseError(lineno, "expected 'a <src> <dst> <cost> <time>'")
            src, dst, cost, time = _ints(tokens[1:], lineno)
            for v in (src, dst):
                if not 0 <= v < n:
                    raise ParseError(lineno, f"vertex {v} out of range [0, {n})")
            edges.append(Edge(src, dst, cost, time))
        else:
            raise ParseError(lineno, f"unknown line type {kind!r}")
    if n is None:
        raise ParseError(1, "missing 'p ratio' header")
    if len(edges) != m:
        raise ParseError(header_line, f"header declares {m} edges, found {len(edges)}")
    return RatioGraph(n, tuple(edges))


def _ints(tokens: Sequence[str], lineno: int) -> list[int]:
    try:
        return [int(tok) for tok in tokens]
    except ValueError:
        raise ParseError(lineno, "expected decimal integers") from None


def format_ratio_graph(g: RatioGraph, comments: Sequence[str] = ()) -> str:
    lines = [f"c {c}" for c in comments]
    lines.append(f"p ratio {g.n} {g.m}")
    lines.extend(f"a {e.src} {e.dst} {e.cost} {e.time}" for e in g.edges)
    return "\n".join(lines) + "\n"


# -- validation --------------------------------------------------------------


def _has_cycle(n: int, arcs: Iterable[tuple[int, int]]) -> bool:
    # Kahn's algorithm; self-loops count as cycles
    indeg = [0] * n
    succ: list[list[int]] = [[] for _ in range(n)]
    for u, v in arcs:
        succ[u].append(v)
        indeg[v] += 1
    stack = [v for v in range(n) if indeg[v] == 0]
    removed = 0
    while stack:
        u = stack.pop()
        removed += 1
        for v in succ[u]:
            indeg[v] -= 1
            if indeg[v] == 0:
                stack.append(v)
    return removed < n


def validate(g: RatioGraph) -> ValidationReport:
    report = ValidationReport()
    good = []
    for i, e in enumerate(g.edges):
        if not (0 <= e.src < g.n and 0 <= e.dst < g.n):
            report.violations.append(
                ("BadVertexId", f"edge {i} ({e.src}->{e.dst}) leaves [0, {g.n})")
            )
            continue
        if e.time < 0:
            report.violations.append(("NegativeTransit", f"edge {i} has time {e.time}"))
        good.append(e)
    if _has_cycle(g.n, ((e.src, e.dst) for e in good if e.time == 0)):
        report.violations.append(
            ("ZeroTransitCycle", "a cycle made only of zero-time edges exists")
        )
    if not _has_cycle(g.n, ((e.src, e.dst) for e in good)):
        report.violations.append(("Acyclic", "the graph has no directed cycle"))
    return report


def require_cycle_graph(g: RatioGraph) -> None:
    """Raise :class:`NoCycle` or :class:`InvalidGraph` unless ``g`` is solvable."""
    report = validate(g)
    if report.ok:
        return
    if report.codes == ["Acyclic"]:
        raise NoCycle("Acyclic: the graph has no directed cycle")
    raise InvalidGraph(report)


def substitute_lambda(g: RatioGraph, lam: Fraction | int) -> WeightedDigraph:
    """Reweight every edge to ``cost - lam * time``."""
    lam = Fraction(lam)
    return WeightedDigraph(
        g.n, tuple((e.src, e.dst, e.cost - lam * e.time) for e in g.edges)
    )


def parse_rational(text: str) -> Fraction:
    """Parse ``p/q`` or an integer. Decimal points are rejected to stay exact."""
    text = text.strip()
    if "." in text or "e" in text.lower():
        raise ValueError(f"expected an integer or p/q, got {text!r}")
    return Fraction(text)


# -- generators --------------------------------------------------------------


def _check_range(name: str, lo_hi: tuple[int, int]) -> tuple[int, int]:
    lo, hi = lo_hi
    if lo > hi:
        raise InvalidParams(f"{name} range [{lo}, {hi}] is empty")
    return lo, hi


def gen_random_graph(
    n: int,
    m: int,
    cost_range: tuple[int, int] = (-9, 9),
    time_range: tuple[int, int] = (1, 4),
    seed: int = 0,
) -> RatioGraph:
    """Random graph with a Hamiltonian backbone cycle plus ``m - n`` random edges."""
    if n < 1 or m < n:
        raise InvalidParams(f"need 1 <= n <= m, got n={n}, m={m}")
    c_lo, c_hi = _check_range("cost", cost_range)
    t_lo, t_hi = _check_range("time", time_range)
    if t_lo < 1:
        raise InvalidParams("time range must start at >= 1")
    rng = random.Random(seed)
    order = list(range(n))
    rng.shuffle(order)
    arcs = [(order[i], order[(i + 1) % n]) for i in range(n)]
    arcs += [(rng.randrange(n), rng.randrange(n)) for _ in range(m - n)]
    edges = tuple(
        Edge(u, v, rng.randint(c_lo, c_hi), rng.randint(t_lo, t_hi)) for u, v in arcs
    )
    return RatioGraph(n, edges)


def gen_planted_ratio(
    n: int,
    m: int,
    planted: Fraction | int | str,
    seed: int = 0,
    potential_range: int = 5,
    slack_range: tuple[int, int] = (1, 6),
) -> tuple[RatioGraph, Fraction]:
    """Random graph whose minimum ratio is exactly ``planted``.

    A Hamiltonian cycle is planted with times that are multiples of the
    denominator ``q``. A random integer potential ``phi`` is drawn and each
    planted edge gets ``cost = planted * time + phi[v] - phi[u]`` so its reduced
    weight at ``planted`` is zero; every other edge gets a strictly positive
    reduced weight. Every cycle then has nonnegative weight at ``planted`` and
    only the planted cycle reaches zero.
    """
    planted = Fraction(planted)
    if n < 1 or m < n:
        raise InvalidParams(f"need 1 <= n <= m, got n={n}, m={m}")
    s_lo, s_hi = _check_range("slack", slack_range)
    if s_lo < 1:
        raise InvalidParams("slack must be positive")
    q = planted.denominator
    rng = random.Random(seed)
    phi = [rng.randint(-potential_range, potential_range) for _ in range(n)]
    order = list(range(n))
    rng.shuffle(order)

    edges = []
    for i in range(n):
        u, v = order[i], order[(i + 1) % n]
        t = q * rng.randint(1, 2)
        c = planted * t + phi[v] - phi[u]
        assert c.denominator == 1
        edges.append(Edge(u, v, int(c), t))
    for _ in range(m - n):
        u, v = rng.randrange(n), rng.randrange(n)
        t = rng.randint(1, 2 * q)
        reduced_floor = planted * t + phi[v] - phi[u]
        # smallest integer strictly above the zero-reduced-weight cost
        c = reduced_floor.__floor__() + rng.randint(s_lo, s_hi)
        edges.append(Edge(u, v, c, t))
    return RatioGraph(n, tuple(edges)), planted
