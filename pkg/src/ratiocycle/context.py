"""Comparison contexts.

Every shortest-path routine in this package compares weights only through a
context. :class:`ConcreteContext` compares exact numbers directly;
:class:`ParametricContext` holds :class:`LinearWeight` values ``a - lam*b`` and
answers each comparison as it would come out at the unknown optimum, by
delegating to a resolver (see :mod:`ratiocycle.parametric`).

Comparisons are issued in batches. A batch holds comparisons that do not depend
on each other's outcomes and corresponds to one parallel step of the algorithm.
"""

from __future__ import annotations

import contextlib
from dataclasses import asdict, dataclass
from enum import IntEnum
from fractions import Fraction
from typing import Callable, Sequence


class Ordering(IntEnum):
    LESS = -1
    EQUAL = 0
    GREATER = 1

    def mirror(self) -> "Ordering":
        return Ordering(-self.value)

    def __str__(self) -> str:
        return self.name.lower()


_ORD = (Ordering.EQUAL, Ordering.GREATER, Ordering.LESS)  # indexed by sign


class _Infinite:
    """Unreachable distance. Absorbing under addition, above every finite value."""

    __slots__ = ()

    def __repr__(self):
        return "INF"

    def __reduce__(self):
        return "INF"


INF = _Infinite()


def wadd(x, y):
    if x is INF or y is INF:
        return INF
    return x + y


@dataclass(frozen=True, slots=True)
class LinearWeight:
    """The function ``a - lam * b`` of the unknown ``lam``.

    ``a`` collects costs and ``b`` collects transit times. Both are exact
    (``int`` or :class:`~fractions.Fraction`).
    """

    a: int | Fraction = 0
    b: int | Fraction = 0

    def __add__(self, other: "LinearWeight") -> "LinearWeight":
        return LinearWeight(self.a + other.a, self.b + other.b)

    def __sub__(self, other: "LinearWeight") -> "LinearWeight":
        return LinearWeight(self.a - other.a, self.b - other.b)

    def __neg__(self) -> "LinearWeight":
        return LinearWeight(-self.a, -self.b)

    def at(self, lam) -> Fraction:
        return Fraction(self.a) - Fraction(lam) * self.b

    def root(self) -> Fraction | None:
        """The unique ``lam`` with value zero, or None if ``b == 0``."""
        if self.b == 0:
            return None
        return Fraction(self.a) / self.b

    def __repr__(self):
        return f"LW({self.a} - lam*{self.b})"


@dataclass
class Counters:
    comparisons: int = 0
    comparison_rounds: int = 0
    oracle_calls: int = 0
    work_units: int = 0
    parallel_steps: int = 0
    """Depth with an O(1)-depth minimum: one per relaxation sweep, min-plus
    product, center stitch and potential check. ``comparison_rounds`` instead
    counts every tournament round."""

    def as_dict(self) -> dict[str, int]:
        return asdict(self)


class BatchMisuse(RuntimeError):
    pass


class Context:
    """Base class: batching discipline and counters.

    Subclasses implement :meth:`_resolve`, which receives finite weight pairs
    and returns one :class:`Ordering` per pair.
    """

    zero: object = 0
    parametric = False

    def __init__(self, counters: Counters | None = None):
        self.counters = counters if counters is not None else Counters()
        self._in_batch = False

    def batch_begin(self) -> None:
        if self._in_batch:
            raise BatchMisuse("batch_begin inside an open batch")
        self._in_batch = True

    def batch_end(self) -> None:
        if not self._in_batch:
            raise BatchMisuse("batch_end without batch_begin")
        self._in_batch = False
        self.counters.comparison_rounds += 1

    @contextlib.contextmanager
    def batch(self):
        self.batch_begin()
        try:
            yield self
        finally:
            self.batch_end()

    def compare_all(self, pairs: Sequence[tuple[object, object]]) -> list[Ordering]:
        """Compare independent pairs. Outside a batch this is one batch by itself.

        Infinite operands are ordered without consulting :meth:`_resolve` and
        are not counted as comparisons of input values.
        """
        own_batch = not self._in_batch
        if own_batch:
            self.batch_begin()
        try:
            out: list[Ordering | None] = [None] * len(pairs)
            finite_idx = []
            finite = []
            for i, (x, y) in enumerate(pairs):
                if x is INF or y is INF:
                    out[i] = Ordering(int(x is INF) - int(y is INF))
                else:
                    finite_idx.append(i)
                    finite.append((x, y))
            if finite:
                resolved = self._resolve(finite)
                self.counters.comparisons += len(finite)
                self.counters.work_units += len(finite)
                for i, o in zip(finite_idx, resolved):
                    out[i] = o
            return out  # type: ignore[return-value]
        finally:
            if own_batch:
                self.batch_end()

    def compare(self, x, y) -> Ordering:
        return self.compare_all([(x, y)])[0]

    def _resolve(self, pairs):
        raise NotImplementedError


class ConcreteContext(Context):
    """Exact comparisons of numbers (``int`` or :class:`~fractions.Fraction`)."""

    zero = 0

    def _resolve(self, pairs):
        return [_ORD[(x > y) - (x < y)] for x, y in pairs]


class ParametricContext(Context):
    """Comparisons of :class:`LinearWeight` values at the unknown optimum.

    ``resolver`` is called with a list of weight differences ``x - y`` and
    returns their signs at the optimum as Orderings. When ``log`` is true every
    resolved comparison is recorded in :attr:`log` as ``(x, y, outcome)``.
    """

    zero = LinearWeight(0, 0)
    parametric = True

    def __init__(
        self,
        resolver: Callable[[list[LinearWeight]], list[Ordering]],
        counters: Counters | None = None,
        log: bool = False,
    ):
        super().__init__(counters)
        self.resolver = resolver
        self.log: list[tuple[LinearWeight, LinearWeight, Ordering]] | None = (
            [] if log else None
        )

    def _resolve(self, pairs):
        out = self.resolver([x - y for x, y in pairs])
        if self.log is not None:
            self.log.extend((x, y, o) for (x, y), o in zip(pairs, out))
        return out


def ctx_compare(ctx: Context, x, y) -> Ordering:
    return ctx.compare(x, y)
