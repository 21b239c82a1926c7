"""Eventually periodic infinite paths and elements of the path groupoid."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InputError
from .graph import Degree, FiniteKGraph, KPath


def _add(a: Degree, b: Degree) -> Degree:
    return tuple(x + y for x, y in zip(a, b))


def _sub(a: Degree, b: Degree) -> Degree:
    return tuple(x - y for x, y in zip(a, b))


def _join(a: Degree, b: Degree) -> Degree:
    return tuple(max(x, y) for x, y in zip(a, b))


def positive_part(l: Degree) -> Degree:
    return tuple(max(v, 0) for v in l)


def negative_part(l: Degree) -> Degree:
    return tuple(max(-v, 0) for v in l)


@dataclass(frozen=True, eq=False)
class EventuallyPeriodicPath:
    """The infinite path ``prefix cycle cycle cycle ...``."""

    graph: FiniteKGraph
    prefix: KPath
    cycle: KPath

    def __post_init__(self):
        c = self.cycle
        if c.rng != c.src or c.rng != self.prefix.src:
            raise InputError("cycle must start and end at the source of the prefix")
        if min(c.degree) < 1:
            raise InputError(f"cycle degree {c.degree} must be at least 1 in every colour")

    @property
    def rng(self) -> int:
        return self.prefix.rng

    def initial(self, n: Degree) -> KPath:
        """``x(0, n)``."""
        g = self.graph
        a = self.cycle.degree
        short = _sub(n, self.prefix.degree)
        reps = max((-(-s // ai) for s, ai in zip(short, a)), default=0)
        lam = self.prefix
        for _ in range(max(reps, 0)):
            lam = g.concat(lam, self.cycle)
        return g.factor(lam, n)[0] if lam.degree != tuple(n) else lam

    def window(self, m: Degree, n: Degree) -> KPath:
        """``x(m, n)``."""
        return self.graph.window(self.initial(n), m, n)

    def shift(self, l: Degree) -> "EventuallyPeriodicPath":
        """``rho^l(x)`` in closed form: drop the first ``l`` of ``prefix cycle^j``."""
        g = self.graph
        a = self.cycle.degree
        short = _sub(l, self.prefix.degree)
        reps = max(0, max((-(-s // ai) for s, ai in zip(short, a)), default=0))
        lam = self.prefix
        for _ in range(reps):
            lam = g.concat(lam, self.cycle)
        return EventuallyPeriodicPath(g, g.factor(lam, l)[1], self.cycle)

    def prepend(self, lam: KPath) -> "EventuallyPeriodicPath":
        return EventuallyPeriodicPath(self.graph, self.graph.concat(lam, self.prefix), self.cycle)

    def equals(self, other: "EventuallyPeriodicPath") -> bool:
        """Exact equality of the infinite paths.

        With ``N`` the join of the prefix degrees and ``a``, ``b`` the cycle
        degrees, both tails after ``N`` are pure periodic with periods ``a``
        and ``b``.  They agree iff ``x(0, N+b) = y(0, N+b)`` and
        ``x(N+b, N+a+b) = x(N, N+a)``.
        """
        if self.graph is not other.graph:
            return False
        a, b = self.cycle.degree, other.cycle.degree
        N = _join(self.prefix.degree, other.prefix.degree)
        Nb = _add(N, b)
        if self.initial(Nb) != other.initial(Nb):
            return False
        long = self.initial(_add(Nb, a))
        g = self.graph
        return g.window(long, Nb, _add(Nb, a)) == g.window(long, N, _add(N, a))

    def __eq__(self, other) -> bool:
        return isinstance(other, EventuallyPeriodicPath) and self.equals(other)

    __hash__ = None

    def to_json(self) -> dict:
        g = self.graph
        return {"prefix": g.label(self.prefix), "cycle": g.label(self.cycle)}


def cycles_at(g: FiniteKGraph, v: int, degree: Degree) -> list[KPath]:
    return [p for p in g.enumerate_paths(degree, rng=v) if p.src == v]


def find_cycle(g: FiniteKGraph, v: int, rng: np.random.Generator | None = None,
               max_scale: int = 8) -> KPath:
    """A cycle at ``v`` of degree ``j (1,...,1)`` for the least possible ``j``."""
    for j in range(1, max_scale + 1):
        cyc = cycles_at(g, v, (j,) * g.k)
        if cyc:
            return cyc[0] if rng is None else cyc[int(rng.integers(len(cyc)))]
    raise InputError(f"no cycle at vertex {v} up to degree {max_scale}")


def random_path(g: FiniteKGraph, degree: Degree, rng: np.random.Generator,
                src: int | None = None, range_vertex: int | None = None) -> KPath | None:
    paths = g.enumerate_paths(degree, rng=range_vertex)
    if src is not None:
        paths = [p for p in paths if p.src == src]
    if not paths:
        return None
    return paths[int(rng.integers(len(paths)))]


def random_ep_path(g: FiniteKGraph, rng: np.random.Generator, max_prefix: int = 2
                   ) -> EventuallyPeriodicPath:
    d = tuple(int(v) for v in rng.integers(0, max_prefix + 1, size=g.k))
    prefix = random_path(g, d, rng)
    return EventuallyPeriodicPath(g, prefix, find_cycle(g, prefix.src, rng))


@dataclass(frozen=True, eq=False)
class PathGroupoidElement:
    """``(x, l, y)`` with a witness ``(m, n)``: ``l = m - n`` and ``rho^m x = rho^n y``."""

    x: EventuallyPeriodicPath
    l: Degree
    y: EventuallyPeriodicPath
    witness: tuple[Degree, Degree]

    def __post_init__(self):
        m, n = self.witness
        if tuple(self.l) != _sub(m, n):
            raise InputError(f"witness {self.witness} does not give l = {self.l}")
        if min(m) < 0 or min(n) < 0:
            raise InputError("witness degrees must be nonnegative")
        if not self.x.shift(m).equals(self.y.shift(n)):
            raise InputError(f"witness {self.witness} fails: shifted paths differ")

    @classmethod
    def unit(cls, x: EventuallyPeriodicPath) -> "PathGroupoidElement":
        z = (0,) * x.graph.k
        return cls(x, z, x, (z, z))

    @classmethod
    def isotropy(cls, x: EventuallyPeriodicPath, p: Degree) -> "PathGroupoidElement":
        """``(x, p, x)`` for ``p`` in the periodicity group."""
        return cls(x, tuple(p), x, (positive_part(p), negative_part(p)))

    @property
    def graph(self) -> FiniteKGraph:
        return self.x.graph

    def inverse(self) -> "PathGroupoidElement":
        m, n = self.witness
        return PathGroupoidElement(self.y, tuple(-v for v in self.l), self.x, (n, m))

    def composable(self, other: "PathGroupoidElement") -> bool:
        return self.y.equals(other.x)

    def __mul__(self, other: "PathGroupoidElement") -> "PathGroupoidElement":
        if not self.composable(other):
            raise InputError("elements are not composable")
        m, n = self.witness
        m2, n2 = other.witness
        t = _join(n, m2)
        return PathGroupoidElement(self.x, _add(self.l, other.l), other.y,
                                   (_add(m, _sub(t, n)), _add(n2, _sub(t, m2))))

    def equals(self, other: "PathGroupoidElement") -> bool:
        return tuple(self.l) == tuple(other.l) and self.x.equals(other.x) and self.y.equals(other.y)

    def to_json(self) -> dict:
        return {"x": self.x.to_json(), "l": list(self.l), "y": self.y.to_json(),
                "witness": [list(self.witness[0]), list(self.witness[1])]}


def random_arrow_from(y: EventuallyPeriodicPath, rng: np.random.Generator, max_deg: int = 2
                      ) -> PathGroupoidElement:
    """A random ``(x, l, y)``: shift ``y`` by ``n`` then prepend a random ``lam``."""
    g = y.graph
    n = tuple(int(v) for v in rng.integers(0, max_deg + 1, size=g.k))
    tail = y.shift(n)
    d = tuple(int(v) for v in rng.integers(0, max_deg + 1, size=g.k))
    lam = random_path(g, d, rng, src=tail.rng)
    if lam is None:
        lam = g.vertex(tail.rng)
    x = tail.prepend(lam)
    return PathGroupoidElement(x, _sub(lam.degree, n), y, (lam.degree, n))
