"""Finite k-graphs given by coloured edges and factorization tables.

Colours are 0-based internally.  A path is stored in normal form: all
colour-0 edges first (next to the range), then colour-1 edges, and so on.
Edge sequences read left to right from the range, so ``(e, f)`` is
composable when ``src(e) == dst(f)``.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

import numpy as np

from ..errors import InputError

Degree = tuple[int, ...]


@dataclass(frozen=True)
class KPath:
    """A finite path in normal form."""

    rng: int
    src: int
    degree: Degree
    edges: tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.edges)

    def is_vertex(self) -> bool:
        return not self.edges


def _leq(m: Sequence[int], n: Sequence[int]) -> bool:
    return all(a <= b for a, b in zip(m, n))


@dataclass(frozen=True, eq=False)
class FiniteKGraph:
    """``factorize[(i, j)]`` (``i < j``) maps an ``i``-edge followed by a ``j``-edge
    to the ``j``-edge followed by an ``i``-edge with the same range and source."""

    k: int
    n_vertices: int
    edge_color: tuple[int, ...]
    edge_src: tuple[int, ...]
    edge_dst: tuple[int, ...]
    factorize: Mapping[tuple[int, int], Mapping[tuple[int, int], tuple[int, int]]] = field(
        default_factory=dict)
    edge_labels: tuple = ()
    vertex_labels: tuple = ()
    name: str = ""

    def __post_init__(self):
        if not self.edge_labels:
            object.__setattr__(self, "edge_labels", tuple(range(self.n_edges)))
        if not self.vertex_labels:
            object.__setattr__(self, "vertex_labels", tuple(range(self.n_vertices)))
        fac = {tuple(ij): {tuple(a): tuple(b) for a, b in table.items()}
               for ij, table in self.factorize.items()}
        object.__setattr__(self, "factorize", fac)

    @property
    def n_edges(self) -> int:
        return len(self.edge_color)

    @cached_property
    def _inverse_factorize(self) -> dict:
        return {ij: {v: key for key, v in table.items()} for ij, table in self.factorize.items()}

    @cached_property
    def edges_by_color_range(self) -> dict[tuple[int, int], tuple[int, ...]]:
        out: dict[tuple[int, int], list[int]] = {}
        for e in range(self.n_edges):
            out.setdefault((self.edge_color[e], self.edge_dst[e]), []).append(e)
        return {key: tuple(v) for key, v in out.items()}

    def edges_into(self, color: int, v: int) -> tuple[int, ...]:
        return self.edges_by_color_range.get((color, v), ())

    def unit(self, color: int) -> Degree:
        return tuple(int(i == color) for i in range(self.k))

    def adjacency(self, color: int) -> np.ndarray:
        """``A[u, v]`` = number of edges of ``color`` with range ``u`` and source ``v``."""
        A = np.zeros((self.n_vertices, self.n_vertices), dtype=np.int64)
        for e in range(self.n_edges):
            if self.edge_color[e] == color:
                A[self.edge_dst[e], self.edge_src[e]] += 1
        return A

    # -------------------------------------------------------------- paths

    def vertex(self, v: int) -> KPath:
        return KPath(v, v, (0,) * self.k, ())

    def swap(self, a: int, b: int) -> tuple[int, int]:
        """Rewrite the composable pair ``a b`` (different colours) as ``b' a'``."""
        ca, cb = self.edge_color[a], self.edge_color[b]
        try:
            if ca < cb:
                return self.factorize[(ca, cb)][(a, b)]
            return self._inverse_factorize[(cb, ca)][(a, b)]
        except KeyError:
            raise InputError(f"no factorization for edge pair ({a}, {b})") from None

    def reorder(self, edges: Sequence[int], colors: Sequence[int]) -> tuple[int, ...]:
        """Rearrange a composable edge sequence so its colours read ``colors``."""
        seq = list(edges)
        if sorted(self.edge_color[e] for e in seq) != sorted(colors):
            raise InputError("target colour sequence does not match the path degree")
        for pos, c in enumerate(colors):
            q = next(i for i in range(pos, len(seq)) if self.edge_color[seq[i]] == c)
            while q > pos:
                seq[q - 1], seq[q] = self.swap(seq[q - 1], seq[q])
                q -= 1
        return tuple(seq)

    def normal_colors(self, degree: Degree) -> list[int]:
        return [c for c in range(self.k) for _ in range(degree[c])]

    def path(self, edges: Sequence[int], vertex: int | None = None) -> KPath:
        """Normal form of a composable edge sequence (``vertex`` is needed when empty)."""
        edges = tuple(int(e) for e in edges)
        if not edges:
            if vertex is None:
                raise InputError("an empty path needs a vertex")
            return self.vertex(vertex)
        for a, b in zip(edges, edges[1:]):
            if self.edge_src[a] != self.edge_dst[b]:
                raise InputError(f"edges {a}, {b} are not composable")
        deg = [0] * self.k
        for e in edges:
            deg[self.edge_color[e]] += 1
        deg = tuple(deg)
        nf = self.reorder(edges, self.normal_colors(deg))
        return KPath(self.edge_dst[nf[0]], self.edge_src[nf[-1]], deg, nf)

    def concat(self, lam: KPath, mu: KPath) -> KPath:
        if lam.src != mu.rng:
            raise InputError(f"cannot compose: source {lam.src} differs from range {mu.rng}")
        if not lam.edges:
            return mu
        if not mu.edges:
            return lam
        return self.path(lam.edges + mu.edges)

    def factor(self, lam: KPath, m: Degree) -> tuple[KPath, KPath]:
        """``(lam(0, m), lam(m, d(lam)))``."""
        m = tuple(int(v) for v in m)
        if len(m) != self.k or not _leq((0,) * self.k, m) or not _leq(m, lam.degree):
            raise InputError(f"degree {m} is not between 0 and {lam.degree}")
        rest = tuple(d - a for d, a in zip(lam.degree, m))
        seq = self.reorder(lam.edges, self.normal_colors(m) + self.normal_colors(rest))
        n1 = sum(m)
        head, tail = seq[:n1], seq[n1:]
        mid = self.edge_src[head[-1]] if head else lam.rng
        return (self.path(head, mid) if head else self.vertex(lam.rng),
                self.path(tail, mid) if tail else self.vertex(lam.src))

    def window(self, lam: KPath, m: Degree, n: Degree) -> KPath:
        """``lam(m, n)`` for ``m <= n <= d(lam)``."""
        if not _leq(m, n):
            raise InputError(f"window bounds {m} > {n}")
        head, _ = self.factor(lam, n)
        return self.factor(head, m)[1]

    def enumerate_paths(self, degree: Degree, rng: int | None = None) -> list[KPath]:
        """All paths of the given degree (optionally with fixed range), in normal form."""
        degree = tuple(int(v) for v in degree)
        if len(degree) != self.k or min(degree, default=0) < 0:
            raise InputError(f"bad degree {degree}")
        colors = self.normal_colors(degree)
        starts = range(self.n_vertices) if rng is None else [rng]
        out = []
        for v in starts:
            if not colors:
                out.append(self.vertex(v))
                continue
            stack = [(v, ())]
            while stack:
                w, seq = stack.pop()
                if len(seq) == len(colors):
                    out.append(KPath(v, w, degree, seq))
                    continue
                for e in reversed(self.edges_into(colors[len(seq)], w)):
                    stack.append((self.edge_src[e], seq + (e,)))
        return out

    def count_paths(self, degree: Degree) -> int:
        M = np.eye(self.n_vertices, dtype=object)
        for c in range(self.k):
            for _ in range(degree[c]):
                M = M.dot(self.adjacency(c).astype(object))
        return int(M.sum())

    def is_strongly_connected(self) -> bool:
        adj = sum((self.adjacency(c) for c in range(self.k)),
                  np.zeros((self.n_vertices, self.n_vertices), dtype=np.int64))
        for start in range(self.n_vertices):
            seen = {start}
            queue = deque([start])
            while queue:
                u = queue.popleft()
                for w in np.nonzero(adj[:, u])[0]:
                    if int(w) not in seen:
                        seen.add(int(w))
                        queue.append(int(w))
            if len(seen) < self.n_vertices:
                return False
        return True

    def label(self, p: KPath) -> list:
        if not p.edges:
            return [self.vertex_labels[p.rng]]
        return [self.edge_labels[e] for e in p.edges]


def validate_kgraph(g: FiniteKGraph) -> list[str]:
    """Empty list iff factorization, associativity, no-sources and strong connectivity hold."""
    errs = []
    n = g.n_vertices
    if g.k < 1:
        return ["k must be at least 1"]
    for e in range(g.n_edges):
        if not (0 <= g.edge_color[e] < g.k):
            errs.append(f"edge {g.edge_labels[e]} has colour {g.edge_color[e]} outside 0..{g.k - 1}")
        if not (0 <= g.edge_src[e] < n and 0 <= g.edge_dst[e] < n):
            errs.append(f"edge {g.edge_labels[e]} has an endpoint outside the vertex set")
    if errs:
        return errs
    for i in range(g.k):
        for j in range(i + 1, g.k):
            table = g.factorize.get((i, j))
            if table is None:
                errs.append(f"missing factorization table for colours ({i + 1},{j + 1})")
                continue
            dom = {(a, b) for a in range(g.n_edges) for b in range(g.n_edges)
                   if g.edge_color[a] == i and g.edge_color[b] == j and g.edge_src[a] == g.edge_dst[b]}
            cod = {(b, a) for b in range(g.n_edges) for a in range(g.n_edges)
                   if g.edge_color[b] == j and g.edge_color[a] == i and g.edge_src[b] == g.edge_dst[a]}
            if set(table) != dom:
                errs.append(f"factorization ({i + 1},{j + 1}) is not defined on exactly the composable pairs")
            images = list(table.values())
            if set(images) != cod or len(set(images)) != len(images):
                errs.append(f"factorization ({i + 1},{j + 1}) is not a bijection onto the reversed pairs")
            for (a, b), (b2, a2) in table.items():
                if (a, b) in dom and (b2, a2) in cod and (
                        g.edge_dst[a] != g.edge_dst[b2] or g.edge_src[b] != g.edge_src[a2]):
                    errs.append(f"factorization ({i + 1},{j + 1}) changes range or source of "
                                f"({g.edge_labels[a]},{g.edge_labels[b]})")
    if errs:
        return errs
    for i in range(g.k):
        for j in range(i + 1, g.k):
            for l in range(j + 1, g.k):
                for p in g.enumerate_paths(tuple(int(c in (i, j, l)) for c in range(g.k))):
                    e, f, h = p.edges
                    # route 1: swap (f,h), then (e,h'), then (e',f')
                    h1, f1 = g.swap(f, h)
                    h2, e1 = g.swap(e, h1)
                    f2, e2 = g.swap(e1, f1)
                    r1 = (h2, f2, e2)
                    # route 2: swap (e,f), then (e',h), then (f',h')
                    f3, e3 = g.swap(e, f)
                    h3, e4 = g.swap(e3, h)
                    h4, f4 = g.swap(f3, h3)
                    r2 = (h4, f4, e4)
                    if r1 != r2:
                        errs.append(f"associativity fails on colours ({i + 1},{j + 1},{l + 1}) "
                                    f"for path {g.label(p)}")
    for v in range(n):
        for c in range(g.k):
            if not g.edges_into(c, v):
                errs.append(f"vertex {g.vertex_labels[v]} receives no edge of colour {c + 1}")
    if not g.is_strongly_connected():
        errs.append("graph is not strongly connected")
    return errs


# ------------------------------------------------------------- fixtures

def one_graph(n_vertices: int, edges: Sequence[tuple[int, int]], name: str = "") -> FiniteKGraph:
    """1-graph from ``(src, dst)`` pairs."""
    return FiniteKGraph(1, n_vertices, tuple(0 for _ in edges), tuple(s for s, _ in edges),
                        tuple(d for _, d in edges), name=name)


def cycle_graph(n: int) -> FiniteKGraph:
    """``C_n``: edge ``i`` goes from vertex ``i+1`` to vertex ``i``."""
    return one_graph(n, [((i + 1) % n, i) for i in range(n)], name=f"cycle-{n}")


def bouquet(n_loops: int) -> FiniteKGraph:
    """One vertex with ``n_loops`` loops; two loops give the full 2-shift."""
    return one_graph(1, [(0, 0)] * n_loops, name=f"bouquet-{n_loops}")


def fibonacci_graph() -> FiniteKGraph:
    """1-graph with adjacency ``[[1,1],[1,0]]``."""
    return one_graph(2, [(0, 0), (1, 0), (0, 1)], name="fibonacci")


def single_vertex_2graph(n: int, m: int, perm: Mapping | None = None) -> FiniteKGraph:
    """One vertex, ``n`` colour-0 loops and ``m`` colour-1 loops.

    ``perm`` maps ``(a, b)`` to ``(b', a')`` for ``e_a f_b = f_b' e_a'``;
    the default is the flip ``e_a f_b = f_b e_a``.
    """
    colors = (0,) * n + (1,) * m
    table = {}
    for a in range(n):
        for b in range(m):
            b2, a2 = perm[(a, b)] if perm is not None else (b, a)
            table[(a, n + b)] = (n + b2, a2)
    labels = tuple(f"e{a}" for a in range(n)) + tuple(f"f{b}" for b in range(m))
    return FiniteKGraph(2, 1, colors, (0,) * (n + m), (0,) * (n + m), {(0, 1): table},
                        edge_labels=labels, name=f"single-vertex-{n}x{m}")


def rotation_graph() -> FiniteKGraph:
    """The single-vertex 2-graph with one edge of each colour."""
    return single_vertex_2graph(1, 1)


def iter_degrees(box: Degree) -> Iterator[Degree]:
    """All ``n`` with ``0 <= n <= box``, in lexicographic order."""
    return (tuple(t) for t in itertools.product(*(range(b + 1) for b in box)))
