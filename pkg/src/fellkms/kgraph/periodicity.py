"""The periodicity group intersected with a box, certified by the window criterion.

For ``p`` in Z^k put ``m = p v 0`` and ``n = (-p) v 0``.  Every finite path is
an initial segment of some infinite path (no sources) and a path is pinned
down by its single-edge increments, so ``rho^m x = rho^n x`` for every ``x``
iff for every colour ``i`` and every ``lam`` of degree ``m + n + e_i`` the
windows ``lam(m, m + e_i)`` and ``lam(n, n + e_i)`` coincide.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from ..lattice import LatticeSubgroup
from .graph import Degree, FiniteKGraph
from .paths import _add, negative_part, positive_part


@dataclass(frozen=True)
class WindowVerdict:
    candidate: Degree
    periodic: bool
    counterexample: list | None

    def to_json(self) -> dict:
        return {"p": list(self.candidate), "periodic": self.periodic,
                "counterexample": self.counterexample}


def window_criterion(g: FiniteKGraph, p: Degree) -> WindowVerdict:
    p = tuple(int(v) for v in p)
    m, n = positive_part(p), negative_part(p)
    for i in range(g.k):
        e = g.unit(i)
        for lam in g.enumerate_paths(_add(_add(m, n), e)):
            if g.window(lam, m, _add(m, e)) != g.window(lam, n, _add(n, e)):
                return WindowVerdict(p, False, g.label(lam))
    return WindowVerdict(p, True, None)


@dataclass(frozen=True)
class PeriodicityResult:
    subgroup: LatticeSubgroup
    box: int
    verdicts: tuple

    @property
    def certified(self) -> list[Degree]:
        return [v.candidate for v in self.verdicts if v.periodic]

    def to_json(self, verbose: bool = False) -> dict:
        out = {"scope": f"Per within [-{self.box},{self.box}]^k; generators outside the box may exist",
               "box": self.box, "subgroup": self.subgroup.to_json(),
               "certified": [list(p) for p in self.certified]}
        if verbose:
            out["verdicts"] = [v.to_json() for v in self.verdicts]
        return out


def default_box(g: FiniteKGraph) -> int:
    return 2 * g.n_vertices * g.k


def periodicity_group(g: FiniteKGraph, box: int | None = None) -> PeriodicityResult:
    """Subgroup generated by the nonzero ``p`` in ``[-box, box]^k`` passing the window criterion."""
    box = default_box(g) if box is None else int(box)
    verdicts = []
    certified = []
    for p in itertools.product(range(-box, box + 1), repeat=g.k):
        if not any(p):
            continue
        # Per is symmetric, so test one representative of each pair +-p
        first = next(v for v in p if v)
        if first < 0:
            continue
        v = window_criterion(g, p)
        verdicts.append(v)
        if v.periodic:
            certified.append(p)
            verdicts.append(WindowVerdict(tuple(-x for x in p), True, None))
    return PeriodicityResult(LatticeSubgroup.from_generators(certified, g.k), box, tuple(verdicts))
