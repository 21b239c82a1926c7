"""Quasi-invariant probability measures on the units of a finite groupoid."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .groupoid import FiniteGroupoid, OneCocycle, isotropy


@dataclass(frozen=True, eq=False)
class UnitMeasure:
    weights: np.ndarray
    support: frozenset = field(default=frozenset())

    def __post_init__(self):
        w = np.array(self.weights, dtype=float)
        w.setflags(write=False)
        object.__setattr__(self, "weights", w)
        if not self.support:
            object.__setattr__(self, "support", frozenset(int(x) for x in np.nonzero(w > 0)[0]))

    @classmethod
    def uniform(cls, n: int, units=None) -> "UnitMeasure":
        units = list(range(n)) if units is None else list(units)
        w = np.zeros(n)
        w[units] = 1 / len(units)
        return cls(w)

    def __getitem__(self, x: int) -> float:
        return float(self.weights[x])

    def is_probability(self, tol: float = 1e-12) -> bool:
        return bool(np.all(self.weights >= -tol) and abs(self.weights.sum() - 1) <= tol)

    def to_json(self) -> list:
        return [[int(x), float(self.weights[x])] for x in sorted(self.support)]


@dataclass(frozen=True)
class Orbit:
    base: int
    units: tuple[int, ...]
    tree: dict          # unit x -> arrow from base to x
    isotropy: tuple[int, ...]


def orbits(g: FiniteGroupoid) -> list[Orbit]:
    """Orbits of the unit space with a BFS spanning tree from the smallest unit of each."""
    seen: dict[int, int] = {}
    out = []
    for base in g.units:
        if base in seen:
            continue
        tree = {base: int(g.unit_arrow[base])}
        queue = deque([base])
        while queue:
            v = queue.popleft()
            for a in g.arrows_from(v):
                w = int(g.dst[a])
                if w not in tree:
                    tree[w] = int(g.compose_table[a, tree[v]])
                    queue.append(w)
        for x in tree:
            seen[x] = base
        out.append(Orbit(base, tuple(sorted(tree)), tree, isotropy(g, base).arrows))
    return out


@dataclass(frozen=True)
class OrbitVerdict:
    orbit_base: int
    admissible: bool
    measure: UnitMeasure | None
    loop_defect: float

    def to_json(self) -> dict:
        return {"orbit_base": self.orbit_base, "admissible": self.admissible,
                "measure": self.measure.to_json() if self.measure is not None else None}


@dataclass(frozen=True)
class QuasiInvariantResult:
    measures: list
    verdicts: list


def quasi_invariance_residual(mu: UnitMeasure, D: OneCocycle, beta: float) -> float:
    """Max over arrows inside the support of ``|mu(r) - exp(-beta D) mu(s)|``."""
    g = D.groupoid
    inside = np.array([int(g.src[a]) in mu.support and int(g.dst[a]) in mu.support
                       for a in g.arrows], dtype=bool)
    if not inside.any():
        return 0.0
    w = mu.weights
    res = w[g.dst] - np.exp(-beta * D.values) * w[g.src]
    return float(np.abs(res[inside]).max())


def quasi_invariant_extremes(g: FiniteGroupoid, D: OneCocycle, beta: float, tol: float = 1e-9
                             ) -> QuasiInvariantResult:
    """Extreme probability measures with Radon-Nikodym cocycle ``exp(-beta D)``.

    One candidate per orbit; an orbit is kept only if ``beta * D`` vanishes on
    the isotropy at its base.
    """
    measures, verdicts = [], []
    for orb in orbits(g):
        loop = max((abs(beta * D.values[u]) for u in orb.isotropy), default=0.0)
        if loop > tol:
            verdicts.append(OrbitVerdict(orb.base, False, None, loop))
            continue
        w = np.zeros(g.n_units)
        logs = np.array([-beta * D.values[orb.tree[x]] for x in orb.units])
        w[list(orb.units)] = np.exp(logs - logs.max())
        w /= w.sum()
        mu = UnitMeasure(w, frozenset(orb.units))
        measures.append(mu)
        verdicts.append(OrbitVerdict(orb.base, True, mu, loop))
    return QuasiInvariantResult(measures, verdicts)
