"""Random small groupoids with twisting data, for property tests."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .groupoid import (FiniteGroupoid, OneCocycle, TwoCocycle, abelian_group_table, action_groupoid,
                       coboundary, cyclic_group_table, disjoint_union, group_as_groupoid,
                       pair_groupoid, pullback_cocycle)

BETAS = (0.0, 0.5, -0.5, 1.0)


@dataclass(frozen=True)
class Instance:
    groupoid: FiniteGroupoid
    sigma: TwoCocycle
    D: OneCocycle
    beta: float
    label: str


def s3_table() -> np.ndarray:
    perms = list(itertools.permutations(range(3)))
    idx = {p: i for i, p in enumerate(perms)}
    return np.array([[idx[tuple(p[q[i]] for i in range(3))] for q in perms] for p in perms])


def random_angle(rng: np.random.Generator, max_den: int = 12) -> Fraction:
    q = int(rng.integers(1, max_den + 1))
    return Fraction(int(rng.integers(0, q)), q)


def abelian_bicharacter(orders, rng: np.random.Generator):
    """Random well-defined ``(a, b) -> sum_{i>j} t_ij a_i b_j`` on ``Z_{n_1} x ... x Z_{n_r}``."""
    elems = list(itertools.product(*[range(o) for o in orders]))
    t = {}
    for i in range(len(orders)):
        for j in range(i):
            g = math.gcd(orders[i], orders[j])
            t[(i, j)] = Fraction(int(rng.integers(0, g)), g)

    def f(a: int, b: int) -> Fraction:
        x, y = elems[a], elems[b]
        return sum((t[(i, j)] * x[i] * y[j] for (i, j) in t), Fraction(0))
    return f


def _random_coboundary(g: FiniteGroupoid, rng: np.random.Generator) -> TwoCocycle:
    units = set(int(e) for e in g.unit_arrow)
    return coboundary(g, [Fraction(0) if a in units else random_angle(rng) for a in g.arrows])


def random_instance(rng: np.random.Generator) -> Instance:
    """One of: pair groupoid, abelian or nonabelian group, action groupoid, disjoint union."""
    kind = int(rng.integers(0, 5))
    group_cocycle = None
    hom = None
    if kind == 0:
        n = int(rng.integers(1, 6))
        g, label = pair_groupoid(n), f"pair({n})"
    elif kind == 1:
        orders = [(2, 2), (4,), (2, 4), (3, 3), (6,), (2, 2, 2)][int(rng.integers(0, 6))]
        g = group_as_groupoid(abelian_group_table(orders))
        group_cocycle, hom, label = abelian_bicharacter(orders, rng), list(g.arrows), f"Z{orders}"
    elif kind == 2:
        g, label = group_as_groupoid(s3_table()), "S3"
    elif kind == 3:
        choice = int(rng.integers(0, 3))
        if choice == 0:
            orders, act = (2, 2), [[0, 1, 2, 3], [1, 0, 3, 2], [0, 1, 2, 3], [1, 0, 3, 2]]
        elif choice == 1:
            orders = (4,)
            act = [[(x + s) % 4 for x in range(4)] for s in range(4)]
        else:
            orders = (2, 3)
            act = [[(x + (e // 3)) % 2 for x in range(2)] for e in range(6)]
        table = abelian_group_table(orders)
        g = action_groupoid(table, act)
        n_x = g.n_units
        hom = [a // n_x for a in g.arrows]
        group_cocycle, label = abelian_bicharacter(orders, rng), f"Z{orders} acting on {n_x} points"
    else:
        parts = [pair_groupoid(2), group_as_groupoid(cyclic_group_table(int(rng.integers(2, 5)))),
                 pair_groupoid(int(rng.integers(1, 4)))]
        g, label = disjoint_union(*parts), "disjoint union"
    sigma = _random_coboundary(g, rng)
    if group_cocycle is not None:
        sigma = sigma * pullback_cocycle(g, hom, group_cocycle)
    h = rng.uniform(-1, 1, size=g.n_units)
    D = OneCocycle.from_potential(g, h)
    beta = float(BETAS[int(rng.integers(0, len(BETAS)))])
    return Instance(g, sigma, D, beta, label)
