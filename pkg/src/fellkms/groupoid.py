"""Finite discrete groupoids with exact circle-valued 2-cocycles and real 1-cocycles.

Arrows and units are dense integer indices ``0..n-1``; optional labels keep
the ids that came in through JSON.  Composition is a dense table with ``-1``
where a pair is not composable.  Nothing is validated at construction time so
that broken inputs can be reported on by :func:`validate_groupoid`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from .circle import ONE, UnitCircleValue, parse_angle
from .errors import InputError


def _frozen(arr, dtype=np.int64) -> np.ndarray:
    out = np.array(arr, dtype=dtype)
    out.setflags(write=False)
    return out


@dataclass(frozen=True, eq=False)
class FiniteGroupoid:
    """A finite groupoid.

    ``src[a]`` and ``dst[a]`` are the source and range units of arrow ``a``;
    ``compose_table[a, b]`` is the arrow ``ab`` (defined when
    ``src[a] == dst[b]``) or ``-1``.
    """

    n_units: int
    src: np.ndarray
    dst: np.ndarray
    compose_table: np.ndarray
    inv: np.ndarray
    unit_arrow: np.ndarray
    arrow_labels: tuple = ()
    unit_labels: tuple = ()
    name: str = ""

    def __post_init__(self):
        for attr in ("src", "dst", "compose_table", "inv", "unit_arrow"):
            object.__setattr__(self, attr, _frozen(getattr(self, attr)))
        if not self.arrow_labels:
            object.__setattr__(self, "arrow_labels", tuple(range(self.n_arrows)))
        if not self.unit_labels:
            object.__setattr__(self, "unit_labels", tuple(range(self.n_units)))

    @property
    def n_arrows(self) -> int:
        return len(self.src)

    @property
    def units(self) -> range:
        return range(self.n_units)

    @property
    def arrows(self) -> range:
        return range(self.n_arrows)

    def compose(self, a: int, b: int) -> int:
        c = int(self.compose_table[a, b])
        if c < 0:
            raise InputError(f"arrows {a} and {b} are not composable")
        return c

    def is_unit_arrow(self, a: int) -> bool:
        return int(self.unit_arrow[self.src[a]]) == a

    @cached_property
    def composable_triples(self) -> np.ndarray:
        """Rows ``(a, b, ab)`` over every composable pair, as an (m, 3) array."""
        a, b = np.nonzero(self.compose_table >= 0)
        return _frozen(np.stack([a, b, self.compose_table[a, b]], axis=1).reshape(-1, 3))

    @cached_property
    def unit_arrow_set(self) -> frozenset:
        return frozenset(int(u) for u in self.unit_arrow)

    def arrows_from(self, x: int) -> np.ndarray:
        return np.nonzero(self.src == x)[0]

    def arrows_into(self, x: int) -> np.ndarray:
        return np.nonzero(self.dst == x)[0]

    def __repr__(self) -> str:
        tag = f" {self.name}" if self.name else ""
        return f"<FiniteGroupoid{tag}: {self.n_units} units, {self.n_arrows} arrows>"


def _angle_dict(values: Mapping) -> dict:
    return {(int(a), int(b)): parse_angle(v) for (a, b), v in values.items()}


@dataclass(frozen=True, eq=False)
class TwoCocycle:
    """Circle-valued function on composable pairs, with exact rational angles."""

    groupoid: FiniteGroupoid
    angles: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "angles", _angle_dict(self.angles))

    @classmethod
    def trivial(cls, g: FiniteGroupoid) -> "TwoCocycle":
        return cls(g, {(int(a), int(b)): 0 for a, b, _ in g.composable_triples})

    @classmethod
    def from_function(cls, g: FiniteGroupoid, fn: Callable[[int, int], object]) -> "TwoCocycle":
        return cls(g, {(int(a), int(b)): parse_angle(fn(int(a), int(b)))
                       for a, b, _ in g.composable_triples})

    def __call__(self, a: int, b: int) -> UnitCircleValue:
        try:
            return UnitCircleValue(self.angles[(a, b)])
        except KeyError:
            raise InputError(f"cocycle has no value on the pair ({a}, {b})") from None

    def angle(self, a: int, b: int) -> Fraction:
        return self(a, b).angle

    def __mul__(self, other: "TwoCocycle") -> "TwoCocycle":
        if other.groupoid is not self.groupoid:
            raise InputError("cocycles live on different groupoids")
        keys = set(self.angles) | set(other.angles)
        return TwoCocycle(self.groupoid, {k: self.angles.get(k, 0) + other.angles.get(k, 0)
                                          for k in keys})

    @cached_property
    def triple_phases(self) -> np.ndarray:
        """Complex values aligned with ``groupoid.composable_triples``."""
        return np.array([complex(self(int(a), int(b)))
                         for a, b, _ in self.groupoid.composable_triples], dtype=complex)

    @cached_property
    def phase_matrix(self) -> np.ndarray:
        """Dense complex matrix of values, zero off the composable pairs."""
        n = self.groupoid.n_arrows
        out = np.zeros((n, n), dtype=complex)
        t = self.groupoid.composable_triples
        out[t[:, 0], t[:, 1]] = self.triple_phases
        return out


@dataclass(frozen=True, eq=False)
class OneCocycle:
    """Real-valued function on arrows, meant to be a homomorphism."""

    groupoid: FiniteGroupoid
    values: np.ndarray

    def __post_init__(self):
        vals = np.array(self.values, dtype=float)
        if vals.shape != (self.groupoid.n_arrows,):
            raise InputError(f"one-cocycle needs {self.groupoid.n_arrows} values, got {vals.shape}")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @classmethod
    def zero(cls, g: FiniteGroupoid) -> "OneCocycle":
        return cls(g, np.zeros(g.n_arrows))

    @classmethod
    def from_potential(cls, g: FiniteGroupoid, h: Sequence[float]) -> "OneCocycle":
        """``D(a) = h(r(a)) - h(s(a))``; every 1-cocycle on a finite groupoid has this form."""
        h = np.asarray(h, dtype=float)
        return cls(g, h[g.dst] - h[g.src])

    def __call__(self, a: int) -> float:
        return float(self.values[a])


# ---------------------------------------------------------------- validation

def validate_groupoid(g: FiniteGroupoid) -> list[str]:
    """Check the groupoid axioms; returns a list of violations (empty if valid)."""
    issues: list[str] = []
    n, m = g.n_arrows, g.n_units
    if g.dst.shape != (n,) or g.inv.shape != (n,) or g.compose_table.shape != (n, n):
        return [f"shape mismatch: {n} arrows but dst {g.dst.shape}, inv {g.inv.shape}, "
                f"compose {g.compose_table.shape}"]
    if g.unit_arrow.shape != (m,):
        return [f"unit_arrow has shape {g.unit_arrow.shape}, expected ({m},)"]
    for name, arr, bound in (("src", g.src, m), ("dst", g.dst, m), ("inv", g.inv, n),
                             ("unit_arrow", g.unit_arrow, n)):
        if arr.size and (arr.min() < 0 or arr.max() >= bound):
            issues.append(f"{name} has entries outside [0, {bound})")
    if issues:
        return issues

    for x in g.units:
        e = int(g.unit_arrow[x])
        if g.src[e] != x or g.dst[e] != x:
            issues.append(f"unit arrow {e} of unit {x} has src {g.src[e]}, dst {g.dst[e]}")

    for a, b in itertools.product(g.arrows, repeat=2):
        c = int(g.compose_table[a, b])
        should = g.src[a] == g.dst[b]
        if should and c < 0:
            issues.append(f"compose({a},{b}) undefined although src({a})=dst({b})")
        elif not should and c >= 0:
            issues.append(f"compose({a},{b}) defined although src({a})!=dst({b})")
        elif c >= 0 and (g.dst[c] != g.dst[a] or g.src[c] != g.src[b]):
            issues.append(f"compose({a},{b})={c} has wrong endpoints")
    if issues:
        return issues

    for x in g.units:
        e = int(g.unit_arrow[x])
        for a in g.arrows_into(x):
            if g.compose_table[e, a] != a:
                issues.append(f"unit arrow {e} is not a left identity for {a}")
        for a in g.arrows_from(x):
            if g.compose_table[a, e] != a:
                issues.append(f"unit arrow {e} is not a right identity for {a}")

    T = g.compose_table
    for a, b, ab in g.composable_triples:
        for c in g.arrows_into(g.src[b]):
            bc = T[b, c]
            if T[ab, c] != T[a, bc]:
                issues.append(f"associativity fails: ({a}{b}){c} != {a}({b}{c})")

    for a in g.arrows:
        i = int(g.inv[a])
        if g.src[i] != g.dst[a] or g.dst[i] != g.src[a]:
            issues.append(f"inv({a})={i} has wrong endpoints")
            continue
        if T[a, i] != g.unit_arrow[g.dst[a]]:
            issues.append(f"inverse identity fails: {a}*inv({a}) != unit_arrow(dst({a}))")
        if T[i, a] != g.unit_arrow[g.src[a]]:
            issues.append(f"inverse identity fails: inv({a})*{a} != unit_arrow(src({a}))")
    return issues


def validate_two_cocycle(sigma: TwoCocycle) -> list[str]:
    """Exact check of normalization and the 2-cocycle identity.

    Raises :class:`InputError` when a composable pair has no value.
    """
    g = sigma.groupoid
    missing = [(int(a), int(b)) for a, b, _ in g.composable_triples
               if (int(a), int(b)) not in sigma.angles]
    if missing:
        raise InputError(f"cocycle missing on composable pairs, e.g. {missing[:3]}")
    issues = []
    ang = sigma.angles
    for a in g.arrows:
        r, s = int(g.unit_arrow[g.dst[a]]), int(g.unit_arrow[g.src[a]])
        if ang[(r, a)] != 0:
            issues.append(f"normalization fails: sigma(r({a}), {a}) = {ang[(r, a)]}")
        if ang[(a, s)] != 0:
            issues.append(f"normalization fails: sigma({a}, s({a})) = {ang[(a, s)]}")
    T = g.compose_table
    for a, b, ab in g.composable_triples:
        a, b, ab = int(a), int(b), int(ab)
        for c in g.arrows_into(g.src[b]):
            c = int(c)
            bc = int(T[b, c])
            lhs = ang[(a, b)] + ang[(ab, c)]
            rhs = ang[(b, c)] + ang[(a, bc)]
            if (lhs - rhs) % 1 != 0:
                issues.append(f"cocycle identity fails on ({a},{b},{c}): "
                              f"{lhs % 1} != {rhs % 1}")
    return issues


def validate_one_cocycle(D: OneCocycle, tol: float = 1e-9) -> list[str]:
    g = D.groupoid
    issues = []
    for x in g.units:
        e = int(g.unit_arrow[x])
        if abs(D.values[e]) > tol:
            issues.append(f"D(unit arrow {e}) = {D.values[e]} != 0")
    t = g.composable_triples
    err = np.abs(D.values[t[:, 2]] - D.values[t[:, 0]] - D.values[t[:, 1]])
    for k in np.nonzero(err > tol)[0]:
        a, b, c = (int(v) for v in t[k])
        issues.append(f"D({a}{b}) != D({a}) + D({b}): off by {err[k]:.3g}")
    return issues


# ----------------------------------------------------------------- structure

@dataclass(frozen=True)
class Isotropy:
    unit: int
    arrows: tuple[int, ...]
    abelian: bool


def isotropy(g: FiniteGroupoid, x: int) -> Isotropy:
    """The isotropy group at unit ``x`` and whether it is abelian."""
    if not 0 <= x < g.n_units:
        raise InputError(f"unknown unit {x}")
    arrows = tuple(int(a) for a in np.nonzero((g.src == x) & (g.dst == x))[0])
    T = g.compose_table
    abelian = all(T[u, v] == T[v, u] for u, v in itertools.combinations(arrows, 2))
    return Isotropy(x, arrows, abelian)


def coboundary(g: FiniteGroupoid, b: Mapping[int, object] | Sequence) -> TwoCocycle:
    """The 2-coboundary ``b(a) b(c) conj(b(ac))`` of a circle-valued ``b``."""
    if isinstance(b, Mapping):
        angles = [parse_angle(b.get(a, 0)) for a in g.arrows]
    else:
        angles = [parse_angle(v) for v in b]
    if len(angles) != g.n_arrows:
        raise InputError(f"b needs {g.n_arrows} values, got {len(angles)}")
    for x in g.units:
        if angles[int(g.unit_arrow[x])] != 0:
            raise InputError(f"b must be 1 on unit arrows; b({int(g.unit_arrow[x])}) != 1")
    return TwoCocycle(g, {(int(a), int(c)): angles[a] + angles[c] - angles[ac]
                          for a, c, ac in g.composable_triples})


# ------------------------------------------------------------------ builders

def _from_pairs(n_units, src, dst, compose, inv, unit_arrow, labels=(), name="") -> FiniteGroupoid:
    n = len(src)
    table = np.full((n, n), -1, dtype=np.int64)
    for a in range(n):
        for b in range(n):
            if src[a] == dst[b]:
                table[a, b] = compose(a, b)
    return FiniteGroupoid(n_units, src, dst, table, [inv(a) for a in range(n)],
                          unit_arrow, arrow_labels=tuple(labels), name=name)


def pair_groupoid(n: int) -> FiniteGroupoid:
    """Pair groupoid on ``n`` points; arrow ``i*n + j`` goes from ``j`` to ``i``."""
    if n < 1:
        raise InputError("pair groupoid needs at least one point")
    idx = lambda i, j: i * n + j  # noqa: E731
    src = [a % n for a in range(n * n)]
    dst = [a // n for a in range(n * n)]
    return _from_pairs(
        n, src, dst,
        compose=lambda a, b: idx(dst[a], src[b]),
        inv=lambda a: idx(src[a], dst[a]),
        unit_arrow=[idx(i, i) for i in range(n)],
        labels=[f"{dst[a]}<-{src[a]}" for a in range(n * n)],
        name=f"pair({n})",
    )


def _check_group_table(table) -> tuple[np.ndarray, int, np.ndarray]:
    t = np.asarray(table, dtype=np.int64)
    n = t.shape[0] if t.ndim == 2 else 0
    if t.ndim != 2 or t.shape != (n, n) or n == 0:
        raise InputError("group table must be a non-empty square array")
    if t.min() < 0 or t.max() >= n:
        raise InputError("group table entries out of range")
    ids = [e for e in range(n) if all(t[e, g] == g and t[g, e] == g for g in range(n))]
    if not ids:
        raise InputError("group table has no identity element")
    e = ids[0]
    inv = np.empty(n, dtype=np.int64)
    for g in range(n):
        hits = np.nonzero(t[g] == e)[0]
        if len(hits) == 0 or t[hits[0], g] != e:
            raise InputError(f"element {g} has no inverse")
        inv[g] = hits[0]
    for a in range(n):
        if not np.array_equal(t[t[a]], t[a][t]):
            raise InputError("group table is not associative")
    return t, e, inv


def cyclic_group_table(n: int) -> np.ndarray:
    r = np.arange(n)
    return (r[:, None] + r[None, :]) % n


def abelian_group_table(orders: Sequence[int]) -> np.ndarray:
    """Table of Z_{n1} x ... x Z_{nr}; elements enumerated in mixed radix, first factor slowest."""
    elems = list(itertools.product(*[range(o) for o in orders]))
    index = {e: i for i, e in enumerate(elems)}
    return np.array([[index[tuple((x + y) % o for x, y, o in zip(a, b, orders))]
                      for b in elems] for a in elems], dtype=np.int64)


def group_as_groupoid(table) -> FiniteGroupoid:
    t, e, inv = _check_group_table(table)
    n = len(t)
    return FiniteGroupoid(1, np.zeros(n), np.zeros(n), t, inv, [e], name=f"group({n})")


def action_groupoid(table, action) -> FiniteGroupoid:
    """Transformation groupoid of ``action[g][x] = g.x``.

    Arrow ``g*n_points + x`` is ``(g, x)`` from ``x`` to ``g.x``.
    """
    t, e, ginv = _check_group_table(table)
    act = np.asarray(action, dtype=np.int64)
    n_g = len(t)
    if act.ndim != 2 or act.shape[0] != n_g:
        raise InputError("action must have one row per group element")
    n_x = act.shape[1]
    if act.min() < 0 or act.max() >= n_x:
        raise InputError("action maps outside the point set")
    if not np.array_equal(act[e], np.arange(n_x)):
        raise InputError("identity does not act trivially")
    for g, h in itertools.product(range(n_g), repeat=2):
        if not np.array_equal(act[t[g, h]], act[g][act[h]]):
            raise InputError("action is not compatible with the group law")
    idx = lambda g, x: g * n_x + x  # noqa: E731
    src = [a % n_x for a in range(n_g * n_x)]
    grp = [a // n_x for a in range(n_g * n_x)]
    dst = [int(act[grp[a], src[a]]) for a in range(n_g * n_x)]
    return _from_pairs(
        n_x, src, dst,
        compose=lambda a, b: idx(t[grp[a], grp[b]], src[b]),
        inv=lambda a: idx(ginv[grp[a]], dst[a]),
        unit_arrow=[idx(e, x) for x in range(n_x)],
        labels=[f"({grp[a]},{src[a]})" for a in range(n_g * n_x)],
        name=f"action({n_g} on {n_x})",
    )


def product_groupoid(g1: FiniteGroupoid, g2: FiniteGroupoid) -> FiniteGroupoid:
    """Cartesian product; arrow ``a1*|G2| + a2`` is ``(a1, a2)``, unit ``x1*|G2^0| + x2``."""
    n2, m2 = g2.n_arrows, g2.n_units
    n = g1.n_arrows * n2
    src = [int(g1.src[a // n2]) * m2 + int(g2.src[a % n2]) for a in range(n)]
    dst = [int(g1.dst[a // n2]) * m2 + int(g2.dst[a % n2]) for a in range(n)]

    def compose(a, b):
        return int(g1.compose_table[a // n2, b // n2]) * n2 + int(g2.compose_table[a % n2, b % n2])

    return _from_pairs(
        g1.n_units * m2, src, dst, compose,
        inv=lambda a: int(g1.inv[a // n2]) * n2 + int(g2.inv[a % n2]),
        unit_arrow=[int(g1.unit_arrow[x // m2]) * n2 + int(g2.unit_arrow[x % m2])
                    for x in range(g1.n_units * m2)],
        name=f"{g1.name or 'G'} x {g2.name or 'H'}",
    )


def disjoint_union(*parts: FiniteGroupoid) -> FiniteGroupoid:
    src, dst, inv, unit_arrow = [], [], [], []
    a_off = u_off = 0
    offsets = []
    for g in parts:
        offsets.append((a_off, u_off))
        src += [int(s) + u_off for s in g.src]
        dst += [int(d) + u_off for d in g.dst]
        inv += [int(i) + a_off for i in g.inv]
        unit_arrow += [int(e) + a_off for e in g.unit_arrow]
        a_off += g.n_arrows
        u_off += g.n_units
    table = np.full((a_off, a_off), -1, dtype=np.int64)
    for g, (ao, _) in zip(parts, offsets):
        block = np.where(g.compose_table >= 0, g.compose_table + ao, -1)
        table[ao:ao + g.n_arrows, ao:ao + g.n_arrows] = block
    return FiniteGroupoid(u_off, src, dst, table, inv, unit_arrow,
                          name=" + ".join(g.name or "G" for g in parts))


def pullback_cocycle(g: FiniteGroupoid, hom: Sequence[int], group_cocycle: Callable[[int, int], object]
                     ) -> TwoCocycle:
    """Pull a group 2-cocycle back along a groupoid homomorphism ``hom: arrows -> group``."""
    return TwoCocycle.from_function(g, lambda a, b: group_cocycle(hom[a], hom[b]))


def evaluate_phase(sigma: TwoCocycle, pairs: Iterable[tuple[int, int]]) -> UnitCircleValue:
    """Product of ``sigma`` over the given pairs."""
    out = ONE
    for a, b in pairs:
        out = out * sigma(a, b)
    return out
