"""Categorical 2-cocycles on k-graphs and the groupoid cocycle they induce.

A cell ``(mu, nu)`` is assigned to each groupoid element from its
degree-lexicographically least witness.  ``sigma_c`` is then evaluated on a
common refinement of the three cells involved; the value does not depend on
the refinement, and every evaluation checks that at two refinements.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Mapping, Sequence

import numpy as np

from ..circle import UnitCircleValue, parse_angle
from ..errors import DepthExceededError, InputError, PreconditionError
from ..lattice import Bicharacter, LatticeSubgroup, lattice_trace_from_character, z_omega
from .graph import Degree, FiniteKGraph, KPath, iter_degrees
from .paths import (EventuallyPeriodicPath, PathGroupoidElement, _add, _join, _sub,
                    find_cycle, negative_part, positive_part, random_arrow_from, random_ep_path)
from .periodicity import PeriodicityResult, periodicity_group
from .spectra import Spectra, adjacency_spectra, measure_M

DEFAULT_DEPTH = 6


# ------------------------------------------------------------ k-graph cocycles

class KGraphCocycle:
    """Circle-valued function on composable pairs, returned as an angle mod 1."""

    graph: FiniteKGraph

    def angle(self, lam: KPath, mu: KPath) -> Fraction:
        raise NotImplementedError

    def __call__(self, lam: KPath, mu: KPath) -> UnitCircleValue:
        return UnitCircleValue(self.angle(lam, mu))

    def is_trivial(self) -> bool:
        return False


@dataclass(frozen=True, eq=False)
class DegreeCocycle(KGraphCocycle):
    """``c(lam, mu) = d(lam)^T theta d(mu)``; bilinear forms always satisfy the identity."""

    graph: FiniteKGraph
    theta: tuple = ()

    def __post_init__(self):
        k = self.graph.k
        th = self.theta or tuple((0,) * k for _ in range(k))
        th = tuple(tuple(parse_angle(v) for v in row) for row in th)
        if len(th) != k or any(len(r) != k for r in th):
            raise InputError(f"degree cocycle matrix must be {k}x{k}")
        object.__setattr__(self, "theta", th)

    @classmethod
    def trivial(cls, g: FiniteKGraph) -> "DegreeCocycle":
        return cls(g)

    def angle(self, lam: KPath, mu: KPath) -> Fraction:
        k = self.graph.k
        return sum((lam.degree[i] * self.theta[i][j] * mu.degree[j]
                    for i in range(k) for j in range(k)), Fraction(0)) % 1

    def is_trivial(self) -> bool:
        return all(v == 0 for row in self.theta for v in row)

    def to_json(self) -> dict:
        return {"degree_theta": [[f"{v.numerator}/{v.denominator}" for v in row] for row in self.theta]}


def rotation_cocycle(g: FiniteKGraph, theta) -> DegreeCocycle:
    """``c(e^a f^b, e^a' f^b') = theta * b * a'`` on a 2-graph."""
    t = parse_angle(theta)
    return DegreeCocycle(g, ((0, 0), (t, 0)))


@dataclass(frozen=True, eq=False)
class TableCocycle(KGraphCocycle):
    """Explicit values on composable pairs, extended through the cocycle identity.

    ``c(lam, mu nu) = c(lam, mu) c(lam mu, nu) conj c(mu, nu)`` with ``mu`` the
    first edge of the second argument reduces everything to pairs whose
    second entry is a single edge; such pairs missing from the table are
    rejected.
    """

    graph: FiniteKGraph
    table: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "table", {(a, b): parse_angle(v) for (a, b), v in self.table.items()})
        object.__setattr__(self, "_memo", {})

    def angle(self, lam: KPath, mu: KPath) -> Fraction:
        if lam.src != mu.rng:
            raise InputError("cocycle evaluated on a non-composable pair")
        if lam.is_vertex() or mu.is_vertex():
            return Fraction(0)
        key = (lam, mu)
        if key in self.table:
            return self.table[key]
        if key in self._memo:
            return self._memo[key]
        if mu.length == 1:
            raise InputError(f"cocycle value on ({self.graph.label(lam)}, {self.graph.label(mu)}) "
                             "is not determined by the table")
        g = self.graph
        first = g.unit(g.edge_color[mu.edges[0]])
        m1, m2 = g.factor(mu, first)
        val = (self.angle(lam, m1) + self.angle(g.concat(lam, m1), m2) - self.angle(m1, m2)) % 1
        self._memo[key] = val
        return val


@dataclass(frozen=True, eq=False)
class CoboundaryCocycle(KGraphCocycle):
    """``c(lam, mu) = b(lam) b(mu) conj b(lam mu)`` for a normalized function ``b`` on paths."""

    graph: FiniteKGraph
    potential: Callable[[KPath], Fraction]

    def angle(self, lam: KPath, mu: KPath) -> Fraction:
        if lam.src != mu.rng:
            raise InputError("cocycle evaluated on a non-composable pair")
        b = self.potential
        return (b(lam) + b(mu) - b(self.graph.concat(lam, mu))) % 1


def paths_up_to(g: FiniteKGraph, max_total: int) -> list[KPath]:
    return [p for d in iter_degrees((max_total,) * g.k) if sum(d) <= max_total
            for p in g.enumerate_paths(d)]


def validate_kgraph_cocycle(c: KGraphCocycle, max_total: int = 2) -> list[str]:
    """Check normalization and the identity on all triples with each entry of degree ``<= max_total``."""
    g = c.graph
    errs = []
    paths = paths_up_to(g, max_total)
    by_range: dict[int, list[KPath]] = {}
    for p in paths:
        by_range.setdefault(p.rng, []).append(p)
    for p in paths:
        if c.angle(g.vertex(p.rng), p) != 0 or c.angle(p, g.vertex(p.src)) != 0:
            errs.append(f"cocycle is not normalized at {g.label(p)}")
    for a in paths:
        for b in by_range.get(a.src, []):
            ab = g.concat(a, b)
            for d in by_range.get(b.src, []):
                lhs = c.angle(a, b) + c.angle(ab, d)
                rhs = c.angle(b, d) + c.angle(a, g.concat(b, d))
                if (lhs - rhs) % 1:
                    errs.append(f"identity fails on ({g.label(a)}, {g.label(b)}, {g.label(d)})")
                    if len(errs) > 20:
                        return errs
    return errs


# ------------------------------------------------------------ cell assignment

@dataclass(frozen=True)
class Cell:
    mu: KPath
    nu: KPath

    @property
    def witness(self) -> tuple[Degree, Degree]:
        return self.mu.degree, self.nu.degree


def minimal_witness(x: EventuallyPeriodicPath, l: Degree, y: EventuallyPeriodicPath,
                    depth: int = DEFAULT_DEPTH) -> tuple[Degree, Degree]:
    """Least ``(m, n)`` (by total degree, then lexicographically) with ``rho^m x = rho^n y``."""
    k = x.graph.k
    base_m, base_n = positive_part(l), negative_part(l)
    for total in range(depth + 1):
        for t in iter_degrees((total,) * k):
            if sum(t) != total:
                continue
            m, n = _add(base_m, t), _add(base_n, t)
            if x.shift(m).equals(y.shift(n)):
                return m, n
    raise DepthExceededError(f"no witness with excess degree <= {depth}")


def partition_assign(alpha: PathGroupoidElement, depth: int = DEFAULT_DEPTH) -> Cell:
    """Canonical cell ``(x(0, m), y(0, n))`` from the least witness."""
    m, n = minimal_witness(alpha.x, alpha.l, alpha.y, depth)
    return Cell(alpha.x.initial(m), alpha.y.initial(n))


def in_cell(alpha: PathGroupoidElement, cell: Cell) -> bool:
    if tuple(alpha.l) != _sub(cell.mu.degree, cell.nu.degree):
        return False
    if alpha.x.initial(cell.mu.degree) != cell.mu or alpha.y.initial(cell.nu.degree) != cell.nu:
        return False
    return alpha.x.shift(cell.mu.degree).equals(alpha.y.shift(cell.nu.degree))


@dataclass(frozen=True)
class CoverReport:
    elements: int
    overlaps: int
    example: tuple | None

    @property
    def ok(self) -> bool:
        return self.overlaps == 0

    def to_json(self) -> dict:
        return {"scope": "sampled", "elements": self.elements, "overlaps": self.overlaps, "ok": self.ok}


def disjoint_cover_check(elements: Sequence[PathGroupoidElement], depth: int = DEFAULT_DEPTH
                         ) -> CoverReport:
    """Every sampled element lies in its own cell and in no other assigned cell."""
    cells = [partition_assign(a, depth) for a in elements]
    distinct = list({(c.mu, c.nu): c for c in cells}.values())
    overlaps, example = 0, None
    for a, own in zip(elements, cells):
        for cell in distinct:
            if cell != own and in_cell(a, cell):
                overlaps += 1
                example = example or (a, cell)
        if not in_cell(a, own):
            overlaps += 1
            example = example or (a, own)
    return CoverReport(len(elements), overlaps, example)


# ------------------------------------------------------------------ sigma_c

@dataclass(frozen=True)
class SigmaCValue:
    angle: Fraction
    refinements_checked: int

    @property
    def value(self) -> UnitCircleValue:
        return UnitCircleValue(self.angle)


def _sigma_at(c: KGraphCocycle, alpha, beta, ca: Cell, cb: Cell, cab: Cell, P: Degree) -> Fraction:
    g = c.graph
    x, y, z = alpha.x, alpha.y, beta.y
    mid = y.initial(P)
    lam = y.window(ca.nu.degree, P)
    iota = y.window(cb.mu.degree, P)
    left = x.initial(_add(ca.mu.degree, _sub(P, ca.nu.degree)))
    right = z.initial(_add(cb.nu.degree, _sub(P, cb.mu.degree)))
    kappa = x.window(cab.mu.degree, left.degree)
    if (g.concat(ca.nu, lam) != mid or g.concat(cb.mu, iota) != mid
            or g.concat(ca.mu, lam) != left or g.concat(cab.mu, kappa) != left
            or g.concat(cb.nu, iota) != right or g.concat(cab.nu, kappa) != right):
        raise PreconditionError("refinement paths do not satisfy the cell relations")
    return (c.angle(ca.mu, lam) - c.angle(ca.nu, lam) + c.angle(cb.mu, iota) - c.angle(cb.nu, iota)
            - c.angle(cab.mu, kappa) + c.angle(cab.nu, kappa)) % 1


def sigma_c_detail(c: KGraphCocycle, alpha: PathGroupoidElement, beta: PathGroupoidElement,
                   depth: int = DEFAULT_DEPTH, extra_refinements: int = 1) -> SigmaCValue:
    """``sigma_c(alpha, beta)`` evaluated at the least refinement and at ``extra_refinements`` more."""
    if not alpha.composable(beta):
        raise InputError("sigma_c needs a composable pair")
    ab = alpha * beta
    ca, cb, cab = (partition_assign(e, depth) for e in (alpha, beta, ab))
    k = c.graph.k
    P = _join(_join(ca.nu.degree, cb.mu.degree),
              positive_part(_add(_sub(cab.mu.degree, ca.mu.degree), ca.nu.degree)))
    val = _sigma_at(c, alpha, beta, ca, cb, cab, P)
    steps = [(1,) * k] + [c.graph.unit(i) for i in range(k)]
    for step in steps[:extra_refinements]:
        if _sigma_at(c, alpha, beta, ca, cb, cab, _add(P, step)) != val:
            raise PreconditionError("sigma_c depends on the refinement; c is not a cocycle")
    return SigmaCValue(val, 1 + len(steps[:extra_refinements]))


def sigma_c(c: KGraphCocycle, alpha: PathGroupoidElement, beta: PathGroupoidElement,
            depth: int = DEFAULT_DEPTH) -> UnitCircleValue:
    return sigma_c_detail(c, alpha, beta, depth).value


# ------------------------------------------------------------------ omega_c

def _per_basis(per: PeriodicityResult | LatticeSubgroup) -> list[Degree]:
    sub = per.subgroup if isinstance(per, PeriodicityResult) else per
    return [tuple(int(v) for v in col) for col in sub.basis.T]


def isotropy_cocycle(c: KGraphCocycle, x: EventuallyPeriodicPath, p: Degree, q: Degree,
                     depth: int = DEFAULT_DEPTH) -> Fraction:
    """Angle of ``sigma_c((x, p, x), (x, q, x))``."""
    return sigma_c_detail(c, PathGroupoidElement.isotropy(x, p),
                          PathGroupoidElement.isotropy(x, q), depth).angle


@dataclass(frozen=True)
class OmegaC:
    per_basis: list
    bicharacter: Bicharacter
    z_per: LatticeSubgroup | None
    z_ambient: LatticeSubgroup
    certificate_ok: bool
    generator_values: dict

    def to_json(self) -> dict:
        return {"per_basis": [list(p) for p in self.per_basis],
                "omega": self.bicharacter.to_json(),
                "z_omega": self.z_ambient.to_json(),
                "z_omega_in_per_coordinates": None if self.z_per is None else self.z_per.to_json(),
                "second_basepoint_agrees": self.certificate_ok}


def default_basepoint(g: FiniteKGraph) -> EventuallyPeriodicPath:
    return EventuallyPeriodicPath(g, g.vertex(0), find_cycle(g, 0))


def omega_c(c: KGraphCocycle, per: PeriodicityResult | LatticeSubgroup,
            x: EventuallyPeriodicPath | None = None, x2: EventuallyPeriodicPath | None = None,
            depth: int = DEFAULT_DEPTH) -> OmegaC:
    """Bicharacter on Per from ``sigma_c`` restricted to the isotropy at ``x``."""
    g = c.graph
    basis = _per_basis(per)
    r = len(basis)
    x = default_basepoint(g) if x is None else x
    if r == 0:
        return OmegaC([], Bicharacter(0, ()), None, LatticeSubgroup(g.k), True, {})
    vals = {(i, j): isotropy_cocycle(c, x, basis[i], basis[j], depth)
            for i in range(r) for j in range(r)}
    theta = tuple(tuple((vals[(i, j)] - vals[(j, i)]) % 1 if i > j else Fraction(0)
                        for j in range(r)) for i in range(r))
    om = Bicharacter(r, theta)
    ok = True
    if x2 is not None:
        for i in range(r):
            for j in range(i):
                a = isotropy_cocycle(c, x2, basis[i], basis[j], depth)
                b = isotropy_cocycle(c, x2, basis[j], basis[i], depth)
                ok &= (a - b) % 1 == theta[i][j]
    z = z_omega(om)
    B = np.array(basis, dtype=np.int64).T
    z_amb = LatticeSubgroup(g.k, B @ z.basis)
    return OmegaC(basis, om, z, z_amb, bool(ok), vals)


def rtilde_phase(c: KGraphCocycle, eta: PathGroupoidElement, p: Degree,
                 depth: int = DEFAULT_DEPTH) -> UnitCircleValue:
    """``sigma_c(eta, u) sigma_c(eta u, eta^-1) conj sigma_c(eta^-1, eta)`` for ``u = (s(eta), p, s(eta))``."""
    u = PathGroupoidElement.isotropy(eta.y, p)
    inv = eta.inverse()
    eu = eta * u
    a = sigma_c_detail(c, eta, u, depth).angle
    b = sigma_c_detail(c, eu, inv, depth).angle
    d = sigma_c_detail(c, inv, eta, depth).angle
    return UnitCircleValue(a + b - d)


# ------------------------------------------------------------- sampling

def sample_composable(g: FiniteKGraph, rng: np.random.Generator, length: int = 2,
                      max_deg: int = 1) -> list[PathGroupoidElement]:
    """A chain ``alpha_1, ..., alpha_length`` with ``s(alpha_i) = r(alpha_{i+1})``."""
    y = random_ep_path(g, rng, max_deg)
    chain = []
    for _ in range(length):
        a = random_arrow_from(y, rng, max_deg).inverse()
        chain.append(a)
        y = a.y
    return chain


# ----------------------------------------------------------------- KMS_1

@dataclass(frozen=True)
class Constraint:
    gamma: PathGroupoidElement
    p: Degree
    phase: Fraction

    def to_json(self) -> dict:
        return {"gamma": self.gamma.to_json(), "p": list(self.p), "phase": str(UnitCircleValue(self.phase)),
                "forces_zero": self.phase != 0}


def _cylinder_trace(g: FiniteKGraph, lam: KPath, mu: KPath, spectra: Spectra) -> float:
    """Haar-trace value on ``1_{Z(lam, mu)}`` as the M-mass of ``{x in Z(lam): x = lam z = mu z}``."""
    if lam.degree != mu.degree or lam.src != mu.src:
        return 0.0
    e = g.unit(0)
    total = 0.0
    for nu in g.enumerate_paths(_add(lam.degree, e), rng=lam.rng):
        head = g.factor(nu, lam.degree)[0]
        tail = g.factor(nu, lam.degree)[1]
        if head == lam and g.concat(mu, tail) == nu:
            total += measure_M(g, nu, spectra)
    return total


def kms1_report(g: FiniteKGraph, c: KGraphCocycle, box: int | None = None,
                depth: int = DEFAULT_DEPTH, seed: int = 0, samples: int = 100,
                cylinder_degree: int = 2) -> dict:
    """KMS_1 data for the preferred dynamics as a constrained description plus the Haar trace."""
    rng = np.random.default_rng(seed)
    per = periodicity_group(g, box)
    spectra = adjacency_spectra(g)
    x0 = default_basepoint(g)
    x1 = random_ep_path(g, rng)
    om = omega_c(c, per, x0, x1, depth)
    zb = [tuple(int(v) for v in col) for col in om.z_ambient.basis.T]
    constraints = []
    for _ in range(samples if zb else 0):
        eta = random_arrow_from(random_ep_path(g, rng), rng)
        for p in zb:
            constraints.append(Constraint(eta, p, rtilde_phase(c, eta, p, depth).angle))
    z_box = sorted({tuple(int(v) for v in om.z_ambient.basis @ np.array(t, dtype=np.int64))
                    for t in itertools.product((-1, 0, 1), repeat=len(zb))})

    def satisfies(phi: dict) -> bool:
        return all(abs(phi.get(con.p, 0)) < 1e-12 or con.phase == 0 for con in constraints)

    haar = {p: (1.0 if not any(p) else 0.0) for p in z_box}
    states = [{"name": "haar", "phi": haar, "satisfies_sampled_constraints": satisfies(haar)}]
    if zb:
        for ang in itertools.product((Fraction(0), Fraction(1, 2)), repeat=len(zb)):
            tr = lattice_trace_from_character(ang, om.bicharacter, om.z_per)
            phi = {p: tr(per.subgroup.coordinates(p)) for p in z_box}
            name = "character(" + ",".join(str(a) for a in ang) + ")"
            states.append({"name": name, "phi": phi, "satisfies_sampled_constraints": satisfies(phi)})
    kept = [s for s in states if s["satisfies_sampled_constraints"]]

    table = []
    for p, m in ((p, measure_M(g, p, spectra)) for d in iter_degrees((per.box,) * g.k)
                 if sum(d) <= per.box for p in g.enumerate_paths(d)):
        table.append({"path": g.label(p), "degree": list(p.degree), "mass": m})
    cyl_paths = [p for d in iter_degrees((cylinder_degree,) * g.k) if sum(d) <= cylinder_degree
                 for p in g.enumerate_paths(d)]
    cylinders = []
    for lam in cyl_paths:
        for mu in cyl_paths:
            if lam.src == mu.src:
                cylinders.append({"lambda": g.label(lam), "mu": g.label(mu),
                                  "lambda_degree": list(lam.degree), "mu_degree": list(mu.degree),
                                  "value": _cylinder_trace(g, lam, mu, spectra),
                                  "expected": measure_M(g, lam, spectra) if lam == mu else 0.0})
    return {
        "per": per.to_json(),
        "omega_c": om.to_json(),
        "spectra": spectra.to_json(),
        "measure_table": table,
        "constraints": {"scope": "sampled", "count": len(constraints),
                        "nontrivial": sum(con.phase != 0 for con in constraints),
                        "items": [con.to_json() for con in constraints[:50]]},
        "states": [{"name": s["name"],
                    "phi": [[list(p), [v.real, v.imag] if isinstance(v, complex) else [v, 0.0]]
                            for p, v in s["phi"].items()]} for s in kept],
        "rejected_candidates": [s["name"] for s in states if not s["satisfies_sampled_constraints"]],
        "haar_trace_cylinders": cylinders,
        "haar_trace_cylinder_defect": max((abs(r["value"] - r["expected"]) for r in cylinders),
                                          default=0.0),
    }
