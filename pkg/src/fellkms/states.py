"""States built from (measure, trace field) pairs and the KMS simplex of a finite groupoid."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from .algebra import LinearFunctional, kms_defect, positivity_check
from .circle import UnitCircleValue
from .errors import InputError, NotAStateError
from .groupoid import FiniteGroupoid, OneCocycle, TwoCocycle, isotropy
from .measures import UnitMeasure, orbits, quasi_invariant_extremes
from .traces import extreme_traces


@dataclass(frozen=True, eq=False)
class TraceField:
    """For each unit ``x`` of a support, the values ``psi_x(W_u)`` on the isotropy at ``x``."""

    groupoid: FiniteGroupoid
    values: Mapping[int, Mapping[int, complex]]

    def __post_init__(self):
        g = self.groupoid
        clean = {}
        for x, vals in self.values.items():
            iso = set(isotropy(g, int(x)).arrows)
            extra = set(int(u) for u in vals) - iso
            if extra:
                raise InputError(f"field at unit {x} has values off the isotropy: {sorted(extra)}")
            clean[int(x)] = {u: complex(vals.get(u, 0)) for u in sorted(iso)}
        object.__setattr__(self, "values", clean)

    @classmethod
    def trivial(cls, g: FiniteGroupoid, units) -> "TraceField":
        """The field ``psi_x(W_u) = [u is the unit at x]``."""
        return cls(g, {int(x): {int(g.unit_arrow[x]): 1.0} for x in units})

    def __getitem__(self, x: int) -> dict:
        return self.values[x]

    @property
    def units(self):
        return sorted(self.values)

    def to_json(self) -> list:
        return [[x, [[u, v.real, v.imag] for u, v in self.values[x].items()]] for x in self.units]


def conjugation_phase(sigma: TwoCocycle, eta: int, u: int) -> UnitCircleValue:
    """Phase with ``1_eta W_u 1_eta^* = phase * W_{eta u eta^-1}``."""
    g = sigma.groupoid
    T = g.compose_table
    ei = int(g.inv[eta])
    eu = int(T[eta, u])
    return sigma(eu, ei) * sigma(eta, u) * sigma(ei, eta).conjugate()


@dataclass(frozen=True)
class ConditionIIReport:
    ok: bool
    max_violation: float
    witness: Optional[tuple[int, int, int]]


def check_condition_II(field: TraceField, mu: UnitMeasure, sigma: TwoCocycle,
                       tol: float = 1e-9) -> ConditionIIReport:
    """Check ``psi_x(W_u) = phase(eta, u) psi_{r(eta)}(W_{eta u eta^-1})`` over the support.

    A range unit missing from the field is treated as carrying the zero functional.
    """
    g = sigma.groupoid
    T = g.compose_table
    worst, witness = 0.0, None
    for x in sorted(mu.support):
        if x not in field.values:
            raise InputError(f"trace field has no functional at support unit {x}")
        psi_x = field[x]
        for u in psi_x:
            for eta in g.arrows_from(x):
                eta = int(eta)
                y = int(g.dst[eta])
                v = int(T[T[eta, u], g.inv[eta]])
                rhs = complex(conjugation_phase(sigma, eta, u)) * field.values.get(y, {}).get(v, 0)
                err = abs(psi_x[u] - rhs)
                if err > worst:
                    worst, witness = err, (x, u, eta)
    return ConditionIIReport(worst <= tol, worst, witness if worst > tol else None)


def assemble_theta(mu: UnitMeasure, field: TraceField) -> LinearFunctional:
    """``psi(d_u) = mu(x) psi_x(W_u)`` for ``u`` isotropic at ``x``, zero elsewhere."""
    g = field.groupoid
    v = np.zeros(g.n_arrows, dtype=complex)
    for x in sorted(mu.support):
        if x not in field.values:
            raise InputError(f"trace field has no functional at support unit {x}")
        for u, val in field[x].items():
            v[u] = mu[x] * val
    return LinearFunctional(g, v)


@dataclass(frozen=True)
class ExtractedPair:
    measure: UnitMeasure
    field: TraceField
    roundtrip_defect: float

    @property
    def roundtrip_ok(self) -> bool:
        return self.roundtrip_defect <= 1e-12


def extract_pair(psi: LinearFunctional, tol: float = 1e-12, norm_tol: float = 1e-9) -> ExtractedPair:
    """Recover ``(mu, field)`` from a state; the round-trip defect measures mass off the isotropy."""
    g = psi.groupoid
    mass = psi.value[g.unit_arrow]
    if np.any(np.abs(mass.imag) > norm_tol) or np.any(mass.real < -norm_tol):
        bad = int(np.argmin(mass.real))
        raise NotAStateError(f"unit {bad} carries mass {mass[bad]}, not a nonnegative real")
    if abs(mass.real.sum() - 1) > norm_tol:
        raise NotAStateError(f"unit masses sum to {mass.real.sum()}, not 1")
    w = np.clip(mass.real, 0, None)
    support = frozenset(int(x) for x in np.nonzero(w > tol)[0])
    mu = UnitMeasure(w, support)
    field = TraceField(g, {x: {u: psi.value[u] / w[x] for u in isotropy(g, x).arrows}
                           for x in sorted(support)})
    back = assemble_theta(mu, field)
    return ExtractedPair(mu, field, float(np.max(np.abs(back.value - psi.value), initial=0.0)))


@dataclass(frozen=True)
class GaugeReport:
    ok: bool
    witnesses: list


def gauge_vanishing_check(psi: LinearFunctional, D: OneCocycle, tol: float = 1e-9) -> GaugeReport:
    """``psi`` must vanish on isotropy arrows where ``D`` is nonzero."""
    g = psi.groupoid
    iso = np.nonzero(g.src == g.dst)[0]
    wit = [(int(u), abs(psi.value[u])) for u in iso
           if abs(D.values[u]) > tol and abs(psi.value[u]) > tol]
    return GaugeReport(not wit, wit)


@dataclass(frozen=True)
class KMSState:
    measure: UnitMeasure
    field: TraceField
    functional: LinearFunctional
    kms_defect: float
    min_eigenvalue: float
    exact: bool

    def to_json(self) -> dict:
        return {"measure": self.measure.to_json(), "field": self.field.to_json(),
                "functional": functional_to_json(self.functional),
                "kms_defect": self.kms_defect, "min_eigenvalue": self.min_eigenvalue,
                "exact_trace": self.exact}


def functional_to_json(psi: LinearFunctional) -> list:
    return [[a, float(v.real), float(v.imag)] for a, v in enumerate(psi.value) if v != 0]


def transport_field(g: FiniteGroupoid, sigma: TwoCocycle, tree: Mapping[int, int],
                    base_values: Mapping[int, complex]) -> TraceField:
    """Spread a trace at the orbit base along spanning-tree arrows using condition (II)."""
    T = g.compose_table
    vals = {}
    for x, eta in tree.items():
        ei = int(g.inv[eta])
        vals[x] = {int(T[T[eta, u], ei]): np.conj(complex(conjugation_phase(sigma, eta, u))) * z
                   for u, z in base_values.items()}
    return TraceField(g, vals)


def kms_simplex(g: FiniteGroupoid, sigma: TwoCocycle, D: OneCocycle, beta: float,
                tol: float = 1e-9) -> list[KMSState]:
    """Extreme KMS states: one per (admissible orbit, extreme trace at its base)."""
    if sigma.groupoid is not g or D.groupoid is not g:
        raise InputError("cocycles must live on the given groupoid")
    trees = {o.base: o for o in orbits(g)}
    out = []
    for verdict in quasi_invariant_extremes(g, D, beta, tol).verdicts:
        if not verdict.admissible:
            continue
        orb = trees[verdict.orbit_base]
        iso = isotropy(g, orb.base)
        for tr in extreme_traces(g, sigma, iso.arrows, iso.abelian):
            field = transport_field(g, sigma, orb.tree, tr.values)
            psi = assemble_theta(verdict.measure, field)
            defect = kms_defect(psi, sigma, D, beta).max_defect
            pos = positivity_check(psi, sigma, tol)
            out.append(KMSState(verdict.measure, field, psi, defect, pos.min_eigenvalue,
                                tr.angles is not None))
    return out
