"""The twisted convolution *-algebra of a finite groupoid and checks on functionals."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.linalg import null_space

from .errors import InputError
from .groupoid import FiniteGroupoid, OneCocycle, TwoCocycle


def _vector(g: FiniteGroupoid, coeff) -> np.ndarray:
    v = np.array(coeff, dtype=complex)
    if v.shape != (g.n_arrows,):
        raise InputError(f"expected {g.n_arrows} coefficients, got shape {v.shape}")
    v.setflags(write=False)
    return v


@dataclass(frozen=True, eq=False)
class AlgElement:
    """A function on arrows, i.e. an element of the twisted groupoid algebra."""

    groupoid: FiniteGroupoid
    coeff: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "coeff", _vector(self.groupoid, self.coeff))

    @classmethod
    def delta(cls, g: FiniteGroupoid, a: int) -> "AlgElement":
        v = np.zeros(g.n_arrows, dtype=complex)
        v[a] = 1
        return cls(g, v)

    @classmethod
    def unit(cls, g: FiniteGroupoid) -> "AlgElement":
        v = np.zeros(g.n_arrows, dtype=complex)
        v[g.unit_arrow] = 1
        return cls(g, v)

    def _same(self, other: "AlgElement"):
        if other.groupoid is not self.groupoid:
            raise InputError("elements live over different groupoids")

    def __add__(self, other: "AlgElement") -> "AlgElement":
        self._same(other)
        return AlgElement(self.groupoid, self.coeff + other.coeff)

    def __sub__(self, other: "AlgElement") -> "AlgElement":
        self._same(other)
        return AlgElement(self.groupoid, self.coeff - other.coeff)

    def __rmul__(self, scalar) -> "AlgElement":
        return AlgElement(self.groupoid, scalar * self.coeff)

    def allclose(self, other: "AlgElement", atol: float = 1e-12) -> bool:
        self._same(other)
        return bool(np.allclose(self.coeff, other.coeff, rtol=0, atol=atol))


@dataclass(frozen=True, eq=False)
class LinearFunctional:
    """``psi(f) = sum_a f(a) * value[a]``."""

    groupoid: FiniteGroupoid
    value: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "value", _vector(self.groupoid, self.value))

    @classmethod
    def zero(cls, g: FiniteGroupoid) -> "LinearFunctional":
        return cls(g, np.zeros(g.n_arrows))

    def __call__(self, f: AlgElement) -> complex:
        if f.groupoid is not self.groupoid:
            raise InputError("functional and element live over different groupoids")
        return complex(np.dot(f.coeff, self.value))

    def __rmul__(self, scalar) -> "LinearFunctional":
        return LinearFunctional(self.groupoid, scalar * self.value)

    def normalization(self) -> complex:
        return complex(self.value[self.groupoid.unit_arrow].sum())


def _check_sigma(sigma: TwoCocycle, *elems):
    for e in elems:
        if e.groupoid is not sigma.groupoid:
            raise InputError("cocycle and element live over different groupoids")


def convolve(f: AlgElement, g: AlgElement, sigma: TwoCocycle) -> AlgElement:
    """Twisted convolution ``(f*g)(c) = sum_{ab=c} sigma(a,b) f(a) g(b)``."""
    _check_sigma(sigma, f, g)
    G = sigma.groupoid
    t = G.composable_triples
    out = np.zeros(G.n_arrows, dtype=complex)
    np.add.at(out, t[:, 2], sigma.triple_phases * f.coeff[t[:, 0]] * g.coeff[t[:, 1]])
    return AlgElement(G, out)


def star(f: AlgElement, sigma: TwoCocycle) -> AlgElement:
    """Involution ``f*(a) = conj(sigma(a, a^-1) f(a^-1))``."""
    _check_sigma(sigma, f)
    G = sigma.groupoid
    phase = np.array([complex(sigma(a, int(G.inv[a]))) for a in G.arrows])
    return AlgElement(G, np.conj(phase * f.coeff[G.inv]))


def evolve(f: AlgElement, D: OneCocycle, t: complex) -> AlgElement:
    """The dynamics ``f(a) -> exp(i t D(a)) f(a)``; imaginary ``t`` gives the analytic continuation."""
    if f.groupoid is not D.groupoid:
        raise InputError("element and 1-cocycle live over different groupoids")
    return AlgElement(f.groupoid, np.exp(1j * t * D.values) * f.coeff)


def i_norm(f: AlgElement) -> float:
    G = f.groupoid
    a = np.abs(f.coeff)
    by_range = np.bincount(G.dst, weights=a, minlength=G.n_units)
    by_source = np.bincount(G.src, weights=a, minlength=G.n_units)
    return float(max(by_range.max(initial=0.0), by_source.max(initial=0.0)))


# --------------------------------------------------------------------- checks

@dataclass(frozen=True)
class PositivityReport:
    is_positive: bool
    min_eigenvalue: float
    hermitian_defect: float
    normalization: complex


def gram_matrix(psi: LinearFunctional, sigma: TwoCocycle) -> np.ndarray:
    """``M[a, b] = psi(delta_a^* * delta_b)``."""
    G = sigma.groupoid
    n = G.n_arrows
    M = np.zeros((n, n), dtype=complex)
    for a in G.arrows:
        ai = int(G.inv[a])
        pre = np.conj(complex(sigma(a, ai)))
        for b in G.arrows_into(G.dst[a]):
            c = int(G.compose_table[ai, b])
            M[a, b] = pre * complex(sigma(ai, int(b))) * psi.value[c]
    return M


def positivity_check(psi: LinearFunctional, sigma: TwoCocycle, tol: float = 1e-9) -> PositivityReport:
    """Certify ``psi(f^* f) >= 0`` via the Gram matrix on the delta basis."""
    M = gram_matrix(psi, sigma)
    herm = float(np.max(np.abs(M - M.conj().T), initial=0.0))
    H = (M + M.conj().T) / 2
    lam = float(np.linalg.eigvalsh(H).min()) if len(H) else 0.0
    return PositivityReport(herm <= tol and lam >= -tol, lam, herm, psi.normalization())


@dataclass(frozen=True)
class KMSDefect:
    max_defect: float
    argmax_pair: tuple[int, int]

    def to_json(self) -> dict:
        return {"max_defect": self.max_defect, "argmax_pair": list(self.argmax_pair)}


def kms_defect(psi: LinearFunctional, sigma: TwoCocycle, D: OneCocycle, beta: float) -> KMSDefect:
    """Largest ``|psi(d_a d_c) - psi(d_c tau_{i beta}(d_a))|`` over pairs of basis elements."""
    G = sigma.groupoid
    n = G.n_arrows
    S = sigma.phase_matrix
    T = G.compose_table
    vals = np.where(T >= 0, psi.value[np.where(T >= 0, T, 0)], 0)
    lhs = S * vals                      # psi(d_a * d_c) at [a, c]
    rhs = (S * vals).T * np.exp(-beta * D.values)[:, None]  # psi(d_c * d_a) e^{-beta D(a)} at [a, c]
    diff = np.abs(lhs - rhs)
    if n == 0:
        return KMSDefect(0.0, (-1, -1))
    k = int(np.argmax(diff))
    return KMSDefect(float(diff.flat[k]), (k // n, k % n))


# --------------------------------------------------------------- trace space

@dataclass(frozen=True)
class TraceSpace:
    """Real basis of the Hermitian tracial functionals on a twisted group algebra.

    Tracial states are the points ``psi`` in the real span of ``basis`` with
    ``psi(delta_e) = 1`` that pass :func:`positivity_check`.
    """

    groupoid: FiniteGroupoid
    basis: tuple[np.ndarray, ...]
    identity: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def normalization(self, psi: LinearFunctional) -> complex:
        return complex(psi.value[self.identity])

    def functional(self, coords: Sequence[float]) -> LinearFunctional:
        v = sum((c * b for c, b in zip(coords, self.basis)), np.zeros(self.groupoid.n_arrows, complex))
        return LinearFunctional(self.groupoid, v)

    def contains(self, psi: LinearFunctional, tol: float = 1e-9) -> bool:
        if not self.basis:
            return bool(np.allclose(psi.value, 0, atol=tol))
        B = np.array([np.concatenate([b.real, b.imag]) for b in self.basis]).T
        y = np.concatenate([psi.value.real, psi.value.imag])
        c, *_ = np.linalg.lstsq(B, y, rcond=None)
        return bool(np.max(np.abs(B @ c - y)) <= tol)


def trace_space(F: FiniteGroupoid, sigma: TwoCocycle, tol: float = 1e-10) -> TraceSpace:
    """Solve ``psi(d_u d_v) = psi(d_v d_u)`` together with Hermiticity over the reals."""
    if F.n_units != 1:
        raise InputError(f"trace_space needs a group (one unit); got {F.n_units} units")
    n = F.n_arrows
    T = F.compose_table
    rows = []
    # unknown vector: [Re psi; Im psi]
    for u in range(n):
        for v in range(u + 1, n):
            uv, vu = int(T[u, v]), int(T[v, u])
            a, b = complex(sigma(u, v)), complex(sigma(v, u))
            # a psi(uv) - b psi(vu) = 0
            re = np.zeros(2 * n)
            im = np.zeros(2 * n)
            re[uv] += a.real
            re[n + uv] -= a.imag
            im[uv] += a.imag
            im[n + uv] += a.real
            re[vu] -= b.real
            re[n + vu] += b.imag
            im[vu] -= b.imag
            im[n + vu] -= b.real
            rows += [re, im]
    for u in range(n):
        # psi(u^-1) = conj(sigma(u,u^-1)) conj(psi(u))
        ui = int(F.inv[u])
        c = np.conj(complex(sigma(u, ui)))
        re = np.zeros(2 * n)
        im = np.zeros(2 * n)
        re[ui] += 1
        im[n + ui] += 1
        # c * conj(psi(u)) = (cr + i ci)(pr - i pi) = (cr pr + ci pi) + i(ci pr - cr pi)
        re[u] -= c.real
        re[n + u] -= c.imag
        im[u] -= c.imag
        im[n + u] += c.real
        rows += [re, im]
    A = np.array(rows) if rows else np.zeros((0, 2 * n))
    N = null_space(A, rcond=tol) if len(A) else np.eye(2 * n)
    basis = []
    for col in N.T:
        v = col[:n] + 1j * col[n:]
        v[np.abs(v) < 1e-14] = 0
        basis.append(v)
    return TraceSpace(F, tuple(basis), int(F.unit_arrow[0]))
