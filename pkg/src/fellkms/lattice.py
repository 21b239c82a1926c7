"""Rational bicharacters on Z^t, their antisymmetrization, and the centre subgroup Z_omega.

Everything here is exact: angles are Fractions, subgroups are integer
matrices in Hermite normal form, and the kernel computation goes through the
Smith normal form.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from .circle import UnitCircleValue, parse_angle
from .errors import InputError


def _fraction_matrix(rows, t: int) -> tuple[tuple[Fraction, ...], ...]:
    out = tuple(tuple(parse_angle(v) for v in row) for row in rows)
    if len(out) != t or any(len(r) != t for r in out):
        raise InputError(f"theta must be {t}x{t}")
    return out


def _common_denominator(entries) -> int:
    return math.lcm(1, *(Fraction(e).denominator for e in entries))


@dataclass(frozen=True)
class Bicharacter:
    """``omega(p, q) = exp(2 pi i p^T theta q)`` with ``theta`` strictly lower triangular."""

    rank: int
    theta: tuple = ()

    def __post_init__(self):
        th = self.theta or tuple((0,) * self.rank for _ in range(self.rank))
        th = _fraction_matrix(th, self.rank)
        for i in range(self.rank):
            for j in range(i, self.rank):
                if th[i][j] != 0:
                    raise InputError(f"theta[{i}][{j}] must be 0 (only i > j entries are allowed)")
        object.__setattr__(self, "theta", th)

    @classmethod
    def from_strings(cls, rows: Sequence[Sequence[str]]) -> "Bicharacter":
        return cls(len(rows), tuple(tuple(rows[i][j] for j in range(len(rows))) for i in range(len(rows))))

    @cached_property
    def denominator(self) -> int:
        return _common_denominator(v for row in self.theta for v in row)

    @cached_property
    def antisym_integer(self) -> np.ndarray:
        """``denominator * (theta - theta^T)`` as an integer array."""
        d = self.denominator
        t = self.rank
        out = np.zeros((t, t), dtype=np.int64)
        for i in range(t):
            for j in range(t):
                out[i, j] = int((self.theta[i][j] - self.theta[j][i]) * d)
        return out

    def __call__(self, p: Sequence[int], q: Sequence[int]) -> UnitCircleValue:
        p, q = _check_vec(p, self.rank), _check_vec(q, self.rank)
        return UnitCircleValue(sum((p[i] * self.theta[i][j] * q[j]
                                    for i in range(self.rank) for j in range(self.rank)),
                                   Fraction(0)))

    def to_json(self) -> dict:
        return {"rank": self.rank, "theta": [[str(v.numerator) + "/" + str(v.denominator)
                                              for v in row] for row in self.theta]}


def _check_vec(p, t: int) -> tuple[int, ...]:
    p = tuple(int(v) for v in p)
    if len(p) != t:
        raise InputError(f"vector {p} does not have rank {t}")
    return p


def omega_from_generators(sigma_values: Mapping[tuple[int, int], object], rank: int) -> Bicharacter:
    """Bicharacter cohomologous to a 2-cocycle given on ordered generator pairs (0-based)."""
    th = [[Fraction(0)] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(i):
            try:
                th[i][j] = (parse_angle(sigma_values[(i, j)]) - parse_angle(sigma_values[(j, i)])) % 1
            except KeyError as e:
                raise InputError(f"missing cocycle value on generator pair {e.args[0]}") from None
    return Bicharacter(rank, tuple(tuple(r) for r in th))


def antisym_pairing(omega: Bicharacter, p: Sequence[int], q: Sequence[int]) -> UnitCircleValue:
    """``omega(p,q) conj(omega(q,p))``."""
    return omega(p, q) * omega(q, p).conjugate()


# ------------------------------------------------------------------ subgroups

def _hnf_columns(M: np.ndarray, t: int) -> np.ndarray:
    M = np.asarray(M, dtype=np.int64).reshape(t, -1)
    if M.shape[1] == 0 or not M.any():
        return np.zeros((t, 0), dtype=np.int64)
    H = hermite_normal_form(Matrix(M.tolist()))
    return np.array(H.tolist(), dtype=np.int64).reshape(t, -1)


@dataclass(frozen=True, eq=False)
class LatticeSubgroup:
    """Subgroup of Z^t spanned by the columns of ``basis`` (kept in Hermite normal form)."""

    ambient_rank: int
    basis: np.ndarray = field(default=None)

    def __post_init__(self):
        t = self.ambient_rank
        B = np.zeros((t, 0), dtype=np.int64) if self.basis is None else self.basis
        B = _hnf_columns(B, t)
        B.setflags(write=False)
        object.__setattr__(self, "basis", B)

    @classmethod
    def from_generators(cls, gens: Sequence[Sequence[int]], t: int) -> "LatticeSubgroup":
        gens = [list(g) for g in gens]
        M = np.array(gens, dtype=np.int64).T if gens else np.zeros((t, 0), dtype=np.int64)
        return cls(t, M)

    @classmethod
    def full(cls, t: int) -> "LatticeSubgroup":
        return cls(t, np.eye(t, dtype=np.int64))

    @property
    def rank(self) -> int:
        return self.basis.shape[1]

    @cached_property
    def _snf(self):
        S, U, V = smith_normal_decomp(Matrix(self.basis.tolist()))
        diag = [int(S[i, i]) for i in range(self.rank)]
        return (np.array(U.tolist(), dtype=object).reshape(self.ambient_rank, self.ambient_rank),
                np.array(V.tolist(), dtype=object).reshape(self.rank, self.rank), diag)

    def coordinates(self, p: Sequence[int]):
        """Integer ``c`` with ``basis @ c == p``, or ``None`` if ``p`` is not in the subgroup."""
        p = np.array(_check_vec(p, self.ambient_rank), dtype=object)
        if self.rank == 0:
            return np.zeros(0, dtype=np.int64) if not p.any() else None
        U, V, diag = self._snf
        y = U.dot(p)
        if any(y[i] != 0 for i in range(self.rank, self.ambient_rank)):
            return None
        if any(y[i] % diag[i] for i in range(self.rank)):
            return None
        w = np.array([y[i] // diag[i] for i in range(self.rank)], dtype=object)
        return np.array(V.dot(w), dtype=np.int64)

    def __contains__(self, p) -> bool:
        return self.coordinates(p) is not None

    def contains_many(self, P: np.ndarray) -> np.ndarray:
        """Vectorized membership for the rows of an integer array."""
        P = np.asarray(P, dtype=np.int64).reshape(-1, self.ambient_rank)
        if self.rank == 0:
            return ~P.any(axis=1)
        U, _, diag = self._snf
        Y = P @ np.array(U, dtype=np.int64).T
        ok = np.ones(len(P), dtype=bool)
        for i in range(self.ambient_rank):
            ok &= (Y[:, i] % diag[i] == 0) if i < self.rank else (Y[:, i] == 0)
        return ok

    @property
    def index(self) -> int | None:
        """``[Z^t : L]`` for full-rank ``L``; ``None`` otherwise."""
        if self.rank < self.ambient_rank:
            return None
        return abs(int(round(np.linalg.det(self.basis.astype(float))))) if self.rank else 1

    def __eq__(self, other) -> bool:
        return (isinstance(other, LatticeSubgroup) and other.ambient_rank == self.ambient_rank
                and np.array_equal(self.basis, other.basis))

    def __hash__(self):
        return hash((self.ambient_rank, self.basis.tobytes()))

    def to_json(self) -> dict:
        return {"basis": [[int(v) for v in col] for col in self.basis.T], "hermite": True}

    def __repr__(self) -> str:
        return f"LatticeSubgroup(rank {self.rank} in Z^{self.ambient_rank}, basis={self.basis.T.tolist()})"


def z_omega(omega: Bicharacter) -> LatticeSubgroup:
    """``{p : omega omega^*(p, q) = 1 for all q}`` via the Smith normal form of ``d(theta - theta^T)``."""
    t = omega.rank
    if t == 0:
        return LatticeSubgroup(0)
    d = omega.denominator
    N = omega.antisym_integer
    S, U, V = smith_normal_decomp(Matrix(N.tolist()))
    cols = []
    for i in range(t):
        s = int(S[i, i]) if i < min(S.shape) else 0
        mult = d // math.gcd(s, d)
        cols.append([int(V[r, i]) * mult for r in range(t)])
    return LatticeSubgroup(t, np.array(cols, dtype=np.int64).T)


def restriction_upsilon(coeffs: Mapping[tuple, complex], omega: Bicharacter,
                        Z: LatticeSubgroup | None = None) -> dict:
    """Keep only the coefficients sitting on ``Z_omega``."""
    Z = z_omega(omega) if Z is None else Z
    return {tuple(p): v for p, v in coeffs.items() if tuple(p) in Z}


# ------------------------------------------------------------ lattice traces

def _box(radius: int, t: int) -> np.ndarray:
    r = np.arange(-radius, radius + 1)
    return np.array(list(itertools.product(r, repeat=t)), dtype=np.int64).reshape(-1, t)


@dataclass(frozen=True)
class TracialCertificate:
    ok: bool
    box_radius: int
    checked_support: int
    witness: tuple | None
    scope: str = "box"

    def to_json(self) -> dict:
        return {"ok": self.ok, "box_radius": self.box_radius, "scope": self.scope,
                "checked_support": self.checked_support,
                "witness": None if self.witness is None else [list(map(int, w)) for w in self.witness]}


@dataclass(frozen=True, eq=False)
class LatticeTrace:
    """``psi(W_p) = chi(p) b(p)`` on ``Z_omega``, zero off it.

    ``chi`` is a character of ``Z_omega`` given by angles on its basis; ``b``
    is a fixed normalizer with ``b(p) b(q) = omega(p, q) b(p+q)`` on
    ``Z_omega`` (trivial whenever omega is trivial there).  ``overrides``
    lets tests inject arbitrary values.
    """

    omega: Bicharacter
    character: tuple
    Z: LatticeSubgroup
    overrides: Mapping = field(default_factory=dict)

    @cached_property
    def _z_form(self) -> list[list[Fraction]]:
        # fractional part of B^T theta B is symmetric on Z_omega
        B = self.Z.basis
        t, r = B.shape
        th = self.omega.theta
        return [[sum((int(B[i, a]) * th[i][j] * int(B[j, b]) for i in range(t) for j in range(t)),
                     Fraction(0)) % 1 for b in range(r)] for a in range(r)]

    def angle(self, p) -> Fraction | None:
        p = tuple(int(v) for v in p)
        if p in self.overrides:
            return None
        c = self.Z.coordinates(p)
        if c is None:
            return None
        F = self._z_form
        r = len(c)
        quad = sum((int(c[a]) * F[a][b] * int(c[b]) for a in range(r) for b in range(r)), Fraction(0))
        lin = sum((int(c[a]) * self.character[a] for a in range(r)), Fraction(0))
        return (lin - quad / 2) % 1

    def __call__(self, p) -> complex:
        p = tuple(int(v) for v in p)
        if p in self.overrides:
            return complex(self.overrides[p])
        a = self.angle(p)
        return 0j if a is None else complex(UnitCircleValue(a))

    def with_override(self, p, value: complex) -> "LatticeTrace":
        return LatticeTrace(self.omega, self.character, self.Z, {**self.overrides, tuple(p): value})

    def certify(self, radius: int) -> TracialCertificate:
        """Exact check of ``psi(W_p W_q) = psi(W_q W_p)`` for all ``p, q`` in the box.

        Both products are multiples of ``W_{p+q}``, so for each ``s = p + q``
        with ``psi(W_s) != 0`` the character ``p -> omega omega^*(p, s)`` must
        be trivial on the window of admissible ``p``.  Coordinates with at
        least two admissible values force that coordinate of the character
        to vanish; single-value coordinates contribute a constant.
        """
        t = self.omega.rank
        d = self.omega.denominator
        N = self.omega.antisym_integer
        S = _box(2 * radius, t)
        support = self.Z.contains_many(S)
        extra = [s for s in self.overrides if max(map(abs, s), default=0) <= 2 * radius
                 and self.overrides[s] != 0]
        mask = support.copy()
        if extra:
            idx = {tuple(s): i for i, s in enumerate(S.tolist())}
            for s in self.overrides:
                if tuple(s) in idx:
                    mask[idx[tuple(s)]] = self.overrides[s] != 0
        S = S[mask]
        # omega omega^*(p, s) has angle p^T (theta - theta^T) s = p . (N s) / d
        V = (S @ N.T) % d
        lo = np.maximum(-radius, S - radius)
        hi = np.minimum(radius, S + radius)
        wide = hi > lo
        bad_wide = (wide & (V != 0)).any(axis=1)
        const = ((~wide) * lo * V).sum(axis=1) % d
        bad = bad_wide | (const != 0)
        witness = None
        if bad.any():
            k = int(np.argmax(bad))
            s = S[k]
            p = lo[k].copy()
            j = np.nonzero(wide[k] & (V[k] != 0))[0]
            if len(j) and (p @ V[k]) % d == 0:
                p[j[0]] += 1
            witness = (tuple(int(v) for v in p), tuple(int(v) for v in s - p))
        return TracialCertificate(not bad.any(), radius, int(mask.sum()), witness)


def lattice_trace_from_character(character: Sequence, omega: Bicharacter,
                                 Z: LatticeSubgroup | None = None) -> LatticeTrace:
    Z = z_omega(omega) if Z is None else Z
    chi = tuple(parse_angle(a) for a in character)
    if len(chi) != Z.rank:
        raise InputError(f"character needs {Z.rank} angles, got {len(chi)}")
    return LatticeTrace(omega, chi, Z)
