"""Extreme tracial states of twisted group algebras of finite isotropy groups."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np
from scipy.linalg import null_space

from .circle import UnitCircleValue
from .groupoid import FiniteGroupoid, TwoCocycle


@dataclass(frozen=True)
class ExtremeTrace:
    """A tracial state on ``C*(H, sigma)`` given by its values on the ``W_u``.

    ``angles`` carries the exact values when the trace is a projective
    character of the central subgroup (abelian case); values outside that
    subgroup are zero.
    """

    values: dict
    angles: Optional[dict] = None


def central_subgroup(g: FiniteGroupoid, sigma: TwoCocycle, H: Sequence[int]) -> list[int]:
    """Elements ``p`` of an abelian ``H`` with ``sigma(p,q) = sigma(q,p)`` for every ``q``."""
    return [p for p in H if all(sigma.angle(p, q) == sigma.angle(q, p) for q in H)]


def projective_characters(g: FiniteGroupoid, sigma: TwoCocycle, Z: Sequence[int]) -> list[dict]:
    """All ``f: Z -> T`` with ``f(p) f(q) = sigma(p, q) f(pq)``, as angle dicts.

    ``Z`` must be an abelian group on which ``sigma`` is symmetric; there are
    exactly ``|Z|`` such functions.
    """
    T = g.compose_table
    ang = sigma.angle
    e = int(g.unit_arrow[g.src[Z[0]]])
    S = [e]
    chars = [{e: Fraction(0)}]
    while len(S) < len(Z):
        gen = next(p for p in Z if p not in S)
        powers = [e, gen]
        while powers[-1] not in S:
            powers.append(int(T[gen, powers[-1]]))
        n = len(powers) - 1
        target = powers[n]
        # f(g^{j+1}) = f(g) + f(g^j) - sigma(g, g^j)  (angles)
        drift = sum((ang(gen, powers[j]) for j in range(1, n)), Fraction(0))
        new_chars = []
        for f in chars:
            for k in range(n):
                fg = (f[target] + drift + k) / n
                fpow = [Fraction(0), fg]
                for j in range(1, n - 1):
                    fpow.append(fg + fpow[j] - ang(gen, powers[j]))
                ext = {}
                for s in S:
                    for j in range(n):
                        ext[int(T[s, powers[j]])] = (f[s] + fpow[j] - ang(s, powers[j])) % 1
                new_chars.append(ext)
        S = list(new_chars[0])
        chars = new_chars
    return [f for f in chars
            if all((f[p] + f[q] - ang(p, q) - f[int(T[p, q])]) % 1 == 0 for p in Z for q in Z)]


def regular_representation(g: FiniteGroupoid, sigma: TwoCocycle, H: Sequence[int], u: int
                           ) -> np.ndarray:
    """Matrix of left multiplication by ``W_u`` on ``span{W_v : v in H}``."""
    pos = {v: i for i, v in enumerate(H)}
    L = np.zeros((len(H), len(H)), dtype=complex)
    for v in H:
        L[pos[int(g.compose_table[u, v])], pos[v]] = complex(sigma(u, v))
    return L


def numeric_extreme_traces(g: FiniteGroupoid, sigma: TwoCocycle, H: Sequence[int],
                           seed: int = 0, tol: float = 1e-8) -> list[ExtremeTrace]:
    """Block traces of ``C*(H, sigma)`` from the spectral projections of a random central element."""
    H = list(H)
    n = len(H)
    pos = {v: i for i, v in enumerate(H)}
    T = g.compose_table
    rows = []
    for u in H:
        row = np.zeros((n, n), dtype=complex)
        for w in H:
            row[pos[int(T[u, w])], pos[w]] += complex(sigma(u, w))
            row[pos[int(T[w, u])], pos[w]] -= complex(sigma(w, u))
        rows.append(row)
    C = null_space(np.vstack(rows))  # columns: coefficient vectors of central elements
    Ls = [regular_representation(g, sigma, H, u) for u in H]
    rng = np.random.default_rng(seed)
    for _ in range(20):
        z = C @ (rng.normal(size=C.shape[1]) + 1j * rng.normal(size=C.shape[1]))
        Lz = sum(c * L for c, L in zip(z, Ls))
        Lz = Lz + Lz.conj().T
        lam, V = np.linalg.eigh(Lz)
        groups = [[0]]
        for i in range(1, n):
            if lam[i] - lam[groups[-1][-1]] < tol:
                groups[-1].append(i)
            else:
                groups.append([i])
        if len(groups) == C.shape[1]:
            break
    out = []
    for grp in groups:
        P = V[:, grp] @ V[:, grp].conj().T
        vals = {u: complex(np.trace(P @ L) / len(grp)) for u, L in zip(H, Ls)}
        out.append(ExtremeTrace(vals))
    return out


def extreme_traces(g: FiniteGroupoid, sigma: TwoCocycle, H: Sequence[int], abelian: bool
                   ) -> list[ExtremeTrace]:
    """Extreme tracial states at an isotropy group; exact when ``H`` is abelian."""
    H = list(H)
    if not abelian:
        return numeric_extreme_traces(g, sigma, H)
    Z = central_subgroup(g, sigma, H)
    out = []
    for f in projective_characters(g, sigma, Z):
        vals = {u: complex(UnitCircleValue(f[u])) if u in f else 0j for u in H}
        out.append(ExtremeTrace(vals, dict(f)))
    return out
