"""Brute-force references, independent of the code under test."""

import itertools
import math
from fractions import Fraction

import numpy as np


def residue_mask(theta, d):
    """``p`` in ``[0, d)^t`` with ``(theta - theta^T) p`` integral, by direct enumeration."""
    t = len(theta)
    K = [[int((Fraction(theta[i][j]) - Fraction(theta[j][i])) * d) for j in range(t)] for i in range(t)]
    res = np.array(list(itertools.product(range(d), repeat=t)), dtype=np.int64).reshape(-1, t)
    return res, ((res @ np.array(K, dtype=np.int64).T) % d == 0).all(axis=1)


def box(radius, t):
    r = range(-radius, radius + 1)
    return np.array(list(itertools.product(r, repeat=t)), dtype=np.int64).reshape(-1, t)


def omega_matrix(theta, P, Q):
    """``omega(p, q)`` for all rows ``p`` of ``P`` and ``q`` of ``Q`` (floating point)."""
    th = np.array([[float(Fraction(v)) for v in row] for row in theta])
    return np.exp(2j * math.pi * (P @ th @ Q.T))


def tracial_defect(theta, psi, radius):
    """Max of ``|psi(W_p W_q) - psi(W_q W_p)|`` over the box, with ``W_p W_q = omega(p,q) W_{p+q}``."""
    t = len(theta)
    P = box(radius, t)
    W = omega_matrix(theta, P, P)
    vals = np.array([[psi(tuple(p + q)) for q in P] for p in P])
    return float(np.abs(W * vals - W.T * vals).max())


def gram_min_eigenvalue(theta, psi, radius):
    """Least eigenvalue of ``[psi(W_p^* W_q)]`` over the box."""
    t = len(theta)
    P = box(radius, t)
    th = np.array([[float(Fraction(v)) for v in row] for row in theta])
    ang = lambda p, q: np.exp(2j * math.pi * (p @ th @ q))  # noqa: E731
    G = np.array([[np.conj(ang(p, -p)) * ang(-p, q) * psi(tuple(q - p)) for q in P] for p in P])
    return float(np.linalg.eigvalsh((G + G.conj().T) / 2).min())


def random_theta(rng, t, max_den=12):
    q = int(rng.integers(1, max_den + 1))
    return [[Fraction(int(rng.integers(0, q)), q) if i > j else Fraction(0) for j in range(t)]
            for i in range(t)]


def _phase(sigma, a, b):
    return np.exp(2j * math.pi * float(sigma.angle(a, b)))


def groupoid_kms_defect(g, sigma, D, beta, value):
    """Max over arrow pairs of ``|psi(d_a d_c) - e^{-beta D(a)} psi(d_c d_a)|``, by explicit loops."""
    worst = 0.0
    for a in range(g.n_arrows):
        for c in range(g.n_arrows):
            ac = g.compose_table[a, c]
            ca = g.compose_table[c, a]
            lhs = _phase(sigma, a, c) * value[ac] if ac >= 0 else 0
            rhs = _phase(sigma, c, a) * value[ca] if ca >= 0 else 0
            worst = max(worst, abs(lhs - math.exp(-beta * D.values[a]) * rhs))
    return worst


def groupoid_gram_min_eigenvalue(g, sigma, value):
    """Least eigenvalue of ``[psi(d_a^* d_b)]`` with ``d_a^* = conj sigma(a^-1, a) d_{a^-1}``."""
    n = g.n_arrows
    G = np.zeros((n, n), dtype=complex)
    for a in range(n):
        ai = int(g.inv[a])
        star = np.conj(_phase(sigma, ai, a))
        for b in range(n):
            ab = g.compose_table[ai, b]
            if ab >= 0:
                G[a, b] = star * _phase(sigma, ai, b) * value[ab]
    return float(np.linalg.eigvalsh((G + G.conj().T) / 2).min())


def orbit(g, x):
    return sorted({int(g.dst[a]) for a in range(g.n_arrows) if g.src[a] == x})
