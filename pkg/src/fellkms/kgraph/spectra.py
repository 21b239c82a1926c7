"""Perron data of the coordinate matrices, the preferred dynamics and the measure M."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
from sympy import Matrix, Poly, Symbol, real_roots

from ..errors import PreconditionError
from .graph import Degree, FiniteKGraph, KPath, iter_degrees

EXACT_VERTEX_LIMIT = 6


@dataclass(frozen=True)
class Spectra:
    matrices: tuple
    radii: tuple[float, ...]
    perron: np.ndarray
    method: str
    eigen_residual: float

    def to_json(self) -> dict:
        return {"matrices": [A.tolist() for A in self.matrices],
                "spectral_radii": list(self.radii),
                "perron_vector": [float(v) for v in self.perron],
                "method": self.method, "eigen_residual": self.eigen_residual}


def _exact_radius(A: np.ndarray) -> float:
    lam = Symbol("lam")
    poly = Poly(Matrix(A.tolist()).charpoly(lam).as_expr(), lam)
    roots = real_roots(poly)
    return float(max(r.evalf(30) for r in roots)) if roots else 0.0


def _power_iteration(B: np.ndarray, tol: float = 1e-12, max_iter: int = 10 ** 6) -> np.ndarray:
    x = np.full(B.shape[0], 1.0 / B.shape[0])
    for _ in range(max_iter):
        y = B @ x
        y /= y.sum()
        if np.abs(y - x).max() < tol:
            return y
        x = y
    return x


def adjacency_spectra(g: FiniteKGraph, exact_limit: int = EXACT_VERTEX_LIMIT) -> Spectra:
    """Spectral radii of each ``A_i`` and the common unimodular Perron vector."""
    if not g.is_strongly_connected():
        raise PreconditionError("adjacency spectra need a strongly connected k-graph")
    mats = tuple(g.adjacency(c) for c in range(g.k))
    n = g.n_vertices
    x = _power_iteration(np.eye(n) + sum(A.astype(float) for A in mats))
    if n <= exact_limit:
        radii = tuple(_exact_radius(A) for A in mats)
        method = "characteristic-polynomial"
    else:
        radii = tuple(float((A @ x).sum() / x.sum()) for A in mats)
        method = "power-iteration"
    resid = max(float(np.abs(A @ x - r * x).max()) for A, r in zip(mats, radii))
    return Spectra(mats, radii, x, method, resid)


@dataclass(frozen=True)
class PreferredCocycle:
    """``D(x, l, y) = sum_i l_i ln rho(A_i)``; only ``l`` matters."""

    log_radii: tuple[float, ...]

    @classmethod
    def from_spectra(cls, s: Spectra) -> "PreferredCocycle":
        return cls(tuple(math.log(r) for r in s.radii))

    def __call__(self, l: Sequence[int]) -> float:
        return float(sum(li * c for li, c in zip(l, self.log_radii)))


def preferred_cocycle(g: FiniteKGraph, spectra: Spectra | None = None) -> PreferredCocycle:
    return PreferredCocycle.from_spectra(spectra or adjacency_spectra(g))


def measure_M(g: FiniteKGraph, lam: KPath, spectra: Spectra) -> float:
    """Mass of the cylinder of infinite paths starting with ``lam``."""
    scale = math.prod(r ** -d for r, d in zip(spectra.radii, lam.degree))
    return float(scale * spectra.perron[lam.src])


@dataclass(frozen=True)
class AdditivityReport:
    max_residual: float
    vertex_total: float
    checked: int

    @property
    def ok(self) -> bool:
        return self.max_residual <= 1e-9 and abs(self.vertex_total - 1) <= 1e-9


def additivity_certificate(g: FiniteKGraph, paths: Iterable[KPath], spectra: Spectra
                           ) -> AdditivityReport:
    """Check ``M(Z(lam)) = sum_e M(Z(lam e))`` over edges ``e`` of each colour at ``s(lam)``."""
    worst, count = 0.0, 0
    for lam in paths:
        whole = measure_M(g, lam, spectra)
        for c in range(g.k):
            parts = sum(measure_M(g, g.concat(lam, g.path([e])), spectra)
                        for e in g.edges_into(c, lam.src))
            worst = max(worst, abs(whole - parts))
            count += 1
    total = sum(measure_M(g, g.vertex(v), spectra) for v in range(g.n_vertices))
    return AdditivityReport(worst, total, count)


def measure_table(g: FiniteKGraph, spectra: Spectra, max_total: int) -> list[tuple[KPath, float]]:
    """``M(Z(lam))`` for every path with ``|d(lam)| <= max_total``."""
    out = []
    for d in iter_degrees((max_total,) * g.k):
        if sum(d) <= max_total:
            out.extend((p, measure_M(g, p, spectra)) for p in g.enumerate_paths(d))
    return out


def degree_box(g: FiniteKGraph, max_total: int) -> list[Degree]:
    return [d for d in iter_degrees((max_total,) * g.k) if sum(d) <= max_total]
