"""JSON formats for groupoids, cocycles, functionals, bicharacters and k-graphs.

Parsing errors carry the field path (``arrows[3].src``) or, for JSON syntax
errors, the line and column.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

import numpy as np

from .algebra import LinearFunctional
from .circle import parse_angle
from .errors import InputError
from .groupoid import FiniteGroupoid, OneCocycle, TwoCocycle
from .kgraph.cocycle import DegreeCocycle, KGraphCocycle, TableCocycle
from .kgraph.graph import FiniteKGraph
from .lattice import Bicharacter


class SchemaError(InputError):
    def __init__(self, path: str, message: str):
        super().__init__(f"field '{path}': {message}")
        self.path = path


def loads(text: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputError(f"line {e.lineno} column {e.colno}: {e.msg}") from None


def load_file(path: str) -> Any:
    try:
        with open(path, encoding="utf-8") as fh:
            return loads(fh.read())
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from None


def _get(doc: Any, key: str, path: str, kind=None, default=...):
    if not isinstance(doc, dict):
        raise SchemaError(path or "<root>", "expected an object")
    if key not in doc:
        if default is not ...:
            return default
        raise SchemaError(f"{path}.{key}".lstrip("."), "required")
    val = doc[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"{path}.{key}".lstrip("."), f"expected {getattr(kind, '__name__', kind)}")
    return val


def _angle(value: Any, path: str) -> Fraction:
    if not isinstance(value, (str, int)) or isinstance(value, bool):
        raise SchemaError(path, f"angle must be an exact 'p/q' string, got {value!r}")
    try:
        return parse_angle(value)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(path, f"cannot parse angle {value!r}") from None


def _number(value: Any, path: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(path, f"expected a number, got {value!r}")
    return float(value)


def _index(table: dict, value: Any, path: str) -> int:
    try:
        return table[value]
    except (KeyError, TypeError):
        raise SchemaError(path, f"unknown id {value!r}") from None


# ----------------------------------------------------------------- groupoids

def groupoid_from_json(doc: dict, path: str = "") -> FiniteGroupoid:
    units = _get(doc, "units", path, list)
    arrows = _get(doc, "arrows", path, list)
    uidx = {}
    for i, u in enumerate(units):
        if not isinstance(u, (int, str)) or u in uidx:
            raise SchemaError(f"{path}.units[{i}]".lstrip("."), "unit ids must be distinct ints or strings")
        uidx[u] = i
    aidx, src, dst = {}, [], []
    for i, a in enumerate(arrows):
        p = f"{path}.arrows[{i}]".lstrip(".")
        aid = _get(a, "id", p)
        if not isinstance(aid, (int, str)) or aid in aidx:
            raise SchemaError(f"{p}.id", "arrow ids must be distinct ints or strings")
        aidx[aid] = i
        src.append(_index(uidx, _get(a, "src", p), f"{p}.src"))
        dst.append(_index(uidx, _get(a, "dst", p), f"{p}.dst"))
    n = len(arrows)
    table = np.full((n, n), -1, dtype=np.int64)
    for i, row in enumerate(_get(doc, "compose", path, list)):
        p = f"{path}.compose[{i}]".lstrip(".")
        if not isinstance(row, list) or len(row) != 3:
            raise SchemaError(p, "expected [a, b, a*b]")
        a, b, c = (_index(aidx, v, f"{p}[{j}]") for j, v in enumerate(row))
        table[a, b] = c
    inv = np.full(n, -1, dtype=np.int64)
    for i, row in enumerate(_get(doc, "inv", path, list)):
        p = f"{path}.inv[{i}]".lstrip(".")
        if not isinstance(row, list) or len(row) != 2:
            raise SchemaError(p, "expected [a, a^-1]")
        inv[_index(aidx, row[0], f"{p}[0]")] = _index(aidx, row[1], f"{p}[1]")
    unit_arrow = np.full(len(units), -1, dtype=np.int64)
    explicit = _get(doc, "unit_arrows", path, list, default=None)
    if explicit is not None:
        for i, row in enumerate(explicit):
            p = f"{path}.unit_arrows[{i}]".lstrip(".")
            if not isinstance(row, list) or len(row) != 2:
                raise SchemaError(p, "expected [unit, arrow]")
            unit_arrow[_index(uidx, row[0], f"{p}[0]")] = _index(aidx, row[1], f"{p}[1]")
    else:
        for a in range(n):
            if src[a] == dst[a] and table[a, a] == a and unit_arrow[src[a]] < 0:
                unit_arrow[src[a]] = a
    return FiniteGroupoid(len(units), src, dst, table, inv, unit_arrow,
                          arrow_labels=tuple(arrows[i]["id"] for i in range(n)),
                          unit_labels=tuple(units), name=str(doc.get("name", "")))


def groupoid_to_json(g: FiniteGroupoid) -> dict:
    lab, ulab = g.arrow_labels, g.unit_labels
    return {
        "units": list(ulab),
        "arrows": [{"id": lab[a], "src": ulab[int(g.src[a])], "dst": ulab[int(g.dst[a])]}
                   for a in g.arrows],
        "compose": [[lab[a], lab[b], lab[c]] for a, b, c in g.composable_triples.tolist()],
        "inv": [[lab[a], lab[int(g.inv[a])]] for a in g.arrows],
    }


def _arrow_index(g: FiniteGroupoid) -> dict:
    return {lab: i for i, lab in enumerate(g.arrow_labels)}


def two_cocycle_from_json(rows: Any, g: FiniteGroupoid, path: str = "two_cocycle") -> TwoCocycle:
    if not isinstance(rows, list):
        raise SchemaError(path, "expected a list of [a, b, 'p/q']")
    aidx = _arrow_index(g)
    angles = {}
    for i, row in enumerate(rows):
        p = f"{path}[{i}]"
        if not isinstance(row, list) or len(row) != 3:
            raise SchemaError(p, "expected [a, b, 'p/q']")
        key = (_index(aidx, row[0], f"{p}[0]"), _index(aidx, row[1], f"{p}[1]"))
        angles[key] = _angle(row[2], f"{p}[2]")
    return TwoCocycle(g, angles)


def two_cocycle_to_json(sigma: TwoCocycle) -> list:
    lab = sigma.groupoid.arrow_labels
    return [[lab[a], lab[b], f"{v.numerator}/{v.denominator}"]
            for (a, b), v in sorted(sigma.angles.items())]


def one_cocycle_from_json(rows: Any, g: FiniteGroupoid, path: str = "one_cocycle") -> OneCocycle:
    if not isinstance(rows, list):
        raise SchemaError(path, "expected a list of [a, value]")
    aidx = _arrow_index(g)
    vals = np.zeros(g.n_arrows)
    for i, row in enumerate(rows):
        p = f"{path}[{i}]"
        if not isinstance(row, list) or len(row) != 2:
            raise SchemaError(p, "expected [a, value]")
        vals[_index(aidx, row[0], f"{p}[0]")] = _number(row[1], f"{p}[1]")
    return OneCocycle(g, vals)


def one_cocycle_to_json(D: OneCocycle) -> list:
    lab = D.groupoid.arrow_labels
    return [[lab[a], float(D.values[a])] for a in D.groupoid.arrows]


def functional_from_json(rows: Any, g: FiniteGroupoid, path: str = "functional") -> LinearFunctional:
    if not isinstance(rows, list):
        raise SchemaError(path, "expected a list of [a, re, im]")
    aidx = _arrow_index(g)
    vals = np.zeros(g.n_arrows, dtype=complex)
    for i, row in enumerate(rows):
        p = f"{path}[{i}]"
        if not isinstance(row, list) or len(row) != 3:
            raise SchemaError(p, "expected [a, re, im]")
        vals[_index(aidx, row[0], f"{p}[0]")] = complex(_number(row[1], f"{p}[1]"),
                                                        _number(row[2], f"{p}[2]"))
    return LinearFunctional(g, vals)


def functional_to_json(psi: LinearFunctional) -> list:
    lab = psi.groupoid.arrow_labels
    return [[lab[a], float(v.real), float(v.imag)] for a, v in enumerate(psi.value) if v != 0]


def groupoid_problem_from_json(doc: Any) -> dict:
    """Groupoid plus optional ``two_cocycle``, ``one_cocycle``, ``beta`` and ``functional``."""
    if not isinstance(doc, dict):
        raise SchemaError("<root>", "expected an object")
    g = groupoid_from_json(doc["groupoid"], "groupoid") if "groupoid" in doc else groupoid_from_json(doc)
    out: dict = {"groupoid": g}
    out["sigma"] = (two_cocycle_from_json(doc["two_cocycle"], g) if "two_cocycle" in doc
                    else None)
    out["D"] = one_cocycle_from_json(doc["one_cocycle"], g) if "one_cocycle" in doc else None
    out["beta"] = _number(doc["beta"], "beta") if "beta" in doc else None
    out["functional"] = (functional_from_json(doc["functional"], g) if "functional" in doc else None)
    return out


# ------------------------------------------------------------------ lattice

def bicharacter_from_json(doc: Any, path: str = "") -> Bicharacter:
    t = _get(doc, "rank", path, int)
    rows = _get(doc, "theta", path, list)
    if len(rows) != t or any(not isinstance(r, list) or len(r) != t for r in rows):
        raise SchemaError(f"{path}.theta".lstrip("."), f"expected a {t}x{t} matrix")
    th = tuple(tuple(_angle(v, f"{path}.theta[{i}][{j}]".lstrip(".")) for j, v in enumerate(r))
               for i, r in enumerate(rows))
    return Bicharacter(t, th)


# ------------------------------------------------------------------ k-graphs

_PAIR = re.compile(r"^\(\s*(\d+)\s*,\s*(\d+)\s*\)$")


def kgraph_from_json(doc: Any, path: str = "") -> FiniteKGraph:
    k = _get(doc, "k", path, int)
    verts = _get(doc, "vertices", path, list)
    vidx = {v: i for i, v in enumerate(verts)}
    if len(vidx) != len(verts):
        raise SchemaError(f"{path}.vertices".lstrip("."), "vertex ids must be distinct")
    edges = _get(doc, "edges", path, dict)
    eidx, colors, srcs, dsts, labels = {}, [], [], [], []
    for color_key in sorted(edges, key=lambda s: int(s) if str(s).isdigit() else 0):
        cp = f"{path}.edges.{color_key}".lstrip(".")
        if not str(color_key).isdigit() or not 1 <= int(color_key) <= k:
            raise SchemaError(cp, f"colour must be an integer in 1..{k}")
        rows = edges[color_key]
        if not isinstance(rows, list):
            raise SchemaError(cp, "expected a list of edges")
        for i, e in enumerate(rows):
            p = f"{cp}[{i}]"
            eid = _get(e, "id", p)
            if eid in eidx:
                raise SchemaError(f"{p}.id", f"duplicate edge id {eid!r}")
            eidx[eid] = len(colors)
            colors.append(int(color_key) - 1)
            srcs.append(_index(vidx, _get(e, "src", p), f"{p}.src"))
            dsts.append(_index(vidx, _get(e, "dst", p), f"{p}.dst"))
            labels.append(eid)
    fac: dict = {}
    for key, rows in _get(doc, "factorize", path, dict, default={}).items():
        fp = f"{path}.factorize.{key}".lstrip(".")
        mt = _PAIR.match(str(key))
        if not mt:
            raise SchemaError(fp, "key must look like '(i,j)'")
        i, j = int(mt.group(1)) - 1, int(mt.group(2)) - 1
        if not 0 <= i < j < k:
            raise SchemaError(fp, f"need 1 <= i < j <= {k}")
        table = fac.setdefault((i, j), {})
        for r, row in enumerate(rows):
            p = f"{fp}[{r}]"
            if not isinstance(row, list) or len(row) != 4:
                raise SchemaError(p, "expected [e_i, e_j, e_j', e_i']")
            a, b, b2, a2 = (_index(eidx, v, f"{p}[{q}]") for q, v in enumerate(row))
            if (a, b) in table:
                raise SchemaError(p, "pair listed twice")
            table[(a, b)] = (b2, a2)
    return FiniteKGraph(k, len(verts), tuple(colors), tuple(srcs), tuple(dsts), fac,
                        edge_labels=tuple(labels), vertex_labels=tuple(verts),
                        name=str(doc.get("name", "")))


def kgraph_to_json(g: FiniteKGraph) -> dict:
    lab, vl = g.edge_labels, g.vertex_labels
    edges: dict = {}
    for e in range(g.n_edges):
        edges.setdefault(str(g.edge_color[e] + 1), []).append(
            {"id": lab[e], "src": vl[g.edge_src[e]], "dst": vl[g.edge_dst[e]]})
    fac = {f"({i + 1},{j + 1})": [[lab[a], lab[b], lab[b2], lab[a2]]
                                  for (a, b), (b2, a2) in sorted(t.items())]
           for (i, j), t in sorted(g.factorize.items())}
    return {"k": g.k, "vertices": list(vl), "edges": edges, "factorize": fac}


def _path_from_labels(g: FiniteKGraph, labels: Any, eidx: dict, vidx: dict, path: str):
    if isinstance(labels, list) and len(labels) == 1 and labels[0] in vidx and labels[0] not in eidx:
        return g.vertex(vidx[labels[0]])
    if not isinstance(labels, list) or not labels:
        raise SchemaError(path, "expected a non-empty list of edge ids (or [vertex])")
    try:
        return g.path([_index(eidx, v, f"{path}[{i}]") for i, v in enumerate(labels)])
    except SchemaError:
        raise
    except InputError as e:
        raise SchemaError(path, str(e)) from None


def kgraph_cocycle_from_json(doc: Any, g: FiniteKGraph, path: str = "cocycle") -> KGraphCocycle:
    if doc is None:
        return DegreeCocycle(g)
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    if "degree_theta" in doc:
        rows = doc["degree_theta"]
        if not isinstance(rows, list) or len(rows) != g.k or any(
                not isinstance(r, list) or len(r) != g.k for r in rows):
            raise SchemaError(f"{path}.degree_theta", f"expected a {g.k}x{g.k} matrix")
        return DegreeCocycle(g, tuple(tuple(_angle(v, f"{path}.degree_theta[{i}][{j}]")
                                            for j, v in enumerate(r)) for i, r in enumerate(rows)))
    if "table" in doc:
        eidx = {lab: i for i, lab in enumerate(g.edge_labels)}
        vidx = {lab: i for i, lab in enumerate(g.vertex_labels)}
        table = {}
        for i, row in enumerate(doc["table"]):
            p = f"{path}.table[{i}]"
            if not isinstance(row, list) or len(row) != 3:
                raise SchemaError(p, "expected [lambda, mu, 'p/q']")
            lam = _path_from_labels(g, row[0], eidx, vidx, f"{p}[0]")
            mu = _path_from_labels(g, row[1], eidx, vidx, f"{p}[1]")
            if lam.src != mu.rng:
                raise SchemaError(p, "pair is not composable")
            table[(lam, mu)] = _angle(row[2], f"{p}[2]")
        return TableCocycle(g, table)
    raise SchemaError(path, "expected 'degree_theta' or 'table'")
