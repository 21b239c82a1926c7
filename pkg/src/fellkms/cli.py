"""Command-line front end: ``fellkms <group> <action> --input FILE``.

Exit codes: 0 success, 1 malformed input, 2 validation failure, 3 depth exceeded.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import tempfile
from dataclasses import asdict, dataclass
from fractions import Fraction
from typing import Any, Callable

import numpy as np

from . import __version__
from .algebra import LinearFunctional, kms_defect, positivity_check, trace_space
from .errors import DepthExceededError, InputError, NotAStateError, PreconditionError
from .groupoid import (OneCocycle, TwoCocycle, isotropy, validate_groupoid, validate_one_cocycle,
                       validate_two_cocycle)
from .io import (bicharacter_from_json, functional_to_json, groupoid_problem_from_json,
                 kgraph_cocycle_from_json, kgraph_from_json, load_file)
from .kgraph import (additivity_certificate, adjacency_spectra, kms1_report, measure_table,
                     omega_c, periodicity_group, preferred_cocycle, random_ep_path, validate_kgraph)
from .kgraph.cocycle import default_basepoint
from .kgraph.periodicity import default_box
from .lattice import lattice_trace_from_character, z_omega
from .measures import quasi_invariance_residual, quasi_invariant_extremes
from .states import check_condition_II, extract_pair, kms_simplex
from .traces import extreme_traces

EXIT_OK, EXIT_INPUT, EXIT_INVALID, EXIT_DEPTH = 0, 1, 2, 3


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str
    tol: float = 1e-9
    box: int | None = None
    depth: int = 6
    seed: int = 0
    samples: int = 100
    beta: float | None = None
    out: str | None = None
    format: str = "json"


class ValidationFailed(Exception):
    def __init__(self, result: dict):
        super().__init__("validation failed")
        self.result = result


def _jsonable(obj: Any):
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _dump(doc: Any) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, default=_jsonable) + "\n"


def config_hash(cfg: RunConfig) -> str:
    with open(cfg.input, "rb") as fh:
        data = hashlib.sha256(fh.read()).hexdigest()
    keyed = {k: v for k, v in asdict(cfg).items() if k not in ("input", "out", "format")}
    keyed["input_sha256"] = data
    return hashlib.sha256(json.dumps(keyed, sort_keys=True).encode()).hexdigest()


# ------------------------------------------------------------- groupoid side

def _problem(cfg: RunConfig) -> dict:
    prob = groupoid_problem_from_json(load_file(cfg.input))
    g = prob["groupoid"]
    issues = validate_groupoid(g)
    if issues:
        raise ValidationFailed({"valid": False, "violations": issues})
    if prob["sigma"] is None:
        prob["sigma"] = TwoCocycle.trivial(g)
    if prob["D"] is None:
        prob["D"] = OneCocycle.zero(g)
    if cfg.beta is not None:
        prob["beta"] = cfg.beta
    return prob


def _check_cocycles(prob: dict, tol: float) -> None:
    try:
        issues = validate_two_cocycle(prob["sigma"])
    except InputError as e:
        issues = [str(e)]
    issues += validate_one_cocycle(prob["D"], tol)
    if issues:
        raise ValidationFailed({"valid": False, "violations": issues})


def cmd_groupoid_validate(cfg: RunConfig) -> dict:
    prob = groupoid_problem_from_json(load_file(cfg.input))
    g = prob["groupoid"]
    issues = validate_groupoid(g)
    res = {"valid": not issues, "violations": issues, "units": g.n_units, "arrows": g.n_arrows}
    if issues:
        raise ValidationFailed(res)
    return res


def cmd_cocycle_validate(cfg: RunConfig) -> dict:
    doc = load_file(cfg.input)
    prob = _problem(cfg)
    if isinstance(doc, dict) and "two_cocycle" not in doc and "one_cocycle" not in doc:
        raise InputError("field 'two_cocycle': required (or 'one_cocycle')")
    _check_cocycles(prob, cfg.tol)
    return {"valid": True, "violations": []}


def _labels_state(g, st) -> dict:
    ul, al = g.unit_labels, g.arrow_labels
    return {
        "measure": [[ul[x], w] for x, w in st.measure.to_json()],
        "field": [[ul[x], [[al[u], re, im] for u, re, im in vals]] for x, vals in st.field.to_json()],
        "functional": functional_to_json(st.functional),
        "kms_defect": st.kms_defect,
        "min_eigenvalue": st.min_eigenvalue,
        "exact_trace": st.exact,
    }


def _require_beta(prob: dict) -> float:
    if prob["beta"] is None:
        raise InputError("field 'beta': required (or pass --beta)")
    return float(prob["beta"])


def cmd_kms_simplex(cfg: RunConfig) -> dict:
    prob = _problem(cfg)
    _check_cocycles(prob, cfg.tol)
    g, sigma, D = prob["groupoid"], prob["sigma"], prob["D"]
    beta = _require_beta(prob)
    verdicts = quasi_invariant_extremes(g, D, beta, cfg.tol).verdicts
    states = kms_simplex(g, sigma, D, beta, cfg.tol)
    res = {"beta": beta,
           "orbits": [{"orbit_base": g.unit_labels[v.orbit_base], "admissible": v.admissible,
                       "measure": None if v.measure is None else
                       [[g.unit_labels[x], w] for x, w in v.measure.to_json()]} for v in verdicts],
           "states": [_labels_state(g, st) for st in states]}
    bad = [i for i, st in enumerate(states)
           if st.kms_defect > cfg.tol or st.min_eigenvalue < -cfg.tol]
    if bad:
        res["failed_states"] = bad
        raise ValidationFailed(res)
    return res


def cmd_kms_verify(cfg: RunConfig) -> dict:
    prob = _problem(cfg)
    _check_cocycles(prob, cfg.tol)
    g, sigma, D, psi = prob["groupoid"], prob["sigma"], prob["D"], prob["functional"]
    if psi is None:
        raise InputError("field 'functional': required")
    beta = _require_beta(prob)
    kd = kms_defect(psi, sigma, D, beta)
    pos = positivity_check(psi, sigma, cfg.tol)
    res: dict = {"beta": beta, "kms_defect": kd.to_json(),
                 "positivity": {"min_eigenvalue": pos.min_eigenvalue,
                                "hermitian_defect": pos.hermitian_defect,
                                "normalization": pos.normalization}}
    ok = kd.max_defect <= cfg.tol and pos.is_positive and abs(pos.normalization - 1) <= cfg.tol
    try:
        pair = extract_pair(psi, norm_tol=cfg.tol)
        c2 = check_condition_II(pair.field, pair.measure, sigma, cfg.tol)
        qi = quasi_invariance_residual(pair.measure, D, beta)
        res["extraction"] = {"measure": [[g.unit_labels[x], w] for x, w in pair.measure.to_json()],
                             "roundtrip_defect": pair.roundtrip_defect,
                             "quasi_invariance_residual": qi,
                             "condition_II_violation": c2.max_violation}
        ok = ok and pair.roundtrip_defect <= cfg.tol and c2.ok and qi <= cfg.tol
    except NotAStateError as e:
        res["extraction"] = {"error": str(e)}
        ok = False
    res["is_kms_state"] = ok
    if not ok:
        raise ValidationFailed(res)
    return res


def cmd_trace_space(cfg: RunConfig) -> dict:
    prob = _problem(cfg)
    _check_cocycles(prob, cfg.tol)
    g, sigma = prob["groupoid"], prob["sigma"]
    ts = trace_space(g, sigma)
    iso = isotropy(g, 0)
    ext = extreme_traces(g, sigma, iso.arrows, iso.abelian)
    al = g.arrow_labels
    vertices = []
    for tr in ext:
        psi = LinearFunctional(g, np.array([tr.values.get(a, 0) for a in g.arrows], dtype=complex))
        vertices.append({"values": functional_to_json(psi),
                         "angles": None if tr.angles is None else
                         [[al[u], a] for u, a in sorted(tr.angles.items())],
                         "in_trace_space": ts.contains(psi, 1e-8),
                         "min_eigenvalue": positivity_check(psi, sigma, cfg.tol).min_eigenvalue})
    return {"dimension": ts.dimension, "abelian": iso.abelian, "exact": iso.abelian,
            "vertex_count": len(vertices), "vertices": vertices}


# -------------------------------------------------------------- lattice side

def cmd_lattice_zomega(cfg: RunConfig) -> dict:
    doc = load_file(cfg.input)
    om = bicharacter_from_json(doc.get("bicharacter", doc) if isinstance(doc, dict) else doc)
    Z = z_omega(om)
    return {"omega": om.to_json(), "z_omega": Z.to_json(), "index": Z.index}


def cmd_lattice_trace(cfg: RunConfig) -> dict:
    doc = load_file(cfg.input)
    om = bicharacter_from_json(doc.get("bicharacter", doc) if isinstance(doc, dict) else doc)
    Z = z_omega(om)
    chi = doc.get("character", [0] * Z.rank) if isinstance(doc, dict) else [0] * Z.rank
    tr = lattice_trace_from_character(chi, om, Z)
    radius = cfg.box if cfg.box is not None else 2 * om.denominator
    cert = tr.certify(radius)
    res = {"omega": om.to_json(), "z_omega": Z.to_json(), "certificate": cert.to_json()}
    if not cert.ok:
        raise ValidationFailed(res)
    return res


# --------------------------------------------------------------- k-graph side

def _kgraph(cfg: RunConfig):
    doc = load_file(cfg.input)
    g = kgraph_from_json(doc.get("kgraph", doc) if isinstance(doc, dict) else doc)
    issues = validate_kgraph(g)
    if issues:
        raise ValidationFailed({"valid": False, "violations": issues})
    c = kgraph_cocycle_from_json(doc.get("cocycle") if isinstance(doc, dict) else None, g)
    return g, c


def cmd_kgraph_validate(cfg: RunConfig) -> dict:
    g, _ = _kgraph(cfg)
    return {"valid": True, "violations": [], "k": g.k, "vertices": g.n_vertices, "edges": g.n_edges}


def cmd_kgraph_per(cfg: RunConfig) -> dict:
    g, _ = _kgraph(cfg)
    return periodicity_group(g, cfg.box).to_json(verbose=True)


def cmd_kgraph_spectra(cfg: RunConfig) -> dict:
    g, _ = _kgraph(cfg)
    s = adjacency_spectra(g)
    return {**s.to_json(), "preferred_log_radii": list(preferred_cocycle(g, s).log_radii)}


def cmd_kgraph_measure(cfg: RunConfig) -> dict:
    g, _ = _kgraph(cfg)
    s = adjacency_spectra(g)
    box = default_box(g) if cfg.box is None else cfg.box
    table = measure_table(g, s, box)
    cert = additivity_certificate(g, [p for p, _ in table], s)
    res = {"box": box, "table": [{"path": g.label(p), "degree": list(p.degree), "mass": m}
                                 for p, m in table],
           "additivity": {"max_residual": cert.max_residual, "vertex_total": cert.vertex_total,
                          "ok": cert.ok}}
    if not cert.ok:
        raise ValidationFailed(res)
    return res


def cmd_kgraph_omega(cfg: RunConfig) -> dict:
    g, c = _kgraph(cfg)
    per = periodicity_group(g, cfg.box)
    rng = np.random.default_rng(cfg.seed)
    om = omega_c(c, per, default_basepoint(g), random_ep_path(g, rng), cfg.depth)
    res = {"per": per.to_json(), **om.to_json()}
    if not om.certificate_ok:
        raise ValidationFailed(res)
    return res


def cmd_kgraph_kms1(cfg: RunConfig) -> dict:
    g, c = _kgraph(cfg)
    return kms1_report(g, c, cfg.box, cfg.depth, cfg.seed, cfg.samples)


COMMANDS: dict[str, dict[str, Callable[[RunConfig], dict]]] = {
    "groupoid": {"validate": cmd_groupoid_validate},
    "cocycle": {"validate": cmd_cocycle_validate},
    "kms": {"simplex": cmd_kms_simplex, "verify": cmd_kms_verify},
    "trace": {"space": cmd_trace_space},
    "lattice": {"zomega": cmd_lattice_zomega, "trace": cmd_lattice_trace},
    "kgraph": {"validate": cmd_kgraph_validate, "per": cmd_kgraph_per,
               "spectra": cmd_kgraph_spectra, "measure": cmd_kgraph_measure,
               "omega": cmd_kgraph_omega, "kms1": cmd_kgraph_kms1},
}


def _render_table(report: dict) -> str:
    lines = []
    for key in ("command", "status", "version", "config_hash"):
        lines.append(f"{key:12s} {report[key]}")
    for key, val in sorted(report.get("result", {}).items()):
        text = json.dumps(val, sort_keys=True, default=_jsonable)
        lines.append(f"{key:12s} {text if len(text) <= 100 else text[:97] + '...'}")
    return "\n".join(lines) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    d = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".fellkms-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def run(cfg: RunConfig) -> tuple[int, dict | None]:
    """Execute one command; returns the exit status and the report (``None`` on bad input)."""
    group, _, action = cfg.command.partition(" ")
    fn = COMMANDS[group][action]
    status, code, result = "ok", EXIT_OK, None
    try:
        result = fn(cfg)
    except ValidationFailed as e:
        status, code, result = "validation-failed", EXIT_INVALID, e.result
    except DepthExceededError as e:
        status, code, result = "depth-exceeded", EXIT_DEPTH, {"error": str(e)}
    except PreconditionError as e:
        status, code, result = "validation-failed", EXIT_INVALID, {"error": str(e)}
    except InputError as e:
        return EXIT_INPUT, {"error": str(e)}
    report = {"tool": "fellkms", "version": __version__, "command": cfg.command,
              "config": {k: v for k, v in asdict(cfg).items() if k not in ("out",)},
              "config_hash": config_hash(cfg), "status": status, "result": result}
    return code, report


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fellkms", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"fellkms {__version__}")
    groups = p.add_subparsers(dest="group", required=True)
    for group, actions in COMMANDS.items():
        gp = groups.add_parser(group)
        sub = gp.add_subparsers(dest="action", required=True)
        for action in actions:
            ap = sub.add_parser(action)
            ap.add_argument("--input", required=True, help="input JSON file")
            ap.add_argument("--out", help="write the report here (atomically) instead of stdout")
            ap.add_argument("--tol", type=float, default=1e-9)
            ap.add_argument("--box", type=int, default=None, help="box radius / degree bound")
            ap.add_argument("--depth", type=int, default=6, help="witness search depth")
            ap.add_argument("--seed", type=int, default=0)
            ap.add_argument("--samples", type=int, default=100)
            ap.add_argument("--beta", type=float, default=None, help="overrides 'beta' in the input")
            ap.add_argument("--format", choices=("json", "table"), default="json")
    return p


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        # argparse uses 2 for usage errors, which here means a failed validation
        return EXIT_INPUT if e.code == 2 else int(e.code or 0)
    cfg = RunConfig(command=f"{args.group} {args.action}", input=args.input, tol=args.tol,
                    box=args.box, depth=args.depth, seed=args.seed, samples=args.samples,
                    beta=args.beta, out=args.out, format=args.format)
    code, report = run(cfg)
    if code == EXIT_INPUT:
        sys.stderr.write(f"fellkms: error: {report['error']}\n")
        return code
    text = _render_table(report) if cfg.format == "table" else _dump(report)
    _write(text, cfg.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
