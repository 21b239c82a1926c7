from fractions import Fraction

import numpy as np
import pytest

from fellkms.errors import DepthExceededError, InputError, PreconditionError
from fellkms.kgraph import (CoboundaryCocycle, DegreeCocycle, EventuallyPeriodicPath, KGraphCocycle,
                            PathGroupoidElement, TableCocycle, bouquet, cycle_graph,
                            disjoint_cover_check, fibonacci_graph, find_cycle, kms1_report,
                            minimal_witness, omega_c, partition_assign, periodicity_group,
                            rotation_cocycle, rotation_graph, rtilde_phase, sample_composable,
                            sigma_c, sigma_c_detail, single_vertex_2graph, validate_kgraph_cocycle)
from fellkms.kgraph.cocycle import default_basepoint, paths_up_to
from fellkms.kgraph.paths import random_arrow_from, random_ep_path
from fellkms.lattice import LatticeSubgroup, antisym_pairing

from kgraph_helpers import product_2graph

THIRD = Fraction(1, 3)


class EdgePairCocycle(KGraphCocycle):
    """Not a cocycle: 1/3 on pairs of single edges, 0 elsewhere."""

    def __init__(self, g):
        self.graph = g

    def angle(self, lam, mu):
        return THIRD if lam.length == 1 and mu.length == 1 else Fraction(0)


def potential(p):
    return Fraction(sum((i + 1) * (e + 2) ** 2 for i, e in enumerate(p.edges)) % 7, 7)


def test_degree_cocycles_validate():
    for g in [rotation_graph(), single_vertex_2graph(2, 3), product_2graph(cycle_graph(2), cycle_graph(3))]:
        assert validate_kgraph_cocycle(DegreeCocycle(g, ((0, "1/5"), ("2/3", "1/2")))) == []
        assert validate_kgraph_cocycle(CoboundaryCocycle(g, potential)) == []
    assert validate_kgraph_cocycle(EdgePairCocycle(rotation_graph()))


def test_table_cocycle_forcing():
    g = single_vertex_2graph(2, 2)
    ref = DegreeCocycle(g, ((0, 0), (THIRD, 0)))
    table = {(lam, e): ref.angle(lam, e) for lam in paths_up_to(g, 4) for e in g.enumerate_paths((1, 0)) +
             g.enumerate_paths((0, 1)) if not lam.is_vertex()}
    c = TableCocycle(g, table)
    for lam in paths_up_to(g, 2):
        for mu in paths_up_to(g, 2):
            assert c.angle(lam, mu) == ref.angle(lam, mu)
    sparse = TableCocycle(g, {})
    with pytest.raises(InputError):
        sparse.angle(g.path([0]), g.path([2]))


def test_minimal_witness_examples():
    g = cycle_graph(3)
    x = EventuallyPeriodicPath(g, g.vertex(1), find_cycle(g, 1))
    assert minimal_witness(x, (0,), x) == ((0,), (0,))
    cell = partition_assign(PathGroupoidElement.unit(x))
    assert cell.mu == cell.nu == g.vertex(1)
    cell = partition_assign(PathGroupoidElement.isotropy(x, (3,)))
    assert cell.mu == x.initial((3,)) and cell.mu.rng == cell.mu.src == 1 and cell.nu == g.vertex(1)
    a = PathGroupoidElement(x, (1,), x.shift((1,)), ((1,), (0,)))
    assert minimal_witness(a.x, a.l, a.y) == ((1,), (0,))


def test_depth_exceeded():
    g = bouquet(2)
    x = EventuallyPeriodicPath(g, g.path([0]), g.path([1]))
    y = EventuallyPeriodicPath(g, g.path([1]), g.path([1]))
    a = PathGroupoidElement(x, (0,), y, ((1,), (1,)))
    with pytest.raises(DepthExceededError):
        minimal_witness(a.x, a.l, a.y, depth=0)
    assert minimal_witness(a.x, a.l, a.y, depth=1) == ((1,), (1,))


def test_cells_disjoint():
    rng = np.random.default_rng(12)
    for g in [rotation_graph(), cycle_graph(3), bouquet(2), single_vertex_2graph(2, 3)]:
        els = [random_arrow_from(random_ep_path(g, rng), rng) for _ in range(30)]
        assert disjoint_cover_check(els).ok


GRAPHS = [rotation_graph(), single_vertex_2graph(2, 3), cycle_graph(3), bouquet(2), fibonacci_graph(),
          product_2graph(cycle_graph(2), cycle_graph(3))]


def _cocycles(g):
    out = [DegreeCocycle(g), CoboundaryCocycle(g, potential)]
    if g.k == 2:
        out.append(rotation_cocycle(g, THIRD))
    return out


def test_trivial_cocycle_gives_trivial_sigma():
    rng = np.random.default_rng(3)
    for g in GRAPHS:
        c = DegreeCocycle(g)
        for _ in range(20):
            a, b = sample_composable(g, rng)
            assert sigma_c(c, a, b).is_one


def test_sigma_cocycle_identity():
    rng = np.random.default_rng(4)
    for g in GRAPHS:
        for c in _cocycles(g):
            for _ in range(15):
                a, b, d = sample_composable(g, rng, length=3)
                lhs = sigma_c(c, a, b) * sigma_c(c, a * b, d)
                rhs = sigma_c(c, b, d) * sigma_c(c, a, b * d)
                assert lhs == rhs


def test_sigma_normalized():
    rng = np.random.default_rng(5)
    g = rotation_graph()
    c = rotation_cocycle(g, THIRD)
    for _ in range(10):
        a = random_arrow_from(random_ep_path(g, rng), rng)
        assert sigma_c(c, PathGroupoidElement.unit(a.x), a).is_one
        assert sigma_c(c, a, PathGroupoidElement.unit(a.y)).is_one


def test_rechoice_catches_non_cocycle():
    rng = np.random.default_rng(0)
    g = single_vertex_2graph(2, 3)
    c = EdgePairCocycle(g)
    raised = 0
    for _ in range(40):
        a, b = sample_composable(g, rng)
        try:
            sigma_c_detail(c, a, b, extra_refinements=3)
        except PreconditionError:
            raised += 1
    assert raised > 0


def test_sigma_needs_composable():
    g = bouquet(2)
    x = EventuallyPeriodicPath(g, g.vertex(0), g.path([0]))
    y = EventuallyPeriodicPath(g, g.vertex(0), g.path([1]))
    with pytest.raises(InputError):
        sigma_c(DegreeCocycle(g), PathGroupoidElement.unit(x), PathGroupoidElement.unit(y))


def test_omega_examples():
    g = rotation_graph()
    per = periodicity_group(g, 2)
    om = omega_c(rotation_cocycle(g, THIRD), per)
    assert om.per_basis == [(1, 0), (0, 1)]
    assert om.z_ambient == LatticeSubgroup.from_generators([[3, 0], [0, 3]], 2)
    for p in [(1, 0), (0, 1), (2, -1), (1, 1)]:
        for q in [(0, 1), (1, 0), (-1, 2)]:
            want = THIRD * (p[1] * q[0] - q[1] * p[0])
            assert antisym_pairing(om.bicharacter, p, q).angle == want % 1
    triv = omega_c(DegreeCocycle(g), per)
    assert triv.z_ambient == per.subgroup
    cob = omega_c(CoboundaryCocycle(g, potential), per)
    assert cob.z_ambient == per.subgroup
    c3 = cycle_graph(3)
    o3 = omega_c(DegreeCocycle(c3, (("1/4",),)), periodicity_group(c3, 6))
    assert o3.bicharacter.rank == 1 and o3.z_ambient == LatticeSubgroup.from_generators([[3]], 1)
    shift = omega_c(DegreeCocycle(bouquet(2)), periodicity_group(bouquet(2), 4))
    assert shift.bicharacter.rank == 0


def test_omega_independent_of_basepoint():
    rng = np.random.default_rng(6)
    g = single_vertex_2graph(1, 2)
    c = DegreeCocycle(g, ((0, 0), (Fraction(1, 4), 0)))
    per = periodicity_group(g, 2)
    for _ in range(5):
        assert omega_c(c, per, default_basepoint(g), random_ep_path(g, rng)).certificate_ok


def test_rtilde_examples():
    rng = np.random.default_rng(7)
    g = rotation_graph()
    c = rotation_cocycle(g, THIRD)
    x = default_basepoint(g)
    for p in [(3, 0), (0, 3), (1, 2)]:
        assert rtilde_phase(c, PathGroupoidElement.unit(x), p).is_one
        assert rtilde_phase(DegreeCocycle(g), random_arrow_from(x, rng), p).is_one
    # single-vertex model: the phase is omega omega^*(l, p) = theta (l_2 p_1 - l_1 p_2)
    for l in [(1, 0), (0, 1), (2, -1), (-1, -1)]:
        eta = PathGroupoidElement.isotropy(x, l)
        for p in [(1, 0), (0, 1), (3, 3), (2, 1)]:
            assert rtilde_phase(c, eta, p).angle == (THIRD * (l[1] * p[0] - l[0] * p[1])) % 1


def test_rtilde_multiplicative_in_p():
    rng = np.random.default_rng(8)
    g = product_2graph(cycle_graph(2), cycle_graph(3))
    c = DegreeCocycle(g, ((0, 0), (Fraction(1, 2), 0)))
    for _ in range(5):
        eta = random_arrow_from(random_ep_path(g, rng), rng)
        a, b = rtilde_phase(c, eta, (2, 0)), rtilde_phase(c, eta, (0, 3))
        assert a * b == rtilde_phase(c, eta, (2, 3))


def _cylinders(rep):
    return {(tuple(r["lambda"]), tuple(r["lambda_degree"]), tuple(r["mu"]), tuple(r["mu_degree"])): r
            for r in rep["haar_trace_cylinders"]}


def test_kms1_examples():
    g = cycle_graph(2)
    rep = kms1_report(g, DegreeCocycle(g), samples=20)
    cyl = _cylinders(rep)
    assert abs(cyl[((0,), (1,), (0,), (1,))]["value"] - 0.5) < 1e-12
    assert abs(cyl[((0,), (0,), (0,), (0,))]["value"] - 0.5) < 1e-12
    assert rep["haar_trace_cylinder_defect"] < 1e-12
    g = rotation_graph()
    rep = kms1_report(g, rotation_cocycle(g, THIRD), samples=20)
    assert rep["omega_c"]["z_omega"]["basis"] == [[3, 0], [0, 3]]
    assert _cylinders(rep)[((0,), (0, 0), (0,), (0, 0))]["value"] == 1.0
    assert rep["states"][0]["name"] == "haar"
    shift = kms1_report(bouquet(2), DegreeCocycle(bouquet(2)), samples=20)
    assert [s["name"] for s in shift["states"]] == ["haar"]
    for r in shift["haar_trace_cylinders"]:
        if r["lambda"] == r["mu"] and r["lambda_degree"] == r["mu_degree"]:
            assert abs(r["value"] - 2.0 ** -r["lambda_degree"][0]) < 1e-12
        else:
            assert r["value"] == 0.0
