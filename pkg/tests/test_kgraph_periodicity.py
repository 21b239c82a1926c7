import numpy as np

from fellkms.kgraph import (bouquet, cycle_graph, periodicity_group, random_ep_path, rotation_graph,
                            single_vertex_2graph, window_criterion)
from fellkms.lattice import LatticeSubgroup

from kgraph_helpers import product_2graph


def test_examples():
    assert periodicity_group(cycle_graph(3), 4).subgroup == LatticeSubgroup.from_generators([[3]], 1)
    assert periodicity_group(bouquet(2), 4).subgroup.rank == 0
    assert periodicity_group(rotation_graph(), 2).subgroup == LatticeSubgroup.full(2)
    assert periodicity_group(single_vertex_2graph(2, 3), 2).subgroup.rank == 0


def test_product_graph():
    g = product_2graph(cycle_graph(2), cycle_graph(3))
    per = periodicity_group(g, 6)
    assert per.subgroup == LatticeSubgroup.from_generators([[2, 0], [0, 3]], 2)


def test_single_colour_loop_is_a_period():
    # one colour-0 loop commuting with every colour-1 loop: shifting along colour 0 is trivial
    g = single_vertex_2graph(1, 2)
    assert periodicity_group(g, 2).subgroup == LatticeSubgroup.from_generators([[1, 0]], 2)


def test_counterexamples_genuine():
    g = cycle_graph(3)
    for p in [(1,), (2,), (4,)]:
        v = window_criterion(g, p)
        assert not v.periodic
        lam = g.path(v.counterexample)
        m, n = max(p[0], 0), max(-p[0], 0)
        assert g.window(lam, (m,), (m + 1,)) != g.window(lam, (n,), (n + 1,))


def test_certified_periods_hold_on_paths():
    rng = np.random.default_rng(8)
    for g, box in [(cycle_graph(4), 8), (rotation_graph(), 2), (product_2graph(cycle_graph(2), cycle_graph(3)), 6)]:
        per = periodicity_group(g, box)
        for p in per.certified[:12]:
            m = tuple(max(v, 0) for v in p)
            n = tuple(max(-v, 0) for v in p)
            for _ in range(5):
                x = random_ep_path(g, rng)
                assert x.shift(m) == x.shift(n)
        js = per.to_json()
        assert "within" in js["scope"]
