import copy
import json
from fractions import Fraction

import numpy as np
import pytest

from fellkms.errors import InputError
from fellkms.groupoid import pair_groupoid
from fellkms.io import (SchemaError, bicharacter_from_json, groupoid_from_json, groupoid_problem_from_json,
                        groupoid_to_json, kgraph_cocycle_from_json, kgraph_from_json, kgraph_to_json,
                        load_file, loads, two_cocycle_to_json)
from fellkms.kgraph import DegreeCocycle, TableCocycle, rotation_graph, single_vertex_2graph

from conftest import FIXTURES
from test_groupoid import pauli_cocycle, pauli_group


def _same_groupoid(a, b):
    assert a.n_units == b.n_units
    for attr in ("src", "dst", "compose_table", "inv", "unit_arrow"):
        assert np.array_equal(getattr(a, attr), getattr(b, attr))


def test_groupoid_round_trip():
    for g in [pair_groupoid(3), pauli_group()]:
        doc = json.loads(json.dumps(groupoid_to_json(g)))
        _same_groupoid(g, groupoid_from_json(doc))


def test_problem_fixture():
    prob = groupoid_problem_from_json(load_file(FIXTURES / "pair2_ln2.json"))
    g = prob["groupoid"]
    assert g.n_units == 2 and g.n_arrows == 4
    assert prob["beta"] == 1.0 and prob["sigma"] is None
    assert abs(prob["D"].values[g.arrow_labels.index("a")] - np.log(2)) < 1e-15


def test_cocycle_serialization():
    g = pauli_group()
    rows = two_cocycle_to_json(pauli_cocycle(g))
    assert all(isinstance(r[2], str) for r in rows)
    doc = {"groupoid": groupoid_to_json(g), "two_cocycle": rows}
    back = groupoid_problem_from_json(json.loads(json.dumps(doc)))["sigma"]
    want = pauli_cocycle(g)
    n = g.n_arrows
    assert all(back.angle(a, b) == want.angle(a, b) for a in range(n) for b in range(n))


def test_json_syntax_error_location():
    with pytest.raises(InputError, match="line 2 column"):
        loads('{"a": 1,\n  oops}')


def test_missing_file():
    with pytest.raises(InputError, match="cannot read"):
        load_file(FIXTURES / "does_not_exist.json")


def test_schema_errors_name_field():
    doc = load_file(FIXTURES / "pair2_ln2.json")
    bad = copy.deepcopy(doc)
    del bad["groupoid"]["arrows"]
    with pytest.raises(SchemaError, match="arrows"):
        groupoid_problem_from_json(bad)
    bad = copy.deepcopy(doc)
    bad["groupoid"]["compose"][0] = ["ex", "ex"]
    with pytest.raises(SchemaError, match=r"compose\[0\]"):
        groupoid_problem_from_json(bad)
    bad = copy.deepcopy(doc)
    bad["groupoid"]["inv"][2] = ["a", "nope"]
    with pytest.raises(SchemaError, match="unknown id"):
        groupoid_problem_from_json(bad)
    bad = copy.deepcopy(doc)
    bad["beta"] = "one"
    with pytest.raises(SchemaError, match="beta"):
        groupoid_problem_from_json(bad)
    with pytest.raises(SchemaError):
        groupoid_problem_from_json([1, 2])


def test_angles_must_be_exact_strings():
    assert bicharacter_from_json({"rank": 2, "theta": [["0", "0"], ["1/3", "0"]]}).theta[1][0] == Fraction(1, 3)
    with pytest.raises(SchemaError, match="exact"):
        bicharacter_from_json({"rank": 2, "theta": [[0, 0], [0.333, 0]]})
    with pytest.raises(SchemaError, match="matrix"):
        bicharacter_from_json({"rank": 2, "theta": [["0", "0"]]})


def test_kgraph_round_trip():
    for g in [rotation_graph(), single_vertex_2graph(2, 3)]:
        back = kgraph_from_json(json.loads(json.dumps(kgraph_to_json(g))))
        assert (back.k, back.n_vertices, back.edge_color, back.edge_src, back.edge_dst) == \
            (g.k, g.n_vertices, g.edge_color, g.edge_src, g.edge_dst)
        assert {k: dict(v) for k, v in back.factorize.items()} == {k: dict(v) for k, v in g.factorize.items()}


def test_kgraph_schema_errors():
    doc = load_file(FIXTURES / "rotation_third.json")
    bad = copy.deepcopy(doc)
    bad["factorize"] = {"(2,1)": bad["factorize"]["(1,2)"]}
    with pytest.raises(SchemaError, match="1 <= i < j"):
        kgraph_from_json(bad)
    bad = copy.deepcopy(doc)
    bad["edges"]["3"] = bad["edges"].pop("2")
    with pytest.raises(SchemaError, match="colour"):
        kgraph_from_json(bad)


def test_kgraph_cocycle_forms():
    g = kgraph_from_json(load_file(FIXTURES / "rotation_third.json"))
    assert isinstance(kgraph_cocycle_from_json(None, g), DegreeCocycle)
    c = kgraph_cocycle_from_json({"degree_theta": [["0", "0"], ["1/3", "0"]]}, g)
    assert c.angle(g.path([1]), g.path([0])) == Fraction(1, 3)
    t = kgraph_cocycle_from_json({"table": [[["b"], ["a"], "1/3"], [["a"], ["b"], "0"]]}, g)
    assert isinstance(t, TableCocycle)
    assert t.angle(g.path([1]), g.path([0])) == Fraction(1, 3)
    with pytest.raises(SchemaError, match="degree_theta"):
        kgraph_cocycle_from_json({"degree_theta": [["0"]]}, g)
    with pytest.raises(SchemaError, match="expected 'degree_theta' or 'table'"):
        kgraph_cocycle_from_json({}, g)
    with pytest.raises(SchemaError, match="unknown id"):
        kgraph_cocycle_from_json({"table": [[["zz"], ["a"], "0"]]}, g)
