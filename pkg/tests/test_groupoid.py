import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fellkms.errors import InputError
from fellkms.groupoid import (FiniteGroupoid, OneCocycle, TwoCocycle, abelian_group_table,
                              action_groupoid, coboundary, cyclic_group_table, disjoint_union,
                              group_as_groupoid, isotropy, pair_groupoid, product_groupoid,
                              validate_groupoid, validate_one_cocycle, validate_two_cocycle)
from fellkms.testing import s3_table


def pauli_group():
    return group_as_groupoid(abelian_group_table((2, 2)))


def pauli_cocycle(g):
    el = list(itertools.product(range(2), range(2)))
    return TwoCocycle.from_function(g, lambda a, b: Fraction(el[a][1] * el[b][0], 2))


def test_pair_groupoid_shape_and_valid():
    g = pair_groupoid(2)
    assert (g.n_units, g.n_arrows) == (2, 4)
    assert validate_groupoid(g) == []


def test_group_valid():
    g = group_as_groupoid(cyclic_group_table(3))
    assert (g.n_units, g.n_arrows) == (1, 3)
    assert validate_groupoid(g) == []


def test_broken_inverse_named():
    g = pair_groupoid(2)
    inv = g.inv.copy()
    inv[1], inv[2] = 1, 2
    bad = FiniteGroupoid(g.n_units, g.src, g.dst, g.compose_table, inv, g.unit_arrow)
    issues = validate_groupoid(bad)
    assert issues and all("inv" in s for s in issues)


def test_broken_associativity_named():
    g = group_as_groupoid(cyclic_group_table(3))
    T = g.compose_table.copy()
    T[1, 1], T[1, 2] = 0, 2  # breaks associativity and the inverse law
    issues = validate_groupoid(FiniteGroupoid(1, g.src, g.dst, T, g.inv, g.unit_arrow))
    assert issues


def test_isotropy_examples():
    g = pair_groupoid(2)
    iso = isotropy(g, 0)
    assert iso.arrows == (int(g.unit_arrow[0]),) and iso.abelian
    z3 = group_as_groupoid(cyclic_group_table(3))
    assert len(isotropy(z3, 0).arrows) == 3
    trivial_action = action_groupoid(cyclic_group_table(2), [[0, 1], [0, 1]])
    assert [len(isotropy(trivial_action, x).arrows) for x in range(2)] == [2, 2]
    assert not isotropy(group_as_groupoid(s3_table()), 0).abelian
    with pytest.raises(InputError):
        isotropy(g, 5)


def test_swap_action_groupoid():
    g = action_groupoid(cyclic_group_table(2), [[0, 1], [1, 0]])
    assert (g.n_units, g.n_arrows) == (2, 4)
    assert validate_groupoid(g) == []
    assert all(len(isotropy(g, x).arrows) == 1 for x in range(2))


def test_builders_valid():
    parts = [pair_groupoid(3), group_as_groupoid(s3_table()),
             action_groupoid(cyclic_group_table(4), [[(x + s) % 4 for x in range(4)] for s in range(4)]),
             product_groupoid(pair_groupoid(2), group_as_groupoid(cyclic_group_table(2)))]
    for g in parts + [disjoint_union(*parts)]:
        assert validate_groupoid(g) == [], g.name


def test_bad_group_tables():
    with pytest.raises(InputError):
        group_as_groupoid([[0, 1], [0, 1]])
    with pytest.raises(InputError):
        action_groupoid(cyclic_group_table(2), [[1, 0], [0, 1]])


def test_trivial_and_pauli_cocycles_valid():
    g = pauli_group()
    assert validate_two_cocycle(TwoCocycle.trivial(g)) == []
    assert validate_two_cocycle(pauli_cocycle(g)) == []


def test_normalization_violation_reported():
    g = group_as_groupoid(cyclic_group_table(2))
    sigma = TwoCocycle(g, {(0, 0): 0, (0, 1): Fraction(1, 2), (1, 0): 0, (1, 1): 0})
    assert any("normalization" in s for s in validate_two_cocycle(sigma))


def test_identity_violation_reported():
    g = group_as_groupoid(cyclic_group_table(3))
    sigma = TwoCocycle(g, {(a, b): (Fraction(1, 3) if (a, b) == (1, 1) else 0)
                           for a in range(3) for b in range(3)})
    assert any("identity" in s for s in validate_two_cocycle(sigma))


def test_missing_pair_is_input_error():
    g = group_as_groupoid(cyclic_group_table(2))
    with pytest.raises(InputError):
        validate_two_cocycle(TwoCocycle(g, {(0, 0): 0}))


def test_coboundary_examples():
    g = group_as_groupoid(cyclic_group_table(4))
    assert all(v == 0 for v in coboundary(g, [0, 0, 0, 0]).angles.values())
    sigma = coboundary(g, [Fraction(n * n, 8) for n in range(4)])
    assert validate_two_cocycle(sigma) == []
    # direct evaluation: b(1) b(1) / b(2) = 1/8 + 1/8 - 4/8
    assert sigma.angle(1, 1) == Fraction(3, 4)
    with pytest.raises(InputError):
        coboundary(g, [Fraction(1, 2), 0, 0, 0])


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=0, max_value=1, max_denominator=12), min_size=9, max_size=9))
def test_random_coboundary_on_pair_groupoid(vals):
    g = pair_groupoid(3)
    vals = [Fraction(0) if a in set(g.unit_arrow.tolist()) else v for a, v in enumerate(vals)]
    assert validate_two_cocycle(coboundary(g, vals)) == []


def test_one_cocycle_validation():
    z2 = group_as_groupoid(cyclic_group_table(2))
    assert validate_one_cocycle(OneCocycle(z2, [0.0, 0.7]))
    g = pair_groupoid(3)
    D = OneCocycle.from_potential(g, [0.1, -0.4, 2.0])
    assert validate_one_cocycle(D) == []
    assert validate_one_cocycle(OneCocycle(g, np.ones(9)))


def test_cocycle_product_and_phase_matrix():
    g = pauli_group()
    s = pauli_cocycle(g)
    sq = s * s
    assert all(v == 0 for v in sq.angles.values())
    M = s.phase_matrix
    assert M.shape == (4, 4) and M[1, 2] == -1 and M[2, 1] == 1
