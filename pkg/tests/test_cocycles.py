import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rackforge.cocycles import (
    CocycleError,
    GaugeMap,
    ScalarCocycle,
    are_gauge_equivalent,
    chi_cocycle,
    cocycle_space,
    diagonal_braiding,
    dual_cocycle,
    gauge_transform,
    h2_order_mod_p,
    has_constant_diagonal,
    is_cocycle,
    is_faithful,
    representatives_mod_p,
    sign_section_cocycle_S4,
    transposition_rack,
    twist,
    twist_condition,
)
from rackforge.homology import h2_dual, rack_homology
from rackforge.perms import Permutation, alternating_group, symmetric_group
from rackforge.racks import affine, dihedral, from_conjugacy_class, power_rack, trivial_rack

O42 = transposition_rack(4)


def test_constant_cocycles():
    for X in (dihedral(3), O42, affine(5, 2)):
        q = ScalarCocycle.constant(X, 2)
        assert is_cocycle(q) == (True, None)
        assert has_constant_diagonal(q)


def test_non_cocycle_detected():
    X = dihedral(3)
    e = np.zeros((3, 3), dtype=np.int64)
    e[0, 1] = 1
    ok, wit = is_cocycle(ScalarCocycle(X, 2, e))
    assert not ok and len(wit) == 3


def test_chi_is_cocycle_and_not_constant():
    chi = chi_cocycle(4)
    assert is_cocycle(chi)[0]
    assert has_constant_diagonal(chi)
    assert are_gauge_equivalent(chi, ScalarCocycle.constant(O42, 2)) is None
    assert is_faithful(chi)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=6, max_size=6))
def test_gauge_preserves_law_and_is_detected(gamma):
    q = chi_cocycle(4)
    q6 = ScalarCocycle(O42, 6, q.exponents * 3)
    g = GaugeMap(6, tuple(gamma))
    q2 = gauge_transform(q6, g)
    assert is_cocycle(q2)[0]
    found = are_gauge_equivalent(q6, q2)
    assert found is not None and gauge_transform(q6, found).same(q2)


def test_twist_identity_and_constant():
    q = ScalarCocycle.constant(O42, 2)
    assert twist(q, np.zeros((6, 6), dtype=np.int64)).same(q)
    assert twist(q, np.ones((6, 6), dtype=np.int64), 2).same(q)


def test_sign_section_twist():
    X, phi = sign_section_cocycle_S4()
    assert twist_condition(X, phi, 2) == (True, None)
    assert phi.any()
    q = ScalarCocycle.constant(X, 2)
    qt = twist(q, phi, 2)
    assert is_cocycle(qt)[0]


def test_twist_condition_violation():
    X = O42
    phi = np.zeros((6, 6), dtype=np.int64)
    phi[0, 1] = 1
    ok, wit = twist_condition(X, phi, 2)
    assert not ok
    with pytest.raises(CocycleError):
        twist(ScalarCocycle.constant(X, 2), phi, 2)


def test_dual_round_trip():
    X = affine(5, 2)
    q = ScalarCocycle.constant(X, 2)
    Xd, qd = dual_cocycle(X, q)
    assert Xd.same_table(power_rack(X, -1))
    assert is_cocycle(qd)[0]
    Xdd, qdd = dual_cocycle(Xd, qd)
    assert Xdd.same_table(X) and qdd.same(ScalarCocycle(Xdd, 2, q.exponents))


def test_diagonal_braiding():
    q = ScalarCocycle.constant(O42, 2)
    labels = O42.labels
    S = [labels.index("(0 1)"), labels.index("(2 3)")]
    assert diagonal_braiding(O42, q, S).tolist() == [[1, 1], [1, 1]]
    with pytest.raises(CocycleError):
        diagonal_braiding(O42, q, [labels.index("(0 1)"), labels.index("(1 2)")])


@pytest.mark.parametrize("X", [dihedral(3), O42, affine(5, 2),
                               from_conjugacy_class(symmetric_group(5), Permutation.from_cycles("(0 1)(2 3 4)", 5))])
@pytest.mark.parametrize("m", [2, 3, 4, 6])
def test_cocycle_space_matches_homology(X, m):
    H = rack_homology(X, 2)
    S = cocycle_space(X, m)
    assert S.H2.order == h2_dual(H, m).order
    assert S.Z2.order == S.H2.order * S.B2.order


@pytest.mark.parametrize("p", [2, 3, 5])
def test_mod_p_routes_agree(p):
    X = from_conjugacy_class(alternating_group(5), Permutation.from_cycles("(0 1 2)", 5))
    assert h2_order_mod_p(X, p) == cocycle_space(X, p).H2.order
    reps = representatives_mod_p(X, p)
    assert p ** len(reps) == h2_order_mod_p(X, p)
    assert all(is_cocycle(q)[0] for q in reps)


def test_trivial_rack_cohomology():
    # every function is a cocycle and only constants on orbits are killed
    S = cocycle_space(trivial_rack(2), 2)
    assert S.Z2.order == 16 and S.B2.order == 1
