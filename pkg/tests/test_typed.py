import pytest

from rackforge.catalog import class_representatives, named_group, symmetric_sweep
from rackforge.perms import Permutation, alternating_group, generate, symmetric_group
from rackforge.racks import affine, dihedral, from_conjugacy_class, trivial_rack
from rackforge.typed import (
    Status,
    is_type_D_class,
    is_type_D_rack,
    is_type_M,
    jordan_criterion,
    quasi_real_types,
    subrack_lift_check,
    verify_class_witness,
    verify_rack_witness,
)

P = Permutation.from_cycles
S5 = symmetric_group(5)


@pytest.mark.parametrize("rep,expected", [
    ("(0 1 2 3)", Status.TYPE_D),
    ("(0 1)(2 3 4)", Status.NOT_TYPE_D),
    ("(0 1)", Status.NOT_TYPE_D),
    ("(0 1 2 3 4)", Status.TYPE_D),
])
def test_s5_classes(rep, expected):
    v = is_type_D_class(S5, P(rep, 5))
    assert v.status is expected
    if v.is_type_D:
        w = v.witness
        assert verify_class_witness(P(w["r_perm"], 5), P(w["s_perm"], 5))
        assert sum(w["orbit_sizes"]) == w["closure_size"]


def test_rack_and_class_scans_agree():
    for rep in ("(0 1 2 3)", "(0 1)(2 3 4)", "(0 1 2)"):
        x = P(rep, 5)
        X = from_conjugacy_class(S5, x)
        a, b = is_type_D_rack(X), is_type_D_class(S5, x)
        assert a.status is b.status
        if a.is_type_D:
            assert verify_rack_witness(X, a.witness["r"], a.witness["s"])


def test_small_racks_not_type_D():
    # the inequality needs r and s to fail to commute, impossible in a trivial rack
    for X in (trivial_rack(4), dihedral(3), affine(5, 2)):
        assert is_type_D_rack(X).status is Status.NOT_TYPE_D


def test_bad_witness_rejected():
    X = from_conjugacy_class(S5, P("(0 1 2 3)", 5))
    assert not verify_rack_witness(X, 0, 0)
    x = P("(0 1 2)", 5)
    assert not verify_class_witness(x, x)


def test_type_M_for_s5_class():
    assert is_type_M(from_conjugacy_class(S5, P("(0 1)(2 3 4)", 5)))
    with pytest.raises(ValueError):
        is_type_M(trivial_rack(3))


def test_quasi_real_types():
    assert quasi_real_types(S5, P("(0 1 2 3 4)", 5)) == {2, 3, 4}
    assert quasi_real_types(alternating_group(5), P("(0 1 2 3 4)", 5)) == {4}
    assert quasi_real_types(S5, P("(0 1)", 5)) == set()


def test_jordan_criterion():
    G = symmetric_group(8)
    v = jordan_criterion(G, P("(0 1 2 3 4)", 8), P("(5 6 7)", 8))
    assert v.is_type_D and v.witness["j"] == 2
    assert verify_class_witness(P(v.witness["r_perm"], 8), P(v.witness["s_perm"], 8))
    inc = jordan_criterion(symmetric_group(7), P("(0 1 2 3 4)", 7), P("(5 6)", 7))
    assert inc.status is Status.INCONCLUSIVE
    with pytest.raises(ValueError):
        jordan_criterion(G, P("(0 1)", 8), P("(1 2)", 8))


def test_subrack_lift():
    G = symmetric_group(7)
    K = generate([P("(0 1 2 3 4)", 7), P("(0 1)", 7)], degree=7)
    v = subrack_lift_check(G, K, P("(5 6)", 7), P("(0 1 2 3)", 7))
    assert v.is_type_D
    assert verify_class_witness(P(v.witness["r_perm"], 7), P(v.witness["s_perm"], 7))
    with pytest.raises(ValueError):
        subrack_lift_check(G, K, P("(4 5)", 7), P("(0 1 2 3)", 7))


def test_jobs_do_not_change_verdict():
    G = alternating_group(7)
    x = P("(0 1)(2 3)", 7)
    one = is_type_D_class(G, x, jobs=1)
    three = is_type_D_class(G, x, jobs=3)
    assert one.to_json() == three.to_json()


def test_m11_class_names():
    names = [name for name, _, _ in class_representatives(named_group("M11"))]
    assert names == ["2A", "3A", "4A", "5A", "6A", "8A", "8B", "11A", "11B"]


def test_sweep_flags_exceptions():
    rows = {(g, lab): listed for g, lab, _, listed in symmetric_sweep(5)}
    assert rows[("S5", "(1^3,2)")] and rows[("S5", "(2,3)")]
    assert rows[("A5", "(5)")] and not rows[("S5", "(1,4)")]


@pytest.mark.parametrize("q,expected", [(5, Status.NOT_TYPE_D), (7, Status.NOT_TYPE_D), (13, Status.TYPE_D)])
def test_psl2_involutions(q, expected):
    G = named_group(f"PSL(2,{q})")
    x = next(g for g in G.elements() if g.order() == 2)
    assert is_type_D_class(G, x).status is expected
