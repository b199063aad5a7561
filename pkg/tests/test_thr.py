import pytest

from rackforge.perms import Permutation, alternating_group, symmetric_group
from rackforge.racks import is_indecomposable
from rackforge.thr import (
    THRSpec,
    build_thr,
    from_wreath,
    generic_thr_check,
    normalize_representative,
    op_u,
    seed_tuple,
    thr_criteria,
    thr_elements,
    thr_size,
    to_wreath,
    verify_thr_witness,
)
from rackforge.typed import Status

P = Permutation.from_cycles
S3 = symmetric_group(3)
A5 = alternating_group(5)


def spec(L, t, ell=None, conj=None):
    n = L.degree
    return THRSpec(L, t, ell or Permutation.identity(n), conj)


@pytest.mark.parametrize("L,t,ell,size", [
    (S3, 2, None, 6),
    (S3, 3, None, 36),
    (S3, 2, "(0 1)", 18),
    (A5, 2, None, 60),
    (A5, 3, "(0 1 2 3 4)", 3600 * 12),
])
def test_sizes(L, t, ell, size):
    s = spec(L, t, P(ell, L.degree) if ell else None)
    assert thr_size(s) == size
    if size <= 3600:
        assert len(thr_elements(s)) == size


def test_spec_validation():
    with pytest.raises(ValueError):
        spec(S3, 1)
    with pytest.raises(ValueError):
        THRSpec(S3, 2, Permutation.identity(4))


def test_wreath_round_trip():
    s = spec(S3, 3, P("(0 1 2)", 3), P("(0 1)", 3))
    xs = (P("(0 1)", 3), Permutation.identity(3), P("(1 2)", 3))
    assert from_wreath(s, to_wreath(s, xs)) == xs
    with pytest.raises(ValueError):
        to_wreath(s, xs[:2])


def test_normalize_representative():
    a, b, c = P("(0 1)", 3), P("(1 2)", 3), P("(0 2)", 3)
    assert normalize_representative([a]) == a
    assert normalize_representative([a, b, c]) == c * b * a


def test_table_matches_functional_operation():
    # the dense rack is x |> y = x y x^-1 in the wreath product, which must agree with |>_u
    s = spec(S3, 2, P("(0 1)", 3))
    X = build_thr(s)
    tuples = [from_wreath(s, w) for w in thr_elements(s)]
    index = {tuple(p.images for p in y): k for k, y in enumerate(tuples)}
    for a, y in enumerate(tuples):
        for b, z in enumerate(tuples):
            assert X.table[a, b] == index[tuple(p.images for p in op_u(s, y, z))]


def test_thr_is_indecomposable_and_contains_seed():
    s = spec(S3, 3)
    X = build_thr(s)
    assert is_indecomposable(X)
    seed = tuple(p.images for p in seed_tuple(s))
    assert seed in {tuple(p.images for p in from_wreath(s, w)) for w in thr_elements(s)}


def test_a5_rules():
    assert thr_criteria(spec(A5, 2)).status is Status.NOT_TYPE_D
    v = thr_criteria(spec(A5, 3))
    assert v.is_type_D and v.method == "odd_prime"
    v = thr_criteria(spec(A5, 3, P("(0 1 2 3 4)", 5)))
    assert v.is_type_D and v.method == "quasi_real"


def test_generic_agrees_with_negative():
    assert generic_thr_check(spec(A5, 2)).status is Status.NOT_TYPE_D


def test_generic_positive_witness_rechecks():
    s = spec(S3, 3)
    v = generic_thr_check(s)
    assert v.status is thr_criteria(s).status is Status.TYPE_D
    tuples = [from_wreath(s, w) for w in thr_elements(s)]
    assert verify_thr_witness(s, tuples[v.witness["r"]], tuples[v.witness["s"]])


def test_nontrivial_theta_is_left_to_generic():
    s = spec(S3, 2, conj=P("(0 1)", 3))
    assert not s.theta_is_identity
    assert thr_criteria(s).status is Status.INCONCLUSIVE
    assert generic_thr_check(s).status in (Status.TYPE_D, Status.NOT_TYPE_D)
