import numpy as np
import pytest

from rackforge.cocycles import (
    ScalarCocycle,
    chi_cocycle,
    dual_cocycle,
    sign_section_cocycle_S4,
    transposition_rack,
)
from rackforge.cyclotomic import CycScalar, cyclotomic_polynomial, exact_rank
from rackforge.nichols import (
    BraidError,
    BraidedSpace,
    braid_equation_holds,
    braided_space,
    braiding,
    first_excess_degree,
    hilbert_series,
    modulus_for,
    poincare_twist_check,
    quadratic_cover_dims,
    reduced_words,
    root_of_unity_mod,
    symmetrizer,
    symmetrizer_rank,
)
from rackforge.racks import affine, affine_field, dihedral, from_conjugacy_class, trivial_rack
from rackforge.perms import Permutation, symmetric_group

D3 = braided_space(dihedral(3))
T = braided_space(affine_field(4, 2))


def _dense_braid_ok(V):
    N = V.dim
    c = braiding(V)
    I = np.eye(N, dtype=np.int64)
    c1, c2 = np.kron(c, I), np.kron(I, c)
    return np.array_equal(c1 @ c2 @ c1, c2 @ c1 @ c2)


@pytest.mark.parametrize("V", [D3, T, braided_space(trivial_rack(2), "const:1"),
                               BraidedSpace(transposition_rack(4), chi_cocycle(4))])
def test_braid_equation_matches_matrices(V):
    assert braid_equation_holds(V.rack, V.q)[0]
    assert _dense_braid_ok(V)


def test_braid_equation_failure():
    X = dihedral(3)
    e = np.zeros((3, 3), dtype=np.int64)
    e[0, 1] = 1
    with pytest.raises(BraidError):
        BraidedSpace(X, ScalarCocycle(X, 2, e))


def test_modulus_and_root():
    for m in (2, 3, 4, 6, 7):
        P = modulus_for(m)
        assert (P - 1) % m == 0 and P < 2**31
        z = root_of_unity_mod(m, P)
        assert pow(z, m, P) == 1
        assert all(pow(z, k, P) != 1 for k in range(1, m))


def test_reduced_words_cover_symmetric_group():
    words = reduced_words(4)
    assert len(words) == 24
    # a reduced word has length equal to the inversion count
    for perm, w in words.items():
        inv = sum(1 for i in range(4) for j in range(i + 1, 4) if perm[i] > perm[j])
        assert len(w) == inv


def test_low_symmetrizers():
    assert symmetrizer_rank(D3, 0) == 1
    assert symmetrizer_rank(D3, 1) == 3
    N = D3.dim
    Q2 = symmetrizer(D3, 2)
    assert np.array_equal(Q2, np.eye(N * N, dtype=np.int64) + braiding(D3))


def test_d3():
    rep = hilbert_series(D3)
    assert rep.dims == [1, 3, 4, 3, 1]
    assert rep.finite and rep.total == 12 and rep.top == 4
    assert rep.relations_degree2 == 5
    assert [symmetrizer_rank(D3, n) for n in range(5)] == rep.dims


def test_t_and_quadratic_cover():
    rep = hilbert_series(T)
    assert rep.dims == [1, 4, 8, 11, 12, 12, 11, 8, 4, 1]
    assert rep.total == 72 and rep.top == 9
    cover = quadratic_cover_dims(T, 6)
    assert cover[:6] == rep.dims[:6]
    assert cover[6] > rep.dims[6]
    assert first_excess_degree(T, rep, 8) == 6


def test_engine_matches_exact_symmetrizer_for_t():
    rep = hilbert_series(T, 3)
    assert [symmetrizer_rank(T, n) for n in range(4)] == rep.dims[:4]


def test_cyclotomic_coefficients():
    # q = zeta_3 constant on the dihedral rack exercises the cyclotomic path
    V = BraidedSpace(dihedral(3), ScalarCocycle.constant(dihedral(3), 3, 1))
    rep = hilbert_series(V, 3)
    exact = [symmetrizer_rank(V, n) for n in range(4)]
    assert exact == rep.dims[:4]
    assert [symmetrizer_rank(V, n, exact=False) for n in range(4)] == exact


def test_one_point():
    assert hilbert_series(braided_space(trivial_rack(1), "const:-1")).dims == [1, 1]
    rep = hilbert_series(braided_space(trivial_rack(1), "const:1"), 6)
    assert rep.dims == [1] * 7 and not rep.finite and rep.truncated


@pytest.mark.parametrize("V", [D3, T])
def test_palindromic(V):
    d = hilbert_series(V).dims
    assert d == d[::-1]


O42 = transposition_rack(4)


def test_o42_pair():
    a = hilbert_series(braided_space(O42))
    b = hilbert_series(BraidedSpace(O42, chi_cocycle(4)))
    assert a.dims == b.dims == [1, 6, 19, 42, 71, 96, 106, 96, 71, 42, 19, 6, 1]
    assert a.total == 576 and a.top == 12
    # the degree-two relation count follows from 36 - 19
    assert a.relations_degree2 == 17


def test_twist_invariance():
    X, phi = sign_section_cocycle_S4()
    assert poincare_twist_check(braided_space(X), phi, 2, max_degree=4)


def test_dual_pair_same_series():
    X = affine(5, 2)
    Xd, qd = dual_cocycle(X, ScalarCocycle.constant(X, 2))
    assert hilbert_series(BraidedSpace(Xd, qd), 4).dims == hilbert_series(braided_space(X), 4).dims


def test_o44():
    X = from_conjugacy_class(symmetric_group(4), Permutation.from_cycles("(0 1 2 3)", 4))
    assert hilbert_series(braided_space(X)).total == 576


def test_report_json():
    j = hilbert_series(D3).to_json()
    assert j["dims"] == [1, 3, 4, 3, 1] and j["total"] == 12


class TestCycScalar:
    def test_polynomials(self):
        assert cyclotomic_polynomial(3) == (1, 1, 1)
        assert cyclotomic_polynomial(4) == (1, 0, 1)
        assert cyclotomic_polynomial(6) == (1, -1, 1)

    def test_field_arithmetic(self):
        z = CycScalar.root(3, 1)
        one = CycScalar.from_int(3, 1)
        assert z * z * z == one
        assert z * z + z + one == CycScalar.from_int(3, 0)
        w = z + CycScalar.from_int(3, 2)
        assert w * w.inverse() == one
        assert (w / w) == one and not CycScalar.from_int(3, 0)

    def test_exact_rank(self):
        z = CycScalar.root(3, 1)
        one = CycScalar.from_int(3, 1)
        assert exact_rank([[one, z], [z, z * z]]) == 1
        assert exact_rank([[one, z], [z, one]]) == 2
