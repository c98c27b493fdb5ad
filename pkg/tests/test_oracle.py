import itertools
import random
from fractions import Fraction as F

import pytest

from hodgemc.errors import DegenerateConvolution, UnsupportedEigenvalue
from hodgemc.invariants import HodgeTable, Point, rank_one_data
from hodgemc.katz import hypergeometric_chain
from hodgemc.oracle import linalg
from hodgemc.oracle.convolution import (
    MatrixTuple,
    compare,
    conjugate_tuple,
    dr_convolve,
    field_for,
    is_irreducible,
    jordan_data,
    random_invertible,
    rank_one_tuple,
    root_of_unity,
)
from hodgemc.oracle.cyclotomic import field
from hodgemc.oracle.verify import replay, verify
from hodgemc.transforms import middle_convolve

from seeds import random_data

K12 = field(12)


def mat(K, rows):
    return [[K(x) for x in r] for r in rows]


def test_jordan_identity_and_unipotent():
    assert jordan_data(linalg.identity(3, K12.one, K12.zero), K12) == {(F(0), 1): 3}
    assert jordan_data(mat(K12, [[1, 1], [0, 1]]), K12) == {(F(0), 2): 1}


def test_jordan_companion():
    K = field(3)
    # x^2 + x + 1 = (x - zeta)(x - zeta^2)
    m = mat(K, [[0, -1], [1, -1]])
    assert jordan_data(m, K) == {(F(1, 3), 1): 1, (F(2, 3), 1): 1}


def test_jordan_outside_field():
    K = field(4)
    with pytest.raises(UnsupportedEigenvalue):
        jordan_data(mat(K, [[0, -1], [1, -1]]), K)


def test_jordan_conjugation_invariance():
    rng = random.Random(7)
    z = K12.zeta
    m = [[z(1), K12.one, K12.zero], [K12.zero, z(1), K12.zero], [K12.zero, K12.zero, z(5)]]
    expected = {(F(1, 12), 2): 1, (F(5, 12), 1): 1}
    for _ in range(3):
        P = random_invertible(K12, 3, rng)
        conj = linalg.matmul(linalg.matmul(P, m), linalg.inverse(P))
        assert jordan_data(conj, K12) == expected


def test_root_of_unity_field_check():
    assert root_of_unity(K12, F(1, 4)) == K12.zeta(3)
    with pytest.raises(UnsupportedEigenvalue):
        root_of_unity(K12, F(1, 5))
    with pytest.raises(UnsupportedEigenvalue):
        field_for([F(1, 7), F(1, 11)], cap=60)


def test_max_order_from_environment(monkeypatch):
    monkeypatch.setenv("HODGEMC_MAX_CYCLOTOMIC_ORDER", "10")
    with pytest.raises(UnsupportedEigenvalue):
        field_for([F(1, 12)])
    assert field_for([F(1, 12)], cap=12).order == 12


def test_rank_one_convolution_by_hand():
    d = rank_one_data({0: F(1, 3), 1: F(1, 3)})
    K = field(6)
    tup = rank_one_tuple(d, K)
    out = dr_convolve(tup, root_of_unity(K, F(1, 2)))
    assert out.size == 2
    assert compare(middle_convolve(d, F(1, 2)), out) == []
    assert jordan_data(out.local("0"), K) == {(F(0), 1): 1, (F(5, 6), 1): 1}


def test_degenerate_tuple():
    K = field(3)
    tup = MatrixTuple(K, [[[K.zeta(2)]]], ["0"])
    with pytest.raises(DegenerateConvolution):
        dr_convolve(tup, K.zeta(1))


def _traces(tup, length=3):
    out = []
    for k in range(1, length + 1):
        for word in itertools.product(range(len(tup.matrices)), repeat=k):
            m = linalg.identity(tup.size, tup.K.one, tup.K.zero)
            for i in word:
                m = linalg.matmul(m, tup.matrices[i])
            out.append(sum((m[i][i] for i in range(tup.size)), tup.K.zero))
    return out


def test_convolution_is_invertible():
    chain = hypergeometric_chain([F(1, 3), F(2, 3)], [F(1, 12), F(11, 12)])
    tup, _ = replay(chain, rank_one_tuple(chain.start, K12))
    lam = root_of_unity(K12, F(1, 4))
    back = dr_convolve(dr_convolve(tup, lam), lam.inverse())
    assert back.size == tup.size
    assert compare(chain.end, back) == []
    assert _traces(back) == _traces(tup)


def test_determinant_law():
    chain = hypergeometric_chain([F(1, 12), F(5, 12), F(7, 12)], [F(1, 6), F(1, 2), F(5, 6)])
    tup, _ = replay(chain, rank_one_tuple(chain.start, K12))
    det = K12.one
    for x in tup.points():
        det = det * linalg.determinant(tup.local(x))
    assert det == 1


def test_compare_fault_injection():
    chain = hypergeometric_chain([F(1, 3), F(2, 3)], [F(1, 12), F(11, 12)])
    tup, _ = replay(chain, rank_one_tuple(chain.start, K12))
    good = chain.end
    assert compare(good, tup) == []
    one = Point.parse("1")
    corrupted = {(g, 0 if l else l, p): m for (g, l, p), m in good.table(one).items()}
    corrupted[(F(0), 0, 0)] = 1
    bad = good.replace(points={**good.points, one: HodgeTable(corrupted)})
    report = compare(bad, tup)
    assert [(m.point, m.gamma) for m in report] == [(one, F(0))]
    assert "angle 0/1" in str(report[0])


def test_compare_rank():
    d = rank_one_data({0: F(1, 3), 1: F(1, 3)})
    chain = hypergeometric_chain([F(1, 3), F(2, 3)], [F(1, 12), F(11, 12)])
    tup, _ = replay(chain, rank_one_tuple(chain.start, K12))
    report = compare(d, tup)
    assert len(report) == 1 and report[0].gamma is None


def test_irreducibility():
    chain = hypergeometric_chain([F(1, 12), F(5, 12), F(7, 12)], [F(1, 6), F(1, 2), F(5, 6)])
    tup, _ = replay(chain, rank_one_tuple(chain.start, K12))
    assert is_irreducible(tup)
    z = K12.zeta
    split = MatrixTuple(K12, [mat(K12, [[1, 0], [0, 1]]), [[z(1), K12.zero], [K12.zero, z(2)]]], ["0", "1"])
    assert not is_irreducible(split)


@pytest.mark.parametrize("seed", range(6))
def test_random_chains_agree_with_oracle(seed):
    d = random_data(seed, base=12, min_rank=2, max_rank=4)
    report = verify(d, seed=seed)
    assert report["ok"], report


def test_conjugation_keeps_comparison():
    chain = hypergeometric_chain([F(1, 3), F(2, 3)], [F(1, 12), F(11, 12)])
    tup, _ = replay(chain, rank_one_tuple(chain.start, K12))
    P = random_invertible(K12, 2, random.Random(1))
    assert compare(chain.end, conjugate_tuple(tup, P)) == []
