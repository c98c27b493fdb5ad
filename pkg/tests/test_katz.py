from fractions import Fraction as F

import pytest

from hodgemc.errors import InvalidArgument, PreconditionError, StuckChain
from hodgemc.invariants import ModuleData, Point, anchor_p, check_rank_consistency, rank_one_data
from hodgemc.katz import (
    hypergeometric,
    hypergeometric_chain,
    reduce,
    rigidity_index,
)
from hodgemc.transforms import finite_aggregate, middle_convolve, twist

from seeds import random_data

GAUSS = ([F(1, 3), F(2, 3)], [F(1, 12), F(11, 12)])
H3 = ([F(1, 12), F(5, 12), F(7, 12)], [F(1, 6), F(1, 2), F(5, 6)])


def test_rigidity_index_rank_one():
    assert rigidity_index(rank_one_data({0: F(1, 5), 1: F(1, 7), 2: F(1, 2)})) == 2


def test_rigidity_index_gauss():
    assert rigidity_index(hypergeometric(*GAUSS)) == 2


def test_rigidity_index_direct_sum_shape():
    # two rank-one pieces with distinct eigenvalues at four points
    fake = ModuleData(
        points={
            "0": {(F(1, 3), 0, 0): 1, (F(2, 3), 0, 0): 1},
            "1": {(F(1, 4), 0, 0): 1, (F(3, 4), 0, 0): 1},
            "2": {(F(1, 6), 0, 0): 1, (F(5, 6), 0, 0): 1},
            "inf": {(F(1, 2), 0, 0): 1, (F(3, 4), 0, 0): 1},
        },
        h={0: 2},
    )
    assert rigidity_index(fake) == 0


def test_reduce_rank_one():
    d = rank_one_data({0: F(1, 3), 1: F(1, 3)})
    chain = reduce(d)
    assert chain.steps == [] and chain.end is d


def test_reduce_gauss():
    chain = reduce(hypergeometric(*GAUSS))
    assert [s.kind for s in chain.steps] == ["twist", "convolve"]
    assert chain.rank_trace() == [2, 1]


def test_reduce_h3():
    chain = reduce(hypergeometric(*H3))
    assert chain.rank_trace() == [3, 2, 1]
    assert chain.convolutions() == 2


def test_reduce_rejects_non_rigid():
    fake = ModuleData(
        points={"0": {(F(1, 3), 0, 0): 2}, "1": {(F(1, 3), 0, 0): 2}, "inf": {(F(1, 3), 0, 0): 2}},
        h={0: 2},
    )
    with pytest.raises(PreconditionError):
        reduce(fake)


def test_stuck_chain_carries_snapshot():
    err = StuckChain("stuck", rank_one_data({0: F(1, 2)}))
    assert err.snapshot.rank == 1


@pytest.mark.parametrize("seed", range(15))
def test_chain_invariants(seed):
    d = random_data(seed, min_rank=2)
    chain = reduce(d)
    trace = chain.rank_trace()
    assert trace[-1] == 1
    assert all(a > b for a, b in zip(trace, trace[1:]))
    prev = chain.start
    for step in chain.steps:
        assert step.before is prev
        assert rigidity_index(step.after) == rigidity_index(step.before) == 2
        assert check_rank_consistency(step.after) == []
        if step.kind == "convolve":
            sides = finite_aggregate(step.before, step.after, step.parameter)
            assert all(l == r for l, r in sides.values())
        prev = step.after


def test_hypergeometric_rank_one():
    d = hypergeometric([F(1, 3)], [F(2, 3)])
    assert d == rank_one_data({0: F(1, 3), 1: F(1, 3)})


def test_hypergeometric_gauss():
    d = hypergeometric(*GAUSS)
    assert d.h == {0: 1, 1: 1}
    assert sorted(g for g, _, _ in d.infinity) == GAUSS[0]
    assert sorted(g for g, _, _ in d.table(Point.parse("0"))) == sorted((-b) % 1 for b in GAUSS[1])


@pytest.mark.parametrize(
    "alpha, beta",
    [H3, ([F(1, 12), F(1, 4), F(5, 12), F(7, 12)], [F(0), F(1, 6), F(1, 2), F(5, 6)])],
)
def test_hypergeometric_shape(alpha, beta):
    d = hypergeometric(alpha, beta)
    n = len(alpha)
    assert d.rank == n
    assert sorted(g for (g, _, _), m in d.infinity.items() for _ in range(m)) == sorted(alpha)
    at_zero = sorted(g for (g, _, _), m in d.table(Point.parse("0")).items() for _ in range(m))
    assert at_zero == sorted((-b) % 1 for b in beta)
    # a pseudo-reflection at 1
    one = d.table(Point.parse("1"))
    assert sum(m for (g, l, _), m in one.items() if g == 0 and l == 0) >= n - 2
    assert reduce(d).convolutions() == n - 1


def test_hypergeometric_errors():
    with pytest.raises(PreconditionError):
        hypergeometric([F(1, 3), F(1, 2)], [F(1, 2), F(1, 5)])
    with pytest.raises(InvalidArgument):
        hypergeometric([F(1, 3)], [])


def test_chain_result_is_anchored():
    chain = hypergeometric_chain(*H3)
    assert chain.result == anchor_p(chain.end)
    assert min(chain.result.h) == 0


def test_apply_records_steps():
    chain = hypergeometric_chain(*GAUSS)
    d = chain.start
    again = twist(middle_convolve(d, chain.steps[0].parameter), chain.steps[1].parameter)
    assert again == chain.end
