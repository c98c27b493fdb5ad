"""Monodromy tuples, the Dettweiler-Reiter middle convolution and Jordan data.

A :class:`MatrixTuple` holds the local monodromies ``A_1, ..., A_r`` at the
finite points, with ``A_inf = (A_r ... A_1)^{-1}``.  An eigenvalue ``zeta**k``
of ``Q(zeta_N)`` is reported through its angle ``k/N``, matching the labels of
the Hodge tables (``lambda = exp(-2 i pi gamma)``).
"""

from __future__ import annotations

import os
import random
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce

from ..errors import DegenerateConvolution, InvalidArgument, UnsupportedEigenvalue
from ..invariants import INF, ModuleData, Point, as_angle
from . import linalg
from .cyclotomic import CyclotomicField, field, lcm

DEFAULT_MAX_ORDER = 60


def max_order() -> int:
    value = os.environ.get("HODGEMC_MAX_CYCLOTOMIC_ORDER")
    return int(value) if value else DEFAULT_MAX_ORDER


def field_for(angles, cap=None) -> CyclotomicField:
    """The smallest cyclotomic field containing every ``exp(-2 i pi gamma)``."""
    cap = max_order() if cap is None else cap
    n = reduce(lcm, (as_angle(g).denominator for g in angles), 1)
    if n > cap:
        raise UnsupportedEigenvalue(f"cyclotomic order {n} exceeds the cap {cap}")
    return field(n)


def root_of_unity(K: CyclotomicField, gamma):
    gamma = as_angle(gamma)
    k = gamma * K.order
    if k.denominator != 1:
        raise UnsupportedEigenvalue(f"exp(-2 i pi {gamma}) is not in Q(zeta_{K.order})")
    return K.zeta(int(k))


@dataclass
class MatrixTuple:
    K: CyclotomicField
    matrices: list
    labels: list

    def __post_init__(self):
        self.labels = [Point.parse(x) for x in self.labels]
        if len(self.labels) != len(self.matrices):
            raise InvalidArgument("one label per matrix is required")

    @property
    def size(self) -> int:
        return len(self.matrices[0]) if self.matrices else 0

    def product(self):
        n = self.size
        acc = linalg.identity(n, self.K.one, self.K.zero)
        for a in self.matrices:
            acc = linalg.matmul(a, acc)
        return acc

    def infinity(self):
        return linalg.inverse(self.product())

    def local(self, point):
        point = Point.parse(point)
        if point.is_infinity:
            return self.infinity()
        return self.matrices[self.labels.index(point)]

    def points(self) -> list:
        return list(self.labels) + [INF]


def rank_one_tuple(data: ModuleData, K: CyclotomicField = None) -> MatrixTuple:
    """1x1 tuple realizing rank-one data."""
    if data.rank != 1:
        raise InvalidArgument("rank_one_tuple needs rank-one data")
    labels, angles = [], []
    for x, table in data.finite_items():
        (g, _, _), = table.keys()
        labels.append(x)
        angles.append(g)
    K = K or field_for(angles + [g for g, _, _ in data.infinity])
    return MatrixTuple(K, [[[root_of_unity(K, g)]] for g in angles], labels)


def twist_tuple(tup: MatrixTuple, exponents) -> MatrixTuple:
    """Multiply ``A_x`` by ``exp(-2 i pi e_x)``; new labels get scalar matrices."""
    K, n = tup.K, tup.size
    labels = list(tup.labels)
    matrices = list(tup.matrices)
    for x, e in exponents.items():
        x = Point.parse(x)
        c = root_of_unity(K, e)
        if x in labels:
            i = labels.index(x)
            matrices[i] = linalg.scale(matrices[i], c)
        else:
            labels.append(x)
            matrices.append(linalg.scale(linalg.identity(n, K.one, K.zero), c))
    order = sorted(range(len(labels)), key=lambda i: labels[i].sort_key())
    return MatrixTuple(K, [matrices[i] for i in order], [labels[i] for i in order])


def conjugate_tuple(tup: MatrixTuple, P) -> MatrixTuple:
    Pinv = linalg.inverse(P)
    return MatrixTuple(tup.K, [linalg.matmul(linalg.matmul(P, a), Pinv) for a in tup.matrices], tup.labels)


def random_invertible(K: CyclotomicField, n: int, rng: random.Random):
    while True:
        m = [[K.from_poly([rng.randint(-2, 2) for _ in range(K.degree)]) for _ in range(n)] for _ in range(n)]
        if linalg.rank(m) == n:
            return m


def dr_convolve(tup: MatrixTuple, lam) -> MatrixTuple:
    """Middle convolution ``MC_lam`` of a tuple (Dettweiler-Reiter)."""
    K = tup.K
    lam = K(lam)
    if lam == K.one:
        raise InvalidArgument("middle convolution needs lambda != 1")
    A = tup.matrices
    r, n = len(A), tup.size
    N = n * r
    zero, one = K.zero, K.one
    Id = linalg.identity(n, one, zero)
    Aminus = [linalg.sub(a, Id) for a in A]

    B = []
    for k in range(r):
        m = linalg.identity(N, one, zero)
        for j in range(r):
            if j < k:
                block = Aminus[j]
            elif j == k:
                block = linalg.scale(A[k], lam)
            else:
                block = linalg.scale(Aminus[j], lam)
            for a in range(n):
                for b in range(n):
                    m[k * n + a][j * n + b] = block[a][b]
        B.append(m)

    # K = sum of ker(A_k - 1) placed in block k; L = common fixed space
    sub = []
    for k in range(r):
        for v in linalg.nullspace(Aminus[k]):
            w = [zero] * N
            w[k * n:(k + 1) * n] = v
            sub.append(w)
    stacked = [row for m in B for row in linalg.shift(m, one)]
    sub.extend(linalg.nullspace(stacked))
    sub = linalg.span_basis(sub)
    dim = N - len(sub)
    if dim == 0:
        raise DegenerateConvolution("Dettweiler-Reiter quotient is zero")
    extra = linalg.complete_basis(sub, N, zero, one)
    Q = linalg.transpose(sub + extra)
    Qinv = linalg.inverse(Q)
    s = len(sub)
    out = []
    for m in B:
        full = linalg.matmul(Qinv, linalg.matmul(m, Q))
        out.append([row[s:] for row in full[s:]])
    return MatrixTuple(K, out, tup.labels)


def jordan_data(m, K: CyclotomicField) -> dict:
    """``(angle, block size) -> count`` for a matrix with N-th root of unity eigenvalues."""
    n = len(m)
    out = {}
    found = 0
    for k in range(K.order):
        lam = K.zeta(k)
        a = linalg.shift(m, lam)
        ranks = [n, linalg.rank(a)]
        if ranks[1] == n:
            continue
        power = a
        while ranks[-1] != ranks[-2]:
            power = linalg.matmul(power, a)
            ranks.append(linalg.rank(power))
        ranks.append(ranks[-1])
        gamma = Fraction(k, K.order)
        for size in range(1, len(ranks) - 1):
            at_least = ranks[size - 1] - ranks[size]
            bigger = ranks[size] - ranks[size + 1]
            if at_least - bigger:
                out[(gamma, size)] = at_least - bigger
                found += size * (at_least - bigger)
    if found != n:
        raise UnsupportedEigenvalue(f"eigenvalues outside Q(zeta_{K.order})")
    return dict(sorted(out.items()))


def is_irreducible(tup: MatrixTuple) -> bool:
    """Burnside: the tuple is irreducible iff it generates the full matrix algebra."""
    n, K = tup.size, tup.K
    target = n * n
    flat = lambda m: [x for row in m for x in row]
    basis_mats = [linalg.identity(n, K.one, K.zero)]
    echelon = linalg.span_basis([flat(basis_mats[0])])
    frontier = list(basis_mats)
    while frontier and len(echelon) < target:
        new = []
        for m in frontier:
            for a in tup.matrices:
                cand = linalg.matmul(a, m)
                trial = linalg.span_basis(echelon + [flat(cand)])
                if len(trial) > len(echelon):
                    echelon = trial
                    new.append(cand)
        frontier = new
    return len(echelon) == target


def _fmt(g):
    return f"{g.numerator}/{g.denominator}"


@dataclass(frozen=True)
class Mismatch:
    """Disagreement at one point for one eigenvalue angle (or the rank)."""

    point: Point
    gamma: object
    expected: dict
    found: dict

    def __str__(self):
        if self.gamma is None:
            return f"rank: data {self.expected}, tuple {self.found}"
        return (f"{self.point}: angle {_fmt(self.gamma)}: data blocks {_sizes(self.expected)}, "
                f"tuple blocks {_sizes(self.found)}")

    def to_json(self):
        if self.gamma is None:
            return {"point": str(self.point), "what": "rank", "data": self.expected, "tuple": self.found}
        return {"point": str(self.point), "gamma": _fmt(self.gamma),
                "data": _sizes(self.expected), "tuple": _sizes(self.found)}


def _sizes(blocks):
    return {str(s): c for s, c in sorted(blocks.items())}


def local_jordan(tup: MatrixTuple) -> dict:
    return {x: jordan_data(tup.local(x), tup.K) for x in tup.points()}


def _by_angle(blocks):
    out = defaultdict(dict)
    for (g, s), c in blocks.items():
        out[g][s] = c
    return out


def compare(data: ModuleData, tup: MatrixTuple) -> list:
    """Mismatches between the p-forgetful data and the tuple's Jordan data."""
    if data.rank != tup.size:
        return [Mismatch(INF, None, data.rank, tup.size)]
    report = []
    trivial = {(Fraction(0), 1): data.rank}
    points = sorted(set(tup.points()) | set(data.points), key=Point.sort_key)
    for x in points:
        expected = _by_angle(data.points[x].blocks() if x in data.points else trivial)
        if x.is_infinity or x in tup.labels:
            found = _by_angle(jordan_data(tup.local(x), tup.K))
        else:
            found = _by_angle(trivial)
        for g in sorted(set(expected) | set(found)):
            if expected.get(g, {}) != found.get(g, {}):
                report.append(Mismatch(x, g, expected.get(g, {}), found.get(g, {})))
    return report
