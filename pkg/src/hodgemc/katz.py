"""Katz chains: twists and middle convolutions reducing rigid data to rank one.

A hypergeometric system ``H(alpha; beta)`` has angles ``alpha`` at infinity,
``-beta`` at 0 and a pseudo-reflection at 1.  It is built from rank one by
rounds of ``MC_{g_k}`` followed by a twist at 0 by ``e_k``, where

    g_k = beta_{k+1} - alpha_{k+1},    e_k = alpha_{k+2} - alpha_{k+1} - g_k

(indices from 1, ``alpha_{n+1} = 0``).  Each round appends the new angle
``-beta_{k+1}`` at 0 and 0 at infinity, then rotates both by the twist, which
is why the rank-one seed uses ``alpha_1 - alpha_2`` at infinity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Union

from .errors import (
    DegenerateConvolution,
    InconsistentData,
    InvalidArgument,
    PreconditionError,
    StuckChain,
)
from .invariants import ModuleData, anchor_p, as_angle, check_rank_consistency, rank_one_data
from .transforms import KummerParameter, TwistParameter, kummer, middle_convolve, twist


@dataclass(frozen=True)
class Step:
    parameter: Union[TwistParameter, KummerParameter]
    before: ModuleData
    after: ModuleData

    @property
    def kind(self) -> str:
        return "twist" if isinstance(self.parameter, TwistParameter) else "convolve"

    def inverse_parameter(self):
        if self.kind == "twist":
            return self.parameter.inverse()
        return self.parameter.conjugate


@dataclass
class KatzChain:
    start: ModuleData
    steps: list = field(default_factory=list)

    @property
    def end(self) -> ModuleData:
        return self.steps[-1].after if self.steps else self.start

    @property
    def result(self) -> ModuleData:
        """End of the chain with the Hodge index anchored at 0."""
        return anchor_p(self.end)

    def rank_trace(self) -> list:
        """Total rank at the start and after each convolution."""
        return [self.start.rank] + [s.after.rank for s in self.steps if s.kind == "convolve"]

    def convolutions(self) -> int:
        return sum(1 for s in self.steps if s.kind == "convolve")

    def apply(self, parameter) -> ModuleData:
        before = self.end
        if isinstance(parameter, TwistParameter):
            after = twist(before, parameter)
        else:
            after = middle_convolve(before, parameter)
        self.steps.append(Step(parameter, before, after))
        return after


def centralizer_dimension(table, n: int) -> int:
    if not table:
        return n * n
    by_angle = {}
    for (g, size), count in table.blocks().items():
        by_angle.setdefault(g, []).extend([size] * count)
    return sum(min(a, b) for sizes in by_angle.values() for a in sizes for b in sizes)


def rigidity_index(data: ModuleData) -> int:
    n = data.rank
    return 2 * n * n - sum(n * n - centralizer_dimension(t, n) for t in data.points.values())


def _kernel_blocks(table, gamma) -> int:
    return sum(c for (g, _), c in table.blocks().items() if g == gamma)


def _candidates(data: ModuleData):
    """``(predicted rank, gamma0, twist)`` for every alignment, best first."""
    n = data.rank
    finite = data.finite_items()
    choices = [sorted(t.angles()) for _, t in finite]
    out = []
    for picked in itertools.product(*choices):
        tw = TwistParameter({x: (-g) % 1 for (x, _), g in zip(finite, picked) if g})
        finite_rank = sum(n - _kernel_blocks(t, g) for (_, t), g in zip(finite, picked))
        rotated = data.infinity.rotated(tw.infinity_exponent)
        for g0 in sorted(set(rotated.angles()) - {0}):
            predicted = finite_rank + n - _kernel_blocks(rotated, g0) - n
            out.append((predicted, g0.denominator, g0.numerator, tw, g0))
    out.sort(key=lambda c: c[:3])
    return out


def reduce(data: ModuleData) -> KatzChain:
    """Greedy Katz reduction to rank one."""
    index = rigidity_index(data)
    if index != 2:
        raise PreconditionError(f"rigidity index is {index}, reduction needs 2")
    violations = check_rank_consistency(data)
    if violations:
        raise InconsistentData(f"input fails rank consistency: {violations[0]}")
    chain = KatzChain(data)
    while chain.end.rank > 1:
        current = chain.end
        progressed = False
        for predicted, _, _, tw, g0 in _candidates(current):
            if not 1 <= predicted < current.rank:
                continue
            try:
                twisted = twist(current, tw)
                convolved = middle_convolve(twisted, g0)
            except (DegenerateConvolution, InconsistentData):
                continue
            if convolved.rank >= current.rank:
                continue
            if not tw.is_zero():
                chain.steps.append(Step(tw, current, twisted))
            chain.steps.append(Step(kummer(g0), twisted, convolved))
            progressed = True
            break
        if not progressed:
            raise StuckChain(f"no rank-decreasing step from rank {current.rank}", current)
    return chain


def hypergeometric_chain(alpha, beta) -> KatzChain:
    """The construction chain of ``H(alpha; beta)`` starting from rank one."""
    alpha = [as_angle(a) for a in alpha]
    beta = [as_angle(b) for b in beta]
    n = len(alpha)
    if n < 1 or len(beta) != n:
        raise InvalidArgument("alpha and beta must be nonempty of equal length")
    clash = [(a, b) for a in alpha for b in beta if a == b]
    if clash:
        raise PreconditionError(f"alpha and beta share the angle {clash[0][0]}: reducible system")
    ext = alpha + [as_angle(0)]
    chain = KatzChain(rank_one_data({0: (ext[1] - beta[0]) % 1,
                                     1: (beta[0] - alpha[0]) % 1}))
    for k in range(n - 1):
        g0 = (beta[k + 1] - alpha[k + 1]) % 1
        e = (ext[k + 2] - ext[k + 1] - g0) % 1
        rank = chain.end.rank
        chain.apply(kummer(g0))
        if chain.end.rank != rank + 1:
            raise PreconditionError(f"round {k + 1} produced rank {chain.end.rank}, expected {rank + 1}")
        if e:
            chain.apply(TwistParameter({0: e}))
    return chain


def hypergeometric(alpha, beta) -> ModuleData:
    """Hodge data of ``H(alpha; beta)``, anchored at ``p = 0``."""
    return hypergeometric_chain(alpha, beta).result
