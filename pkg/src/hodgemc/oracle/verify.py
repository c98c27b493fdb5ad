"""Replay Katz chains on matrix tuples and compare with the numerical calculus."""

from __future__ import annotations

import random

from ..io import parameter_json
from ..katz import KatzChain, Step, reduce
from .convolution import (
    MatrixTuple,
    compare,
    conjugate_tuple,
    dr_convolve,
    field_for,
    is_irreducible,
    random_invertible,
    rank_one_tuple,
    root_of_unity,
    twist_tuple,
)


def chain_angles(chain: KatzChain) -> set:
    angles = set()
    snapshots = [chain.start] + [s.after for s in chain.steps]
    for d in snapshots:
        for t in d.points.values():
            angles.update(t.angles())
    for s in chain.steps:
        if s.kind == "convolve":
            angles.add(s.parameter.gamma0)
        else:
            angles.update(s.parameter.exponents.values())
            angles.add(s.parameter.infinity_exponent)
    return angles


def apply_step(tup: MatrixTuple, kind: str, parameter) -> MatrixTuple:
    if kind == "convolve":
        return dr_convolve(tup, root_of_unity(tup.K, parameter.gamma0))
    return twist_tuple(tup, parameter.exponents)


def replay(chain: KatzChain, tup: MatrixTuple) -> tuple:
    """Run the chain on ``tup``; returns the final tuple and per-step mismatches."""
    report = []
    for step in chain.steps:
        tup = apply_step(tup, step.kind, step.parameter)
        report.append(compare(step.after, tup))
    return tup, report


def inverse_chain(chain: KatzChain) -> KatzChain:
    steps = [Step(s.inverse_parameter(), s.after, s.before) for s in reversed(chain.steps)]
    return KatzChain(chain.end, steps)


def verify(data, seed: int = 0, max_order=None) -> dict:
    """Reduce ``data``, realize the rank-one end, and replay both ways.

    The tuple realizing ``data`` is rebuilt by running the inverse chain from
    rank one, conjugated by a random matrix chosen by ``seed``, and pushed back
    down the reduction chain; every snapshot is compared on the way.
    """
    chain = reduce(data)
    K = field_for(chain_angles(chain), cap=max_order)
    tup = rank_one_tuple(chain.end, K)
    steps = []

    def record(direction, step, mismatches):
        steps.append({
            "direction": direction,
            "kind": step.kind,
            "parameter": parameter_json(step),
            "rank": step.after.rank,
            "mismatches": [m.to_json() for m in mismatches],
        })

    up = inverse_chain(chain)
    start_mismatches = compare(chain.end, tup)
    for step in up.steps:
        tup = apply_step(tup, step.kind, step.parameter)
        record("up", step, compare(step.after, tup))

    if tup.size > 1:
        P = random_invertible(K, tup.size, random.Random(seed))
        tup = conjugate_tuple(tup, P)
    irreducible = is_irreducible(tup)
    for step in chain.steps:
        tup = apply_step(tup, step.kind, step.parameter)
        record("down", step, compare(step.after, tup))

    clean = not start_mismatches and all(not s["mismatches"] for s in steps)
    return {
        "cyclotomic_order": K.order,
        "irreducible": irreducible,
        "ok": clean and irreducible,
        "rank_trace": chain.rank_trace(),
        "seed": seed,
        "start_mismatches": [m.to_json() for m in start_mismatches],
        "steps": steps,
    }

