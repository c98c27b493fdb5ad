"""Middle convolution with a Kummer module, and rank-one twists, on ModuleData.

``middle_convolve(data, g0)`` transports every local table and the global
invariants along ``MC_{lambda0}`` with ``lambda0 = exp(-2 i pi g0)``:

* at infinity, eigenvalue angles move by ``-g0`` with the Hodge index rising
  by one on ``(g0, 1)``; the ``lambda0`` blocks lose one weight and become
  unipotent, the unipotent blocks gain one weight and move to ``1 - g0``, and
  ``H^1(P^1, DR M^min)`` appears as new weight-zero ``1 - g0`` blocks;
* at finite points, vanishing cycles move by ``+g0`` keeping their weight,
  with the Hodge index rising by one for old angles in ``(0, 1 - g0]``; the
  weight-zero unipotent part is recovered from the new Hodge numbers.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DegenerateConvolution, InconsistentData, InvalidArgument, UnavailableInvariant
from .invariants import (
    INF,
    ZERO,
    HodgeTable,
    ModuleData,
    Point,
    as_angle,
    check_rank_consistency,
    h1_affine,
    h1_min_map,
    hodge_numbers,
    mu_table,
    mu_total,
    nu_prim,
    nu_total,
    vanishing_aggregate,
)


@dataclass(frozen=True)
class KummerParameter:
    gamma0: Fraction

    def __post_init__(self):
        g0 = as_angle(self.gamma0)
        if g0 == 0:
            raise InvalidArgument("the Kummer parameter must satisfy lambda0 != 1")
        object.__setattr__(self, "gamma0", g0)

    @property
    def conjugate(self) -> "KummerParameter":
        return KummerParameter(1 - self.gamma0)


def kummer(g0) -> KummerParameter:
    return g0 if isinstance(g0, KummerParameter) else KummerParameter(as_angle(g0))


@dataclass(frozen=True)
class TwistParameter:
    """Rank-one local system given by its exponents at finite points."""

    exponents: Mapping = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for loc, e in self.exponents.items():
            loc = Point.parse(loc)
            if loc.is_infinity:
                raise InvalidArgument("twist exponents are given at finite points only")
            clean[loc] = as_angle(e)
        object.__setattr__(self, "exponents", dict(sorted(clean.items(), key=lambda kv: kv[0].sort_key())))

    @property
    def infinity_exponent(self) -> Fraction:
        return (-sum(self.exponents.values(), ZERO)) % 1

    def exponent(self, point: Point) -> Fraction:
        if point.is_infinity:
            return self.infinity_exponent
        return self.exponents.get(point, ZERO)

    def is_zero(self) -> bool:
        return all(e == 0 for e in self.exponents.values())

    def inverse(self) -> "TwistParameter":
        return TwistParameter({x: (-e) % 1 for x, e in self.exponents.items()})


def _interval(gamma, lo, hi, closed_lo=False, closed_hi=False) -> bool:
    above = gamma >= lo if closed_lo else gamma > lo
    below = gamma <= hi if closed_hi else gamma < hi
    return above and below


def _window(data: ModuleData) -> range:
    return data.p_window(pad=3)


def _require_delta(data: ModuleData):
    if not data.delta_valid:
        raise UnavailableInvariant("delta is required for middle convolution")


# --------------------------------------------------------------------------
# infinity


def mc_infinity(table_inf: HodgeTable, h1min: Mapping, g0) -> HodgeTable:
    """Transport the table at infinity; ``h1min`` is ``p -> h^p H^1(P^1, DR M^min)``."""
    g0 = kummer(g0).gamma0
    bar = 1 - g0
    out = defaultdict(int)
    for (g, l, p), m in table_inf.items():
        if g == 0:
            out[(bar, l + 1, p + 1)] += m
        elif g == g0:
            if l >= 1:
                out[(ZERO, l - 1, p)] += m
        elif g > g0:
            out[(g - g0, l, p + 1)] += m
        else:
            out[(g - g0 + 1, l, p)] += m
    for p, v in h1min.items():
        if v < 0:
            raise InconsistentData(f"negative h^{p} H^1(P^1, DR M^min)")
        out[(bar, 0, p)] += v
    return HodgeTable(out)


def mc_h(data: ModuleData, g0) -> dict:
    """Hodge numbers ``h^p`` of ``MC_{lambda0}(M)``."""
    g0 = kummer(g0).gamma0
    _require_delta(data)
    table = data.infinity
    angles = table.angles()
    out = {}
    for p in _window(data):
        value = 0
        for g in angles:
            value += nu_total(table, g, p) if g < g0 else nu_total(table, g, p - 1)
        value += h1_affine(data, p) - nu_prim(table, g0, p - 1)
        if value < 0:
            raise InconsistentData(f"h^{p}(MC) = {value} < 0")
        if value:
            out[p] = value
    return out


def mc_delta(data: ModuleData, g0) -> dict:
    """Degrees ``delta^p`` of ``MC_{lambda0}(M)``."""
    g0 = kummer(g0).gamma0
    _require_delta(data)
    table = data.infinity
    out = {}
    for p in _window(data):
        value = data.delta.get(p, 0)
        value += sum(nu_total(table, g, p) for g in table.angles() if g >= g0)
        for _, t in data.finite_items():
            value -= mu_total(t, ZERO, p)
            value -= sum(mu_total(t, g, p - 1) for g in t.angles() if _interval(g, 0, 1 - g0))
        if value:
            out[p] = value
    return out


# --------------------------------------------------------------------------
# finite points


def transport_vanishing(table_x: HodgeTable, g0) -> HodgeTable:
    """Vanishing-cycle table of ``MC_{lambda0}(M)`` at a finite point."""
    g0 = kummer(g0).gamma0
    out = defaultdict(int)
    for (g, l, p), m in mu_table(table_x).items():
        shift = 1 if _interval(g, 0, 1 - g0, closed_hi=True) else 0
        out[((g + g0) % 1, l, p + shift)] += m
    return HodgeTable(out)


def nu_from_mu(mu_entries: HodgeTable, h: Mapping) -> HodgeTable:
    """Rebuild a nearby-cycle table from vanishing cycles and the Hodge numbers."""
    out = defaultdict(int)
    for (g, l, p), m in mu_entries.items():
        if g != 0:
            out[(g, l, p)] += m
        else:
            out[(g, l + 1, p)] += m
    local = hodge_numbers(HodgeTable(out))
    for p in set(local) | set(h):
        rest = h.get(p, 0) - local.get(p, 0)
        if rest < 0:
            raise InconsistentData(f"negative unipotent weight-zero part at p={p}")
        out[(ZERO, 0, p)] += rest
    return HodgeTable(out)


def mc_finite(table_x: HodgeTable, g0, new_h: Mapping) -> HodgeTable:
    """Nearby-cycle table of ``MC_{lambda0}(M)`` at a finite point.

    ``new_h`` must be the output of :func:`mc_h` for the same convolution.
    """
    return nu_from_mu(transport_vanishing(table_x, g0), new_h)


# --------------------------------------------------------------------------
# whole-module operations


def middle_convolve(data: ModuleData, g0) -> ModuleData:
    """Invariants of ``MC_{lambda0}(M)``."""
    g0 = kummer(g0)
    violations = check_rank_consistency(data)
    if violations:
        raise InconsistentData(f"input fails rank consistency: {violations[0]}")
    new_h = mc_h(data, g0)
    if not new_h:
        raise DegenerateConvolution(
            f"MC with gamma0={g0.gamma0} kills the module (rank 0)"
        )
    points = {INF: mc_infinity(data.infinity, h1_min_map(data), g0)}
    for x, table in data.finite_items():
        points[x] = mc_finite(table, g0, new_h)
    try:
        out = ModuleData(points=points, h=new_h, delta=mc_delta(data, g0), delta_valid=True)
    except InvalidArgument as exc:
        raise DegenerateConvolution(str(exc)) from exc
    violations = check_rank_consistency(out)
    if violations:
        raise InconsistentData(f"convolution output fails rank consistency: {violations[0]}")
    return out


def twist_delta(data: ModuleData, tw: TwistParameter) -> dict:
    """Degrees of the Deligne extension after tensoring with a rank-one system.

    Adding an exponent ``e`` at a point pushes the residues of the blocks with
    angle in ``[1 - e, 1)`` past 1, which enlarges the lattice by their
    Hodge-graded dimensions; the rank-one factor itself has degree ``-sum e``.
    """
    _require_delta(data)
    total = sum(tw.exponent(x) for x in data.points)
    total += sum(e for x, e in tw.exponents.items() if x not in data.points)
    degree = -int(total)
    out = {}
    for p in _window(data):
        value = data.delta.get(p, 0) + degree * data.h.get(p, 0)
        for x, table in data.points.items():
            e = tw.exponent(x)
            if e:
                value += sum(nu_total(table, g, p) for g in table.angles() if g >= 1 - e)
        if value:
            out[p] = value
    return out


def twist(data: ModuleData, tw) -> ModuleData:
    """Tensor with the rank-one local system of the given exponents."""
    if not isinstance(tw, TwistParameter):
        tw = TwistParameter(tw)
    violations = check_rank_consistency(data)
    if violations:
        raise InconsistentData(f"input fails rank consistency: {violations[0]}")
    if tw.is_zero():
        return data
    source = dict(data.points)
    for x in tw.exponents:
        if x not in source:
            # a regular point: trivial monodromy, one size-one block per Hodge index
            source[x] = HodgeTable({(ZERO, 0, p): v for p, v in data.h.items()})
    base = data.replace(points=source)
    points = {x: t.rotated(tw.exponent(x)) for x, t in source.items()}
    if data.delta_valid:
        return ModuleData(points=points, h=data.h, delta=twist_delta(base, tw), delta_valid=True)
    return ModuleData(points=points, h=data.h, delta={}, delta_valid=False)


# --------------------------------------------------------------------------
# closures used by the test-suite and the ``check`` command


def scalar_infinity(data: ModuleData):
    """The angle ``g0`` if the monodromy at infinity is ``lambda0 * Id``, else None."""
    entries = list(data.infinity)
    angles = {g for g, _, _ in entries}
    if len(angles) == 1 and all(l == 0 for _, l, _ in entries):
        g = angles.pop()
        return g if g != 0 else None
    return None


def mc_h_scalar(data: ModuleData, g0) -> dict:
    """Hodge numbers of the convolution when infinity is scalar ``lambda0``."""
    g0 = kummer(g0).gamma0
    if scalar_infinity(data) != g0:
        raise InvalidArgument("monodromy at infinity is not scalar lambda0")
    out = {p: h1_affine(data, p) for p in _window(data)}
    return {p: v for p, v in out.items() if v}


def mc_delta_scalar(data: ModuleData, g0) -> dict:
    """Degrees of the convolution when infinity is scalar ``lambda0``."""
    g0 = kummer(g0).gamma0
    if scalar_infinity(data) != g0:
        raise InvalidArgument("monodromy at infinity is not scalar lambda0")
    _require_delta(data)
    out = {}
    for p in _window(data):
        value = data.delta.get(p, 0) + data.h.get(p, 0)
        for _, t in data.finite_items():
            value -= mu_total(t, ZERO, p)
            value -= sum(mu_total(t, g, p - 1) for g in t.angles() if _interval(g, 0, 1 - g0))
        if value:
            out[p] = value
    return out


def infinity_closure(data: ModuleData, g0) -> tuple:
    """``(h from the transported infinity table, h from mc_h)``; equal when consistent."""
    g0 = kummer(g0)
    table = mc_infinity(data.infinity, h1_min_map(data), g0)
    return hodge_numbers(table), mc_h(data, g0)


def finite_aggregate(before: ModuleData, after: ModuleData, g0) -> dict:
    """Both sides of the summed vanishing-cycle identity, for each ``p``.

    Left: sum over finite points of ``sum_{mu != 1} mu^{p-1}(MC) + mu^p_1(MC)``.
    Right: the same data of ``M``, with angles in ``(0, 1 - g0)`` read at
    ``p - 2`` and angles in ``[1 - g0, 1]`` (1 meaning eigenvalue one) at ``p - 1``.
    """
    g0 = kummer(g0).gamma0
    ps = sorted(set(before.p_window(pad=4)) | set(after.p_window(pad=4)))
    sides = {}
    for p in ps:
        lhs = sum(vanishing_aggregate(t, p) for _, t in after.finite_items())
        rhs = 0
        for _, t in before.finite_items():
            for g in t.angles():
                if _interval(g, 0, 1 - g0):
                    rhs += mu_total(t, g, p - 2)
                elif g == 0 or g >= 1 - g0:
                    rhs += mu_total(t, g, p - 1)
        if lhs or rhs:
            sides[p] = (lhs, rhs)
    return sides
