"""Numerical Hodge data of a regular holonomic module on the affine line.

An eigenvalue ``lambda = exp(-2 i pi gamma)`` is always stored through its
angle ``gamma``, an exact :class:`fractions.Fraction` in ``[0, 1)``.  The local
data at a singular point is a :class:`HodgeTable` holding the multiplicities
``nu[gamma, ell, p]`` of the primitive parts of nearby cycles, and a
:class:`ModuleData` bundles the tables of all singular points together with
the generic Hodge numbers ``h^p`` and the degrees ``delta^p``.
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Union

from .errors import InconsistentData, InvalidArgument, UnavailableInvariant

Angle = Fraction

ZERO = Fraction(0)


def make_angle(num: int, den: int = 1) -> Angle:
    """Return ``(num / den) mod 1`` as a reduced fraction in ``[0, 1)``."""
    if den == 0:
        raise InvalidArgument("angle denominator must be nonzero")
    return Fraction(num, den) % 1


def as_angle(value: Union[Fraction, int, str, tuple]) -> Angle:
    """Coerce ``value`` to an angle; strings are read as ``"a/b"``."""
    if isinstance(value, tuple):
        return make_angle(*value)
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            try:
                return make_angle(int(num), int(den))
            except ValueError:
                raise InvalidArgument(f"not a rational angle: {value!r}") from None
        try:
            return make_angle(int(text))
        except ValueError:
            raise InvalidArgument(f"not a rational angle: {value!r}") from None
    if isinstance(value, float):
        raise InvalidArgument("floating point angles are not supported")
    return Fraction(value) % 1


def format_angle(gamma: Angle) -> str:
    return f"{gamma.numerator}/{gamma.denominator}"


def conjugate(gamma: Angle) -> Angle:
    """Angle of the complex conjugate eigenvalue."""
    return (-gamma) % 1


# --------------------------------------------------------------------------
# points


@dataclass(frozen=True)
class Point:
    """Location of a singular point: a finite label or infinity (``"inf"``)."""

    label: str

    @classmethod
    def parse(cls, text) -> "Point":
        if isinstance(text, Point):
            return text
        if isinstance(text, (int, Fraction)):
            value = Fraction(text)
            return cls(str(value))
        text = str(text).strip()
        if not text:
            raise InvalidArgument("empty point label")
        if text.lower() in ("inf", "infinity", "oo"):
            return INF
        try:
            return cls(str(Fraction(text)))
        except (ValueError, ZeroDivisionError):
            return cls(text)

    @property
    def is_infinity(self) -> bool:
        return self.label == "inf"

    @property
    def coordinate(self):
        """The exact rational coordinate, or ``None`` for opaque labels."""
        if self.is_infinity:
            return None
        try:
            return Fraction(self.label)
        except ValueError:
            return None

    def sort_key(self):
        if self.is_infinity:
            return (2, ZERO, "")
        c = self.coordinate
        if c is not None:
            return (0, c, "")
        return (1, ZERO, self.label)

    def __lt__(self, other: "Point") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return self.label


INF = Point("inf")


# --------------------------------------------------------------------------
# sparse tables


class HodgeTable(Mapping):
    """Immutable sparse map ``(gamma, ell, p) -> multiplicity``.

    Zero multiplicities are dropped, so two tables describing the same data
    always compare equal.
    """

    __slots__ = ("_entries", "_hash")

    def __init__(self, entries: Union[Mapping, Iterable] = ()):
        items = entries.items() if isinstance(entries, Mapping) else entries
        clean = {}
        for key, mult in items:
            gamma, ell, p = key
            gamma = as_angle(gamma)
            ell, p, mult = int(ell), int(p), int(mult)
            if ell < 0:
                raise InvalidArgument(f"negative weight ell={ell}")
            if mult < 0:
                raise InvalidArgument(f"negative multiplicity at {(gamma, ell, p)}")
            if mult:
                k = (gamma, ell, p)
                clean[k] = clean.get(k, 0) + mult
        self._entries = dict(sorted(clean.items()))
        self._hash = None

    @classmethod
    def from_counts(cls, counts: Mapping) -> "HodgeTable":
        """Build from a possibly signed accumulator, rejecting negatives."""
        for key, mult in counts.items():
            if mult < 0:
                raise InconsistentData(f"negative multiplicity {mult} at {key}")
        return cls(counts)

    def __getitem__(self, key):
        return self._entries[key]

    def __iter__(self):
        return iter(self._entries)

    def __len__(self):
        return len(self._entries)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self._entries.items()))
        return self._hash

    def __eq__(self, other):
        if isinstance(other, HodgeTable):
            return self._entries == other._entries
        return NotImplemented

    def __repr__(self):
        body = ", ".join(
            f"({format_angle(g)}, {l}, {p}): {m}" for (g, l, p), m in self._entries.items()
        )
        return f"HodgeTable({{{body}}})"

    def mult(self, gamma, ell: int, p: int) -> int:
        return self._entries.get((gamma, ell, p), 0)

    def angles(self) -> list:
        return sorted({g for g, _, _ in self._entries})

    def p_values(self) -> set:
        return {p for _, _, p in self._entries}

    def blocks(self) -> dict:
        """p-forgetful Jordan data: ``(gamma, ell + 1) -> number of blocks``."""
        out = defaultdict(int)
        for (g, l, _), m in self._entries.items():
            out[(g, l + 1)] += m
        return dict(out)

    def rank(self) -> int:
        return sum((l + 1) * m for (_, l, _), m in self._entries.items())

    def is_trivial(self) -> bool:
        """True when every entry is a size-one block of eigenvalue 1."""
        return all(g == 0 and l == 0 for g, l, _ in self._entries)

    def shifted(self, k: int) -> "HodgeTable":
        return HodgeTable({(g, l, p + k): m for (g, l, p), m in self._entries.items()})

    def rotated(self, delta: Angle) -> "HodgeTable":
        """Relabel every eigenvalue angle ``gamma`` as ``gamma + delta``."""
        return HodgeTable({((g + delta) % 1, l, p): m for (g, l, p), m in self._entries.items()})


def _clean(mapping: Mapping) -> dict:
    return {int(k): int(v) for k, v in sorted(mapping.items(), key=lambda kv: int(kv[0])) if v}


# --------------------------------------------------------------------------
# module data


@dataclass(frozen=True)
class ModuleData:
    """Invariants of a module: per-point tables, ``h^p`` and ``delta^p``."""

    points: Mapping
    h: Mapping
    delta: Mapping = field(default_factory=dict)
    delta_valid: bool = False

    def __post_init__(self):
        points = {}
        for loc, table in self.points.items():
            loc = Point.parse(loc)
            if loc in points:
                raise InvalidArgument(f"duplicate point {loc}")
            points[loc] = table if isinstance(table, HodgeTable) else HodgeTable(table)
        if INF not in points:
            points[INF] = HodgeTable()
        points = dict(sorted(points.items(), key=lambda kv: kv[0].sort_key()))
        h = _clean(self.h)
        if any(v < 0 for v in h.values()):
            raise InvalidArgument("Hodge numbers must be nonnegative")
        if sum(h.values()) < 1:
            raise InvalidArgument("module data must have positive rank")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "h", h)
        object.__setattr__(self, "delta", _clean(self.delta))
        object.__setattr__(self, "delta_valid", bool(self.delta_valid))
        if self.rank == 1 and not any(not t.is_trivial() for _, t in self.finite_items()):
            raise InvalidArgument(
                "rank-one data without finite singularities is the trivial module"
            )

    @property
    def rank(self) -> int:
        return sum(self.h.values())

    @property
    def infinity(self) -> HodgeTable:
        return self.points[INF]

    @property
    def finite_points(self) -> list:
        return [x for x in self.points if not x.is_infinity]

    def finite_items(self):
        return [(x, t) for x, t in self.points.items() if not x.is_infinity]

    def table(self, point) -> HodgeTable:
        return self.points.get(Point.parse(point), HodgeTable())

    def p_window(self, pad: int = 2) -> range:
        """A range of ``p`` covering every nonzero quantity, padded on both sides."""
        lows = set(self.h) | set(self.delta)
        highs = set(lows)
        for table in self.points.values():
            for _, l, q in table:
                lows.add(q - l)
                highs.add(q)
        lo, hi = min(lows), max(highs)
        return range(lo - pad, hi + pad + 1)

    def replace(self, **changes) -> "ModuleData":
        values = dict(points=self.points, h=self.h, delta=self.delta, delta_valid=self.delta_valid)
        values.update(changes)
        return ModuleData(**values)


def shift_p(data: ModuleData, k: int) -> ModuleData:
    """Shift the Hodge filtration by ``k`` (``p -> p + k`` everywhere)."""
    if k == 0:
        return data
    return ModuleData(
        points={x: t.shifted(k) for x, t in data.points.items()},
        h={p + k: v for p, v in data.h.items()},
        delta={p + k: v for p, v in data.delta.items()},
        delta_valid=data.delta_valid,
    )


def anchor_p(data: ModuleData) -> ModuleData:
    """Normalize the filtration so that the lowest nonzero ``h^p`` sits at ``p = 0``."""
    return shift_p(data, -min(data.h))


def rank_one_data(exponents: Mapping, p: int = 0) -> ModuleData:
    """Rank-one data with the given finite exponents and Hodge index ``p``.

    The exponent at infinity is forced by the residue theorem, and ``delta^p``
    is the degree of the Deligne extension, minus the sum of all angles.
    """
    points = {}
    total = ZERO
    for loc, gamma in exponents.items():
        loc = Point.parse(loc)
        if loc.is_infinity:
            raise InvalidArgument("the exponent at infinity is determined by the others")
        gamma = as_angle(gamma)
        total += gamma
        points[loc] = HodgeTable({(gamma, 0, p): 1})
    g_inf = (-total) % 1
    points[INF] = HodgeTable({(g_inf, 0, p): 1})
    degree = -(total + g_inf)
    return ModuleData(points=points, h={p: 1}, delta={p: int(degree)}, delta_valid=True)


# --------------------------------------------------------------------------
# local quantities


def nu_total(table: HodgeTable, gamma, p: int) -> int:
    """``h^p`` of the ``gamma``-eigenspace of nearby cycles."""
    gamma = as_angle(gamma)
    return sum(m for (g, l, q), m in table.items() if g == gamma and 0 <= q - p <= l)


def nu_prim(table: HodgeTable, gamma, p: int) -> int:
    gamma = as_angle(gamma)
    return sum(m for (g, _, q), m in table.items() if g == gamma and q == p)


def nu_coprim(table: HodgeTable, gamma, p: int) -> int:
    gamma = as_angle(gamma)
    return sum(m for (g, l, q), m in table.items() if g == gamma and q == p + l)


def mu(table: HodgeTable, gamma, ell: int, p: int) -> int:
    """Vanishing-cycle multiplicity; for eigenvalue 1 the weight drops by one."""
    gamma = as_angle(gamma)
    if gamma != 0:
        return table.mult(gamma, ell, p)
    return table.mult(ZERO, ell + 1, p)


def mu_table(table: HodgeTable) -> HodgeTable:
    """All vanishing-cycle entries of a minimal extension as one table."""
    out = {}
    for (g, l, p), m in table.items():
        if g != 0:
            out[(g, l, p)] = m
        elif l >= 1:
            out[(g, l - 1, p)] = m
    return HodgeTable(out)


def mu_total(table: HodgeTable, gamma, p: int) -> int:
    gamma = as_angle(gamma)
    if gamma != 0:
        return nu_total(table, gamma, p)
    return sum(m for (g, l, q), m in table.items() if g == 0 and l >= 1 and 0 <= q - p <= l - 1)


def hodge_numbers(table: HodgeTable) -> dict:
    """``p -> sum over gamma of nu_total``; the generic Hodge numbers seen locally."""
    out = defaultdict(int)
    for (_, l, q), m in table.items():
        for p in range(q - l, q + 1):
            out[p] += m
    return {p: v for p, v in sorted(out.items()) if v}


def vanishing_aggregate(table: HodgeTable, p: int) -> int:
    """``sum_{mu != 1} mu^{p-1}_mu + mu^p_1`` at one finite point."""
    total = 0
    for (g, l, q), m in table.items():
        if g != 0:
            if 0 <= q - (p - 1) <= l:
                total += m
        elif l >= 1 and 0 <= q - p <= l - 1:
            total += m
    return total


# --------------------------------------------------------------------------
# global checks


@dataclass(frozen=True)
class RankViolation:
    point: Point
    p: int
    expected: int
    found: int

    def __str__(self):
        return f"rank mismatch at {self.point}, p={self.p}: h^p={self.expected}, local sum={self.found}"


def check_rank_consistency(data: ModuleData) -> list:
    """Compare ``h^p`` with the local Hodge numbers at every point."""
    report = []
    for point, table in data.points.items():
        local = hodge_numbers(table)
        for p in sorted(set(local) | set(data.h)):
            found, expected = local.get(p, 0), data.h.get(p, 0)
            if found != expected:
                report.append(RankViolation(point, p, expected, found))
    return report


def gamma_p(data: ModuleData, p: int) -> int:
    if not data.delta_valid:
        raise UnavailableInvariant("delta is not available for this data")
    return data.delta.get(p, 0) - data.delta.get(p - 1, 0)


def _h1_affine_raw(data: ModuleData, p: int) -> int:
    value = -gamma_p(data, p) - data.h.get(p, 0)
    for _, table in data.finite_items():
        value += vanishing_aggregate(table, p)
    return value


def h1_affine(data: ModuleData, p: int) -> int:
    """``h^p H^1(A^1, DR M)`` from the degrees and the vanishing cycles."""
    value = _h1_affine_raw(data, p)
    if value < 0:
        raise InconsistentData(f"h^{p} H^1(A^1, DR M) = {value} < 0")
    return value


def h1_min(data: ModuleData, p: int) -> int:
    """``h^p H^1(P^1, DR M^min)``, removing the invariants at infinity."""
    value = h1_affine(data, p) - nu_prim(data.infinity, ZERO, p - 1)
    if value < 0:
        raise InconsistentData(f"h^{p} H^1(P^1, DR M^min) = {value} < 0")
    return value


def h1_affine_map(data: ModuleData) -> dict:
    out = {p: h1_affine(data, p) for p in data.p_window()}
    return {p: v for p, v in out.items() if v}


def h1_min_map(data: ModuleData) -> dict:
    out = {p: h1_min(data, p) for p in data.p_window()}
    return {p: v for p, v in out.items() if v}


def euler_h1_dimension(data: ModuleData) -> int:
    """``dim H^1(A^1, DR M)`` from local monodromy alone (Euler characteristic)."""
    n = data.rank
    finite = data.finite_items()
    kernel = sum(m for _, t in finite for (g, _, _), m in t.items() if g == 0)
    return n * (len(finite) - 1) - kernel
