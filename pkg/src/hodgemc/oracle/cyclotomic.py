"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Elements are stored in the power basis ``1, zeta, ..., zeta^(phi(N)-1)``
reduced modulo the N-th cyclotomic polynomial.  The abstract generator
``zeta`` stands for ``exp(-2 i pi / N)``, so the angle ``k/N`` corresponds to
``zeta**k``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from math import gcd

from ..errors import InvalidArgument


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def _poly_divexact(num, den):
    """Exact division of integer polynomials (low degree first, ``den`` monic)."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(q) - 1, -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        if c:
            for j, b in enumerate(den):
                num[i + j] -= c * b
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return q


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple:
    """Coefficients of Phi_n, lowest degree first."""
    if n < 1:
        raise InvalidArgument("cyclotomic order must be positive")
    poly = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n)[:-1]:
        poly = _poly_divexact(poly, cyclotomic_polynomial(d))
    return tuple(poly)


def lcm(a: int, b: int) -> int:
    return a * b // gcd(a, b)


class CyclotomicField:
    """The field Q(zeta_N); obtain instances through :func:`field`."""

    def __init__(self, order: int):
        self.order = order
        self.modulus = cyclotomic_polynomial(order)
        self.degree = len(self.modulus) - 1
        self.zero = CyclotomicNumber(self, (Fraction(0),) * self.degree)
        self.one = self(1)

    def __repr__(self):
        return f"CyclotomicField({self.order})"

    def __call__(self, value) -> "CyclotomicNumber":
        if isinstance(value, CyclotomicNumber):
            return value.embed(self)
        coeffs = [Fraction(0)] * self.degree
        coeffs[0] = Fraction(value)
        return CyclotomicNumber(self, tuple(coeffs))

    def from_poly(self, coeffs) -> "CyclotomicNumber":
        return CyclotomicNumber(self, self._reduce([Fraction(c) for c in coeffs]))

    def zeta(self, k: int = 1) -> "CyclotomicNumber":
        k %= self.order
        coeffs = [0] * (k + 1)
        coeffs[k] = 1
        return self.from_poly(coeffs)

    def _reduce(self, coeffs) -> tuple:
        d, mod = self.degree, self.modulus
        coeffs = list(coeffs)
        for i in range(len(coeffs) - 1, d - 1, -1):
            c = coeffs[i]
            if c:
                base = i - d
                for j in range(d):
                    if mod[j]:
                        coeffs[base + j] -= c * mod[j]
        coeffs = coeffs[:d]
        coeffs += [Fraction(0)] * (d - len(coeffs))
        return tuple(coeffs)

    def _mul(self, a, b) -> tuple:
        prod = [Fraction(0)] * (2 * self.degree - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        prod[i + j] += x * y
        return self._reduce(prod)

    def _inverse(self, a) -> tuple:
        # solve (multiplication by a) u = 1 over Q
        d = self.degree
        cols = []
        basis = [Fraction(1)] + [Fraction(0)] * (d - 1)
        for j in range(d):
            e = [Fraction(0)] * d
            e[j] = Fraction(1)
            cols.append(self._mul(a, e))
        rows = [[cols[j][i] for j in range(d)] + [basis[i]] for i in range(d)]
        for c in range(d):
            piv = next((r for r in range(c, d) if rows[r][c]), None)
            if piv is None:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            rows[c], rows[piv] = rows[piv], rows[c]
            inv = 1 / rows[c][c]
            rows[c] = [x * inv for x in rows[c]]
            for r in range(d):
                if r != c and rows[r][c]:
                    f = rows[r][c]
                    rows[r] = [x - f * y for x, y in zip(rows[r], rows[c])]
        return tuple(rows[i][d] for i in range(d))


@lru_cache(maxsize=None)
def field(order: int) -> CyclotomicField:
    return CyclotomicField(order)


class CyclotomicNumber:
    __slots__ = ("field", "coeffs")

    def __init__(self, field_: CyclotomicField, coeffs: tuple):
        self.field = field_
        self.coeffs = coeffs

    @property
    def order(self) -> int:
        return self.field.order

    def embed(self, target: CyclotomicField) -> "CyclotomicNumber":
        if target is self.field:
            return self
        if target.order % self.order:
            raise InvalidArgument(f"Q(zeta_{self.order}) does not embed in Q(zeta_{target.order})")
        step = target.order // self.order
        coeffs = [Fraction(0)] * ((self.field.degree - 1) * step + 1)
        for i, c in enumerate(self.coeffs):
            coeffs[i * step] = c
        return target.from_poly(coeffs)

    def _coerce(self, other):
        if isinstance(other, CyclotomicNumber):
            if other.field is self.field:
                return self, other
            common = field(lcm(self.order, other.order))
            return self.embed(common), other.embed(common)
        if isinstance(other, (int, Fraction)):
            return self, self.field(other)
        return None, None

    def __add__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CyclotomicNumber(a.field, tuple(x + y for x, y in zip(a.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicNumber(self.field, tuple(-x for x in self.coeffs))

    def __sub__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CyclotomicNumber(a.field, tuple(x - y for x, y in zip(a.coeffs, b.coeffs)))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CyclotomicNumber(self.field, tuple(x * other for x in self.coeffs))
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return CyclotomicNumber(a.field, a.field._mul(a.coeffs, b.coeffs))

    __rmul__ = __mul__

    def inverse(self) -> "CyclotomicNumber":
        if not self:
            raise ZeroDivisionError("division by zero in cyclotomic field")
        return CyclotomicNumber(self.field, self.field._inverse(self.coeffs))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero in cyclotomic field")
            return CyclotomicNumber(self.field, tuple(x / other for x in self.coeffs))
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        acc, base = self.field.one, self
        while k:
            if k & 1:
                acc = acc * base
            base = base * base
            k >>= 1
        return acc

    def __bool__(self):
        return any(self.coeffs)

    def __eq__(self, other):
        a, b = self._coerce(other)
        if a is None:
            return NotImplemented
        return a.coeffs == b.coeffs

    __hash__ = None

    def __repr__(self):
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*z^{i}")
        return f"[{' + '.join(terms) or '0'}]_{self.order}"


def arith(a: CyclotomicNumber, b: CyclotomicNumber, op: str) -> CyclotomicNumber:
    """Apply ``op`` in ``{'+', '-', '*', '/'}`` in the compositum field."""
    if op == "+":
        return a + b
    if op == "-":
        return a - b
    if op in ("*", "x", "×"):
        return a * b
    if op in ("/", "÷"):
        return a / b
    raise InvalidArgument(f"unknown operation {op!r}")
