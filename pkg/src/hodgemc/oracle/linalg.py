"""Dense exact linear algebra over a field given by its zero and one.

Matrices are lists of rows.  Every routine works for any element type with
field operations and ``bool(x) == (x != 0)``, in particular Fraction and
CyclotomicNumber.
"""

from __future__ import annotations


def identity(n, one, zero):
    return [[one if i == j else zero for j in range(n)] for i in range(n)]


def zeros(n, m, zero):
    return [[zero] * m for _ in range(n)]


def matmul(a, b):
    cols = list(zip(*b))
    out = []
    for row in a:
        new = []
        for col in cols:
            acc = None
            for x, y in zip(row, col):
                if x and y:
                    t = x * y
                    acc = t if acc is None else acc + t
            new.append(acc if acc is not None else row[0] - row[0])
        out.append(new)
    return out


def matvec(a, v):
    return [row_dot(row, v) for row in a]


def row_dot(row, v):
    acc = row[0] - row[0]
    for x, y in zip(row, v):
        if x and y:
            acc = acc + x * y
    return acc


def add(a, b):
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def sub(a, b):
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def scale(a, c):
    return [[c * x for x in r] for r in a]


def shift(a, c):
    """``a - c * Id``."""
    return [[x - c if i == j else x for j, x in enumerate(r)] for i, r in enumerate(a)]


def transpose(a):
    return [list(r) for r in zip(*a)]


def rref(a):
    """Reduced row echelon form and pivot columns; ``a`` is not modified."""
    rows = [list(r) for r in a]
    pivots = []
    if not rows:
        return rows, pivots
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv if x else x for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y if y else x for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def rank(a) -> int:
    return len(rref(a)[1])


def nullspace(a):
    """Basis of ``{v : a v = 0}`` as a list of column vectors; ``a`` has rows."""
    rows, pivots = rref(a)
    n = len(a[0])
    zero = a[0][0] - a[0][0]
    one = zero + 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [zero] * n
        v[f] = one
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(v)
    return basis


def inverse(a):
    n = len(a)
    zero = a[0][0] - a[0][0]
    one = zero + 1
    aug = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(a)]
    rows, pivots = rref(aug)
    if pivots[:n] != list(range(n)):
        raise ZeroDivisionError("matrix is singular")
    return [r[n:] for r in rows]


def span_basis(vectors):
    """Independent subset spanning the same space (as rows of an echelon form)."""
    if not vectors:
        return []
    rows, pivots = rref(vectors)
    return rows[: len(pivots)]


def complete_basis(vectors, n, zero, one):
    """Standard basis vectors extending independent ``vectors`` to a basis of K^n."""
    rows, pivots = rref(vectors) if vectors else ([], [])
    extra = []
    for c in range(n):
        if c not in pivots:
            e = [zero] * n
            e[c] = one
            extra.append(e)
    return extra


def determinant(m):
    """Exact determinant by elimination."""
    rows, n = [list(r) for r in m], len(m)
    det = rows[0][0] - rows[0][0] + 1
    for c in range(n):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return det - det
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            det = -det
        det = det * rows[c][c]
        inv = 1 / rows[c][c]
        for i in range(c + 1, n):
            if rows[i][c]:
                f = rows[i][c] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[c])]
    return det
