"""Exact integer and rational linear algebra for small lattices.

A matrix is a tuple of row tuples; integer matrices hold Python ints and
rational matrices hold ``fractions.Fraction`` entries, so no operation ever
rounds.  A lattice is presented by a matrix whose *columns* generate it.

``hnf`` is column-style Hermite normal form: the unique canonical basis of
the column span, with positive pivots descending the rows and the entries to
the left of each pivot reduced modulo that pivot.  Rational lattices are
handled by clearing denominators to a common integer scale, reducing
integrally, and rescaling.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm

IntMat = tuple[tuple[int, ...], ...]
RatMat = tuple[tuple[Fraction, ...], ...]


def freeze(rows) -> tuple:
    return tuple(tuple(row) for row in rows)


def transpose(m):
    return tuple(zip(*m))


def identity(n: int) -> IntMat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def matmul(a, b):
    bt = transpose(b)
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a)


def matvec(a, v):
    return tuple(sum(x * y for x, y in zip(row, v)) for row in a)


def _row_hnf(rows: list[list[int]]) -> list[list[int]]:
    """Row-style HNF in place: canonical echelon basis of the row span."""
    nrows = len(rows)
    ncols = len(rows[0]) if nrows else 0
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        piv = next((i for i in range(r, nrows) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        for i in range(r + 1, nrows):
            # Euclid on the two leading entries; gcd ends up in row r.
            while rows[i][c]:
                q = rows[r][c] // rows[i][c]
                rows[r] = [x - q * y for x, y in zip(rows[r], rows[i])]
                rows[r], rows[i] = rows[i], rows[r]
        if rows[r][c] < 0:
            rows[r] = [-x for x in rows[r]]
        for i in range(r):
            q = rows[i][c] // rows[r][c]
            if q:
                rows[i] = [x - q * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return rows


def hnf(m: IntMat) -> IntMat:
    """Column-style Hermite normal form; column span is preserved.

    The zero matrix maps to itself; rank-deficient input yields an echelon
    basis with the redundant columns zeroed out on the right.
    """
    if not m or not m[0]:
        return freeze(m)
    rows = [list(r) for r in transpose(m)]
    return transpose(freeze(_row_hnf(rows)))


def kernel_basis(m: IntMat) -> tuple[tuple[int, ...], ...]:
    """Basis of the integer kernel {x : m@x = 0}.

    Row-reduces the columns of ``m`` augmented with an identity block; the
    augmented rows whose leading block vanished record kernel vectors.
    """
    nrows = len(m)
    ncols = len(m[0])
    stacked = [list(col) + [1 if i == j else 0 for j in range(ncols)]
               for i, col in enumerate(transpose(m))]
    reduced = _row_hnf(stacked)
    return freeze(row[nrows:] for row in reduced if not any(row[:nrows]))


def det(m) -> Fraction:
    """Exact determinant by fraction-free-ish Gaussian elimination."""
    n = len(m)
    a = [[Fraction(x) for x in row] for row in m]
    sign = 1
    out = Fraction(1)
    for c in range(n):
        piv = next((i for i in range(c, n) if a[i][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        out *= a[c][c]
        inv = 1 / a[c][c]
        for i in range(c + 1, n):
            if a[i][c]:
                f = a[i][c] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[c])]
    return sign * out


def rank(m) -> int:
    a = [[Fraction(x) for x in row] for row in m]
    nrows, ncols = len(a), len(a[0]) if a else 0
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        for i in range(r + 1, nrows):
            if a[i][c]:
                f = a[i][c] / a[r][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == nrows:
            break
    return r


def solve(a, v) -> tuple[Fraction, ...]:
    """Solve the square nonsingular system a@x = v exactly."""
    n = len(a)
    aug = [[Fraction(x) for x in row] + [Fraction(v[i])] for i, row in enumerate(a)]
    for c in range(n):
        piv = next((i for i in range(c, n) if aug[i][c]), None)
        if piv is None:
            raise ValueError("singular system")
        aug[c], aug[piv] = aug[piv], aug[c]
        inv = 1 / aug[c][c]
        aug[c] = [x * inv for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return tuple(aug[i][n] for i in range(n))


def common_denominator(m) -> int:
    out = 1
    for row in m:
        for x in row:
            out = lcm(out, Fraction(x).denominator)
    return out


def hnf_rational(m: RatMat) -> RatMat:
    """Canonical (HNF) basis of the column span of a rational lattice."""
    scale = common_denominator(m)
    ints = freeze(tuple(int(x * scale) for x in row) for row in m)
    h = hnf(ints)
    return freeze(tuple(Fraction(x, scale) for x in row) for row in h)


def in_lattice(basis, v) -> bool:
    """Whether vector v lies in the lattice generated by the columns of basis."""
    coords = solve(basis, v)
    return all(x.denominator == 1 for x in coords)


def lattice_intersect(b1: RatMat, b2: RatMat) -> RatMat:
    """Basis (columns) of the intersection of two full-rank lattices.

    Solves b1@x = b2@y over the integers; the x-parts of the solution lattice
    give the intersection in b1-coordinates.  Each returned column is checked
    for membership in both inputs.
    """
    n = len(b1)
    if len(b2) != n:
        raise ValueError("ambient dimensions differ")
    if rank(b1) != n or rank(b2) != n:
        raise ValueError("rank-deficient lattice basis")
    scale = lcm(common_denominator(b1), common_denominator(b2))
    a = [[int(x * scale) for x in row] for row in b1]
    b = [[int(x * scale) for x in row] for row in b2]
    stacked = freeze(a[i] + [-x for x in b[i]] for i in range(n))
    kern = kernel_basis(stacked)
    assert len(kern) == n, "intersection of full-rank lattices must have full rank"
    cols = []
    b1t = transpose(b1)
    for k in kern:
        x = k[: len(b1t)]
        cols.append(tuple(sum(Fraction(xi) * b1t[i][j] for i, xi in enumerate(x))
                          for j in range(n)))
    inter = hnf_rational(transpose(freeze(cols)))
    for col in transpose(inter):
        assert in_lattice(b1, col) and in_lattice(b2, col)
    return inter


def lattice_index(sub: RatMat, sup: RatMat) -> int:
    """Index [sup : sub] of a full-rank sublattice; rejects non-containment."""
    n = len(sub)
    coords = []
    for col in transpose(sub):
        x = solve(sup, col)
        if any(c.denominator != 1 for c in x):
            raise ValueError("first lattice is not contained in the second")
        coords.append(x)
    d = det(freeze(coords))
    if d == 0:
        raise ValueError("sublattice is rank-deficient")
    assert d.denominator == 1
    return abs(int(d))
