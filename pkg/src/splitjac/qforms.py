"""Positive definite quaternary forms: evaluation, value sets, equivalence.

A form is a symmetric Gram matrix G with q(v) = v^T G v, so the diagonal
entries are the square coefficients and the off-diagonal entries are half
the cross coefficients (integral for all forms handled here).

Short vectors are enumerated by exact completion of squares over the
rationals; the integer ranges at each level come from integer square roots
of cleared-denominator bounds, so there are no tolerances anywhere.
Equivalence testing is plain backtracking that maps a Gram basis onto
norm- and inner-product-matched short vectors, after cheap determinant and
value-count prefilters; an exhausted search is a proof of inequivalence.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from . import intlinalg as la

#: The four reference forms, Gram matrices in the (w, x, y, z) basis.
Q1 = (
    (2, 0, 0, 0),
    (0, 3, 1, 0),
    (0, 1, 3, 0),
    (0, 0, 0, 4),
)
Q2 = (
    (2, 0, 0, 1),
    (0, 2, 1, 0),
    (0, 1, 3, 0),
    (1, 0, 0, 3),
)
Q3 = (
    (2, 1, 1, 0),
    (1, 3, 0, 1),
    (1, 0, 3, 1),
    (0, 1, 1, 4),
)
Q4 = (
    (2, -1, 0, 1),
    (-1, 3, 1, 0),
    (0, 1, 4, 2),
    (1, 0, 2, 6),
)

REFERENCE_FORMS: dict[int, "QForm4"] = {}


@dataclass(frozen=True)
class QForm4:
    """Positive definite integral quaternary form given by its Gram matrix."""

    gram: la.IntMat

    def __post_init__(self):
        g = la.freeze(self.gram)
        object.__setattr__(self, "gram", g)
        assert len(g) == 4 and all(len(row) == 4 for row in g)
        assert all(g[i][j] == g[j][i] for i in range(4) for j in range(4))
        for k in range(1, 5):
            assert la.det(tuple(row[:k] for row in g[:k])) > 0, "form not positive definite"

    def evaluate(self, v) -> int:
        return evaluate(self.gram, v)

    def det(self) -> int:
        return int(la.det(self.gram))


def evaluate(gram, v):
    """q(v) = v^T G v."""
    n = len(gram)
    return sum(gram[i][j] * v[i] * v[j] for i in range(n) for j in range(n))


def _cholesky(gram):
    """Exact decomposition q(v) = sum_i D[i] * (v_i + sum_{j>i} R[i][j] v_j)^2."""
    n = len(gram)
    a = [[Fraction(gram[i][j]) for j in range(n)] for i in range(n)]
    d = [Fraction(0)] * n
    r = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        d[i] = a[i][i]
        if d[i] <= 0:
            raise ValueError("form is not positive definite")
        for j in range(i + 1, n):
            r[i][j] = a[i][j] / d[i]
        for j in range(i + 1, n):
            for k in range(j, n):
                a[j][k] -= a[i][j] * a[i][k] / d[i]
                a[k][j] = a[j][k]
    return d, r


def _int_range(center: Fraction, cap: Fraction):
    """All integers t with (t + center)^2 <= cap, exactly."""
    if cap < 0:
        return range(0)
    p, q = center.numerator, center.denominator
    s, u = cap.numerator, cap.denominator
    amax = isqrt(s * q * q // u)
    lo = -((amax + p) // q)
    hi = (amax - p) // q
    return range(lo, hi + 1)


def short_vectors(gram, bound):
    """Nonzero vectors v with q(v) <= bound, one per +-v pair.

    The representative has its trailing nonzero coordinate positive.  Yields
    (vector, value) with the value exact (a Fraction for rational input).
    """
    n = len(gram)
    d, r = _cholesky(gram)
    vec = [0] * n
    out = []

    def descend(i: int, rem: Fraction, leading_zero: bool):
        center = sum(r[i][j] * vec[j] for j in range(i + 1, n))
        for t in _int_range(center, rem / d[i]):
            if leading_zero and t < 0:
                continue
            vec[i] = t
            used = d[i] * (t + center) ** 2
            still_zero = leading_zero and t == 0
            if i == 0:
                if not still_zero:
                    out.append((tuple(vec), bound - (rem - used)))
            else:
                descend(i - 1, rem - used, still_zero)
        vec[i] = 0

    descend(n - 1, Fraction(bound), True)
    return out


def short_vector_values(gram, bound) -> set:
    """Set of nonzero values taken by the form up to bound."""
    return {val for _, val in short_vectors(gram, bound)}


def represented(form: "QForm4 | la.IntMat", bound: int) -> frozenset[int]:
    """All nonzero represented integers <= bound."""
    gram = form.gram if isinstance(form, QForm4) else form
    return frozenset(int(v) for v in short_vector_values(gram, bound))


def value_counts(gram, bound) -> dict:
    """Number of vectors (counting +-v separately) per value <= bound."""
    counts: dict = {}
    for _, val in short_vectors(gram, bound):
        counts[val] = counts.get(val, 0) + 2
    return counts


def _dot(u, gram, v) -> int:
    n = len(gram)
    return sum(u[i] * gram[i][j] * v[j] for i in range(n) for j in range(n))


_PREFILTER_BOUND = 12  # twice the largest square coefficient in play


def equivalent(f1: QForm4, f2: QForm4):
    """Unimodular U with U^T G1 U = G2, or None if no isometry exists.

    Backtracking over short vectors of f1 matched against the Gram data of
    f2; determinant and value-count prefilters only short-circuit, the
    exhausted search itself is the proof of inequivalence.
    """
    g1, g2 = f1.gram, f2.gram
    if f1.det() != f2.det():
        return None
    if value_counts(g1, _PREFILTER_BOUND) != value_counts(g2, _PREFILTER_BOUND):
        return None
    maxdiag = max(g2[i][i] for i in range(4))
    by_value: dict[int, list] = {}
    for v, val in short_vectors(g1, maxdiag):
        by_value.setdefault(int(val), []).append(v)
        by_value[int(val)].append(tuple(-x for x in v))
    chosen: list = []

    def extend(j: int):
        for v in by_value.get(g2[j][j], ()):
            if any(_dot(v, g1, chosen[k]) != g2[j][k] for k in range(j)):
                continue
            chosen.append(v)
            if j == 3:
                u = la.transpose(tuple(chosen))
                if abs(la.det(u)) == 1:
                    return u
            else:
                found = extend(j + 1)
                if found is not None:
                    return found
            chosen.pop()
        return None

    u = extend(0)
    if u is None:
        return None
    u = la.freeze(u)
    assert la.matmul(la.transpose(u), la.matmul(g1, u)) == la.freeze(g2)
    assert abs(la.det(u)) == 1
    return u


for _i, _g in enumerate((Q1, Q2, Q3, Q4), start=1):
    REFERENCE_FORMS[_i] = QForm4(_g)
