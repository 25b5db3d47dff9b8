import random

import pytest

from splitjac import intlinalg as la
from splitjac.qforms import (
    Q1,
    Q2,
    Q3,
    Q4,
    REFERENCE_FORMS,
    QForm4,
    equivalent,
    evaluate,
    represented,
    short_vectors,
    value_counts,
)


def test_evaluate_examples():
    assert evaluate(Q1, (0, 0, 0, 1)) == 4
    assert evaluate(Q2, (1, 0, 0, 0)) == 2
    assert evaluate(Q4, (1, 1, 0, 0)) == 3


def test_evaluate_matches_polynomials():
    # Spot-check each Gram matrix against its polynomial.
    rng = random.Random(61)
    polys = {
        1: lambda w, x, y, z: 2 * w**2 + 3 * x**2 + 3 * y**2 + 4 * z**2 + 2 * x * y,
        2: lambda w, x, y, z: 2 * w**2 + 2 * x**2 + 3 * y**2 + 3 * z**2
        + 2 * w * z + 2 * x * y,
        3: lambda w, x, y, z: 2 * w**2 + 3 * x**2 + 3 * y**2 + 4 * z**2
        + 2 * w * x + 2 * w * y + 2 * x * z + 2 * y * z,
        4: lambda w, x, y, z: 2 * w**2 + 3 * x**2 + 4 * y**2 + 6 * z**2
        - 2 * w * x + 2 * w * z + 2 * x * y + 4 * y * z,
    }
    for fid, poly in polys.items():
        gram = REFERENCE_FORMS[fid].gram
        for _ in range(200):
            v = tuple(rng.randrange(-6, 7) for _ in range(4))
            assert evaluate(gram, v) == poly(*v)


def test_reference_determinants():
    dets = [int(la.det(g)) for g in (Q1, Q2, Q3, Q4)]
    assert dets == [64, 25, 36, 81]


def test_represented_examples():
    assert represented(REFERENCE_FORMS[1], 31) == frozenset(range(2, 32))
    two_id = la.freeze([[2 * (i == j) for j in range(4)] for i in range(4)])
    assert represented(two_id, 10) == frozenset({2, 4, 6, 8, 10})
    small = represented(REFERENCE_FORMS[3], 5)
    assert {2, 3, 4, 5} <= small


def test_short_vectors_are_canonical_and_complete():
    # One representative per +-v pair, trailing nonzero coordinate positive,
    # and complete against a brute-force box enumeration.
    bound = 12
    for fid in (1, 2, 3, 4):
        gram = REFERENCE_FORMS[fid].gram
        vecs = short_vectors(gram, bound)
        seen = set()
        for v, val in vecs:
            assert evaluate(gram, v) == val <= bound
            trailing = next(x for x in reversed(v) if x)
            assert trailing > 0
            assert v not in seen
            seen.add(v)
        brute = set()
        for w in range(-4, 5):
            for x in range(-4, 5):
                for y in range(-4, 5):
                    for z in range(-4, 5):
                        v = (w, x, y, z)
                        if v != (0, 0, 0, 0) and evaluate(gram, v) <= bound:
                            brute.add(v)
        assert {v for v, _ in vecs} | {tuple(-x for x in v) for v, _ in vecs} == brute


def test_equivalent_reflexive():
    u = equivalent(REFERENCE_FORMS[1], REFERENCE_FORMS[1])
    assert u is not None
    assert la.matmul(la.transpose(u), la.matmul(Q1, u)) == la.freeze(Q1)


def test_pairwise_inequivalent():
    for i in range(1, 5):
        for j in range(1, 5):
            witness = equivalent(REFERENCE_FORMS[i], REFERENCE_FORMS[j])
            if i == j:
                assert witness is not None
            else:
                assert witness is None


def test_equivalence_symmetry_and_transport():
    rng = random.Random(62)
    for fid in (1, 2, 3, 4):
        gram = REFERENCE_FORMS[fid].gram
        # mild random unimodular change of basis (the backtracking search is
        # scoped to forms with small diagonal, like everything in the sweep)
        u = [[1 if i == j else 0 for j in range(4)] for i in range(4)]
        for _ in range(2):
            i, j = rng.sample(range(4), 2)
            c = rng.choice((-1, 1))
            for k in range(4):
                u[i][k] += c * u[j][k]
        u = la.freeze(u)
        twisted = la.matmul(la.transpose(u), la.matmul(gram, u))
        f2 = QForm4(twisted)
        w = equivalent(f2, REFERENCE_FORMS[fid])
        assert w is not None
        assert abs(la.det(w)) == 1
        back = equivalent(REFERENCE_FORMS[fid], f2)
        assert back is not None
        assert represented(f2, 20) == represented(REFERENCE_FORMS[fid], 20)


def test_value_counts_prefilter_consistency():
    # Equivalent forms share value counts; the four reference forms are
    # already separated by counts up to 12.
    counts = [value_counts(g, 12) for g in (Q1, Q2, Q3, Q4)]
    for i in range(4):
        for j in range(i + 1, 4):
            assert counts[i] != counts[j]


def test_qform_validation():
    with pytest.raises(AssertionError):
        QForm4(((0, 0, 0, 0),) * 4)
    with pytest.raises(AssertionError):
        QForm4(((1, 2, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1)))
