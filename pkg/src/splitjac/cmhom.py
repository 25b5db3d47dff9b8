"""Hom-lattices between CM elliptic curves and the discriminant screen.

A CM elliptic curve is represented by its period lattice <1, omega> inside
an imaginary quadratic field; morphisms C/L1 -> C/L2 are the field elements
beta with beta*L1 contained in L2, and the degree of beta is
norm(beta) * covol(L1)/covol(L2), an integer.

The screen enumerates, for every admissible (discriminant, isogeny-degree)
input pair, the curves F reachable from E, computes the sets of
(degree, kernel-2-torsion) pairs realized by End(E) and Hom(E, F) up to
degree 62, and keeps the pair (E, F) only if every degree n from 2 to 31
splits as n = (m1 + m2)/2 with matching kernel 2-torsion counts.  Survivors
are reported as discriminant pairs together with an E = F flag.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt

from . import intlinalg as la
from .bqf import form_class_points, gamma1_equivalent
from .quadfield import KElem

#: Screen input data: if a genus-2 curve has maps of degrees 2, 3 and 4 to E,
#: then for some entry (p, delta) below the endomorphism ring of E has
#: discriminant delta and there is a cyclic isogeny of degree p from E to the
#: complementary curve F.  (p = 1 means F is isomorphic to E.)
CYCLIC_ISOGENY_TABLE: dict[int, tuple[int, ...]] = {
    1: (-3, -4, -7, -11, -12, -16, -19, -20, -24, -27, -28),
    2: (-4, -7, -8, -12, -15, -16, -20, -23, -24, -31, -36, -39, -40),
    3: (-3, -4, -8, -11, -12, -16, -19, -20),
    5: (-3, -4, -7, -8, -11, -12, -15, -16, -19, -31, -35, -40,
        -76, -91, -104, -115, -124, -131, -136, -139, -140),
}


@dataclass(frozen=True)
class CMLattice:
    """The lattice <1, omega> with omega in the upper half-plane."""

    omega: KElem

    def __post_init__(self):
        if self.omega.im_coeff <= 0:
            raise ValueError("lattice generator must have positive imaginary part")

    @property
    def d(self) -> int:
        return self.omega.d

    def basis_cols(self) -> la.RatMat:
        """Columns (1, 0) and (re omega, im-coeff omega) over Q^2."""
        w = self.omega
        return ((Fraction(1), w.a), (Fraction(0), w.b))

    def contains(self, x: KElem) -> bool:
        return la.in_lattice(self.basis_cols(), (x.a, x.b))


@dataclass(frozen=True)
class DegreePair:
    """A realized (degree, kernel 2-torsion count) pair; d is 1, 2 or 4."""

    m: int
    d: int


@dataclass(frozen=True)
class HomProfile:
    pairs: frozenset[DegreePair]
    basis: tuple[KElem, KElem]

    def degrees(self) -> frozenset[int]:
        return frozenset(p.m for p in self.pairs)


def _mul_matrix(w: KElem) -> la.RatMat:
    """Matrix of multiplication by w on Q^2 coordinates (re, sqrt(d)-part)."""
    return ((w.a, w.b * w.d), (w.b, w.a))


def hom_lattice(l1: CMLattice, l2: CMLattice) -> tuple[KElem, KElem]:
    """Z-basis of {beta : beta*L1 in L2}, canonicalized by HNF."""
    if l1.d != l2.d:
        raise ValueError("lattices live in different fields")
    lam2 = l2.basis_cols()
    w = _mul_matrix(l1.omega)
    n = l1.omega.norm()
    w_inv = ((w[1][1] / n, -w[0][1] / n), (-w[1][0] / n, w[0][0] / n))
    pulled = la.matmul(w_inv, lam2)
    inter = la.lattice_intersect(lam2, pulled)
    betas = tuple(KElem(l1.d, col[0], col[1]) for col in la.transpose(inter))
    for beta in betas:
        assert l2.contains(beta) and l2.contains(beta * l1.omega)
    return betas


def morphism_degree(beta: KElem, l1: CMLattice, l2: CMLattice) -> int:
    """Degree of the map C/L1 -> C/L2 induced by multiplication by beta."""
    if not (l2.contains(beta) and l2.contains(beta * l1.omega)):
        raise ValueError(f"{beta} does not map L1 into L2")
    deg = beta.norm() * l1.omega.im_coeff / l2.omega.im_coeff
    assert deg.denominator == 1
    return int(deg)


def kernel_two_torsion(beta: KElem, l1: CMLattice, l2: CMLattice) -> int:
    """Number of 2-torsion points of ker(beta) = beta^-1 L2 / L1.

    Computed as the index of L1 in (beta^-1 L2) intersected with (1/2) L1.
    """
    if beta.is_zero():
        raise ValueError("zero morphism has no finite kernel")
    if not (l2.contains(beta) and l2.contains(beta * l1.omega)):
        raise ValueError(f"{beta} does not map L1 into L2")
    binv = beta.inv()
    pre = tuple(
        ((x * binv).a, (x * binv).b) for x in (KElem(l2.d, 1, 0), l2.omega)
    )
    pre_cols = la.transpose(pre)
    half = tuple(tuple(x / 2 for x in row) for row in l1.basis_cols())
    inter = la.lattice_intersect(pre_cols, half)
    return la.lattice_index(l1.basis_cols(), inter)


def _beta_matrix(beta: KElem, l1: CMLattice, l2: CMLattice) -> tuple[tuple[int, int], ...]:
    """Integer matrix of beta: L1 -> L2 in the two lattice bases."""
    lam2 = l2.basis_cols()
    cols = []
    for gen in (KElem(l1.d, 1, 0), l1.omega):
        img = beta * gen
        x = la.solve(lam2, (img.a, img.b))
        assert all(c.denominator == 1 for c in x)
        cols.append(tuple(int(c) for c in x))
    return la.transpose(cols)


def _two_torsion_fast(beta: KElem, l1: CMLattice, l2: CMLattice) -> int:
    """Kernel 2-torsion via the elementary divisors of the beta matrix."""
    m = _beta_matrix(beta, l1, l2)
    entries = [m[0][0], m[0][1], m[1][0], m[1][1]]
    s1 = gcd(gcd(entries[0], entries[1]), gcd(entries[2], entries[3]))
    deg = abs(entries[0] * entries[3] - entries[1] * entries[2])
    assert s1 > 0 and deg % s1 == 0
    s2 = deg // s1
    assert s2 % s1 == 0
    return (2 if s1 % 2 == 0 else 1) * (2 if s2 % 2 == 0 else 1)


@lru_cache(maxsize=None)
def degree_profile(l1: CMLattice, l2: CMLattice, bound: int = 62) -> HomProfile:
    """All (m, d) pairs with m <= bound realized by the Hom-lattice.

    The zero morphism contributes (0, 4).  Enumeration runs over integer
    combinations of the Hom basis inside the exact degree bound; no floating
    point is involved anywhere.
    """
    b1, b2 = hom_lattice(l1, l2)
    ratio = l1.omega.im_coeff / l2.omega.im_coeff
    qa = ratio * b1.norm()
    qb = ratio * (b1 * b2.conj()).trace()
    qc = ratio * b2.norm()
    scale = 1
    for q in (qa, qb, qc):
        scale = scale * q.denominator // gcd(scale, q.denominator)
    a, b, c = int(qa * scale), int(qb * scale), int(qc * scale)
    cap = bound * scale
    disc4 = 4 * a * c - b * b
    assert disc4 > 0
    pairs = {DegreePair(0, 4)}
    ymax = isqrt(4 * a * cap // disc4)
    for y in range(0, ymax + 1):
        rad = 4 * a * cap - disc4 * y * y
        if rad < 0:
            continue
        s = isqrt(rad)
        xlo = (-b * y - s) // (2 * a) - 1
        xhi = (-b * y + s) // (2 * a) + 2
        for x in range(xlo, xhi):
            if y == 0 and x <= 0:
                continue
            val = a * x * x + b * x * y + c * y * y
            if val > cap:
                continue
            assert val % scale == 0
            m = val // scale
            beta = x * b1 + y * b2
            ktt = _two_torsion_fast(beta, l1, l2)
            assert morphism_degree(beta, l1, l2) == m
            pairs.add(DegreePair(m, ktt))
    return HomProfile(frozenset(pairs), (b1, b2))


# -- norm-form enumeration --------------------------------------------------


def norm_solutions(delta: int, n: int) -> list[tuple[int, int]]:
    """All integer (x, y) with norm x^2 + delta*x*y + (delta^2-delta)/4*y^2 = n.

    These are the coordinates of elements x + y*(delta + sqrt(delta))/2 of the
    order of discriminant delta.
    """
    if delta >= 0 or delta % 4 not in (0, 1):
        raise ValueError(f"not a negative discriminant: {delta}")
    sols = []
    if n == 0:
        return [(0, 0)]
    r = isqrt(n)
    if r * r == n:
        sols += [(r, 0), (-r, 0)]
    y = 1
    while True:
        t = 4 * n + delta * y * y
        if t < 0:
            break
        s = isqrt(t)
        if s * s == t and (s - delta * y) % 2 == 0:
            xs = {(s - delta * y) // 2, (-s - delta * y) // 2}
            for x in xs:
                sols += [(x, y), (-x, -y)]
        y += 1
    return sorted(set(sols))


def primitive_norm_discriminants(n: int) -> frozenset[int]:
    """Discriminants of orders containing a primitive element of norm n.

    A primitive element (coprime coordinates) of norm n is a cyclic isogeny
    of degree n, so this enumerates the possible endomorphism discriminants
    of a curve with a cyclic n-isogeny.  Only -4n <= delta < 0 can occur.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    out = set()
    for delta in range(-3, -4 * n - 1, -1):
        if delta % 4 not in (0, 1):
            continue
        if any(gcd(x, y) == 1 for x, y in norm_solutions(delta, n)):
            out.add(delta)
    return frozenset(out)


# -- isogeny neighbors and order identification ------------------------------


def p_neighbors(lat: CMLattice, p: int) -> tuple[CMLattice, ...]:
    """Targets of the cyclic degree-p isogenies from C/L, p in {1, 2, 3, 5}.

    For prime p these are the p+1 overlattices of index p, rescaled to the
    form <1, omega'>.
    """
    if p == 1:
        return (lat,)
    if p not in (2, 3, 5):
        raise ValueError(f"unsupported isogeny degree {p}")
    w = lat.omega
    out = [CMLattice(p * w)]
    for j in range(p):
        out.append(CMLattice((w + j) / p))
    return tuple(out)


def order_disc(lat: CMLattice) -> int:
    """Discriminant of the multiplier ring {beta : beta*L in L}.

    For an order with Z-basis (alpha, beta) the discriminant is
    (alpha*conj(beta) - conj(alpha)*beta)^2 = 4*d*det^2 with det the
    coordinate determinant of the basis.
    """
    b1, b2 = hom_lattice(lat, lat)
    assert la.in_lattice(((b1.a, b2.a), (b1.b, b2.b)), (1, 0)), "ring must contain 1"
    dd = b1.a * b2.b - b2.a * b1.b
    disc = 4 * lat.d * dd * dd
    assert disc.denominator == 1
    disc = int(disc)
    assert disc % 4 in (0, 1)
    return disc


def homothetic(l1: CMLattice, l2: CMLattice) -> bool:
    """Whether the lattices differ by a complex scalar (isomorphic curves)."""
    return gamma1_equivalent(l1.omega, l2.omega)


# -- the screen ---------------------------------------------------------------


def screen_pair(le: CMLattice, lf: CMLattice, *, nmax: int = 31, bound: int = 62) -> bool:
    """Degree-matching screen for the pair (E, F).

    True iff for every n in [2, nmax] there are (m1, d1) in the End(E)
    profile and (m2, d2) in the Hom(E, F) profile with d1 = d2 and
    m1 + m2 = 2n.
    """
    s_e = degree_profile(le, le, bound).pairs
    s_f = degree_profile(le, lf, bound).pairs
    f_set = {(p.m, p.d) for p in s_f}
    for n in range(2, nmax + 1):
        if not any((2 * n - p.m, p.d) in f_set for p in s_e if p.m <= 2 * n):
            return False
    return True


def screen_all(table: dict[int, tuple[int, ...]] | None = None) -> tuple[tuple[int, int, bool], ...]:
    """Run the screen over the whole input table.

    Returns the surviving (delta_E, delta_F, isomorphic) triples, one per
    discriminant pair, sorted by absolute discriminants.  All ideal classes
    of delta_E are tried (the outcome per class is conjugation-invariant, so
    this only adds redundancy); survivors are deduplicated by discriminant
    pair, and the isomorphy flag must be unambiguous for each pair.
    """
    if table is None:
        table = CYCLIC_ISOGENY_TABLE
    flags: dict[tuple[int, int], set[bool]] = {}
    for p, discs in table.items():
        for delta in discs:
            for pt in form_class_points(delta):
                le = CMLattice(pt.z)
                for lf in p_neighbors(le, p):
                    if not screen_pair(le, lf):
                        continue
                    delta_f = order_disc(lf)
                    flags.setdefault((delta, delta_f), set()).add(homothetic(le, lf))
    out = []
    for (de, df), iso in sorted(flags.items(), key=lambda kv: (-kv[0][0], -kv[0][1])):
        assert len(iso) == 1, f"ambiguous isomorphy flag for {(de, df)}"
        out.append((de, df, iso.pop()))
    return tuple(out)


# -- the excluded discriminant -59 -------------------------------------------


def disc59_check() -> dict:
    """Certify the arithmetic that rules the discriminant -59 out.

    Enumerates the elements of norm 35 in the order of discriminant -59,
    checks that they are exactly (+-9 +- sqrt(-59))/2, and that none of them
    is congruent to 1 modulo twice the order (i.e. (gamma-1)/2 never lies in
    the order).
    """
    delta = -59
    omega = KElem(delta, Fraction(1, 2), Fraction(1, 2))  # (1+sqrt(-59))/2
    order = CMLattice(omega)
    elements = []
    for x, y in norm_solutions(delta, 35):
        gamma = x + y * KElem(delta, Fraction(delta, 2), Fraction(1, 2))
        assert gamma.norm() == 35
        elements.append(gamma)
    expected = {
        KElem(delta, Fraction(sa * 9, 2), Fraction(sb, 2))
        for sa in (1, -1)
        for sb in (1, -1)
    }
    found = set(elements)
    assert found == expected, f"norm-35 elements {found} differ from expected"
    residues = []
    for gamma in sorted(found, key=lambda g: (g.a, g.b)):
        half = (gamma - 1) / 2
        is_unit_mod_2 = order.contains(half)
        residues.append({
            "element": str(gamma),
            "norm": int(gamma.norm()),
            "congruent_to_1_mod_2": is_unit_mod_2,
        })
    assert not any(r["congruent_to_1_mod_2"] for r in residues)
    return {
        "discriminant": delta,
        "norm": 35,
        "element_count": len(found),
        "elements": [r["element"] for r in residues],
        "residues": residues,
        "excluded": True,
    }
