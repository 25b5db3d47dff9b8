"""The rank-4 period lattice of a split abelian surface and its degree form.

For exact points tau, sigma in the upper half-plane of the same imaginary
quadratic field, the lattice is generated inside K^2 by

    b1 = (1, 0),  b2 = (0, 1),  b3 = (tau/2, 1/2),  b4 = (1/2, sigma/2),

and carries the alternating pairing

    <z, w> = Tr(z1*conj(w1)/(b*delta) + z2*conj(w2)/(d*delta)),

where delta = sqrt(d) (purely imaginary under the fixed embedding), b and d
are the delta-coefficients of tau and sigma, and Tr is twice the rational
part.  On b1..b4 the pairing matrix is the standard symplectic matrix, which
is asserted for every lattice processed.

Maps to the curve with period lattice <1, tau> that fix base points are the
elements x of M = Lambda intersect tau^-1 Lambda; the degree of the map at x
is q(x) = <tau*x, x>, a positive definite integer-valued quadratic form on
the rank-4 module M.  Everything here is exact rational arithmetic.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import intlinalg as la
from .qforms import short_vector_values
from .quadfield import KElem

KVec = tuple[KElem, KElem]

SYMPLECTIC_GRAM: la.IntMat = (
    (0, 0, -1, 0),
    (0, 0, 0, -1),
    (1, 0, 0, 0),
    (0, 1, 0, 0),
)


@dataclass(frozen=True)
class PeriodLattice:
    tau: KElem
    sigma: KElem

    def __post_init__(self):
        if self.tau.d != self.sigma.d:
            raise ValueError("tau and sigma must lie in the same field")
        if self.tau.im_coeff <= 0 or self.sigma.im_coeff <= 0:
            raise ValueError("tau and sigma must be in the upper half-plane")

    @property
    def d(self) -> int:
        return self.tau.d

    def one(self) -> KElem:
        return KElem(self.d, 1, 0)

    def zero(self) -> KElem:
        return KElem(self.d, 0, 0)

    def basis(self) -> tuple[KVec, KVec, KVec, KVec]:
        one, zero = self.one(), self.zero()
        half = Fraction(1, 2)
        return (
            (one, zero),
            (zero, one),
            (self.tau * half, one * half),
            (one * half, self.sigma * half),
        )

    def basis_cols(self) -> la.RatMat:
        return la.transpose(tuple(_coords(v) for v in self.basis()))


def _coords(v: KVec) -> tuple[Fraction, Fraction, Fraction, Fraction]:
    return (v[0].a, v[0].b, v[1].a, v[1].b)


def _from_coords(d: int, c) -> KVec:
    return (KElem(d, c[0], c[1]), KElem(d, c[2], c[3]))


def _scale(v: KVec, s) -> KVec:
    return (v[0] * s, v[1] * s)


def _add(v: KVec, w: KVec) -> KVec:
    return (v[0] + w[0], v[1] + w[1])


@dataclass(frozen=True)
class Pairing:
    """The polarization data: tau = a + b*delta, sigma = c + d*delta."""

    tau: KElem
    sigma: KElem

    @property
    def a(self) -> Fraction:
        return self.tau.a

    @property
    def b(self) -> Fraction:
        return self.tau.b

    @property
    def c(self) -> Fraction:
        return self.sigma.a

    @property
    def dd(self) -> Fraction:
        return self.sigma.b

    def value(self, z: KVec, w: KVec) -> Fraction:
        """Exact value of the alternating form on a pair of K^2 vectors."""
        delta = KElem(self.tau.d, 0, 1)
        u = z[0] * w[0].conj() / (self.b * delta) + z[1] * w[1].conj() / (self.dd * delta)
        return u.trace()


def pairing_value(p: "Pairing | PeriodLattice", z: KVec, w: KVec) -> Fraction:
    if isinstance(p, PeriodLattice):
        p = Pairing(p.tau, p.sigma)
    return p.value(z, w)


def polarization_gram(lat: PeriodLattice) -> la.IntMat:
    """Matrix of the pairing on b1..b4; the principal-polarization check."""
    pairing = Pairing(lat.tau, lat.sigma)
    basis = lat.basis()
    rows = []
    for bi in basis:
        row = []
        for bj in basis:
            v = pairing.value(bi, bj)
            assert v.denominator == 1
            row.append(int(v))
        rows.append(tuple(row))
    return tuple(rows)


def maps_module(lat: PeriodLattice) -> tuple[KVec, KVec, KVec, KVec]:
    """Z-basis of M = Lambda intersect tau^-1 Lambda, fully verified.

    Each returned vector is checked to lie in Lambda and to stay in Lambda
    after multiplication by tau; the index [Lambda : M] annihilates the
    quotient, which is also checked.
    """
    cols = lat.basis_cols()
    tinv = lat.tau.inv()
    pulled = la.transpose(tuple(_coords(_scale(v, tinv)) for v in lat.basis()))
    inter = la.lattice_intersect(cols, pulled)
    cs = tuple(_from_coords(lat.d, col) for col in la.transpose(inter))
    for c in cs:
        assert la.in_lattice(cols, _coords(c))
        assert la.in_lattice(cols, _coords(_scale(c, lat.tau)))
    index = la.lattice_index(inter, cols)
    for v in lat.basis():
        assert la.in_lattice(inter, _coords(_scale(v, index)))
    return cs


@dataclass(frozen=True)
class DegreeForm:
    """Gram matrix of the degree form on the module of maps."""

    m_basis: tuple[KVec, KVec, KVec, KVec]
    gram: la.RatMat

    @property
    def is_integral(self) -> bool:
        return all(x.denominator == 1 for row in self.gram for x in row)

    def int_gram(self) -> la.IntMat:
        assert self.is_integral
        return tuple(tuple(int(x) for x in row) for row in self.gram)


def degree_gram(lat: PeriodLattice) -> DegreeForm:
    """Gram matrix of q(x) = <tau*x, x> on the basis of the maps module.

    q is integer-valued on the module (diagonal integral, off-diagonal at
    worst half-integral); positive definiteness is asserted, as a failure
    would indicate an upstream bug.
    """
    cs = maps_module(lat)
    pairing = Pairing(lat.tau, lat.sigma)

    def q(x: KVec) -> Fraction:
        return pairing.value(_scale(x, lat.tau), x)

    qs = [q(c) for c in cs]
    gram = []
    for i, ci in enumerate(cs):
        row = []
        for j, cj in enumerate(cs):
            if i == j:
                row.append(qs[i])
            else:
                row.append((q(_add(ci, cj)) - qs[i] - qs[j]) / 2)
        gram.append(tuple(row))
    gram = tuple(gram)
    for i in range(4):
        assert gram[i][i].denominator == 1 and gram[i][i] > 0
        for j in range(4):
            assert gram[i][j] == gram[j][i]
            assert (2 * gram[i][j]).denominator == 1
    for k in range(1, 5):
        minor = tuple(row[:k] for row in gram[:k])
        assert la.det(minor) > 0, "degree form is not positive definite"
    return DegreeForm(cs, gram)


def diag_isomorphic(l1: PeriodLattice, l2: PeriodLattice) -> bool:
    """Certified isomorphism test for two polarized period lattices.

    Searches for scalars (lam, mu) with lam*<1,tau1> = <1,tau2> and
    mu*<1,sigma1> = <1,sigma2> such that diag(lam, mu) maps the first
    lattice onto the second; the pairing transport is verified explicitly.
    A True result is therefore a certificate that the two lattices present
    the same polarized surface (with matching first-factor curve); False
    means no diagonal witness exists.
    """
    from .bqf import lattice_scalings

    if l1.d != l2.d:
        return False
    cols2 = l2.basis_cols()
    pairing1 = Pairing(l1.tau, l1.sigma)
    pairing2 = Pairing(l2.tau, l2.sigma)
    basis1 = l1.basis()
    for lam in lattice_scalings(l1.tau, l2.tau):
        for mu in lattice_scalings(l1.sigma, l2.sigma):
            imgs = [(lam * v[0], mu * v[1]) for v in basis1]
            if not all(la.in_lattice(cols2, _coords(v)) for v in imgs):
                continue
            icols = la.transpose(tuple(_coords(v) for v in imgs))
            if la.lattice_index(icols, cols2) != 1:
                continue
            for i, vi in enumerate(basis1):
                for j, vj in enumerate(basis1):
                    assert pairing2.value(imgs[i], imgs[j]) == pairing1.value(vi, vj)
            return True
    return False


def represented_small_values(form: DegreeForm, bound: int = 31) -> frozenset[int]:
    """Values of the degree form on nonzero integer vectors, up to bound."""
    values = short_vector_values(form.gram, bound)
    out = set()
    for v in values:
        assert Fraction(v).denominator == 1
        out.add(int(v))
    return frozenset(out)


def is_candidate(form: DegreeForm, bound: int = 31) -> bool:
    """True iff the degree form takes exactly the values 2..bound (and not 1)."""
    return represented_small_values(form, bound) == frozenset(range(2, bound + 1))
