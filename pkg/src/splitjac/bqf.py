"""Binary quadratic forms, CM points, and strict fundamental domains.

Conventions, fixed once for the whole package:

* Strict fundamental domain F1 for the full modular group:
      {|z| > 1, -1/2 <= Re z < 1/2}  union  {|z| = 1, -1/2 <= Re z <= 0},
  i.e. left vertical edge and left half of the unit arc included, right
  versions excluded.  Roots of reduced forms (with the usual b >= 0 rule on
  the boundary) land exactly in this set.

* Strict fundamental domain F2 for the level-2 congruence subgroup: the
  region -1/2 <= Re z < 3/2 above the arcs |z+1| = 1 (excluded), |z-1/3| =
  1/3 (included), |z-2/3| = 1/3 (excluded) and |z-2| = 1 (included), with the
  corner (-1+sqrt(-3))/2 included and its translates (3+sqrt(-3))/6 and
  (3+sqrt(-3))/2 excluded.  The closure of F2 is tiled by the images of the
  closure of F1 under the six maps z, -1/z, -1/(z-1), z/(z+1), (z-1)/z, z+1,
  which represent the six cosets of the level-2 subgroup.

All boundary decisions are exact rational comparisons; nothing is ever
resolved numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd, isqrt

from .quadfield import Disc, KElem, Mat2, as_disc, mobius

IDENTITY: Mat2 = ((1, 0), (0, 1))
S_MAT: Mat2 = ((0, -1), (1, 0))


def mat2_mul(m: Mat2, n: Mat2) -> Mat2:
    (a, b), (c, d) = m
    (e, f), (g, h) = n
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat2_det(m: Mat2) -> int:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mat2_inv(m: Mat2) -> Mat2:
    (a, b), (c, d) = m
    det = a * d - b * c
    if det == 1:
        return ((d, -b), (-c, a))
    if det == -1:
        return ((-d, b), (c, -a))
    raise ValueError("matrix is not unimodular")


def mat2_mod2(m: Mat2) -> Mat2:
    return ((m[0][0] % 2, m[0][1] % 2), (m[1][0] % 2, m[1][1] % 2))


# -- binary quadratic forms ------------------------------------------------


@dataclass(frozen=True)
class BQF:
    """Positive definite integral binary form a*x^2 + b*x*y + c*y^2."""

    a: int
    b: int
    c: int

    def __post_init__(self):
        if self.disc >= 0:
            raise ValueError("form is not definite")
        if self.a <= 0:
            raise ValueError("form is not positive")

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    @property
    def is_primitive(self) -> bool:
        return gcd(gcd(self.a, self.b), self.c) == 1

    @property
    def is_reduced(self) -> bool:
        ok = abs(self.b) <= self.a <= self.c
        if ok and (abs(self.b) == self.a or self.a == self.c):
            ok = self.b >= 0
        return ok

    def root(self) -> KElem:
        """The root (-b + sqrt(disc))/(2a) in the upper half-plane."""
        s = Disc(self.disc).sqrt_elem()
        return (s - self.b) / (2 * self.a)


@lru_cache(maxsize=None)
def reduced_forms(delta) -> tuple[BQF, ...]:
    """All reduced primitive forms of discriminant delta; count is h(delta)."""
    delta = as_disc(delta).value
    out = []
    bmax = isqrt(-delta // 3)
    for b in range(-bmax, bmax + 1):
        if (b - delta) % 2:
            continue
        ac4 = b * b - delta
        if ac4 % 4:
            continue
        ac = ac4 // 4
        for a in range(max(abs(b), 1), isqrt(ac) + 1):
            if ac % a:
                continue
            c = ac // a
            form = BQF(a, b, c)
            if form.is_reduced and form.is_primitive:
                out.append(form)
    return tuple(sorted(out, key=lambda f: (f.a, f.b, f.c)))


def class_number(delta) -> int:
    return len(reduced_forms(delta))


# -- strict fundamental domain F1 -------------------------------------------


@dataclass(frozen=True)
class CMPoint:
    """An exact upper-half-plane point, optionally tagged with its domain."""

    z: KElem
    domain_tag: str | None = None

    def __post_init__(self):
        if self.z.im_coeff <= 0:
            raise ValueError("point is not in the upper half-plane")


def _as_elem(z) -> KElem:
    return z.z if isinstance(z, CMPoint) else z


def in_F1(z) -> bool:
    z = _as_elem(z)
    if z.im_coeff <= 0:
        return False
    half = Fraction(1, 2)
    n = z.abs2()
    if n > 1:
        return -half <= z.re < half
    if n == 1:
        return -half <= z.re <= 0
    return False


def reduce_to_F1(z) -> tuple[KElem, Mat2]:
    """Gauss-reduce z into strict F1; returns (z', m) with z' = m(z)."""
    z = _as_elem(z)
    if z.im_coeff <= 0:
        raise ValueError("point is not in the upper half-plane")
    m = IDENTITY
    while True:
        t = floor(z.re + Fraction(1, 2))
        if t:
            z = z - t
            m = mat2_mul(((1, -t), (0, 1)), m)
        n = z.abs2()
        if n < 1 or (n == 1 and z.re > 0):
            z = -z.inv()
            m = mat2_mul(S_MAT, m)
        else:
            break
    assert in_F1(z)
    return z, m


def form_class_points(delta) -> tuple[CMPoint, ...]:
    """One strict-F1 point per ideal class: the roots of the reduced forms.

    Works for any class number; the roots land in strict F1 by construction.
    """
    points = []
    for form in reduced_forms(delta):
        z = form.root()
        assert in_F1(z)
        points.append(CMPoint(z, "F1"))
    return tuple(points)


def cm_points_F1(delta) -> tuple[CMPoint, ...]:
    """Class points for a discriminant of class number 1 or 2.

    The classification survivors all have class number at most 2; anything
    larger is out of scope here (use :func:`form_class_points` for sweeps
    over wider input data).
    """
    points = form_class_points(delta)
    if not 1 <= len(points) <= 2:
        raise ValueError(f"class number {len(points)} out of scope for {delta}")
    return points


# -- the six level-2 cosets and strict F2 ------------------------------------

TILES: tuple[tuple[str, Mat2], ...] = (
    ("z", IDENTITY),
    ("-1/z", S_MAT),
    ("-1/(z-1)", ((0, -1), (1, -1))),
    ("z/(z+1)", ((1, 0), (1, 1))),
    ("(z-1)/z", ((1, -1), (1, 0))),
    ("z+1", ((1, 1), (0, 1))),
)

_TILE_BY_MOD2 = {mat2_mod2(m): m for _, m in TILES}
assert len(_TILE_BY_MOD2) == 6


def gamma2_tiles(tau) -> tuple[tuple[str, CMPoint], ...]:
    """Images of a strict-F1 point under the six coset maps.

    These are the candidate second periods attached to a fixed curve class;
    they cover every level-2 class in the full-modular-group orbit.
    """
    tau = _as_elem(tau)
    if not in_F1(tau):
        raise ValueError("tile expansion expects a strict-F1 representative")
    return tuple((label, CMPoint(mobius(m, tau))) for label, m in TILES)


_RHO = KElem(-3, Fraction(-1, 2), Fraction(1, 2))
_RHO_SMALL = KElem(-3, Fraction(1, 2), Fraction(1, 6))  # (3+sqrt(-3))/6
_I = KElem(-1, Fraction(0), Fraction(1))


def _abs2_shift(z: KElem, num: int, den: int) -> Fraction:
    """|z - num/den|^2, exactly."""
    re = z.re - Fraction(num, den)
    return re * re - z.d * z.im_coeff * z.im_coeff


def in_F2(z) -> bool:
    """Strict membership in F2, boundary rules as in the module docstring."""
    z = _as_elem(z)
    if z.im_coeff <= 0:
        return False
    half = Fraction(1, 2)
    if not -half <= z.re < 3 * half:
        return False
    ninth = Fraction(1, 9)
    left = _abs2_shift(z, -1, 1)
    if left < 1 or (left == 1 and z != _RHO):
        return False
    small_l = _abs2_shift(z, 1, 3)
    if small_l < ninth or (small_l == ninth and z == _RHO_SMALL):
        return False
    if _abs2_shift(z, 2, 3) <= ninth:
        return False
    if _abs2_shift(z, 2, 1) < 1:
        return False
    return True


def _stabilizer(z0: KElem) -> tuple[Mat2, ...]:
    """Projective stabilizer of a strict-F1 point; nontrivial only at i, rho."""
    if z0.d == -1 and z0 == _I:
        return (IDENTITY, S_MAT)
    if z0.d == -3 and z0 == _RHO:
        p = ((-1, -1), (1, 0))
        return (IDENTITY, p, mat2_mul(p, p))
    return (IDENTITY,)


def gamma1_equivalent(z, w) -> bool:
    """Equivalence under the full modular group."""
    z, w = _as_elem(z), _as_elem(w)
    if z.d != w.d:
        return False
    return reduce_to_F1(z)[0] == reduce_to_F1(w)[0]


def gamma2_equivalent(z, w) -> bool:
    """Equivalence under the level-2 congruence subgroup."""
    z, w = _as_elem(z), _as_elem(w)
    if z.d != w.d:
        return False
    z0, a = reduce_to_F1(z)
    w0, b = reduce_to_F1(w)
    if z0 != w0:
        return False
    binv = mat2_inv(b)
    return any(
        mat2_mod2(mat2_mul(mat2_mul(binv, s), a)) == mat2_mod2(IDENTITY)
        for s in _stabilizer(z0)
    )


def lattice_scalings(z1, z2) -> tuple[KElem, ...]:
    """All scalars lam (up to sign) with lam*<1, z1> = <1, z2>.

    Nonempty iff the points are equivalent under the full modular group;
    each witness comes from a unimodular g with z2 = g(z1), via
    lam = 1/(c*z1 + d).  Nontrivial unit groups enter through the
    stabilizer of the reduced point.
    """
    z1, z2 = _as_elem(z1), _as_elem(z2)
    if z1.d != z2.d:
        return ()
    z0, a = reduce_to_F1(z1)
    w0, b = reduce_to_F1(z2)
    if z0 != w0:
        return ()
    binv = mat2_inv(b)
    out = []
    for s in _stabilizer(z0):
        g = mat2_mul(binv, mat2_mul(s, a))
        assert mobius(g, z1) == z2
        lam = (g[1][0] * z1 + g[1][1]).inv()
        if lam not in out:
            out.append(lam)
    return tuple(out)


def canon_gamma2(z) -> KElem:
    """The unique strict-F2 representative of the level-2 orbit of z."""
    z = _as_elem(z)
    z0, a = reduce_to_F1(z)
    ainv = mat2_inv(a)
    candidates = []
    for s in _stabilizer(z0):
        key = mat2_mod2(mat2_mul(ainv, mat2_inv(s)))
        w = mobius(_TILE_BY_MOD2[key], z0)
        if w not in candidates:
            candidates.append(w)
    chosen = [w for w in candidates if in_F2(w)]
    assert len(chosen) == 1, f"strict domain violated at {z}: {candidates}"
    return chosen[0]
