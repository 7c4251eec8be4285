"""Line slices of a Weierstrass curve and the surfaces they sweep out.

Substituting the pencil of lines y = t x + u into a Weierstrass equation
leaves a monic cubic in x whose discriminant is a quartic in u.  Parameters
(t0, u) where that quartic is a rational square cut the curve in a
Galois-stable triple of points, so each such slice hands us a cyclic cubic
field together with a trace-zero point.  This module builds the slice
discriminant, searches fibers for square values, tracks the associated
jacobian family with its marked section over Q(sqrt(-3)), decides
solvability of the fiber conic by the norm criterion, carries the two
torsion pencils with their infinite-order certificates, and sweeps the
parameter grid of the conductor-37 slice family into a conductor census.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt

import sympy

from .cubicfield import CubicField
from .elliptic import Curve, is_nontorsion, on_curve
from .numcore import (BiPolyQ, Factorization, PolyQ, factor, sqrt_mod_prime)


class SurfaceError(Exception):
    """An exact identity that the slice geometry guarantees failed."""


def _sqrt_fraction(x: Fraction) -> Fraction | None:
    """Exact rational square root; numerator and denominator are tested
    separately, never through floats."""
    if x < 0:
        return None
    rn, rd = isqrt(x.numerator), isqrt(x.denominator)
    if rn * rn != x.numerator or rd * rd != x.denominator:
        return None
    return Fraction(rn, rd)


# ---------------------------------------------------------------------------
# arithmetic in Q(sqrt(-3)), just enough to drive the generic group law


class QuadElt:
    """a + b sqrt(-3) with rational parts."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = Fraction(a)
        self.b = Fraction(b)

    @staticmethod
    def _coerce(x):
        if isinstance(x, QuadElt):
            return x
        if isinstance(x, (int, Fraction)):
            return QuadElt(x)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElt(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __neg__(self):
        return QuadElt(-self.a, -self.b)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElt(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElt(o.a - self.a, o.b - self.b)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return QuadElt(self.a * o.a - 3 * self.b * o.b,
                       self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.a * self.a + 3 * self.b * self.b

    def conjugate(self) -> "QuadElt":
        return QuadElt(self.a, -self.b)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(-3))")
        return self * o.conjugate() * Fraction(1, n)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __eq__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.a == o.a and self.b == o.b

    def __hash__(self):
        return hash((self.a, self.b))

    def __repr__(self):
        return f"QuadElt({self.a!r}, {self.b!r})"


# ---------------------------------------------------------------------------
# the slice discriminant


def _slice_discriminant(curve: Curve) -> BiPolyQ:
    """Discriminant in x of the line slice y = t x + u, as a polynomial in
    (u, t).  Always a quartic in u with top coefficient -27."""
    u, t = BiPolyQ.u(), BiPolyQ.t()
    p = BiPolyQ.const(curve.a2) - t * t - BiPolyQ.const(curve.a1) * t
    q = (BiPolyQ.const(curve.a4) - 2 * t * u - BiPolyQ.const(curve.a1) * u
         - BiPolyQ.const(curve.a3) * t)
    r = BiPolyQ.const(curve.a6) - u * u - BiPolyQ.const(curve.a3) * u
    return (18 * p * q * r - 4 * p ** 3 * r + p * p * q * q - 4 * q ** 3
            - 27 * r * r)


class SurfaceModel:
    """A Weierstrass curve bundled with its slice discriminant."""

    def __init__(self, curve: Curve):
        self.curve = curve
        self.delta = _slice_discriminant(curve)
        if self.delta.deg_u != 4 or self.delta.coeff_u(4) != PolyQ.of(-27):
            raise SurfaceError("slice discriminant is not a (-27)-quartic in u")

    def fiber_quartic(self, t0) -> PolyQ:
        return self.delta.subs_t(Fraction(t0))


def delta_poly(curve: Curve) -> SurfaceModel:
    """Surface swept out by the slice discriminant of the given curve."""
    return SurfaceModel(curve)


def _slice_cubic(curve: Curve, t0, u) -> tuple[PolyQ, str]:
    """The monic cubic in x cut out by the line y = t0 x + u, with its
    splitting type.  On a square-discriminant slice the Galois group is
    cyclic, so one rational root forces all three; a lone rational root
    cannot occur."""
    t0, u = Fraction(t0), Fraction(u)
    p = curve.a2 - t0 * t0 - curve.a1 * t0
    q = curve.a4 - 2 * t0 * u - curve.a1 * u - curve.a3 * t0
    r = curve.a6 - u * u - curve.a3 * u
    cubic = PolyQ.of(r, q, p, 1)
    disc = cubic.discriminant()
    # dual route: resultant-based discriminant against the closed form
    if disc != (18 * p * q * r - 4 * p ** 3 * r + p * p * q * q
                - 4 * q ** 3 - 27 * r * r):
        raise SurfaceError("discriminant routes disagree on a slice cubic")
    if disc == 0:
        return cubic, "degenerate"
    roots = cubic.rational_roots()
    if len(roots) == 3:
        return cubic, "split-over-Q"
    if roots:
        raise SurfaceError("lone rational root on a square-discriminant slice")
    if _sqrt_fraction(disc) is None:
        raise SurfaceError("slice discriminant is not a square")
    return cubic, "cyclic-cubic"


@dataclass(frozen=True)
class FiberPoint:
    t0: Fraction
    u: Fraction
    delta: Fraction
    cubic: PolyQ
    classification: str
    good_fiber: bool


def extract_cubic(surface: SurfaceModel, fp: FiberPoint) -> tuple[PolyQ, str]:
    """Re-derive the slice cubic and splitting type at a fiber point after
    checking that its delta really squares to the slice discriminant there."""
    if fp.delta * fp.delta != surface.fiber_quartic(fp.t0)(fp.u):
        raise SurfaceError("fiber point does not lie on the surface")
    return _slice_cubic(surface.curve, fp.t0, fp.u)


def _farey(bound: int):
    """Ascending reduced fractions in (0, 1] with denominator <= bound."""
    a, b, c, d = 0, 1, 1, bound
    while c <= bound:
        k = (bound + b) // d
        a, b, c, d = c, d, k * c - a, k * d - b
        yield Fraction(a, b)


def _rational_heights(bound: int):
    """All reduced a/b with max(|a|, b) <= bound, walked out of the Farey
    sequence of [0, 1] by sign flips and inversion."""
    yield Fraction(0)
    for f in _farey(bound):
        yield f
        yield -f
        if f != 1:
            yield 1 / f
            yield -1 / f


def good_fiber(curve: Curve, t0) -> bool:
    """Whether the surface fiber over t0 is smooth.  The criterion lives on
    the short model y^2 = x^3 + A x + B, where the slope parameter picks up
    a shift of a1/2: the fiber degenerates exactly over slope zero and over
    the roots of the eighth-degree bad locus."""
    A = -Fraction(curve.c4, 48)
    B = -Fraction(curve.c6, 864)
    tau = Fraction(t0) + Fraction(curve.a1, 2)
    return tau != 0 and bad_locus(A, B)(tau) != 0


def fiber_search(surface: SurfaceModel, t0, height_bound: int) -> list[FiberPoint]:
    """All slice points (t0, u, delta) with u of height at most height_bound
    and delta^2 equal to the slice discriminant.  Both square roots are
    reported; points on degenerate fibers are kept but flagged."""
    t0 = Fraction(t0)
    quartic = surface.fiber_quartic(t0)
    good = good_fiber(surface.curve, t0)
    out = []
    for u in _rational_heights(height_bound):
        val = quartic(u)
        root = _sqrt_fraction(val) if val >= 0 else None
        if root is None:
            continue
        cubic, kind = _slice_cubic(surface.curve, t0, u)
        for d in sorted({root, -root}):
            out.append(FiberPoint(t0, u, d, cubic, kind, good))
    out.sort(key=lambda fp: (fp.u, fp.delta))
    return out


# ---------------------------------------------------------------------------
# the jacobian family of the slice fibration and its marked section


def jacobian_curve(A, B) -> tuple[PolyQ, PolyQ]:
    """Coefficients (a(t), b(t)) of the family y^2 = x^3 + a(t) x + b(t)
    whose fiber over t0 is the jacobian of the slice fiber of
    y^2 = x^3 + A x + B there."""
    A, B = Fraction(A), Fraction(B)
    if A == 0 and B == 0:
        raise ValueError("the base curve y^2 = x^3 is singular")
    a = PolyQ.of(-27 * (A ** 3 + 9 * B * B), 0, -54 * A * B, 0,
                 -18 * A * A, 0, 18 * B, 0, A)
    b = PolyQ.of(-243 * B * (A ** 3 + 6 * B * B), 0,
                 -54 * A * (2 * A ** 3 + 9 * B * B), 0, 135 * A * A * B, 0,
                 -270 * B * B, 0, -45 * A * B, 0, -4 * A * A, 0, B)
    return a, b


def gamma1(A, B) -> tuple[PolyQ, PolyQ]:
    """Marked section (X(t), sqrt(-3) Y(t)) of the jacobian family.  The
    second component is returned as the polynomial Y(t); the point identity
    -3 Y^2 = X^3 + a X + b is asserted exactly before returning."""
    A, B = Fraction(A), Fraction(B)
    aj, bj = jacobian_curve(A, B)
    X = PolyQ.of(-9 * B, 0, 5 * A, 0, 0, 0, Fraction(-1, 27))
    Y = PolyQ.of(0, -9 * A * A, 0, -12 * B, 0, Fraction(2, 3) * A, 0, 0, 0,
                 Fraction(1, 243))
    if -3 * Y * Y != X ** 3 + aj * X + bj:
        raise SurfaceError("marked section left the jacobian family")
    return X, Y


def gamma1_at(A, B, t0) -> tuple[Curve, tuple[Fraction, QuadElt]]:
    """The jacobian fiber over t0 with the marked point specialized, the
    y-coordinate landing in Q(sqrt(-3))."""
    aj, bj = jacobian_curve(A, B)
    X, Y = gamma1(A, B)
    t0 = Fraction(t0)
    curve = Curve((0, 0, 0, aj(t0), bj(t0)))
    return curve, (X(t0), QuadElt(0, Y(t0)))


def bad_locus(A, B) -> PolyQ:
    """Parameters t over which the slice fibration of y^2 = x^3 + A x + B
    degenerates."""
    A, B = Fraction(A), Fraction(B)
    return PolyQ.of(-27 * A * A, 0, 108 * B, 0, 18 * A, 0, 0, 0, 1)


# ---------------------------------------------------------------------------
# the genus-3 slice fiber and its exact smoothness verdict

_XI1, _XI2 = sympy.symbols("xi1 xi2")


def _partial(P: BiPolyQ, slot: int) -> BiPolyQ:
    out = {}
    for (i, j), c in P.terms.items():
        k = (i, j)[slot]
        if k:
            out[(i - 1, j) if slot == 0 else (i, j - 1)] = k * c
    return BiPolyQ(out)


def _to_sympy(P: BiPolyQ, x1, x2):
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator)
                            * x1 ** i * x2 ** j
                            for (i, j), c in P.terms.items()))


@dataclass(frozen=True)
class Genus3Fiber:
    A: Fraction
    B: Fraction
    t0: Fraction
    equation: BiPolyQ
    smooth: bool
    method: str


def genus3_curve(A, B, t0) -> Genus3Fiber:
    """Plane quartic fiber over t0 with an exact smoothness verdict.  The
    equation is a bivariate polynomial in the two slice roots, reusing the
    (u, t) container slots for them.  A coprime pair of elimination
    resultants certifies smoothness outright; when they share a factor the
    candidate locus need not extend to an actual singular point, so a
    Groebner basis settles those cases."""
    A, B, t0 = Fraction(A), Fraction(B), Fraction(t0)
    x1, x2 = BiPolyQ.u(), BiPolyQ.t()
    tt = t0 * t0
    F = ((x1 * x1 + x1 * x2 + x2 * x2 - tt * (x1 + x2) + A) ** 2
         - 4 * tt * x1 * x2 * (BiPolyQ.const(tt) - x1 - x2) - 4 * B * tt)
    sF = _to_sympy(F, _XI1, _XI2)
    sF1 = _to_sympy(_partial(F, 0), _XI1, _XI2)
    sF2 = _to_sympy(_partial(F, 1), _XI1, _XI2)
    # F is monic of degree 4 in xi2, so the resultants vanish exactly on
    # xi1-coordinates of common zeros; no leading-coefficient artifacts
    r1 = sympy.resultant(sF, sF1, _XI2)
    r2 = sympy.resultant(sF, sF2, _XI2)
    if r1 != 0 and r2 != 0 and sympy.degree(sympy.gcd(r1, r2), _XI1) == 0:
        return Genus3Fiber(A, B, t0, F, True, "resultant")
    basis = sympy.groebner([sF, sF1, sF2], _XI1, _XI2, order="grevlex")
    smooth = list(basis.exprs) == [sympy.Integer(1)]
    return Genus3Fiber(A, B, t0, F, smooth, "groebner")


# ---------------------------------------------------------------------------
# solvability of the fiber conic by the norm criterion


def _cornacchia_3(p: int) -> tuple[int, int]:
    """x, y with x^2 + 3 y^2 = p for a prime p = 1 mod 3."""
    r = sqrt_mod_prime(p - 3, p)
    r = max(r, p - r)
    a, b = p, r
    while b * b > p:
        a, b = b, a % b
    y2, rem = divmod(p - b * b, 3)
    y = isqrt(y2)
    if rem or y * y != y2:
        raise SurfaceError(f"descent failed to represent {p} by x^2 + 3 y^2")
    return b, y


def _represent_3(m: int) -> tuple[int, int]:
    """x, y with x^2 + 3 y^2 = m, assuming every prime p = 2 mod 3 divides m
    to an even power.  Prime representations are composed multiplicatively."""
    x, y = 1, 0
    for p, e in factor(m).pairs:
        if p % 3 == 2:
            if e % 2:
                raise ValueError(f"{p} divides {m} to an odd power")
            x, y = x * p ** (e // 2), y * p ** (e // 2)
            continue
        px, py = (0, 1) if p == 3 else _cornacchia_3(p)
        for _ in range(e):
            x, y = x * px - 3 * y * py, x * py + y * px
    return abs(x), abs(y)


@dataclass(frozen=True)
class ConicSolution:
    U: Fraction
    T: Fraction
    q: Fraction
    solvable: bool
    witness: tuple[Fraction, Fraction] | None

    def point(self, m) -> tuple[Fraction, Fraction]:
        """Chord through the witness with slope m, hitting the conic in one
        further rational point."""
        if not self.solvable:
            raise ValueError("the conic has no rational points")
        z0, w0 = self.witness
        m = Fraction(m)
        den = 1 + 3 * m * m
        return ((z0 * (3 * m * m - 1) - 6 * m * w0) / den,
                (w0 * (1 - 3 * m * m) - 2 * m * z0) / den)

    def u_value(self, m) -> Fraction:
        """Slice parameter carried by the pencil point at slope m."""
        return self.point(m)[1] + 2 * self.U ** 3 - self.T

    def u_parameter(self, u) -> Fraction | None:
        """A pencil slope whose point carries the slice parameter u, if one
        exists.  Both chord intersections share their u, so no rational u is
        ever missed."""
        if not self.solvable:
            return None
        z0, w0 = self.witness
        c = Fraction(u) - 2 * self.U ** 3 + self.T
        lead = 3 * (c + w0)
        if lead == 0:
            if z0 == 0:
                return Fraction(0) if c == w0 else None
            return (w0 - c) / (2 * z0)
        s = _sqrt_fraction(self.q - 3 * c * c) if self.q >= 3 * c * c else None
        if s is None:
            return None
        return (-z0 + s) / lead


def conic_norm_test(U, T) -> ConicSolution:
    """Decide z^2 + 3 w^2 = 12 U^3 (U^3 - T) over Q and produce a witness.
    Positivity plus even valuation at every prime p = 2 mod 3 is the whole
    criterion: the prime 3 takes care of itself by the product formula, and
    the form x^2 + 3 y^2 is alone in its genus, so local solvability
    everywhere already yields a rational point."""
    U, T = Fraction(U), Fraction(T)
    if 27 * T ** 3 * (U ** 3 - T) == 0:
        raise ValueError("slice family is singular at these parameters")
    q = 12 * U ** 3 * (U ** 3 - T)
    if q <= 0:
        return ConicSolution(U, T, q, False, None)
    for n in (q.numerator, q.denominator):
        for p, e in factor(n).pairs:
            if p % 3 == 2 and e % 2:
                return ConicSolution(U, T, q, False, None)
    x, y = _represent_3(q.numerator * q.denominator)
    z0 = Fraction(x, q.denominator)
    w0 = Fraction(y, q.denominator)
    if z0 * z0 + 3 * w0 * w0 != q:
        raise SurfaceError("witness composition drifted off the conic")
    return ConicSolution(U, T, q, True, (z0, w0))


# ---------------------------------------------------------------------------
# the two torsion pencils


@dataclass(frozen=True)
class FamilyFiber:
    kind: str
    lam: Fraction
    t0: Fraction
    a_invariants: tuple[Fraction, ...]
    point: tuple[Fraction, Fraction]
    curve: Curve | None
    nodal: bool
    infinite_order: bool


def _on_cubic(ai, P) -> bool:
    a1, a2, a3, a4, a6 = ai
    x, y = P
    return (y * y + a1 * x * y + a3 * y
            == x ** 3 + a2 * x * x + a4 * x + a6)


_NORM_ONE_UNITS = (
    QuadElt(1), QuadElt(-1),
    QuadElt(Fraction(1, 2), Fraction(1, 2)),
    QuadElt(Fraction(1, 2), Fraction(-1, 2)),
    QuadElt(Fraction(-1, 2), Fraction(1, 2)),
    QuadElt(Fraction(-1, 2), Fraction(-1, 2)),
)


def _nodal_infinite_order(ai, P) -> bool:
    """Infinite-order test on the smooth locus of a nodal cubic: push the
    point through the multiplicative uniformization at the node and ask
    whether it lands on a root of unity.  Rational tangents land in Q*,
    where torsion is {1, -1}; conjugate tangents over Q(sqrt(-3)) land in
    its norm-one group, where torsion is the six units."""
    a1, a2, a3, a4, a6 = ai
    if not _on_cubic(ai, P):
        raise SurfaceError("marked point fell off the nodal fiber")
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    g = PolyQ.of(Fraction(b6, 4), Fraction(b4, 2), Fraction(b2, 4), 1)
    common = g.gcd(g.derivative())
    if common.degree != 1:
        raise SurfaceError("fiber is not nodal")
    x0 = -common.coeff(0) / common.coeff(1)
    x1 = -g.coeff(2) - 2 * x0
    d = x0 - x1
    if d == 0:
        raise SurfaceError("cusp, not a node")
    x, y = P
    dx = x - x0
    y0 = y + (a1 * x + a3) / 2
    if dx == 0 and y0 == 0:
        raise ValueError("the marked point is the node itself")
    s = _sqrt_fraction(d)
    if s is not None:
        eta = (y0 - s * dx) / (y0 + s * dx)
        return eta not in (1, -1)
    c = _sqrt_fraction(-d / 3)
    if c is None:
        raise SurfaceError("node tangents lie outside Q and Q(sqrt(-3))")
    root = QuadElt(0, c)
    eta = (y0 - root * dx) / (y0 + root * dx)
    return eta not in _NORM_ONE_UNITS


def torsion_family(kind: str, lam) -> FamilyFiber:
    """Marked fiber of one of the two torsion pencils, with an exact
    infinite-order certificate for the marked point.  Kind "six-torsion"
    carries a rational point of order six away from its excluded parameters
    and sits over t0 = lam; kind "four-two-torsion" carries Z/4 x Z/2 and
    sits over t0 = 1.  The six-torsion pencil degenerates to a nodal cubic
    at lam = -1/2; that fiber is still returned, certified through the node
    instead of the curve."""
    lam = Fraction(lam)
    if kind == "six-torsion":
        ai = (2 * lam * lam + 8 * lam + 2,
              -2 * lam * (lam + 1) * (2 * lam * lam - lam - 4),
              -4 * lam * (7 * lam + 1) * (lam - 2) * (lam + 1) ** 2,
              108 * lam ** 4 * (lam + 1) ** 2,
              -216 * lam ** 5 * (2 * lam * lam - lam - 4) * (lam + 1) ** 3)
        P = (2 * lam * (lam + 1) * (2 * lam * lam - lam - 4), Fraction(0))
        if lam == Fraction(-1, 2):
            return FamilyFiber(kind, lam, lam, ai, P, None, True,
                               _nodal_infinite_order(ai, P))
        if lam * (1 + 9 * lam) * (2 * lam + 1) * (lam + 1) \
                * (lam ** 4 + 3 * lam ** 3 + 4 * lam ** 2 + 1) == 0:
            raise ValueError(f"excluded parameter {lam} for the six-torsion pencil")
        curve = Curve(ai)
        if not on_curve(curve, P):
            raise SurfaceError("marked point fell off the six-torsion pencil")
        return FamilyFiber(kind, lam, lam, ai, P, curve, False,
                           is_nontorsion(curve, P))
    if kind == "four-two-torsion":
        if lam in (0, 1, -1):
            raise ValueError(
                f"excluded parameter {lam} for the four-two-torsion pencil")
        s = lam * lam
        ai = (Fraction(0), Fraction(0), Fraction(0),
              27 * s * (-s ** 3 + 7 * s ** 2 + 5 * s - 27),
              27 * s * (2 * s ** 5 - 21 * s ** 4 + 204 * s ** 3
                        - 826 * s ** 2 + 1242 * s - 729))
        P = (3 * (s * s + 16 * s + 3), 27 * (7 * s * s + 10 * s - 1))
        curve = Curve(ai)
        if not on_curve(curve, P):
            raise SurfaceError("marked point fell off the four-two-torsion pencil")
        return FamilyFiber(kind, lam, Fraction(1), ai, P, curve, False,
                           is_nontorsion(curve, P))
    raise ValueError(f"unknown pencil kind: {kind!r}")


def torsion_base_curve(kind: str, lam) -> Curve:
    """Base curve whose slice surface carries the given torsion pencil.

    Kind "six-torsion" gives the universal curve with a rational point of
    order six at (0, 0); its slice surface is split over Q at (t0, u) =
    (lam, 0), where the pencil fiber lives.  Kind "four-two-torsion" gives
    y^2 = x(x + 1)(x + lam^2) with full rational two-torsion, split at
    (t0, u) = (1, lam^2)."""
    lam = Fraction(lam)
    if kind == "six-torsion":
        if lam * (lam + 1) * (9 * lam + 1) == 0:
            raise ValueError(
                f"excluded parameter {lam} for the six-torsion base")
        b = lam * (lam + 1)
        return Curve((1 - lam, -b, -b, Fraction(0), Fraction(0)))
    if kind == "four-two-torsion":
        if lam in (0, 1, -1):
            raise ValueError(
                f"excluded parameter {lam} for the four-two-torsion base")
        s = lam * lam
        return Curve((Fraction(0), 1 + s, Fraction(0), s, Fraction(0)))
    raise ValueError(f"unknown pencil kind: {kind!r}")


# ---------------------------------------------------------------------------
# the conductor-37 slice family and its conductor census

# y^2 + 4xy + y = x^3: the conductor-37 curve presented so that its t = 0
# fiber carries the rational slice points
E37B_SLICE = (4, 0, 1, 0, 0)


@dataclass(frozen=True)
class E37bFiber:
    r: Fraction | None
    u: Fraction
    delta: Fraction
    h1: int
    h2: int
    poly: PolyQ
    cubic: PolyQ
    field: CubicField
    curve: Curve
    point: tuple


def _disc_hint(h1: int, h2: int, g: int) -> Factorization:
    exps = {2: 10}
    for n in (h1, h2, abs(g)):
        for p, e in factor(n).pairs:
            exps[p] = exps.get(p, 0) + 2 * e
    return Factorization(tuple(sorted(exps.items())))


def _e37b_pair(a: int, b: int) -> E37bFiber:
    """Slice data for the coprime parameter pair (a, b); b = 0 is the point
    at infinity of the parameter line."""
    if gcd(a, b) != 1:
        raise ValueError("parameter pair must be coprime")
    h1 = 7 * a * a + 12 * a * b + 9 * b * b
    h2 = 9 * a * a - 12 * a * b + 7 * b * b
    g = 3 * a * a + a * b - 3 * b * b
    u = Fraction(h1, h2)
    delta = Fraction(32 * h1 * g, h2 * h2)
    curve = Curve(E37B_SLICE, label="37b-slice")
    cubic, kind = _slice_cubic(curve, 0, u)
    if delta * delta != cubic.discriminant():
        raise SurfaceError("slice point left the discriminant quartic")
    if kind != "cyclic-cubic":
        raise SurfaceError(f"parameter pair ({a}, {b}) gave a {kind} slice")
    poly = PolyQ.of(-16 * (a * a + b * b) * h1 * h2, -4 * h1 * h2, 0, 1)
    # the hint doubles as an exact identity check: the field constructor
    # verifies that 2^10 (h1 h2 g)^2 really is the cubic's discriminant
    field = CubicField.from_cubic(poly, disc_factorization=_disc_hint(h1, h2, g))
    xi = field.gen() / h2
    if cubic(xi) != field.zero():
        raise SurfaceError("integral model root does not satisfy the slice cubic")
    point = (xi, field(u))
    return E37bFiber(Fraction(a, b) if b else None, u, delta, h1, h2,
                     poly, cubic, field, curve, point)


def e37b_param(r) -> E37bFiber:
    """Cyclic-cubic slice above the rational parameter r: the t = 0 line
    through y^2 + 4xy + y = x^3 at height u(r), its field, and the
    trace-zero point with y-coordinate u."""
    r = Fraction(r)
    return _e37b_pair(r.numerator, r.denominator)


@dataclass(frozen=True)
class CensusFieldRow:
    a: int
    b: int
    h1: int
    h2: int
    squarefree: bool
    conductor: int
    new_field: bool


@dataclass(frozen=True)
class E37bCensus:
    height_bound: int
    max_conductor: int
    rows: tuple[CensusFieldRow, ...]
    conductors: tuple[int, ...]

    def csv(self) -> str:
        lines = ["a, b, H1, H2, squarefree-flag, conductor, new-field-flag"]
        for r in self.rows:
            lines.append(f"{r.a}, {r.b}, {r.h1}, {r.h2}, {int(r.squarefree)},"
                         f" {r.conductor}, {int(r.new_field)}")
        return "\n".join(lines) + "\n"


def census_37b(max_conductor: int, height_bound: int) -> E37bCensus:
    """Sweep the coprime parameter pairs of height up to height_bound,
    build every slice field, and collect the distinct conductors up to
    max_conductor.  The squarefree flag records whether h1 h2 is squarefree
    away from 2, 3 and 37; only flagged pairs feed the conductor count and
    the new-field marks, though every pair is kept as a row."""
    rows = []
    seen: set[int] = set()
    params = [(1, 0)] + [(a, b) for b in range(1, height_bound + 1)
                         for a in range(-height_bound, height_bound + 1)
                         if gcd(a, b) == 1]
    for a, b in params:
        fiber = _e37b_pair(a, b)
        exps: dict[int, int] = {}
        for n in (fiber.h1, fiber.h2):
            for p, e in factor(n).pairs:
                exps[p] = exps.get(p, 0) + e
        squarefree = all(e == 1 for p, e in exps.items()
                         if p not in (2, 3, 37))
        conductor = fiber.field.conductor
        new = squarefree and conductor not in seen
        rows.append(CensusFieldRow(a, b, fiber.h1, fiber.h2, squarefree,
                                   conductor, new))
        if squarefree:
            seen.add(conductor)
    conductors = tuple(sorted(c for c in seen if c <= max_conductor))
    return E37bCensus(height_bound, max_conductor, tuple(rows), conductors)
