"""Cyclic cubic number fields.

A monic integral cubic that is irreducible with square discriminant cuts
out a degree-3 Galois extension K of Q.  This module computes the exact
field discriminant of K (again a square), its conductor (the square root),
how rational primes decompose, the order-3 Galois action in closed form,
and the conjugate pair of cubic Dirichlet characters that corresponds to K.

The field discriminant comes from a per-prime ramification test rather than
a general maximal-order algorithm: for a cubic, p ramifies exactly when the
polynomial has a triple root mod p whose Newton polygon (after recentering
and rescaling as needed) is a single segment of non-integral slope.  Prime
splitting at primes dividing the index is decided by counting p-adic roots
exactly, again by recursive recentering; no heuristic fallback is needed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt, lcm

from .dirichlet import DirichletChar, galois_orbits
from .numcore import (Factorization, PolyQ, factor, is_perfect_square, primes_up_to,
                      sqrt_mod_prime)


class ReducibleCubicError(ValueError):
    """The cubic has a rational root: the would-be field splits over Q."""

    def __init__(self, message: str, roots=()):
        super().__init__(message)
        self.roots = tuple(roots)


class NonCyclicCubicError(ValueError):
    """Irreducible but non-square discriminant: the Galois closure is S3."""


class FieldConsistencyError(RuntimeError):
    """An exact invariant of cyclic cubic arithmetic failed."""


# ---------------------------------------------------------------------------
# polynomial arithmetic over F_p (dense int lists, low degree first)

def _fp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _fp_divmod(a: list[int], b: list[int], p: int):
    a = a[:]
    inv = pow(b[-1], -1, p)
    q = [0] * max(0, len(a) - len(b) + 1)
    while len(a) >= len(b):
        c = a[-1] * inv % p
        s = len(a) - len(b)
        q[s] = c
        for i, bc in enumerate(b):
            a[s + i] = (a[s + i] - c * bc) % p
        _fp_trim(a)
    return q, a


def _fp_gcd(a: list[int], b: list[int], p: int) -> list[int]:
    a, b = _fp_trim([c % p for c in a]), _fp_trim([c % p for c in b])
    while b:
        a, b = b, _fp_divmod(a, b, p)[1]
    if a:
        inv = pow(a[-1], -1, p)
        a = [c * inv % p for c in a]
    return a


def _fp_mulmod(a: list[int], b: list[int], m: list[int], p: int) -> list[int]:
    out = [0] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                out[i + j] = (out[i + j] + ai * bj) % p
    return _fp_divmod(_fp_trim(out), m, p)[1]


def _fp_xpow(e: int, m: list[int], p: int) -> list[int]:
    """x^e mod (m, p) by binary powering."""
    result = [1]
    base = _fp_divmod([0, 1], m, p)[1]
    while e:
        if e & 1:
            result = _fp_mulmod(result, base, m, p)
        base = _fp_mulmod(base, base, m, p)
        e >>= 1
    return result


def _fp_distinct_roots(f: list[int], p: int) -> int:
    """Number of distinct roots of f in F_p, via gcd with x^p - x."""
    f = _fp_trim([c % p for c in f])
    if len(f) <= 1:
        return 0
    xp = _fp_xpow(p, f, p)
    xp_minus_x = xp[:]
    while len(xp_minus_x) < 2:
        xp_minus_x.append(0)
    xp_minus_x[1] = (xp_minus_x[1] - 1) % p
    g = _fp_gcd(f, xp_minus_x, p)
    return len(g) - 1


def _fp_small_roots(f: list[int], p: int) -> list[int]:
    """All roots in F_p of a polynomial of degree <= 2 (exact formulas)."""
    f = _fp_trim([c % p for c in f])
    if len(f) <= 1:
        return []
    if len(f) == 2:
        return [-f[0] * pow(f[1], -1, p) % p]
    c, b, a = f[0], f[1], f[2]
    if p == 2:
        return [r for r in (0, 1) if (a * r * r + b * r + c) % 2 == 0]
    disc = (b * b - 4 * a * c) % p
    s = sqrt_mod_prime(disc, p)
    if s is None:
        return []
    inv = pow(2 * a, -1, p)
    roots = {(-b + s) * inv % p, (-b - s) * inv % p}
    return sorted(roots)


# ---------------------------------------------------------------------------
# exact p-adic root counting and ramification for cubics

def _compose_shift_scale(coeffs: list[int], r: int, p: int) -> list[int]:
    """Integer coefficients of f(r + p*x), by Horner in (r + p*x)."""
    out = [coeffs[-1]]
    for c in reversed(coeffs[:-1]):
        new = [r * out[0] + c]
        new.extend(r * out[i] + p * out[i - 1] for i in range(1, len(out)))
        new.append(p * out[-1])
        out = new
    return out


def _primitive(coeffs: list[int], p: int) -> list[int]:
    v = min(_val(c, p) for c in coeffs if c)
    return [c // p ** v for c in coeffs]


def _val(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of zero")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def _zp_root_count(coeffs: list[int], p: int, depth: int = 0) -> int:
    """Exact number of roots in the p-adic integers of an integer polynomial
    with no repeated roots over Q.  Simple residues lift uniquely; repeated
    residues are recentered to r + p*x and recursed."""
    if depth > 64:
        raise FieldConsistencyError("p-adic root isolation failed to terminate")
    f = _primitive(coeffs, p)
    fbar = _fp_trim([c % p for c in f])
    if not fbar:
        raise FieldConsistencyError("reduction collapsed after content removal")
    if len(fbar) == 1:
        # f is a nonzero constant mod p: nothing in this residue disc lifts
        return 0
    dbar = _fp_trim([i * fbar[i] % p for i in range(1, len(fbar))])
    if dbar:
        rad = _fp_gcd(fbar, dbar, p)
        repeated = _fp_small_roots(rad, p) if len(rad) > 1 else []
    else:
        # derivative vanished identically: fbar is a unit times the p-th
        # power of a linear factor (p = 3 cube or p = 2 square); x -> x^p
        # fixes F_p, so the root is -c0/lc itself
        r = -fbar[0] * pow(fbar[-1], -1, p) % p
        if sum(c * pow(r, i, p) for i, c in enumerate(fbar)) % p != 0:
            raise FieldConsistencyError("inseparable reduction without a root")
        repeated = [r]
    count = _fp_distinct_roots(f, p) - len(repeated)
    for r in repeated:
        count += _zp_root_count(_compose_shift_scale(f, r, p), p, depth + 1)
    return count


def _triple_root_mod_p(c0: int, c1: int, c2: int, p: int) -> int | None:
    """r with x^3 + c2 x^2 + c1 x + c0 = (x - r)^3 mod p, else None."""
    if p == 3:
        r = -c0 % 3
    else:
        r = -c2 * pow(3, -1, p) % p
    if (3 * r + c2) % p == 0 and (3 * r * r + 2 * c2 * r + c1) % p == 0 \
            and (r ** 3 + c2 * r * r + c1 * r + c0) % p == 0:
        return r
    return None


def _is_ramified(c0: int, c1: int, c2: int, p: int, depth: int = 0) -> bool:
    """Does p ramify in Q[x]/(x^3 + c2 x^2 + c1 x + c0)?  Assumes the cubic
    is irreducible with square discriminant, so the only decomposition types
    are totally split, inert, and totally ramified."""
    if depth > 64:
        raise FieldConsistencyError("ramification analysis failed to terminate")
    r = _triple_root_mod_p(c0, c1, c2, p)
    if r is None:
        # separable, or a double root next to a simple one: the simple root
        # lifts, forcing a degree-1 factor over Q_p, hence total splitting
        return False
    # recenter the triple root at 0
    d2 = c2 + 3 * r
    d1 = c1 + 2 * c2 * r + 3 * r * r
    d0 = c0 + c1 * r + c2 * r * r + r ** 3
    if d0 == 0:
        raise FieldConsistencyError("rational root slipped past irreducibility")
    v0 = _val(d0, p)
    v1 = _val(d1, p) if d1 else None
    v2 = _val(d2, p) if d2 else None
    if v0 == 1 or (v0 == 2 and (v1 is None or v1 >= 2)):
        return True          # one Newton segment, slope v0/3 with 3 not | v0
    if v0 >= 3 and (v1 is None or v1 >= 2) and (v2 is None or v2 >= 1):
        # slope >= 1 throughout: pull a factor of p out of the root
        return _is_ramified(d0 // p ** 3, d1 // p ** 2, d2 // p, p, depth + 1)
    raise FieldConsistencyError(
        f"Newton polygon at {p} splits 1+2: discriminant cannot be square")


# ---------------------------------------------------------------------------
# field elements

def _as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, int):
        return Fraction(v)
    raise TypeError(f"cannot coerce {v!r} into the field")


@dataclass(frozen=True)
class FieldElt:
    """Element c0 + c1*xi + c2*xi^2 of a cyclic cubic field with fixed
    generator xi.  Full exact field arithmetic, including division."""

    field: "CubicField"
    coeffs: tuple[Fraction, Fraction, Fraction]

    def _wrap(self, cs) -> "FieldElt":
        return FieldElt(self.field, tuple(cs))

    def _match(self, other):
        if isinstance(other, FieldElt):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("elements of different fields")
            return other
        return self._wrap((_as_fraction(other), Fraction(0), Fraction(0)))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def __add__(self, other):
        other = self._match(other)
        return self._wrap(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __neg__(self):
        return self._wrap(-a for a in self.coeffs)

    def __sub__(self, other):
        return self + (-self._match(other))

    def __rsub__(self, other):
        return -self + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            v = _as_fraction(other)
            return self._wrap(v * a for a in self.coeffs)
        other = self._match(other)
        a0, a1, a2 = self.coeffs
        b0, b1, b2 = other.coeffs
        raw = [a0 * b0, a0 * b1 + a1 * b0, a0 * b2 + a1 * b1 + a2 * b0,
               a1 * b2 + a2 * b1, a2 * b2]
        r3, r4 = self.field._xi3, self.field._xi4
        return self._wrap(raw[i] + raw[3] * r3[i] + raw[4] * r4[i] for i in range(3))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElt":
        if self.is_zero():
            raise ZeroDivisionError("field element is zero")
        g = PolyQ.of(*self.coeffs)
        # extended Euclid in Q[x] against the defining cubic
        r0, r1 = self.field.poly, g
        t0, t1 = PolyQ.of(), PolyQ.of(1)
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            t0, t1 = t1, t0 - q * t1
        if r0.degree != 0:
            raise FieldConsistencyError("defining cubic is not irreducible")
        inv = t0 * PolyQ.const(1 / r0.coeff(0))
        inv = inv % self.field.poly
        return self._wrap(inv.coeff(i) for i in range(3))

    def __truediv__(self, other):
        return self * self._match(other).inverse()

    def __rtruediv__(self, other):
        return self._match(other) * self.inverse()

    def __pow__(self, n: int) -> "FieldElt":
        if n < 0:
            return self.inverse() ** (-n)
        out = self.field.one()
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        try:
            other = self._match(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.field.poly, self.coeffs))

    def trace(self) -> Fraction:
        p1, p2 = self.field._power_traces
        return 3 * self.coeffs[0] + p1 * self.coeffs[1] + p2 * self.coeffs[2]

    def norm(self) -> Fraction:
        g = PolyQ.of(*self.coeffs)
        if g.is_zero():
            return Fraction(0)
        return self.field.poly.resultant(g)

    def __repr__(self):
        return f"FieldElt({self.coeffs[0]} + {self.coeffs[1]}*xi + {self.coeffs[2]}*xi^2)"


# ---------------------------------------------------------------------------
# the field itself

class CubicField:
    """A cyclic cubic field Q[x]/(f), f monic integral irreducible with
    square discriminant.  Build with from_cubic."""

    def __init__(self, poly: PolyQ, disc_factorization: Factorization | None = None):
        self.poly = poly
        self._c = [int(poly.coeff(i)) for i in range(4)]
        d = poly.discriminant()
        self.poly_disc = int(d)
        self.sqrt_poly_disc = isqrt(self.poly_disc)
        c0, c1, c2 = self._c[0], self._c[1], self._c[2]
        # reduction table: xi^3 and xi^4 in the power basis
        self._xi3 = (Fraction(-c0), Fraction(-c1), Fraction(-c2))
        self._xi4 = (Fraction(c0 * c2), Fraction(c1 * c2 - c0), Fraction(c2 * c2 - c1))
        self._power_traces = (Fraction(-c2), Fraction(c2 * c2 - 2 * c1))
        if disc_factorization is not None and disc_factorization.n != self.poly_disc:
            raise ValueError("supplied factorization does not match the discriminant")
        fac = disc_factorization if disc_factorization is not None \
            else factor(self.poly_disc)
        self.field_disc = self._field_disc_from(fac)
        self.conductor = isqrt(self.field_disc)
        if self.conductor ** 2 != self.field_disc:
            raise FieldConsistencyError("field discriminant is not a square")
        self.index = isqrt(self.poly_disc // self.field_disc)
        if self.index ** 2 * self.field_disc != self.poly_disc:
            raise FieldConsistencyError("index^2 does not divide the discriminant cleanly")
        self._sigma_xi: FieldElt | None = None

    # -- construction -------------------------------------------------------

    @classmethod
    def from_cubic(cls, poly, disc_factorization: Factorization | None = None
                   ) -> "CubicField":
        """Validate and normalize a monic cubic.  Rational coefficients are
        rescaled (x -> x/d) to an integral model of the same field."""
        if not isinstance(poly, PolyQ):
            poly = PolyQ.of(*poly)
        if poly.degree != 3 or poly.lc() != 1:
            raise ValueError("expected a monic cubic")
        dens = [poly.coeff(i).denominator for i in range(3)]
        if any(q != 1 for q in dens):
            # smallest d with d^(3-i) clearing the denominator of coeff i
            d = 1
            for q in factor(lcm(*dens)).primes:
                need = max(-(-factor(dens[i]).valuation(q) // (3 - i)) for i in range(3))
                d *= q ** need
            poly = PolyQ.of(poly.coeff(0) * d ** 3, poly.coeff(1) * d ** 2,
                            poly.coeff(2) * d, 1)
            disc_factorization = None
        roots = poly.rational_roots()
        if roots:
            raise ReducibleCubicError(
                f"cubic splits off rational roots {roots}", roots)
        d = poly.discriminant()
        if d <= 0 or not is_perfect_square(int(d)):
            raise NonCyclicCubicError(
                f"discriminant {d} is not a positive square: Galois group S3")
        return cls(poly, disc_factorization)

    def _field_disc_from(self, fac: Factorization) -> int:
        out = 1
        for p, e in fac.pairs:
            if e % 2 != 0:
                raise FieldConsistencyError(
                    f"square discriminant has odd valuation {e} at {p}")
            if _is_ramified(self._c[0], self._c[1], self._c[2], p):
                if p == 3:
                    if e < 4:
                        raise FieldConsistencyError(
                            "wild ramification at 3 needs valuation >= 4")
                    out *= 81
                elif p % 3 == 1:
                    out *= p * p
                else:
                    raise FieldConsistencyError(
                        f"prime {p} = 2 mod 3 cannot ramify in a cyclic cubic")
        return out

    # -- elements ------------------------------------------------------------

    def __call__(self, c0, c1=0, c2=0) -> FieldElt:
        return FieldElt(self, (_as_fraction(c0), _as_fraction(c1), _as_fraction(c2)))

    def gen(self) -> FieldElt:
        return self(0, 1)

    def zero(self) -> FieldElt:
        return self(0)

    def one(self) -> FieldElt:
        return self(1)

    def __eq__(self, other):
        return isinstance(other, CubicField) and self.poly == other.poly

    def __hash__(self):
        return hash(self.poly)

    def __repr__(self):
        return f"CubicField({self.poly}, conductor={self.conductor})"

    # -- Galois action -------------------------------------------------------

    def galois_action(self, e: FieldElt) -> FieldElt:
        """Image of e under the fixed generator sigma of Gal(K/Q).

        sigma(xi) is the second root of the defining cubic: dividing by
        (x - xi) leaves a quadratic whose discriminant is (root spread)^2,
        so its square root is +-sqrt(disc)/f'(xi), an element of K.  The
        positive branch of the integer square root of the discriminant is
        fixed once, making sigma deterministic."""
        if self._sigma_xi is None:
            xi = self.gen()
            c2 = self._c[2]
            fprime = 3 * xi * xi + 2 * c2 * xi + self._c[1]
            root_spread = self(self.sqrt_poly_disc) / fprime
            self._sigma_xi = (-xi - c2 + root_spread) / 2
            check = self._sigma_xi
            if self.poly(check) != self.zero():
                raise FieldConsistencyError("sigma(xi) is not a root")
        s = self._sigma_xi
        return e.coeffs[0] + e.coeffs[1] * s + e.coeffs[2] * s * s

    sigma = galois_action

    # -- arithmetic of primes --------------------------------------------------

    def splitting(self, p: int) -> str:
        """How p decomposes: 'split', 'inert' or 'ramified'.

        Ramified iff p divides the conductor.  Otherwise the exact count of
        p-adic roots of the defining cubic is 3 (split) or 0 (inert); primes
        dividing the index are handled by the recursive recentering in the
        root counter, not by reading the factorization mod p naively."""
        if self.conductor % p == 0:
            return "ramified"
        n = _zp_root_count(self._c, p)
        if n == 3:
            return "split"
        if n == 0:
            return "inert"
        raise FieldConsistencyError(
            f"{n} p-adic roots at {p}: impossible for a Galois cubic")

    def matching_character(self, p_bound: int = 200,
                           escalated_bound: int = 500) -> DirichletChar:
        """The canonical representative of the conjugate character pair cut
        out by this field: chi(p) = 1 exactly at split primes.  Tested
        against all good primes up to p_bound, escalating once if two pairs
        are still indistinguishable."""
        candidates = galois_orbits(self.conductor, 3)
        for bound in (p_bound, escalated_bound):
            survivors = []
            for chi in candidates:
                ok = True
                for p in primes_up_to(bound):
                    if self.conductor % p == 0:
                        continue
                    if (chi.value_exponent(p) == 0) != (self.splitting(p) == "split"):
                        ok = False
                        break
                if ok:
                    survivors.append(chi)
            if len(survivors) == 1:
                return survivors[0]
            if not survivors:
                raise FieldConsistencyError(
                    f"no order-3 character mod {self.conductor} matches the splitting data")
            candidates = survivors
        raise FieldConsistencyError(
            f"{len(candidates)} character pairs mod {self.conductor} agree up to "
            f"{escalated_bound}: cannot separate")

    def as_dict(self) -> dict:
        return {
            "cubic": [int(c) for c in self._c],
            "poly_disc": self.poly_disc,
            "field_disc": self.field_disc,
            "conductor": self.conductor,
            "index": self.index,
        }
