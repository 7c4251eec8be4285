"""Exact arithmetic kernel shared by every other module.

Integer factorization (trial division plus deterministic Miller-Rabin and
Pollard rho, exact for inputs below 2^64), elements of Z[zeta_ell] in the
power basis, dense polynomials over Q in one and two variables, and the
float -> integer/rational recognition used when numerically computed
quantities are known to be algebraic.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt


class RecognitionError(ValueError):
    """A numeric value failed to snap to a nearby exact target."""

    def __init__(self, message: str, value=None, residual=None):
        super().__init__(message)
        self.value = value
        self.residual = residual


# ---------------------------------------------------------------------------
# primes and factorization

_TRIAL_LIMIT = 10 ** 6
# deterministic Miller-Rabin witness set, sufficient far beyond 2^64
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


@lru_cache(maxsize=8)
def primes_up_to(n: int) -> tuple[int, ...]:
    """All primes <= n, by sieve of Eratosthenes."""
    if n < 2:
        return ()
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p :: p] = bytearray(len(range(p * p, n + 1, p)))
    return tuple(i for i in range(2, n + 1) if sieve[i])


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_rho(n: int) -> int:
    """A nontrivial factor of composite odd n (Brent's cycle variant).

    The increment c is stepped deterministically so results are stable.
    """
    if n % 2 == 0:
        return 2
    for c in range(1, 100):
        x = y = 2
        d = 1
        f = lambda v: (v * v + c) % n
        count = 0
        while d == 1:
            x = f(x)
            y = f(f(y))
            d = gcd(abs(x - y), n)
            count += 1
            if count > 10 ** 7:
                break
        if d != n and d != 1:
            return d
    raise ArithmeticError(f"rho failed to split {n}")


@dataclass(frozen=True)
class Factorization:
    """Prime factorization as a sorted tuple of (p, e) pairs."""

    pairs: tuple[tuple[int, int], ...]

    @property
    def n(self) -> int:
        out = 1
        for p, e in self.pairs:
            out *= p ** e
        return out

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self.pairs)

    def is_squarefree(self) -> bool:
        return all(e == 1 for _, e in self.pairs)

    def radical(self) -> int:
        out = 1
        for p, _ in self.pairs:
            out *= p
        return out

    def valuation(self, p: int) -> int:
        for q, e in self.pairs:
            if q == p:
                return e
        return 0

    def __iter__(self):
        return iter(self.pairs)


def factor(n: int) -> Factorization:
    """Factor a positive integer exactly.

    Trial division by primes up to 10^6, then deterministic Miller-Rabin
    plus Pollard rho on the cofactor.  Exact for all n < 2^64 and in
    practice far beyond.
    """
    if n <= 0:
        raise ValueError("factor() expects a positive integer")
    pairs: dict[int, int] = {}
    m = n
    for p in primes_up_to(1000):
        if p * p > m:
            break
        while m % p == 0:
            pairs[p] = pairs.get(p, 0) + 1
            m //= p
    if m > 1 and not is_prime(m):
        # continue trial division in the mid range before falling back to rho
        p = 1009
        while p * p <= m and p <= _TRIAL_LIMIT:
            if m % p == 0:
                while m % p == 0:
                    pairs[p] = pairs.get(p, 0) + 1
                    m //= p
                if is_prime(m):
                    break
            p += 2
    stack = [m] if m > 1 else []
    while stack:
        m = stack.pop()
        if m == 1:
            continue
        if is_prime(m):
            pairs[m] = pairs.get(m, 0) + 1
            continue
        d = _pollard_rho(m)
        stack.append(d)
        stack.append(m // d)
    return Factorization(tuple(sorted(pairs.items())))


def is_squarefree(n: int) -> bool:
    return factor(n).is_squarefree()


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = isqrt(n)
    return r * r == n


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b)."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def sqrt_mod_prime(a: int, p: int) -> int | None:
    """A square root of a mod prime p, or None if a is not a residue."""
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # Tonelli-Shanks
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        t2, i = t, 0
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


# ---------------------------------------------------------------------------
# cyclotomic integers

@dataclass(frozen=True)
class CyclotomicInt:
    """Element of Z[zeta] for zeta a primitive ell-th root of unity, ell an
    odd prime, stored on the power basis 1, zeta, ..., zeta^(ell-2)."""

    ell: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if self.ell < 3 or not is_prime(self.ell):
            raise ValueError("ell must be an odd prime")
        if len(self.coeffs) != self.ell - 1:
            raise ValueError("power basis has length ell - 1")

    @classmethod
    def from_int(cls, ell: int, n: int) -> "CyclotomicInt":
        return cls(ell, (n,) + (0,) * (ell - 2))

    @classmethod
    def zeta_pow(cls, ell: int, k: int) -> "CyclotomicInt":
        """zeta^k reduced to the power basis (zeta^(ell-1) = -1-zeta-...)."""
        k %= ell
        if k < ell - 1:
            c = [0] * (ell - 1)
            c[k] = 1
            return cls(ell, tuple(c))
        return cls(ell, (-1,) * (ell - 1))

    @classmethod
    def zero(cls, ell: int) -> "CyclotomicInt":
        return cls(ell, (0,) * (ell - 1))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _check(self, other):
        if self.ell != other.ell:
            raise ValueError("mixed cyclotomic orders")

    def __add__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        self._check(other)
        return CyclotomicInt(self.ell, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "CyclotomicInt") -> "CyclotomicInt":
        self._check(other)
        return CyclotomicInt(self.ell, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "CyclotomicInt":
        return CyclotomicInt(self.ell, tuple(-a for a in self.coeffs))

    def __mul__(self, other) -> "CyclotomicInt":
        if isinstance(other, int):
            return CyclotomicInt(self.ell, tuple(a * other for a in self.coeffs))
        self._check(other)
        ell = self.ell
        acc = [0] * ell  # coefficients on zeta^0..zeta^(ell-1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    acc[(i + j) % ell] += a * b
        top = acc[ell - 1]
        return CyclotomicInt(ell, tuple(acc[i] - top for i in range(ell - 1)))

    __rmul__ = __mul__

    def galois(self, j: int) -> "CyclotomicInt":
        """Image under zeta -> zeta^j (j coprime to ell)."""
        if j % self.ell == 0:
            raise ValueError("j must be coprime to ell")
        out = CyclotomicInt.zero(self.ell)
        for i, a in enumerate(self.coeffs):
            if a:
                out = out + a * CyclotomicInt.zeta_pow(self.ell, i * j)
        return out

    def conjugate(self) -> "CyclotomicInt":
        return self.galois(self.ell - 1)

    def reduce_mod_lambda(self) -> int:
        """Reduction modulo the prime (1 - zeta): send zeta -> 1, land in Z/ell."""
        return sum(self.coeffs) % self.ell

    def evaluate(self, zeta_powers) -> complex:
        """Numeric embedding given precomputed powers zeta^0..zeta^(ell-1)."""
        return sum(a * zeta_powers[i] for i, a in enumerate(self.coeffs))


# ---------------------------------------------------------------------------
# dense polynomials over Q

def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class PolyQ:
    """Dense univariate polynomial over Q, coefficients low degree first."""

    coeffs: tuple[Fraction, ...]

    @classmethod
    def of(cls, *coeffs) -> "PolyQ":
        c = [_frac(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return cls(tuple(c))

    @classmethod
    def x(cls) -> "PolyQ":
        return cls.of(0, 1)

    @classmethod
    def const(cls, v) -> "PolyQ":
        return cls.of(v)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    def lc(self) -> Fraction:
        if self.is_zero():
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i: int) -> Fraction:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __add__(self, other) -> "PolyQ":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyQ.of(*(self.coeff(i) + other.coeff(i) for i in range(n)))

    def __sub__(self, other) -> "PolyQ":
        other = self._coerce(other)
        n = max(len(self.coeffs), len(other.coeffs))
        return PolyQ.of(*(self.coeff(i) - other.coeff(i) for i in range(n)))

    def __neg__(self) -> "PolyQ":
        return PolyQ(tuple(-a for a in self.coeffs))

    def __mul__(self, other) -> "PolyQ":
        if isinstance(other, (int, Fraction)):
            return PolyQ.of(*(a * other for a in self.coeffs))
        other = self._coerce(other)
        if self.is_zero() or other.is_zero():
            return PolyQ(())
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        out[i + j] += a * b
        return PolyQ.of(*out)

    __radd__ = __add__
    __rmul__ = __mul__

    def __rsub__(self, other) -> "PolyQ":
        return self._coerce(other) - self

    def __pow__(self, n: int) -> "PolyQ":
        out = PolyQ.of(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    @staticmethod
    def _coerce(v) -> "PolyQ":
        if isinstance(v, PolyQ):
            return v
        return PolyQ.of(v)

    def __call__(self, x):
        """Horner evaluation; x may live in any commutative Q-algebra."""
        if self.is_zero():
            return Fraction(0) if isinstance(x, (int, Fraction)) else 0 * x
        acc = None
        for a in reversed(self.coeffs):
            acc = a if acc is None else acc * x + a
        return acc

    def derivative(self) -> "PolyQ":
        return PolyQ.of(*(i * a for i, a in enumerate(self.coeffs) if i >= 1))

    def divmod(self, other: "PolyQ") -> tuple["PolyQ", "PolyQ"]:
        if other.is_zero():
            raise ZeroDivisionError
        q = [Fraction(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.coeffs)
        d, lc = other.degree, other.lc()
        while len(r) - 1 >= d and any(r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            f = r[-1] / lc
            q[k] = f
            for i, b in enumerate(other.coeffs):
                r[k + i] -= f * b
            r.pop()
        return PolyQ.of(*q), PolyQ.of(*r)

    def __mod__(self, other: "PolyQ") -> "PolyQ":
        return self.divmod(other)[1]

    def monic(self) -> "PolyQ":
        return self * (1 / self.lc())

    def gcd(self, other: "PolyQ") -> "PolyQ":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def resultant(self, other: "PolyQ") -> Fraction:
        """Resultant via the Sylvester matrix, exact over Q."""
        m, n = self.degree, other.degree
        if m < 0 or n < 0:
            return Fraction(0)
        if m == 0:
            return self.coeffs[0] ** n
        if n == 0:
            return other.coeffs[0] ** m
        size = m + n
        rows = []
        pc = list(reversed(self.coeffs))
        qc = list(reversed(other.coeffs))
        for i in range(n):
            rows.append([Fraction(0)] * i + pc + [Fraction(0)] * (size - m - 1 - i))
        for i in range(m):
            rows.append([Fraction(0)] * i + qc + [Fraction(0)] * (size - n - 1 - i))
        # fraction-free enough: plain Gaussian elimination over Fraction
        det = Fraction(1)
        for col in range(size):
            piv = next((r for r in range(col, size) if rows[r][col] != 0), None)
            if piv is None:
                return Fraction(0)
            if piv != col:
                rows[col], rows[piv] = rows[piv], rows[col]
                det = -det
            det *= rows[col][col]
            inv = 1 / rows[col][col]
            for r in range(col + 1, size):
                if rows[r][col]:
                    f = rows[r][col] * inv
                    for c in range(col, size):
                        rows[r][c] -= f * rows[col][c]
        return det

    def discriminant(self) -> Fraction:
        """disc(p) = (-1)^(n(n-1)/2) resultant(p, p') / lc(p)."""
        n = self.degree
        if n < 1:
            raise ValueError("discriminant needs degree >= 1")
        sign = -1 if (n * (n - 1) // 2) % 2 else 1
        return sign * self.resultant(self.derivative()) / self.lc()

    def rational_roots(self) -> list[Fraction]:
        """All rational roots (with multiplicity stripped), exact.  Any
        rational root of the primitive integer model, once scaled by the
        leading coefficient, is an integer root of a monic companion; those
        are found by lifting the simple roots modulo a well-chosen prime up
        past the coefficient bound, so nothing depends on factoring the
        constant term."""
        if self.is_zero():
            raise ValueError("zero polynomial")
        den = 1
        for c in self.coeffs:
            den = den * c.denominator // gcd(den, c.denominator)
        ic = [int(c * den) for c in self.coeffs]
        while ic and ic[0] == 0:
            ic.pop(0)  # factor out x; zero is a root
        roots = set()
        if len(ic) < len(self.coeffs):
            roots.add(Fraction(0))
        if len(ic) == 2:
            roots.add(Fraction(-ic[0], ic[1]))
        if len(ic) <= 2:
            return sorted(roots)
        lead = ic[-1]
        d = len(ic) - 1
        monic = [c * lead ** (d - 1 - i) for i, c in enumerate(ic[:-1])] + [1]
        for r in _monic_integer_roots(monic):
            roots.add(Fraction(r, lead))
        return sorted(roots)

    def __str__(self):
        if self.is_zero():
            return "0"
        parts = []
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            if i == 0:
                parts.append(str(a))
            elif i == 1:
                parts.append(f"{a}*x")
            else:
                parts.append(f"{a}*x^{i}")
        return " + ".join(parts)


def _squarefree_monic(coeffs: list[int]) -> list[int]:
    """Squarefree part of a monic integer polynomial; monic and integral
    again by Gauss's lemma."""
    p = PolyQ.of(*coeffs)
    g = p.gcd(p.derivative())
    if g.degree <= 0:
        return coeffs
    q, r = p.divmod(g)
    if not r.is_zero() or any(c.denominator != 1 for c in q.coeffs):
        raise ArithmeticError("squarefree part left the integers")
    return [int(c) for c in q.coeffs]


def _fp_coprime_to_derivative(coeffs: list[int], p: int) -> bool:
    """Whether the reduction mod p of a monic integer polynomial stays
    squarefree, i.e. is coprime to its derivative in F_p[x]."""

    def trim(v):
        while v and v[-1] % p == 0:
            v.pop()
        return v

    a = trim([c % p for c in coeffs])
    b = trim([(i * c) % p for i, c in enumerate(coeffs)][1:])
    while b:
        inv = pow(b[-1], p - 2, p)
        a = a[:]
        while len(a) >= len(b):
            f = a[-1] * inv % p
            off = len(a) - len(b)
            for i, bv in enumerate(b):
                a[off + i] = (a[off + i] - f * bv) % p
            a.pop()
            trim(a)
        a, b = b, trim(a)
    return len(a) == 1


def _monic_integer_roots(coeffs: list[int]) -> list[int]:
    """Integer roots of a monic integer polynomial.  The squarefree part is
    reduced modulo a prime that keeps it squarefree, the simple roots are
    lifted past the root bound by Newton steps, and each survivor is
    checked exactly, so the constant term is never factored."""
    c = _squarefree_monic(coeffs)
    if c[0] == 0:
        return sorted(set(_monic_integer_roots(c[1:]) if len(c) > 2 else [])
                      | {0})
    if len(c) == 2:
        return [-c[0]]
    bound = 1 + max(abs(v) for v in c[:-1])
    p = 3
    while not _fp_coprime_to_derivative(c, p):
        p += 2
        while not is_prime(p):
            p += 2

    def ev(r, m):
        acc = 0
        for v in reversed(c):
            acc = (acc * r + v) % m
        return acc

    def dev(r, m):
        acc = 0
        for i in range(len(c) - 1, 0, -1):
            acc = (acc * r + i * c[i]) % m
        return acc

    roots = []
    for r0 in range(p):
        if ev(r0, p):
            continue
        r, m = r0, p
        while m < 2 * bound + 1:
            m *= m
            r = (r - ev(r, m) * pow(dev(r, m), -1, m)) % m
        s = r if r <= m // 2 else r - m
        acc = 0
        for v in reversed(c):
            acc = acc * s + v
        if acc == 0:
            roots.append(s)
    return sorted(roots)


def poly_discriminant(p: PolyQ) -> Fraction:
    """Discriminant of a polynomial of degree 2, 3 or 4 (the shapes that
    occur here: conic sections, fiber cubics, quartic models)."""
    if not 2 <= p.degree <= 4:
        raise ValueError(f"degree {p.degree} out of supported range [2, 4]")
    return p.discriminant()


class BiPolyQ:
    """Dense-coefficient bivariate polynomial over Q in variables (u, t),
    stored as a dict (deg_u, deg_t) -> coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict[tuple[int, int], Fraction] | None = None):
        self.terms = {k: _frac(v) for k, v in (terms or {}).items() if v != 0}

    @classmethod
    def const(cls, v) -> "BiPolyQ":
        return cls({(0, 0): _frac(v)})

    @classmethod
    def u(cls) -> "BiPolyQ":
        return cls({(1, 0): Fraction(1)})

    @classmethod
    def t(cls) -> "BiPolyQ":
        return cls({(0, 1): Fraction(1)})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = BiPolyQ.const(other)
        return isinstance(other, BiPolyQ) and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    @staticmethod
    def _coerce(v) -> "BiPolyQ":
        if isinstance(v, BiPolyQ):
            return v
        return BiPolyQ.const(v)

    def __add__(self, other) -> "BiPolyQ":
        other = self._coerce(other)
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out.get(k, Fraction(0)) + v
        return BiPolyQ(out)

    __radd__ = __add__

    def __neg__(self) -> "BiPolyQ":
        return BiPolyQ({k: -v for k, v in self.terms.items()})

    def __sub__(self, other) -> "BiPolyQ":
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> "BiPolyQ":
        return self._coerce(other) - self

    def __mul__(self, other) -> "BiPolyQ":
        if isinstance(other, (int, Fraction)):
            return BiPolyQ({k: v * other for k, v in self.terms.items()})
        other = self._coerce(other)
        out: dict[tuple[int, int], Fraction] = {}
        for (i1, j1), a in self.terms.items():
            for (i2, j2), b in other.terms.items():
                k = (i1 + i2, j1 + j2)
                out[k] = out.get(k, Fraction(0)) + a * b
        return BiPolyQ(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "BiPolyQ":
        out = BiPolyQ.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    @property
    def deg_u(self) -> int:
        return max((i for i, _ in self.terms), default=-1)

    @property
    def deg_t(self) -> int:
        return max((j for _, j in self.terms), default=-1)

    def coeff(self, i: int, j: int) -> Fraction:
        return self.terms.get((i, j), Fraction(0))

    def coeff_u(self, i: int) -> PolyQ:
        """Coefficient of u^i as a polynomial in t."""
        out = [Fraction(0)] * (self.deg_t + 1 or 1)
        for (iu, jt), v in self.terms.items():
            if iu == i:
                out[jt] = v
        return PolyQ.of(*out)

    def subs_t(self, t0) -> PolyQ:
        """Specialize t = t0, returning a polynomial in u."""
        t0 = _frac(t0)
        out = [Fraction(0)] * (self.deg_u + 1 or 1)
        for (iu, jt), v in self.terms.items():
            out[iu] += v * t0 ** jt
        return PolyQ.of(*out)

    def subs_u(self, u0) -> PolyQ:
        u0 = _frac(u0)
        out = [Fraction(0)] * (self.deg_t + 1 or 1)
        for (iu, jt), v in self.terms.items():
            out[jt] += v * u0 ** iu
        return PolyQ.of(*out)

    def eval(self, u0, t0) -> Fraction:
        u0, t0 = _frac(u0), _frac(t0)
        return sum((v * u0 ** i * t0 ** j for (i, j), v in self.terms.items()), Fraction(0))

    def __str__(self):
        if not self.terms:
            return "0"
        bits = []
        for (i, j), v in sorted(self.terms.items()):
            mon = "".join([f"u^{i}" if i > 1 else "u" if i == 1 else "",
                           f"t^{j}" if j > 1 else "t" if j == 1 else ""])
            bits.append(f"{v}{'*' + mon if mon else ''}")
        return " + ".join(bits)


# ---------------------------------------------------------------------------
# numeric recognition

def recognize_integer(x, tol: float = 1e-4, err=None) -> int:
    """Snap a real numeric value to the nearest integer.

    err, when supplied, is a rigorous bound on |x - true value| and must be
    below 1/4 so the nearest integer is unambiguous.  Raises
    RecognitionError when the residual exceeds tol.
    """
    if err is not None and not float(err) < 0.25:
        raise RecognitionError(f"error bound {err} too large to round", value=x)
    xf = float(x)
    if abs(xf) > 2.0 ** 52:
        raise RecognitionError("value too large for exact rounding", value=x)
    m = round(xf)
    residual = abs(xf - m)
    if residual > tol:
        raise RecognitionError(
            f"residual {residual:.3g} above tolerance {tol:.3g}", value=x, residual=residual
        )
    return int(m)


def recognize_rational(x, max_denominator: int = 64, tol: float = 1e-6) -> Fraction:
    """Snap a real numeric value to a rational with small denominator."""
    xf = float(x)
    cand = Fraction(xf).limit_denominator(max_denominator)
    if abs(xf - float(cand)) > tol:
        raise RecognitionError(
            f"no rational with denominator <= {max_denominator} within {tol:.3g}",
            value=x, residual=abs(xf - float(cand)),
        )
    return cand
