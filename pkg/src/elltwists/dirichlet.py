"""Dirichlet characters of odd prime order ell.

A primitive character of order ell has conductor f = q_1 ... q_k or
ell^2 * q_1 ... q_k with the q_i distinct primes = 1 mod ell.  Each prime
piece is cyclic, so the character is stored as generator-exponent data:
one component (q, m, g, e) per prime q | f, where m is the prime-power
modulus (q, or ell^2 when q = ell), g generates (Z/m)^* and e in
{1, ..., ell-1} is the exponent, and

    chi(a) = zeta_ell ^ sum_i e_i * ind_{g_i}(a mod m_i)   (mod ell),

with chi(a) = 0 whenever gcd(a, f) > 1.  Characters of odd order are
automatically even.
"""
from __future__ import annotations

import cmath
from dataclasses import dataclass
from functools import lru_cache
from math import gcd

import mpmath

from .numcore import factor, is_prime, primes_up_to


@lru_cache(maxsize=None)
def primitive_root(m: int) -> int:
    """Smallest generator of (Z/m)^* for m an odd prime or odd prime square."""
    f = factor(m)
    if len(f.pairs) != 1 or f.pairs[0][0] == 2 or f.pairs[0][1] > 2:
        raise ValueError(f"modulus {m} is not an odd prime or its square")
    p, k = f.pairs[0]
    phi = p - 1
    qs = factor(phi).primes
    g = 2
    while True:
        if all(pow(g, phi // q, p) != 1 for q in qs):
            break
        g += 1
    if k == 1:
        return g
    # lift to p^2: g works unless g^(p-1) = 1 mod p^2
    return g if pow(g, p - 1, p * p) != 1 else g + p


@lru_cache(maxsize=None)
def _index_table(g: int, m: int) -> tuple[int, ...]:
    """ind_g(a) for a in 0..m-1, with -1 on non-units.  m is small here
    (conductors of a few thousand), so full enumeration beats BSGS."""
    table = [-1] * m
    x = 1
    k = 0
    while table[x] == -1:
        table[x] = k
        x = x * g % m
        k += 1
    return tuple(table)


def dlog(a: int, g: int, m: int) -> int:
    """Discrete log of a to base g mod m (unit group assumed cyclic)."""
    v = _index_table(g, m)[a % m]
    if v < 0:
        raise ValueError(f"{a} is not a unit mod {m}")
    return v


@dataclass(frozen=True)
class DirichletChar:
    """Primitive Dirichlet character of order exactly ell (odd prime)."""

    ell: int
    # one (q, modulus, generator, exponent) per prime dividing the conductor
    components: tuple[tuple[int, int, int, int], ...]

    def __post_init__(self):
        if not is_prime(self.ell) or self.ell == 2:
            raise ValueError("order must be an odd prime")
        if not self.components:
            raise ValueError("the trivial character is excluded")
        seen = set()
        for q, m, g, e in self.components:
            if q in seen:
                raise ValueError(f"repeated prime {q}")
            seen.add(q)
            if q == self.ell:
                if m != q * q:
                    raise ValueError("wild component must have modulus ell^2")
            else:
                if m != q or (q - 1) % self.ell != 0:
                    raise ValueError(f"prime {q} is not 1 mod {self.ell}")
            if not 1 <= e < self.ell:
                raise ValueError("component exponents lie in 1..ell-1")
        if tuple(sorted(seen)) != tuple(q for q, _, _, _ in self.components):
            raise ValueError("components must be sorted by prime")

    # -- construction ------------------------------------------------------

    @classmethod
    def from_exponents(cls, ell: int, primes_exps: dict[int, int]) -> "DirichletChar":
        comps = []
        for q in sorted(primes_exps):
            m = q * q if q == ell else q
            comps.append((q, m, primitive_root(m), primes_exps[q] % ell))
        return cls(ell, tuple(comps))

    @property
    def conductor(self) -> int:
        out = 1
        for _, m, _, _ in self.components:
            out *= m
        return out

    # -- evaluation --------------------------------------------------------

    def value_exponent(self, a: int) -> int | None:
        """k with chi(a) = zeta^k, or None when chi(a) = 0."""
        total = 0
        for _, m, g, e in self.components:
            v = _index_table(g, m)[a % m]
            if v < 0:
                return None
            total += e * v
        return total % self.ell

    def exponent_table(self, limit: int) -> list[int]:
        """value_exponent(n) for n in 0..limit, with -1 for chi(n) = 0.

        This is the hot path for the twisted Dirichlet series, so the
        component tables are merged in one pass."""
        out = [0] * (limit + 1)
        for _, m, g, e in self.components:
            ind = _index_table(g, m)
            for n in range(limit + 1):
                if out[n] >= 0:
                    v = ind[n % m]
                    out[n] = out[n] + e * v if v >= 0 else -1
        return [v % self.ell if v >= 0 else -1 for v in out]

    def __call__(self, a: int) -> complex:
        k = self.value_exponent(a)
        if k is None:
            return 0j
        return cmath.exp(2j * cmath.pi * k / self.ell)

    # -- structure ---------------------------------------------------------

    def power(self, j: int) -> "DirichletChar":
        """chi^j for j not divisible by ell (stays primitive of order ell)."""
        j %= self.ell
        if j == 0:
            raise ValueError("chi^0 is the trivial character")
        return DirichletChar(
            self.ell,
            tuple((q, m, g, e * j % self.ell) for q, m, g, e in self.components),
        )

    def conjugate(self) -> "DirichletChar":
        return self.power(self.ell - 1)

    def __mul__(self, other: "DirichletChar") -> "DirichletChar":
        """Product of characters of coprime conductors (stays primitive)."""
        if not isinstance(other, DirichletChar):
            return NotImplemented
        if self.ell != other.ell:
            raise ValueError("mixed orders")
        if gcd(self.conductor, other.conductor) != 1:
            raise ValueError("character product needs coprime conductors")
        return DirichletChar(self.ell, tuple(sorted(self.components + other.components)))

    def orbit(self) -> list["DirichletChar"]:
        """The Galois orbit {chi^j : 1 <= j < ell}, all sharing one L-packet."""
        return [self.power(j) for j in range(1, self.ell)]

    def canonical(self) -> "DirichletChar":
        """Lex-smallest exponent vector in the orbit; orbit's stable name."""
        return min(self.orbit(), key=lambda c: tuple(e for _, _, _, e in c.components))

    def exponents(self) -> tuple[tuple[int, int], ...]:
        return tuple((q, e) for q, _, _, e in self.components)

    def label(self) -> str:
        inner = ", ".join(f"{q}:{e}" for q, e in self.exponents())
        return f"({self.conductor}; {inner})"

    @classmethod
    def from_label(cls, ell: int, label: str) -> "DirichletChar":
        body = label.strip()
        if not (body.startswith("(") and body.endswith(")")):
            raise ValueError(f"bad character label {label!r}")
        cond_part, _, exps_part = body[1:-1].partition(";")
        exps: dict[int, int] = {}
        for piece in exps_part.split(","):
            piece = piece.strip()
            if not piece:
                continue
            qs, _, es = piece.partition(":")
            exps[int(qs)] = int(es)
        chi = cls.from_exponents(ell, exps)
        if chi.conductor != int(cond_part.strip()):
            raise ValueError(f"label conductor mismatch in {label!r}")
        return chi

    def is_even(self) -> bool:
        return self.value_exponent(-1) == 0

    # -- analytic ----------------------------------------------------------

    def gauss_sum(self):
        """tau(chi) = sum_{c mod f} chi(c) e^(2 pi i c / f) at the current
        mpmath working precision."""
        f = self.conductor
        two_pi_i = 2j * mpmath.pi
        zeta = [mpmath.e ** (two_pi_i * k / self.ell) for k in range(self.ell)]
        total = mpmath.mpc(0)
        for c in range(1, f):
            k = self.value_exponent(c)
            if k is not None:
                total += zeta[k] * mpmath.e ** (two_pi_i * c / f)
        return total


# ---------------------------------------------------------------------------
# enumeration

def admissible_conductors(ell: int, bound: int) -> list[int]:
    """Conductors <= bound carrying a primitive order-ell character:
    squarefree products of primes = 1 mod ell, optionally times ell^2."""
    qs = [p for p in primes_up_to(bound) if p % ell == 1]
    out = []

    def rec(i: int, acc: int):
        out.append(acc)
        for j in range(i, len(qs)):
            nxt = acc * qs[j]
            if nxt > bound:
                break
            rec(j + 1, nxt)

    rec(0, 1)
    if ell * ell <= bound:
        base = [f for f in out if f * ell * ell <= bound]
        out.extend(f * ell * ell for f in base)
    return sorted(f for f in set(out) if f > 1)


def characters_of_conductor(f: int, ell: int) -> list[DirichletChar]:
    """All (ell-1)^k primitive order-ell characters of conductor f."""
    fac = factor(f)
    primes = []
    for p, e in fac.pairs:
        if p == ell:
            if e != 2:
                raise ValueError(f"{f} is not an admissible conductor for order {ell}")
            primes.append(p)
        elif e == 1 and p % ell == 1:
            primes.append(p)
        else:
            raise ValueError(f"{f} is not an admissible conductor for order {ell}")
    chars: list[DirichletChar] = []

    def rec(i: int, exps: dict[int, int]):
        if i == len(primes):
            chars.append(DirichletChar.from_exponents(ell, dict(exps)))
            return
        for e in range(1, ell):
            exps[primes[i]] = e
            rec(i + 1, exps)
        del exps[primes[i]]

    rec(0, {})
    return chars


def galois_orbits(f: int, ell: int) -> list[DirichletChar]:
    """Canonical representatives of the (ell-1)^(k-1) orbits of conductor f."""
    reps = {chi.canonical() for chi in characters_of_conductor(f, ell)}
    return sorted(reps, key=lambda c: tuple(e for _, e in c.exponents()))


def orbit_representatives(ell: int, conductor_bound: int) -> list[DirichletChar]:
    """All orbit representatives with conductor <= bound, sorted by
    (conductor, exponent vector)."""
    out: list[DirichletChar] = []
    for f in admissible_conductors(ell, conductor_bound):
        out.extend(galois_orbits(f, ell))
    return out
