"""Central values L(E, 1, chi) for characters chi of odd prime order ell,
and their exact algebraic avatars.

The analytic side is a pair of rapidly convergent series obtained from the
functional equation (t is a free checking parameter, 1 by default):

    L(E, 1, chi) = sum_n (a_n / n) chi(n) exp(-2 pi n t / (f sqrt(N)))
                 + eps  sum_n (a_n / n) conj(chi)(n) exp(-2 pi n / (t f sqrt(N)))

with eps = w_E chi(N) tau(chi)^2 / f.  Truncation uses |a_n|/n <= 2, so the
reported values carry a rigorous tail bound.

The algebraic side rescales central values to lattice coordinates

    A_j = 2 f L(E, 1, chi^j) / (Omega_eff tau(chi^j)),   Omega_eff = c Omega,

which are integer combinations of ell-th roots of unity.  Sorting residues
mod f by character exponent splits A_j into ell integer coset sums
S_0..S_{ell-1}, recovered here by the inverse finite Fourier transform over
j, seeded at j = 0 by the exact multiplicative recursion

    A_0(f) = L0 * prod_{p || f} (a_p - 1 - delta(p))
                * [ (a_ell - 1)(a_ell - delta(ell)) - delta(ell) ell  if ell^2 | f ]

where delta(p) = 1 iff p is prime to the conductor and L0 is the untwisted
algebraic part.  The scale c is calibrated once per curve by demanding
integrality across the first several character orbits, scanning candidate
scales from the largest down.

Everything downstream is exact: the twisted central value vanishes iff all
ell coset sums are equal, and reducing the algebraic part at the prime
above ell is just summing the coset sums mod ell.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd
from typing import NamedTuple

import mpmath

from .dirichlet import DirichletChar, orbit_representatives
from .elliptic import Curve
from .numcore import CyclotomicInt, RecognitionError, factor, primes_up_to, recognize_integer


class CalibrationError(RuntimeError):
    """No admissible period scale makes the lattice coordinates integral."""


class ConsistencyError(RuntimeError):
    """An exact cross-check failed: the computation cannot be trusted."""


# candidate period rescalings, scanned largest first so the frozen scale is
# the coarsest usable lattice
SCALES = tuple(Fraction(v) for v in (12, 9, 6, 4, 3, 2, 1)) + tuple(
    Fraction(1, v) for v in (2, 3, 4, 6, 9, 12))

_S_TOL = 1e-4        # recognition tolerance for coset sums
_S_ERR = 2e-6        # propagated numeric error budget for coset sums
_SCALE_FLOOR = min(SCALES)


def _as_mpf(t):
    if isinstance(t, Fraction):
        return mpmath.mpf(t.numerator) / t.denominator
    return mpmath.mpf(t)


def _terms_needed(c, eps) -> int:
    """Smallest M with sum_{n > M} 2 e^(-c n) <= eps."""
    c = float(c)
    q = math.exp(-c)
    return max(1, math.ceil(math.log(2.0 / (float(eps) * (1.0 - q))) / c))


_TAU_CACHE: dict[tuple[DirichletChar, int], mpmath.mpc] = {}


def _tau(chi: DirichletChar):
    key = (chi, mpmath.mp.dps)
    if key not in _TAU_CACHE:
        _TAU_CACHE[key] = chi.gauss_sum()
    return _TAU_CACHE[key]


def central_value(curve: Curve, chi: DirichletChar | None = None, t=1, err=1e-15,
                  truncation_scale: int = 1):
    """L(E, 1, chi) at the current mpmath precision, absolute error <= err
    plus roundoff.  chi = None gives the untwisted central value.

    truncation_scale multiplies the computed series length; recomputing with
    2 and differencing is the soundness check on the tail bound itself."""
    if curve.conductor is None or curve.root_number is None:
        raise ValueError("curve needs conductor and root number attached")
    N, w = curve.conductor, curve.root_number
    f = 1 if chi is None else chi.conductor
    if gcd(f, N) != 1:
        raise ValueError(f"twist conductor {f} shares a factor with the level {N}")
    t = _as_mpf(t)
    if not t > 0:
        raise ValueError("t must be positive")
    sqrt_n = mpmath.sqrt(N)
    c1 = 2 * mpmath.pi * t / (f * sqrt_n)
    c2 = 2 * mpmath.pi / (t * f * sqrt_n)
    M = max(_terms_needed(c1, err / 2), _terms_needed(c2, err / 2)) * truncation_scale
    an = curve.an_table(M)
    if chi is None:
        exps = None
        zeta = None
        eps = mpmath.mpf(w)
    else:
        ell = chi.ell
        exps = chi.exponent_table(M)
        zeta = [mpmath.exp(2j * mpmath.pi * k / ell) for k in range(ell)]
        tau = _tau(chi)
        eps = w * zeta[chi.value_exponent(N)] * tau * tau / f
    r1, r2 = mpmath.exp(-c1), mpmath.exp(-c2)
    s1 = s2 = mpmath.mpc(0)
    p1 = p2 = mpmath.mpf(1)
    for n in range(1, M + 1):
        p1 *= r1
        p2 *= r2
        a = an[n]
        if a == 0:
            continue
        term = mpmath.mpf(a) / n
        if exps is None:
            s1 += term * p1
            s2 += term * p2
        else:
            k = exps[n]
            if k < 0:
                continue
            s1 += term * zeta[k] * p1
            s2 += term * zeta[-k % ell] * p2
    return s1 + eps * s2


def t_independence(curve: Curve, chi: DirichletChar | None = None,
                   t_values=(1, Fraction(6, 5), Fraction(3, 4)), err=1e-15) -> float:
    """Max pairwise deviation of the two-series value across t.  Near zero
    exactly when the attached root number (and twist epsilon) is right."""
    vals = [central_value(curve, chi, t=t, err=err) for t in t_values]
    return float(max(abs(a - b) for a in vals for b in vals))


def hecke_factor(curve: Curve, f: int, ell: int) -> int:
    """Exact multiplier turning L0 into the trivial-component sum A_0(f)."""
    out = 1
    for p, e in factor(f).pairs:
        d = curve.delta_unit(p)
        ap = curve.ap(p)
        if p == ell and e == 2:
            out *= (ap - 1) * (ap - d) - d * ell
        elif e == 1 and p % ell == 1 and p != ell:
            out *= ap - 1 - d
        else:
            raise ValueError(f"{f} is not an admissible conductor for order {ell}")
    return out


class TwistRows(NamedTuple):
    """Unscaled lattice rows 2 f L(chi^j) / (Omega tau(chi^j)) plus the raw
    central value of the orbit representative and its tail bound."""

    rows: dict
    l_value: complex
    l_err: float


# shared between calibration probes and calibrated curves
_ROWS_CACHE: dict[tuple[Curve, DirichletChar, int], TwistRows] = {}


def _twist_rows(curve: Curve, chi: DirichletChar, dps: int) -> TwistRows:
    key = (curve, chi, dps)
    if key in _ROWS_CACHE:
        return _ROWS_CACHE[key]
    ell, f = chi.ell, chi.conductor
    with mpmath.workdps(dps):
        omega = curve.real_period()
        # error budget: |dS_t| <= 2 sqrt(f) |dL| / (c Omega) must stay under
        # the rounding budget for every candidate scale c
        err_l = _S_ERR / 4 * float(_SCALE_FLOOR) * float(omega) / (2 * math.sqrt(f))
        rows = {}
        l1 = None
        for j in range(1, ell):
            chij = chi.power(j)
            lj = central_value(curve, chij, err=err_l)
            if j == 1:
                l1 = complex(lj)
            rows[j] = 2 * f * lj / (omega * _tau(chij))
        for j in range(1, ell):
            drift = abs(rows[ell - j] - mpmath.conj(rows[j]))
            if drift > 1e-5:
                raise ConsistencyError(
                    f"conjugate twists disagree by {float(drift):.3g} at {chi.label()}")
    out = TwistRows(rows, l1, err_l)
    _ROWS_CACHE[key] = out
    return out


def _solve_coset_sums(rows: dict, a0: int, ell: int, scale: Fraction, dps: int):
    """Invert the finite Fourier transform and snap to integers, alarming on
    any inconsistency.  Returns (sums, worst residual)."""
    with mpmath.workdps(dps):
        inv_scale = mpmath.mpf(scale.denominator) / scale.numerator
        a = {j: rows[j] * inv_scale for j in range(1, ell)}
        zeta = [mpmath.exp(2j * mpmath.pi * k / ell) for k in range(ell)]
        sums = []
        worst = 0.0
        for t in range(ell):
            val = mpmath.mpc(a0)
            for j in range(1, ell):
                val += zeta[j * t % ell] * a[j]
            val /= ell
            if abs(val.imag) > _S_TOL:
                raise ConsistencyError(
                    f"coset sum {t} has imaginary part {float(val.imag):.3g}")
            s = recognize_integer(val.real, tol=_S_TOL, err=_S_ERR)
            worst = max(worst, abs(float(val.real) - s), abs(float(val.imag)))
            sums.append(s)
        if sum(sums) != a0:
            raise ConsistencyError(
                f"coset sums total {sum(sums)} but the exact recursion gives {a0}")
        back_tol = ell * (_S_TOL + _S_ERR)
        for j in range(1, ell):
            back = sum(zeta[(-j * t) % ell] * s for t, s in enumerate(sums))
            if abs(back - a[j]) > back_tol:
                raise ConsistencyError(f"rounded sums fail to recombine to twist {j}")
    return tuple(sums), worst


@dataclass(frozen=True)
class CosetSums:
    """Integer coset sums of one character orbit, with their exact seed."""

    chi: DirichletChar          # canonical orbit representative
    sums: tuple[int, ...]       # S_t for t = 0..ell-1
    a0: int                     # exact trivial-component sum
    scale: Fraction             # period scale the lattice was computed at
    max_residual: float         # worst rounding residual, an internal health stat

    @property
    def ell(self) -> int:
        return self.chi.ell

    @property
    def conductor(self) -> int:
        return self.chi.conductor

    def lalg(self, j: int = 1) -> CyclotomicInt:
        """Algebraic part of L(E, 1, chi^j) as an exact cyclotomic integer."""
        ell = self.ell
        out = CyclotomicInt.zero(ell)
        for t, s in enumerate(self.sums):
            out = out + s * CyclotomicInt.zeta_pow(ell, (-j * t) % ell)
        return out

    def lalg_mod_ell(self) -> int:
        """Algebraic part reduced at the prime above ell (zeta -> 1)."""
        return sum(self.sums) % self.ell

    def is_vanishing(self) -> bool:
        """L(E, 1, chi) = 0 holds exactly when all coset sums agree."""
        return len(set(self.sums)) == 1


@dataclass(frozen=True)
class TwistRecord:
    """One decided twist: the numeric value, its tail bound, and (when
    recognition succeeded) the exact algebraic part behind it."""

    curve_label: str
    chi: DirichletChar
    L_value: complex
    error_bound: float
    L_alg: CyclotomicInt | None
    coset_sums: CosetSums | None
    decision: str                # vanishes | nonzero | undecided
    precision_used: int

    def csv_row(self) -> str:
        svec = "" if self.coset_sums is None else \
            "|".join(str(s) for s in self.coset_sums.sums)
        return ", ".join([
            self.curve_label,
            str(self.chi.conductor),
            self.chi.label(),
            repr(self.L_value.real),
            repr(self.L_value.imag),
            f"{self.error_bound:.3e}",
            svec,
            self.decision,
        ])

    def as_dict(self) -> dict:
        return {
            "curve": self.curve_label,
            "character": self.chi.label(),
            "L_value": [self.L_value.real, self.L_value.imag],
            "error_bound": self.error_bound,
            "coset_sums": None if self.coset_sums is None else list(self.coset_sums.sums),
            "decision": self.decision,
            "precision_digits": self.precision_used,
        }


def vanishing_decision(record: TwistRecord) -> str:
    """Classify a twist record.  Vanishing is an exact statement (constant
    coset-sum vector); nonzero needs the numeric value to clear its error
    bound by a factor of 10; anything else stays undecided."""
    if record.coset_sums is not None and record.coset_sums.is_vanishing():
        return "vanishes"
    if abs(record.L_value) > 10 * record.error_bound:
        return "nonzero"
    return "undecided"


@dataclass(frozen=True)
class CongruenceResult:
    chi: DirichletChar | None    # None = the trivial character
    psi: DirichletChar
    lhs: int                 # L^alg(chi psi) mod ell
    factor: int              # exact Euler-type multiplier mod ell
    rhs: int                 # factor * L^alg(chi) mod ell
    holds: bool

    def as_dict(self) -> dict:
        return {
            "chi": "1" if self.chi is None else self.chi.label(),
            "psi": self.psi.label(),
            "lhs_mod_ell": self.lhs,
            "factor_mod_ell": self.factor,
            "rhs_mod_ell": self.rhs,
            "holds": self.holds,
        }


@dataclass(frozen=True)
class NonvanishingResult:
    hypothesis_ok: bool      # L0 must be a unit mod ell for the method to bite
    l0_mod_ell: int
    bound: int
    primes: tuple[int, ...]
    n_residue_primes: int    # primes p <= bound with p = 1 mod ell

    @property
    def density(self) -> float:
        """Fraction of the p = 1 mod ell primes that the criterion keeps."""
        if self.n_residue_primes == 0:
            return 0.0
        return len(self.primes) / self.n_residue_primes

    def as_dict(self) -> dict:
        return {
            "hypothesis_ok": self.hypothesis_ok,
            "trivial_algebraic_part_mod_ell": self.l0_mod_ell,
            "bound": self.bound,
            "primes": list(self.primes),
            "count": len(self.primes),
            "residue_class_count": self.n_residue_primes,
            "density": self.density,
        }


class CalibratedCurve:
    """A curve with a frozen period scale: every order-ell twist of it can
    be pinned down exactly."""

    def __init__(self, curve: Curve, ell: int, scale: Fraction, lalg0: int,
                 base_dps: int = 50):
        self.curve = curve
        self.ell = ell
        self.scale = scale
        self.lalg0 = lalg0
        self.base_dps = base_dps
        self._coset_cache: dict[tuple[DirichletChar, int], CosetSums] = {}

    def __repr__(self):
        return (f"CalibratedCurve({self.curve!r}, ell={self.ell}, "
                f"scale={self.scale}, L0={self.lalg0})")

    @property
    def label(self) -> str:
        return self.curve.label or ",".join(str(a) for a in self.curve.a_invariants)

    def trivial_coset_sum(self, f: int) -> int:
        """A_0(f), exactly, by the multiplicative recursion."""
        return self.lalg0 * hecke_factor(self.curve, f, self.ell)

    def coset_sums(self, chi: DirichletChar, dps: int | None = None) -> CosetSums:
        """Exact integer coset sums for the orbit of chi, with alarms: the
        rounded sums must recombine to every numeric twist row and total to
        the exact trivial component."""
        chi = chi.canonical()
        dps = dps or self.base_dps
        key = (chi, dps)
        if key in self._coset_cache:
            return self._coset_cache[key]
        a0 = self.trivial_coset_sum(chi.conductor)
        rows = _twist_rows(self.curve, chi, dps).rows
        sums, worst = _solve_coset_sums(rows, a0, self.ell, self.scale, dps)
        out = CosetSums(chi, sums, a0, self.scale, worst)
        self._coset_cache[key] = out
        return out

    def twist_record(self, chi: DirichletChar,
                     ladder=(None, 80, 120)) -> TwistRecord:
        """Decide L(E, 1, chi): exact coset sums where recognition lands,
        retried up a precision ladder, undecided past the last rung."""
        chi = chi.canonical()
        record = None
        for rung in ladder:
            dps = rung or self.base_dps
            numeric = _twist_rows(self.curve, chi, dps)
            try:
                cs = self.coset_sums(chi, dps)
            except (RecognitionError, ConsistencyError):
                cs = None
            record = TwistRecord(self.label, chi, numeric.l_value, numeric.l_err,
                                 cs.lalg(1) if cs is not None else None,
                                 cs, "undecided", dps)
            record = replace(record, decision=vanishing_decision(record))
            if cs is not None and not cs.is_vanishing() and record.decision != "nonzero":
                raise ConsistencyError(
                    f"exact part of {chi.label()} is nonzero but |L| is within noise")
            if record.decision != "undecided":
                return record
        return record

    def congruence_check(self, chi: DirichletChar | None, psi: DirichletChar,
                         dps: int | None = None) -> CongruenceResult:
        """Check L^alg(chi psi) = (exact Euler-type factor) * L^alg(chi) at
        the prime above ell, chi = None meaning the trivial character.  The
        two sides come from independent computations at different conductors."""
        if chi is None:
            lhs = self.coset_sums(psi, dps).lalg_mod_ell()
            base = self.lalg0 % self.ell
        else:
            if gcd(chi.conductor, psi.conductor) != 1:
                raise ValueError("congruence needs coprime twist conductors")
            lhs = self.coset_sums(chi * psi, dps).lalg_mod_ell()
            base = self.coset_sums(chi, dps).lalg_mod_ell()
            chi = chi.canonical()
        fac = hecke_factor(self.curve, psi.conductor, self.ell) % self.ell
        rhs = fac * base % self.ell
        return CongruenceResult(chi, psi.canonical(), lhs, fac, rhs, lhs == rhs)

    def nonvanishing_prime_set(self, bound: int) -> NonvanishingResult:
        """Primes p <= bound, p = 1 mod ell, prime to the level, at which
        every order-ell character of conductor p twists to a nonvanishing
        central value.

        Contentful only when the untwisted algebraic part is a unit mod ell:
        then a_p != 2 mod ell forces each twisted part to be a unit too."""
        residue = [p for p in primes_up_to(bound) if p % self.ell == 1]
        l0 = self.lalg0 % self.ell
        if l0 == 0:
            return NonvanishingResult(False, 0, bound, (), len(residue))
        ps = tuple(p for p in residue
                   if self.curve.conductor % p != 0
                   and (self.curve.ap(p) - 2) % self.ell != 0)
        return NonvanishingResult(True, l0, bound, ps, len(residue))


def calibrate(curve: Curve, ell: int, dps: int = 50, n_orbits: int = 10,
              conductor_bound: int = 400, scales=SCALES) -> CalibratedCurve:
    """Freeze the period scale for (curve, ell).

    Scans candidate scales from the largest down; a scale survives when the
    untwisted algebraic part is integral and, for the first n_orbits
    character orbits prime to the level, all coset sums land on integers
    that recombine and total correctly.  First survivor wins (coarsest
    usable lattice).  The twist series are computed once and shared across
    candidates.
    """
    reps = [r for r in orbit_representatives(ell, conductor_bound)
            if gcd(r.conductor, curve.conductor) == 1][:n_orbits]
    if len(reps) < n_orbits:
        raise CalibrationError(
            f"only {len(reps)} orbits below conductor {conductor_bound}; raise the bound")
    with mpmath.workdps(dps):
        omega = curve.real_period()
        l1 = central_value(curve, None, err=1e-10 * float(omega))
        base0 = 2 * l1.real / omega
    all_rows = {rep: _twist_rows(curve, rep, dps).rows for rep in reps}
    failures = {}
    for c in scales:
        try:
            l0 = recognize_integer(base0 * c.denominator / c.numerator,
                                   tol=_S_TOL, err=_S_ERR)
            for rep in reps:
                a0 = l0 * hecke_factor(curve, rep.conductor, ell)
                _solve_coset_sums(all_rows[rep], a0, ell, c, dps)
        except (RecognitionError, ConsistencyError) as exc:
            failures[str(c)] = str(exc)
            continue
        return CalibratedCurve(curve, ell, c, l0, base_dps=dps)
    detail = "; ".join(f"{k}: {v}" for k, v in list(failures.items())[:3])
    raise CalibrationError(f"no period scale fits ({detail})")
