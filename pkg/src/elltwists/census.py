"""Census orchestration over twist families.

Everything here is glue: curve configuration files, the order-ell vanishing
census over character orbits with deterministic persistence and resume, the
congruence sweep, the conductor-37 slice-family survey, and the torsion
pencil reports.  The arithmetic lives in the other modules; this one only
schedules it, journals it, and refuses to continue when a result contradicts
what the theory guarantees.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from pathlib import Path

from .cubicfield import CubicField
from .dirichlet import DirichletChar, admissible_conductors, galois_orbits
from .elliptic import Curve
from .kummer import (FamilyFiber, SurfaceError, _e37b_pair, census_37b,
                     delta_poly, extract_cubic, fiber_search,
                     torsion_base_curve, torsion_family)
from .lvalue import (CalibratedCurve, CongruenceResult, calibrate,
                     t_independence)
from .numcore import factor


class ConfigError(Exception):
    """A configuration file or parameter set that cannot be run."""


class TheoryViolation(Exception):
    """A computed result that contradicts a proved statement.  Raised so a
    caller can distinguish 'the mathematics failed' from ordinary errors."""


# ---------------------------------------------------------------------------
# curve configuration files

_CONFIG_KEYS = ("label", "a_invariants", "conductor", "root_number",
                "precision_digits")

# largest central-value spread over the test slice parameters that is still
# attributable to truncation error rather than a wrong functional equation
_W_TOL = 1e-6


@dataclass(frozen=True)
class CurveConfig:
    """A curve as named in a flat ``key = value`` configuration file.

    The conductor and root number are inputs, not derived quantities, so a
    config is only trusted after validated_curve() has checked the root
    number against the parameter independence of the central value."""

    label: str
    a_invariants: tuple[Fraction, Fraction, Fraction, Fraction, Fraction]
    conductor: int
    root_number: int
    precision_digits: int = 50

    def __post_init__(self):
        try:
            self.curve()
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        if self.precision_digits < 15:
            raise ConfigError("precision_digits must be at least 15")

    def curve(self) -> Curve:
        return Curve(self.a_invariants, label=self.label,
                     conductor=self.conductor, root_number=self.root_number)

    def validated_curve(self, err: float = 1e-12) -> Curve:
        """The curve, after checking that the declared root number makes the
        central value independent of the free slice parameter."""
        curve = self.curve()
        spread = t_independence(curve, err=err)
        if spread > _W_TOL:
            raise ConfigError(
                f"root_number {self.root_number} for {self.label} is "
                f"inconsistent: central value varies by {spread:.3e} "
                f"across slice parameters")
        return curve

    @classmethod
    def from_text(cls, text: str) -> "CurveConfig":
        seen: dict[str, str] = {}
        for lineno, raw in enumerate(text.splitlines(), start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            key, value = key.strip(), value.strip()
            if not sep or not key or not value:
                raise ConfigError(f"line {lineno}: expected 'key = value'")
            if key not in _CONFIG_KEYS:
                raise ConfigError(f"line {lineno}: unknown key {key!r}")
            if key in seen:
                raise ConfigError(f"line {lineno}: duplicate key {key!r}")
            seen[key] = value
        missing = [k for k in _CONFIG_KEYS[:4] if k not in seen]
        if missing:
            raise ConfigError(f"missing keys: {', '.join(missing)}")
        try:
            ai = tuple(Fraction(part.strip())
                       for part in seen["a_invariants"].split(","))
            conductor = int(seen["conductor"])
            root_number = int(seen["root_number"])
            dps = int(seen.get("precision_digits", "50"))
        except (ValueError, ZeroDivisionError) as exc:
            raise ConfigError(f"bad value: {exc}") from exc
        if len(ai) != 5:
            raise ConfigError("a_invariants needs exactly 5 entries")
        return cls(seen["label"], ai, conductor, root_number, dps)

    @classmethod
    def from_file(cls, path) -> "CurveConfig":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read {path}: {exc}") from exc
        return cls.from_text(text)


# one calibration per (curve, ell, precision); recalibrating is pure waste
_CAL_CACHE: dict[tuple, CalibratedCurve] = {}


def _calibrated(config: CurveConfig, ell: int) -> CalibratedCurve:
    key = (config.a_invariants, config.conductor, config.root_number,
           ell, config.precision_digits)
    if key not in _CAL_CACHE:
        _CAL_CACHE[key] = calibrate(config.curve(), ell,
                                    dps=config.precision_digits)
    return _CAL_CACHE[key]


# ---------------------------------------------------------------------------
# the vanishing census

@dataclass(frozen=True)
class CensusRow:
    """One character orbit's verdict.  The timing is journal data only; the
    emitted CSV must be byte-identical across worker counts and resumes, so
    it never includes elapsed."""

    conductor: int
    character: str
    decision: str                    # vanishes | nonzero | undecided
    L_value: complex | None
    error_bound: float | None
    coset_sums: tuple[int, ...] | None
    elapsed: float = 0.0
    error: str | None = None
    alarm: bool = False

    @property
    def sort_key(self) -> tuple:
        return (self.conductor, self.character)

    def csv_line(self) -> str:
        if self.L_value is None:
            value = ["", ""]
        else:
            value = [repr(self.L_value.real), repr(self.L_value.imag)]
        err = "" if self.error_bound is None else f"{self.error_bound:.3e}"
        svec = "" if self.coset_sums is None else \
            "|".join(str(s) for s in self.coset_sums)
        return ", ".join([str(self.conductor), self.character, self.decision,
                          value[0], value[1], err, svec])

    def to_dict(self) -> dict:
        return {
            "conductor": self.conductor,
            "character": self.character,
            "decision": self.decision,
            "L_value": None if self.L_value is None
            else [self.L_value.real, self.L_value.imag],
            "error_bound": self.error_bound,
            "coset_sums": None if self.coset_sums is None
            else list(self.coset_sums),
            "elapsed": self.elapsed,
            "error": self.error,
            "alarm": self.alarm,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "CensusRow":
        value = d.get("L_value")
        sums = d.get("coset_sums")
        return cls(d["conductor"], d["character"], d["decision"],
                   None if value is None else complex(value[0], value[1]),
                   d.get("error_bound"),
                   None if sums is None else tuple(sums),
                   d.get("elapsed", 0.0), d.get("error"),
                   d.get("alarm", False))


CSV_HEADER = "conductor, character, decision, L_re, L_im, error_bound, coset_sums"


@dataclass(frozen=True)
class CensusSummary:
    curve_label: str
    ell: int
    max_conductor: int
    rows: tuple[CensusRow, ...]
    skipped_conductors: tuple[int, ...]
    counts: tuple[tuple[int, int], ...]   # (cutoff, vanishing orbits <= cutoff)
    slope: float | None
    computed: int
    resumed: int
    total_elapsed: float

    @property
    def n_undecided(self) -> int:
        return sum(1 for r in self.rows if r.decision == "undecided")

    @property
    def n_alarms(self) -> int:
        return sum(1 for r in self.rows if r.alarm)

    @property
    def undecided_rate(self) -> float:
        return self.n_undecided / len(self.rows) if self.rows else 0.0

    def csv(self) -> str:
        lines = [CSV_HEADER]
        lines.extend(r.csv_line() for r in self.rows)
        return "\n".join(lines) + "\n"

    def text(self) -> str:
        lines = [
            f"census: curve {self.curve_label}, order {self.ell}, "
            f"conductors <= {self.max_conductor}",
            f"  orbits: {len(self.rows)} "
            f"({self.computed} computed, {self.resumed} resumed), "
            f"undecided {self.n_undecided}, alarms {self.n_alarms}, "
            f"{self.total_elapsed:.1f}s",
        ]
        if self.skipped_conductors:
            shown = ", ".join(str(f) for f in self.skipped_conductors[:8])
            more = "" if len(self.skipped_conductors) <= 8 else ", ..."
            lines.append(f"  skipped (conductor shares a factor with the "
                         f"level): {shown}{more}")
        for cutoff, count in self.counts:
            lines.append(f"  vanishing orbits with conductor <= {cutoff}: {count}")
        if self.slope is not None:
            lines.append(f"  log-log growth slope: {self.slope:.4f}")
        return "\n".join(lines)


# per-process cache for pool workers; each process calibrates once
_TASK_CACHE: dict[tuple, CalibratedCurve] = {}


def _census_task(config_data: tuple, ell: int, chi: DirichletChar,
                 ladder: tuple) -> dict:
    """Decide one orbit.  Pure function of its arguments, safe to run in any
    process; failures become undecided rows, never exceptions, so a single
    bad orbit cannot abort a sweep."""
    label, ai, conductor, root_number, dps = config_data
    key = (ai, conductor, ell, dps)
    if key not in _TASK_CACHE:
        curve = Curve(ai, label=label, conductor=conductor,
                      root_number=root_number)
        _TASK_CACHE[key] = calibrate(curve, ell, dps=dps)
    cal = _TASK_CACHE[key]
    start = time.perf_counter()
    try:
        record = cal.twist_record(chi, ladder=ladder)
        row = CensusRow(chi.conductor, chi.label(), record.decision,
                        record.L_value, record.error_bound,
                        None if record.coset_sums is None
                        else tuple(record.coset_sums.sums),
                        time.perf_counter() - start)
    except Exception as exc:                      # noqa: BLE001 - journal it
        row = CensusRow(chi.conductor, chi.label(), "undecided", None, None,
                        None, time.perf_counter() - start,
                        error=f"{type(exc).__name__}: {exc}",
                        alarm=type(exc).__name__ == "ConsistencyError")
    return row.to_dict()


def _read_journal(path: Path) -> dict[str, CensusRow]:
    """Rows already decided in an append-only journal.  A torn final line
    (interrupted write) is ignored rather than fatal."""
    done: dict[str, CensusRow] = {}
    if not path.exists():
        return done
    for line in path.read_text().splitlines():
        if not line.strip():
            continue
        try:
            row = CensusRow.from_dict(json.loads(line))
        except (ValueError, KeyError):
            break
        done[row.character] = row
    return done


def _growth_counts(rows, max_conductor: int):
    """Cumulative vanishing counts down a geometric ladder of cutoffs, and
    the least-squares slope of the log-log growth when there is enough of a
    ladder to fit."""
    cutoffs = []
    c = max_conductor
    while c >= 7:
        cutoffs.append(c)
        c //= 2
    cutoffs.reverse()
    counts = [(c, sum(1 for r in rows
                      if r.conductor <= c and r.decision == "vanishes"))
              for c in cutoffs]
    points = [(math.log(c), math.log(n)) for c, n in counts if n > 0]
    slope = None
    if len(points) >= 3:
        xs, ys = zip(*points)
        mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
        denom = sum((x - mx) ** 2 for x in xs)
        if denom > 0:
            slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / denom
    return tuple(counts), slope


def run_census(config: CurveConfig, ell: int, max_conductor: int,
               workers: int = 1, out=None, resume: bool = False,
               ladder: tuple = (None, 80, 120)) -> CensusSummary:
    """Decide every admissible character orbit with conductor up to the
    bound.  Conductors sharing a factor with the level are counted as
    skipped, not silently dropped.  With an output path the run journals
    each orbit as it finishes and the final CSV is regenerated, sorted, so
    the emitted bytes are independent of worker count and of how many times
    the run was interrupted and resumed."""
    if resume and out is None:
        raise ConfigError("resume needs an output path to find the journal")
    curve = config.validated_curve()
    _calibrated(config, ell)    # fail fast before any journal is touched

    level = config.conductor
    skipped: list[int] = []
    orbits: list[DirichletChar] = []
    for f in admissible_conductors(ell, max_conductor):
        if gcd(f, level) != 1:
            skipped.append(f)
            continue
        orbits.extend(galois_orbits(f, ell))

    out_path = None if out is None else Path(out)
    journal = None if out_path is None else out_path.with_suffix(
        out_path.suffix + ".log")
    done: dict[str, CensusRow] = {}
    if journal is not None:
        if resume:
            done = _read_journal(journal)
        else:
            journal.write_text("")
    pending = [chi for chi in orbits if chi.label() not in done]

    config_data = (config.label, config.a_invariants, config.conductor,
                   config.root_number, config.precision_digits)
    start = time.perf_counter()
    fresh: list[CensusRow] = []

    def _log(row_dict: dict):
        fresh.append(CensusRow.from_dict(row_dict))
        if journal is not None:
            with journal.open("a") as fh:
                fh.write(json.dumps(row_dict) + "\n")

    if workers <= 1:
        for chi in pending:
            _log(_census_task(config_data, ell, chi, ladder))
    else:
        # orbit list is conductor-sorted, so the pool's queue hands
        # conductors out round-robin across the worker processes
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_census_task, config_data, ell, chi, ladder)
                       for chi in pending]
            for fut in futures:
                _log(fut.result())

    rows = sorted(list(done.values()) + fresh, key=lambda r: r.sort_key)
    counts, slope = _growth_counts(rows, max_conductor)
    summary = CensusSummary(config.label, ell, max_conductor, tuple(rows),
                            tuple(skipped), counts, slope, len(fresh),
                            len(done), time.perf_counter() - start)
    if out_path is not None:
        out_path.write_text(summary.csv())
    return summary


# ---------------------------------------------------------------------------
# the congruence sweep

@dataclass(frozen=True)
class CongruenceReport:
    curve_label: str
    ell: int
    bound: int
    results: tuple[CongruenceResult, ...]

    @property
    def holds_all(self) -> bool:
        return all(r.holds for r in self.results)

    @property
    def failures(self) -> tuple[CongruenceResult, ...]:
        return tuple(r for r in self.results if not r.holds)

    def text(self) -> str:
        lines = [f"congruence sweep: curve {self.curve_label}, "
                 f"order {self.ell}, conductor products <= {self.bound}",
                 f"  pairs checked: {len(self.results)}, "
                 f"failures: {len(self.failures)}"]
        for r in self.failures:
            # a failure is a finding; dump everything that went into it
            lines.append(f"  FAIL {json.dumps(r.as_dict())}")
        return "\n".join(lines)


def run_congruence_sweep(config: CurveConfig, ell: int,
                         bound: int) -> CongruenceReport:
    """Check the residue relation between the algebraic parts at chi and at
    chi psi for every admissible pair with conductor product up to the
    bound, the trivial chi included.  psi ranges over single-prime
    conductors only, which is where its multiplier is defined."""
    _ = config.validated_curve()
    cal = _calibrated(config, ell)
    level = config.conductor

    psis = [psi for f in admissible_conductors(ell, bound)
            if gcd(f, level) == 1
            for psi in galois_orbits(f, ell)
            if len(psi.components) == 1]
    chis: list[DirichletChar | None] = [None]
    for f in admissible_conductors(ell, bound):
        if gcd(f, level) == 1:
            chis.extend(galois_orbits(f, ell))

    results = []
    for chi in chis:
        fc = 1 if chi is None else chi.conductor
        for psi in psis:
            if fc * psi.conductor > bound:
                continue
            if gcd(fc, psi.conductor) != 1:
                continue
            results.append(cal.congruence_check(chi, psi))
    return CongruenceReport(config.label, ell, bound, tuple(results))


# ---------------------------------------------------------------------------
# the conductor-37 slice family

E37B_CONFIG = CurveConfig("37b", (Fraction(0), Fraction(1), Fraction(1),
                                  Fraction(-3), Fraction(1)), 37, 1)


def _strictly_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factor(n).pairs)


@dataclass(frozen=True)
class E37bSample:
    conductor: int
    a: int
    b: int
    character: str
    decision: str


@dataclass(frozen=True)
class E37bReport:
    max_conductor: int
    height_bound: int
    n_rows: int
    n_conductors: int
    counts: tuple[tuple[int, int], ...]   # (cutoff, distinct conductors)
    slope: float | None
    samples: tuple[E37bSample, ...]

    def text(self) -> str:
        lines = [f"slice-family survey: conductors <= {self.max_conductor}, "
                 f"parameter height <= {self.height_bound}",
                 f"  parameter pairs: {self.n_rows}, distinct conductors "
                 f"(squarefree rows): {self.n_conductors}"]
        for cutoff, count in self.counts:
            lines.append(f"  distinct conductors <= {cutoff}: {count}")
        if self.slope is not None:
            lines.append(f"  log-log growth slope: {self.slope:.4f}")
        for s in self.samples:
            lines.append(f"  sampled field (a={s.a}, b={s.b}) conductor "
                         f"{s.conductor}: character {s.character} -> {s.decision}")
        return "\n".join(lines)


def default_height_bound(max_conductor: int) -> int:
    """Parameter height that provably exhausts all conductors up to the
    bound: the product of the two quadratic forms grows at least like 3.7
    times height^4 (their least eigenvalues multiply to just above that)."""
    return max(8, math.ceil((max_conductor / 3.7) ** 0.25) + 1)


def run_e37b(max_conductor: int, height_bound: int | None = None,
             sample_size: int = 10, sample_cap: int = 2000) -> E37bReport:
    """Sweep the slice family of the conductor-37 curve, count the distinct
    cubic-field conductors it constructs, and verify on a sample that the
    matched twist orbits really vanish.  Each of those vanishings is a
    theorem, so a failed sample is a hard error, not a census row."""
    if height_bound is None:
        height_bound = default_height_bound(max_conductor)
    census = census_37b(max_conductor, height_bound)

    # distinct squarefree products must construct distinct fields; a
    # collision would contradict the family's distinctness statement
    by_conductor: dict[int, int] = {}
    for row in census.rows:
        value = row.h1 * row.h2
        if not _strictly_squarefree(value):
            continue
        prev = by_conductor.get(row.conductor)
        if prev is not None and prev != value:
            raise TheoryViolation(
                f"distinct squarefree parameters {prev} and {value} "
                f"constructed the same conductor {row.conductor}")
        by_conductor[row.conductor] = value

    cutoffs = [10 ** k for k in range(4, 8) if 10 ** k <= max_conductor]
    if not cutoffs:
        cutoffs = [max_conductor]
    counts = [(c, sum(1 for f in census.conductors if f <= c))
              for c in cutoffs]
    points = [(math.log(c), math.log(n)) for c, n in counts if n > 0]
    slope = None
    if len(points) >= 2:
        xs, ys = zip(*points)
        mx, my = sum(xs) / len(xs), sum(ys) / len(ys)
        denom = sum((x - mx) ** 2 for x in xs)
        if denom > 0:
            slope = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / denom

    cal = _calibrated(E37B_CONFIG, 3)
    samples: list[E37bSample] = []
    for f in sorted({r.conductor for r in census.rows if
                     r.conductor <= sample_cap})[:sample_size]:
        row = next(r for r in census.rows if r.conductor == f)
        fiber = _e37b_pair(row.a, row.b)
        chi = fiber.field.matching_character()
        record = cal.twist_record(chi)
        samples.append(E37bSample(f, row.a, row.b, chi.label(),
                                  record.decision))
        if record.decision != "vanishes":
            raise TheoryViolation(
                f"twist by {chi.label()} matched to the slice field of "
                f"conductor {f} came back {record.decision}; its vanishing "
                f"is forced by the slice point")
    return E37bReport(max_conductor, height_bound, len(census.rows),
                      len(census.conductors), tuple(counts), slope,
                      tuple(samples))


# ---------------------------------------------------------------------------
# torsion pencil reports

@dataclass(frozen=True)
class FamilyEntry:
    parameter: Fraction
    excluded: str | None                 # reason, when the parameter is
    fiber: FamilyFiber | None
    field_cubics: tuple[tuple, ...]      # (u, cubic coefficients, conductor)

    def text(self) -> str:
        if self.excluded is not None:
            return f"  lambda = {self.parameter}: excluded ({self.excluded})"
        f = self.fiber
        status = "nodal, certified through the node" if f.nodal else \
            ("infinite order" if f.infinite_order else "NOT certified")
        point = "(" + ", ".join(str(c) for c in f.point) + ")"
        ai = "(" + ", ".join(str(a) for a in f.a_invariants) + ")"
        lines = [f"  lambda = {self.parameter}: point {point} on the fiber "
                 f"with a-invariants {ai} [{status}]"]
        for u, coeffs, conductor in self.field_cubics:
            terms = " + ".join(f"({c}) x^{k}" if k else f"({c})"
                               for k, c in reversed(list(enumerate(coeffs))))
            lines.append(f"    cyclic cubic fiber at u = {u}: {terms} = 0, "
                         f"conductor {conductor}")
        return "\n".join(lines)


@dataclass(frozen=True)
class FamilyReport:
    kind: str
    height_bound: int
    entries: tuple[FamilyEntry, ...]

    def text(self) -> str:
        lines = [f"torsion pencil {self.kind}, fiber search height <= "
                 f"{self.height_bound}"]
        lines.extend(e.text() for e in self.entries)
        return "\n".join(lines)


def run_family(kind: str, parameters, height_bound: int = 6) -> FamilyReport:
    """Report the marked pencil fiber at each parameter and search the base
    curve's slice surface over the pencil's parameter line for cyclic cubic
    fibers, re-deriving each exported cubic through the surface membership
    check.  Excluded parameters are reported, not fatal."""
    if kind not in ("six-torsion", "four-two-torsion"):
        raise ValueError(f"unknown pencil kind: {kind!r}")
    entries: list[FamilyEntry] = []
    for lam in parameters:
        lam = Fraction(lam)
        try:
            fiber = torsion_family(kind, lam)
        except ValueError as exc:
            entries.append(FamilyEntry(lam, str(exc), None, ()))
            continue
        cubics: list[tuple] = []
        try:
            base = torsion_base_curve(kind, lam)
        except ValueError:
            base = None
        if base is not None:
            surface = delta_poly(base)
            t0 = lam if kind == "six-torsion" else Fraction(1)
            seen_u: set[Fraction] = set()
            for fp in fiber_search(surface, t0, height_bound):
                # the two square roots give the same fiber; keep one
                if fp.classification != "cyclic-cubic" or fp.u in seen_u:
                    continue
                seen_u.add(fp.u)
                cubic, split = extract_cubic(surface, fp)
                if split != "cyclic-cubic":
                    raise SurfaceError(
                        "fiber changed splitting type on re-derivation")
                field = CubicField.from_cubic(cubic)
                cubics.append((fp.u, tuple(cubic.coeffs), field.conductor))
        entries.append(FamilyEntry(lam, None, fiber, tuple(cubics)))
    return FamilyReport(kind, height_bound, tuple(entries))
