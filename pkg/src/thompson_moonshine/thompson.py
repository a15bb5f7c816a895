"""Thompson group data, McKay-Thompson series and supermodule decompositions."""

from __future__ import annotations

import csv
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import mpmath

from .arith import is_fundamental_discriminant, is_square, squarefree_part
from .cmeval import PrecisionContext, trace_coefficient
from .qseries import HAUPTMODUL_LEVELS, F3_series
from .rademacher import (CUTOFF_CAP_BASE, DEFAULT_CUTOFF_BASE, MultiplierSystem,
                         converge_rounded)

ENV_DATA_DIR = "MOONSHINE_DATA_DIR"


class DataError(ValueError):
    pass


def data_dir(override: str | os.PathLike | None = None) -> Path:
    """Explicit argument, then $MOONSHINE_DATA_DIR, then the packaged data."""
    if override:
        return Path(override)
    env = os.environ.get(ENV_DATA_DIR)
    if env:
        return Path(env)
    return Path(str(resources.files("thompson_moonshine") / "data"))


def _read_csv(path: Path) -> list[dict]:
    try:
        with open(path, newline="") as fh:
            return list(csv.DictReader(line for line in fh if not line.startswith("#")))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from exc


# character values --------------------------------------------------------

@dataclass(frozen=True)
class CharacterValue:
    """rat + irr * sqrt(disc)."""
    rat: Fraction
    irr: Fraction = Fraction(0)
    disc: int = 0

    def __post_init__(self):
        if self.irr and self.disc >= 0:
            raise DataError("irrational part needs a negative discriminant")

    @property
    def is_rational(self) -> bool:
        return self.irr == 0

    def conjugate(self) -> "CharacterValue":
        return CharacterValue(self.rat, -self.irr, self.disc)

    def to_mpc(self) -> mpmath.mpc:
        v = mpmath.mpf(self.rat.numerator) / self.rat.denominator
        if not self.irr:
            return mpmath.mpc(v)
        return v + mpmath.mpf(self.irr.numerator) / self.irr.denominator * mpmath.sqrt(self.disc)

    def radical(self) -> tuple[int, Fraction]:
        """(s, y) with irr*sqrt(disc) = y*sqrt(s), s squarefree; (1, 0) if rational."""
        if not self.irr:
            return 1, Fraction(0)
        s, f = squarefree_part(self.disc)
        return s, self.irr * f

    def __str__(self):
        if not self.irr:
            return str(self.rat)
        return f"{self.rat}+{self.irr}*sqrt({self.disc})"


@dataclass(frozen=True)
class ConjugacyClass:
    name: str
    order: int
    v: int
    h: int
    kappas: tuple = ()          # ((m, kappa), ...) meaning kappa * theta(m^2 tau)

    def __post_init__(self):
        if (2 * self.order) % self.h:
            raise DataError(f"{self.name}: h={self.h} does not divide 2*o(g)")
        for m, _ in self.kappas:
            if (self.order * self.h) % (m * m):
                raise DataError(f"{self.name}: m={m} with m^2 not dividing o(g) h")

    @property
    def multiplier(self) -> MultiplierSystem:
        return MultiplierSystem(self.order, self.v, self.h)

    def theta_correction(self, n: int) -> Fraction:
        """Coefficient of q^n in sum kappa_m theta(m^2 tau)."""
        tot = Fraction(0)
        for m, k in self.kappas:
            if n == 0:
                tot += k
            elif n > 0 and n % (m * m) == 0 and is_square(n // (m * m)):
                tot += 2 * k
        return tot


def load_classes(path=None) -> list[ConjugacyClass]:
    p = Path(path) if path else data_dir() / "classes.csv"
    out = []
    for row in _read_csv(p):
        kap = []
        for tok in filter(None, row["kappas"].split(";")):
            m, k = tok.split(":")
            kap.append((int(m), Fraction(k)))
        out.append(ConjugacyClass(row["name"], int(row["order"]), int(row["v"]), int(row["h"]),
                                  tuple(kap)))
    if len(out) != 48:
        raise DataError(f"expected 48 classes, found {len(out)}")
    return out


# character table ----------------------------------------------------------

SPOT_CHECKS = [  # (row, class, value) asserted on load
    (2, "1A", CharacterValue(Fraction(248))),
    (2, "2A", CharacterValue(Fraction(-8))),
    (9, "3B", CharacterValue(Fraction(-27))),
    (40, "1A", CharacterValue(Fraction(44330496))),
    (1, "39A", CharacterValue(Fraction(1))),
    (9, "15A", CharacterValue(Fraction(-1, 2), Fraction(1, 2), -15)),
    (4, "12A", CharacterValue(Fraction(-1), Fraction(2), -3)),
]


@dataclass
class CharacterTable:
    classes: list[str]
    values: list[list[CharacterValue]]     # values[i][j] = chi_{i+1}(class j)

    @property
    def dims(self) -> list[int]:
        return [int(row[0].rat) for row in self.values]

    def value(self, i: int, cls: str) -> CharacterValue:
        return self.values[i - 1][self.classes.index(cls)]

    def row(self, i: int) -> list[CharacterValue]:
        return self.values[i - 1]

    def is_real(self, i: int) -> bool:
        return all(v.is_rational or v.disc > 0 for v in self.row(i))

    def conjugate_of(self, i: int) -> int:
        target = [v.conjugate() for v in self.row(i)]
        for j in range(1, len(self.values) + 1):
            if self.row(j) == target:
                return j
        raise DataError(f"no conjugate row for chi_{i}")

    def conjugate_pairs(self) -> list[tuple[int, int]]:
        out = []
        for i in range(1, len(self.values) + 1):
            if not self.is_real(i):
                j = self.conjugate_of(i)
                if i < j:
                    out.append((i, j))
        return out

    def field(self, i: int) -> int:
        """Squarefree s with all values of chi_i in Q(sqrt s); 1 if rational."""
        rads = {v.radical()[0] for v in self.row(i) if not v.is_rational}
        if len(rads) > 1:
            raise DataError(f"chi_{i} has values in several quadratic fields")
        return rads.pop() if rads else 1

    def generates_integers(self, i: int) -> bool:
        """Do the values of chi_i generate the full ring of integers of its field?"""
        s = self.field(i)
        if s == 1:
            return False
        g = 0
        for v in self.row(i):
            _, y = v.radical()
            # coordinate on omega = (1 + sqrt s)/2 (s = 1 mod 4) or sqrt s
            w = 2 * y if s % 4 == 1 else y
            if w.denominator != 1:
                raise DataError(f"chi_{i} has a non-integral value {v}")
            g = math.gcd(g, int(w))
        return g == 1

    def matrix(self, dps: int = 50) -> mpmath.matrix:
        with mpmath.workdps(dps):
            n = len(self.values)
            M = mpmath.matrix(n, n)
            for i in range(n):
                for j in range(n):
                    M[i, j] = self.values[i][j].to_mpc()
        return M

    def orthogonality_defect(self, dps: int = 30) -> float:
        """max |<col_j, col_k>| over j != k (0 for a consistent table)."""
        with mpmath.workdps(dps):
            M = self.matrix(dps)
            n = M.rows
            worst = mpmath.mpf(0)
            for j in range(n):
                for k in range(j + 1, n):
                    s = mpmath.fsum(M[i, j] * mpmath.conj(M[i, k]) for i in range(n))
                    worst = max(worst, abs(s))
        return float(worst)

    def centralizer_orders(self) -> list[int]:
        """|C(g)| = sum_i |chi_i(g)|^2 (column orthogonality)."""
        out = []
        for j in range(len(self.classes)):
            tot = Fraction(0)
            for row in self.values:
                v = row[j]
                # |rat + y sqrt(s)|^2 = rat^2 - s y^2 for s < 0
                s, y = v.radical()
                tot += v.rat ** 2 + (-s * y * y if v.irr else 0)
            if tot.denominator != 1:
                raise DataError("non-integral centralizer order")
            out.append(int(tot))
        return out


def load_character_table(path=None, classes: Sequence[str] | None = None) -> CharacterTable:
    p = Path(path) if path else data_dir() / "thompson_character_table.csv"
    rows = _read_csv(p)
    cls_order: list[str] = []
    cells: dict[tuple[int, str], CharacterValue] = {}
    for r in rows:
        try:
            i, g = int(r["row"]), r["class"]
            val = CharacterValue(Fraction(r["rat"]), Fraction(r["irr"]), int(r["disc"]))
        except (KeyError, ValueError) as exc:
            raise DataError(f"bad record {r}: {exc}") from exc
        if g not in cls_order:
            cls_order.append(g)
        cells[(i, g)] = val
    if classes:
        cls_order = list(classes)
    n = len(cls_order)
    if n != 48:
        raise DataError(f"expected 48 classes, found {n}")
    values = []
    for i in range(1, n + 1):
        try:
            values.append([cells[(i, g)] for g in cls_order])
        except KeyError as exc:
            raise DataError(f"missing cell chi_{i}({exc.args[0][1]})") from exc
    table = CharacterTable(cls_order, values)
    for i, g, want in SPOT_CHECKS:
        got = table.value(i, g)
        if got != want:
            raise DataError(f"spot check failed: chi_{i}({g}) = {got}, expected {want}")
    if any(table.value(1, g) != CharacterValue(Fraction(1)) for g in cls_order):
        raise DataError("chi_1 is not the trivial character")
    return table


# golden files --------------------------------------------------------------

def load_golden_mt(path=None) -> dict[str, dict[int, int]]:
    p = Path(path) if path else data_dir() / "golden_mt.csv"
    out: dict[str, dict[int, int]] = {}
    for r in _read_csv(p):
        out.setdefault(r["class"], {})[int(r["n"])] = int(r["value"])
    return out


def load_golden_f3(path=None) -> dict[int, int]:
    p = Path(path) if path else data_dir() / "golden_f3.csv"
    return {int(r["m"]): int(r["c"]) for r in _read_csv(p)}


def load_golden_decomposition(path=None) -> dict[int, list[int]]:
    p = Path(path) if path else data_dir() / "golden_decomposition.csv"
    out: dict[int, list[int]] = {}
    for r in _read_csv(p):
        out.setdefault(int(r["m"]), [0] * 48)[int(r["irrep"]) - 1] = int(r["mult"])
    return out


@dataclass(frozen=True)
class Erratum:
    file: str
    key: str
    printed: str
    corrected: str
    evidence: str


def load_errata(path=None) -> list[Erratum]:
    p = Path(path) if path else data_dir() / "errata.csv"
    return [Erratum(r["file"], r["key"], r["printed"], r["corrected"], r["evidence"])
            for r in _read_csv(p)]


# McKay-Thompson series -------------------------------------------------------

# linear combinations of psi_0 series for the two classes whose trace route
# goes through several levels: F = sum coef * Z_level
TRACE_COMBINATIONS = {
    "4B": ((-2, 4), (4, 8)),
    "8A": ((-2, 8), (4, 16)),
}


def exponents(trunc: int) -> list[int]:
    return [-3] + [n for n in range(0, trunc + 1) if n % 4 in (0, 1)]


@dataclass
class MTCoefficient:
    n: int
    value: int | None
    route: str                 # exact | trace | rademacher
    residue: float
    cutoff: int | None = None
    tail_indicator: float | None = None
    history: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.value is not None


@dataclass
class MTSeries:
    cls: str
    coefficients: dict[int, MTCoefficient]

    def values(self) -> dict[int, int | None]:
        return {n: c.value for n, c in self.coefficients.items()}

    @property
    def failures(self) -> list[MTCoefficient]:
        return [c for c in self.coefficients.values() if not c.ok]


def route_for(cls: ConjugacyClass, n: int) -> str:
    if n == -3 or cls.name == "1A":
        return "exact"
    if n > 0 and not is_square(n):
        if cls.name in TRACE_COMBINATIONS:
            return "trace"
        if cls.v % cls.h == 0 and cls.order in HAUPTMODUL_LEVELS:
            return "trace"
    return "rademacher"


def mt_coefficient(cls: ConjugacyClass, n: int, ctx: PrecisionContext | None = None,
                   cutoff_base: int = DEFAULT_CUTOFF_BASE, cap_base: int = CUTOFF_CAP_BASE,
                   route: str | None = None, f3=None) -> MTCoefficient:
    """One coefficient of F_{3,[g]} = 2 Z_{o(g),psi} + sum kappa_m theta(m^2 tau)."""
    ctx = ctx or PrecisionContext()
    route = route or route_for(cls, n)
    if route == "exact":
        if n == -3:
            return MTCoefficient(n, 2, "exact", 0.0)
        if cls.name != "1A":
            raise ValueError("the exact route exists for 1A only")
        series = f3 if f3 is not None else F3_series(max(n + 1, 2))
        return MTCoefficient(n, int(series[n]), "exact", 0.0)
    if route == "trace":
        if cls.name in TRACE_COMBINATIONS:
            parts = TRACE_COMBINATIONS[cls.name]
        else:
            parts = ((2, cls.order),)
        est = mpmath.mpf(0)
        res = mpmath.mpf(0)
        for coef, level in parts:
            t = trace_coefficient(level, n, ctx)
            est += coef * t.estimate
            res += abs(coef) * t.residue
        est += cls.theta_correction(n)   # zero off the squares, kept for uniformity
        val = int(mpmath.nint(est))
        return MTCoefficient(n, val, "trace", float(res + abs(est - val)))
    if route == "rademacher":
        cv = converge_rounded(cls.multiplier, n, scale=2, offset=cls.theta_correction(n),
                              cutoff_base=cutoff_base, cap_base=cap_base)
        return MTCoefficient(n, cv.value, "rademacher", cv.residue, cv.cutoff,
                             cv.tail_indicator, cv.history)
    raise ValueError(f"unknown route {route}")


def mt_series_exact(cls: ConjugacyClass, trunc: int = 33, ctx: PrecisionContext | None = None,
                    cutoff_base: int = DEFAULT_CUTOFF_BASE,
                    cap_base: int = CUTOFF_CAP_BASE) -> MTSeries:
    ctx = ctx or PrecisionContext()
    f3 = F3_series(trunc + 1) if cls.name == "1A" else None
    coeffs = {n: mt_coefficient(cls, n, ctx, cutoff_base, cap_base, f3=f3)
              for n in exponents(trunc)}
    return MTSeries(cls.name, coeffs)


# supermodule -------------------------------------------------------------------

def supertrace_sign(m: int) -> int:
    if m == -3 or (m >= 0 and m % 4 == 0):
        return 1
    if m > 0 and m % 4 == 1:
        return -1
    raise ValueError(f"m={m} is not a valid exponent")


@dataclass
class SupermoduleDecomposition:
    m: int
    parity: str
    mults: list[int | None]
    residue: float
    ok: bool
    issues: list[str] = field(default_factory=list)

    def nonzero(self) -> dict[int, int]:
        return {i + 1: b for i, b in enumerate(self.mults) if b}


@lru_cache(maxsize=4)
def _inverse_transpose(table_id: int, dps: int):
    table = _TABLES[table_id]
    with mpmath.workdps(dps):
        return mpmath.inverse(table.matrix(dps).T)


_TABLES: dict[int, CharacterTable] = {}


def decompose(m: int, coefVector: Sequence[int], table: CharacterTable,
              dps: int = 50, tol: float = 1e-6) -> SupermoduleDecomposition:
    """Solve sum_i b_i chi_i(g) = sign(m) coefVector[g] for the multiplicities b_i."""
    if len(coefVector) != len(table.classes):
        raise ValueError("need one coefficient per class")
    if dps < 50:
        raise ValueError("use at least 50 digits")
    sign = supertrace_sign(m)
    _TABLES[id(table)] = table
    inv = _inverse_transpose(id(table), dps)
    issues = []
    with mpmath.workdps(dps):
        rhs = mpmath.matrix([sign * int(x) for x in coefVector])
        b = inv * rhs
        mults, worst = [], mpmath.mpf(0)
        for i in range(b.rows):
            r = int(mpmath.nint(b[i].real))
            dev = abs(b[i] - r)
            worst = max(worst, dev)
            mults.append(r)
            if dev >= tol:
                issues.append(f"b_{i + 1} = {mpmath.nstr(b[i], 12)} is not integral")
            elif r < 0:
                issues.append(f"b_{i + 1} = {r} is negative")
    # exact recombination in the quadratic fields
    for j, g in enumerate(table.classes):
        rat = Fraction(0)
        irr: dict[int, Fraction] = {}
        for i, bi in enumerate(mults):
            v = table.values[i][j]
            rat += bi * v.rat
            s, y = v.radical()
            if y:
                irr[s] = irr.get(s, Fraction(0)) + bi * y
        if rat != sign * int(coefVector[j]) or any(irr.values()):
            issues.append(f"recombination fails on class {g}")
            break
    parity = "even" if sign == 1 else "odd"
    return SupermoduleDecomposition(m, parity, mults, float(worst), not issues, issues)


def fundamental_discriminant_split(m: int) -> tuple[int, int]:
    """-3m = D0 * lambda^2 with D0 a negative fundamental discriminant."""
    if m <= 0 or m % 4 not in (0, 1):
        raise ValueError("m must be positive and = 0, 1 mod 4")
    D = -3 * m
    s, f = squarefree_part(D)
    if s % 4 == 1:
        D0, lam = s, f
    else:
        if f % 2:
            raise ValueError(f"{D} is not a discriminant")
        D0, lam = 4 * s, f // 2
    assert is_fundamental_discriminant(D0) and D0 * lam * lam == D
    return D0, lam


def fundamental_from_squarefree(s: int) -> int:
    return s if s % 4 == 1 else 4 * s


def representations_of_type(table: CharacterTable, D0: int) -> list[tuple[int, int]]:
    """Conjugate pairs whose values generate the integers of Q(sqrt D0)."""
    out = []
    for i, j in table.conjugate_pairs():
        s = table.field(i)
        if fundamental_from_squarefree(s) == D0 and table.generates_integers(i):
            out.append((i, j))
    return out


@dataclass
class Finding:
    section: str
    subject: str
    ok: bool | None          # None = not applicable
    detail: str

    def line(self) -> str:
        tag = {True: "PASS", False: "FAIL", None: "N/A"}[self.ok]
        return f"[{tag}] {self.section} {self.subject}: {self.detail}"


@dataclass
class DiscriminantReport:
    qualifying: list[int]
    types: dict[int, list[tuple[int, int]]]
    findings: list[Finding]

    @property
    def ok(self) -> bool:
        return all(f.ok is not False for f in self.findings)

    def text(self) -> str:
        head = [f"qualifying D0: {self.qualifying}"]
        head += [f"type {d}: {self.types[d]}" for d in self.qualifying]
        return "\n".join(head + [f.line() for f in self.findings]) + "\n"


def verify_discriminant_property(mMax: int, decomps: dict[int, SupermoduleDecomposition],
                                 table: CharacterTable, classes: Iterable[ConjugacyClass],
                                 c: dict[int, int]) -> DiscriminantReport:
    """Check the discriminant statements against the computed decompositions.

    `c` maps m to the coefficient c(m) of F_3 (used to decide which -3m are
    discriminants of F_3).
    """
    orders = sorted({k.order for k in classes})
    ms = [m for m in range(1, mMax + 1) if m % 4 in (0, 1)]
    split = {m: fundamental_discriminant_split(m) for m in ms}
    # (1) an element of order |D0|; (2) some lambda prime to 3 with c(m) != 0
    cands = sorted({D0 for D0, _ in split.values() if -D0 in orders}, reverse=True)
    qualifying = [D0 for D0 in cands
                  if any(split[m][0] == D0 and math.gcd(split[m][1], 3) == 1 and c.get(m)
                         for m in ms)]
    types = {D0: representations_of_type(table, D0) for D0 in qualifying}
    findings: list[Finding] = []

    # (a) character values in Q(sqrt D0) on classes of order divisible by |D0|
    for D0 in qualifying:
        hits = []
        for i, j in table.conjugate_pairs():
            for k, g in enumerate(table.classes):
                v = table.values[i - 1][k]
                if not v.is_rational and fundamental_from_squarefree(v.radical()[0]) == D0 \
                        and int(g[:-1]) % (-D0) == 0:
                    hits.append((i, j, g))
                    break
        findings.append(Finding("a", f"D0={D0}", bool(hits),
                                f"pairs {[(i, j) for i, j, _ in hits][:4]}" if hits else "no pair"))

    # (b) at the minimal lambda, W_m = V + Vbar over Q(sqrt D0)
    for D0 in qualifying:
        lam_m = [m for m in ms if split[m][0] == D0 and c.get(m)]
        if not lam_m:
            findings.append(Finding("b", f"D0={D0}", None, "no discriminant below mMax"))
            continue
        m = min(lam_m, key=lambda t: split[t][1])
        dec = decomps.get(m)
        if dec is None:
            findings.append(Finding("b", f"D0={D0}", False, f"no decomposition for m={m}"))
            continue
        nz = dec.nonzero()
        ok = False
        if len(nz) == 2 and set(nz.values()) == {1}:
            i, j = sorted(nz)
            ok = (not table.is_real(i) and table.conjugate_of(i) == j
                  and fundamental_from_squarefree(table.field(i)) == D0)
        desc = " + ".join(f"{b}*V{i}" if b != 1 else f"V{i}" for i, b in sorted(nz.items()))
        findings.append(Finding("b", f"D0={D0} m={m}", ok, f"W_{m} = {desc}"))

    # (c) presence and odd multiplicity of a type-D0 pair
    for m in ms:
        D0, lam = split[m]
        if D0 not in qualifying or not c.get(m) or math.gcd(lam, 3) != 1:
            continue
        dec = decomps.get(m)
        pairs = types[D0]
        if not pairs:
            findings.append(Finding("c", f"m={m} D0={D0}", None,
                                    "no irreducible representation has type D0"))
            continue
        if dec is None:
            findings.append(Finding("c", f"m={m} D0={D0}", False, "no decomposition"))
            continue
        mult = {p: (dec.mults[p[0] - 1], dec.mults[p[1] - 1]) for p in pairs}
        present = any(a and b for a, b in mult.values())
        odd = any(a == b and a % 2 == 1 for a, b in mult.values())
        findings.append(Finding("c", f"m={m} D0={D0} present", present, f"mults {mult}"))
        if D0 in (-15, -24, -39):
            findings.append(Finding("c", f"m={m} D0={D0} odd", odd, f"mults {mult}"))
    return DiscriminantReport(qualifying, types, findings)
