"""Exact rational q-series.

A :class:`RationalSeries` stores finitely many coefficients of a Laurent
series in q together with the first exponent that is *not* known
(``trunc``).  Every operation returns the widest window it can prove, so a
coefficient that is stored is always correct.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .arith import divisor_sigma


class SeriesError(ValueError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


class RationalSeries:
    """Sparse Laurent series sum c_e q^e known for offset <= e < trunc."""

    __slots__ = ("offset", "trunc", "_c")

    def __init__(self, coeffs: Mapping[int, object] | None = None, trunc: int = 0,
                 offset: int | None = None):
        c = {}
        for e, v in (coeffs or {}).items():
            v = _frac(v)
            if v and e < trunc:
                c[int(e)] = v
        if offset is None:
            offset = min(c) if c else trunc
        if c and min(c) < offset:
            raise SeriesError("coefficient below offset")
        self.offset = int(offset)
        self.trunc = int(trunc)
        self._c = c

    # construction helpers
    @classmethod
    def monomial(cls, exponent: int, coeff=1, trunc: int | None = None) -> "RationalSeries":
        if trunc is None:
            raise SeriesError("monomial needs an explicit trunc")
        return cls({exponent: coeff}, trunc, offset=min(exponent, trunc))

    @classmethod
    def from_list(cls, values: Iterable, offset: int = 0) -> "RationalSeries":
        vals = list(values)
        return cls({offset + i: v for i, v in enumerate(vals)}, offset + len(vals), offset)

    def __getitem__(self, e: int) -> Fraction:
        if e >= self.trunc:
            raise SeriesError(f"coefficient of q^{e} unknown (trunc={self.trunc})")
        return self._c.get(e, Fraction(0))

    def items(self):
        return sorted(self._c.items())

    def coefficients(self, start: int | None = None, stop: int | None = None) -> list[Fraction]:
        start = self.offset if start is None else start
        stop = self.trunc if stop is None else min(stop, self.trunc)
        return [self[e] for e in range(start, stop)]

    def valuation(self) -> int | None:
        return min(self._c) if self._c else None

    def truncate(self, trunc: int) -> "RationalSeries":
        if trunc > self.trunc:
            raise SeriesError("cannot extend a truncated series")
        return RationalSeries(self._c, trunc, min(self.offset, trunc))

    def __repr__(self):
        terms = " + ".join(f"({v})q^{e}" for e, v in self.items()[:6])
        return f"RationalSeries({terms} + O(q^{self.trunc}))"

    def __eq__(self, other):
        if not isinstance(other, RationalSeries):
            return NotImplemented
        return self.trunc == other.trunc and self._c == other._c

    # arithmetic
    def _coerce(self, other) -> "RationalSeries":
        if isinstance(other, RationalSeries):
            return other
        # scalars are exact, so they never shrink the window
        return RationalSeries({0: other}, max(self.trunc, 1), offset=min(0, self.offset))

    def __add__(self, other):
        other = self._coerce(other)
        trunc = min(self.trunc, other.trunc)
        c = dict(self._c)
        for e, v in other._c.items():
            c[e] = c.get(e, 0) + v
        return RationalSeries(c, trunc, min(self.offset, other.offset, trunc))

    __radd__ = __add__

    def __neg__(self):
        return RationalSeries({e: -v for e, v in self._c.items()}, self.trunc, self.offset)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, k) -> "RationalSeries":
        k = _frac(k)
        return RationalSeries({e: k * v for e, v in self._c.items()}, self.trunc, self.offset)

    def __mul__(self, other):
        if not isinstance(other, RationalSeries):
            return self.scale(other)
        # c_e of the product is exact iff every pair feeding it is known
        trunc = min(self.offset + other.trunc, other.offset + self.trunc)
        c: dict[int, Fraction] = {}
        b = other.items()
        for e1, v1 in self.items():
            if e1 + other.offset >= trunc:
                break
            for e2, v2 in b:
                e = e1 + e2
                if e >= trunc:
                    break
                c[e] = c.get(e, 0) + v1 * v2
        return RationalSeries(c, trunc, min(self.offset + other.offset, trunc))

    __rmul__ = __mul__

    def shift(self, k: int) -> "RationalSeries":
        """Multiply by q^k."""
        return RationalSeries({e + k: v for e, v in self._c.items()}, self.trunc + k, self.offset + k)

    def substitute(self, k: int) -> "RationalSeries":
        """f(q) -> f(q^k) for k >= 1."""
        if k < 1:
            raise SeriesError("substitution exponent must be positive")
        # unknown coefficients start at k*trunc; intermediate exponents are zero
        return RationalSeries({k * e: v for e, v in self._c.items()}, k * self.trunc, k * self.offset)

    def D(self) -> "RationalSeries":
        """q d/dq."""
        return RationalSeries({e: e * v for e, v in self._c.items()}, self.trunc, self.offset)

    def inverse(self) -> "RationalSeries":
        v = self.valuation()
        if v is None:
            raise SeriesError("cannot invert a series with no known nonzero coefficient")
        if v < self.offset:
            raise SeriesError("leading coefficient not determined")
        lead = self._c[v]
        n = self.trunc - v  # relative precision
        u = [self[v + i] / lead for i in range(n)]
        inv = [Fraction(0)] * n
        inv[0] = Fraction(1)
        for i in range(1, n):
            s = Fraction(0)
            for j in range(1, i + 1):
                if u[j]:
                    s += u[j] * inv[i - j]
            inv[i] = -s
        return RationalSeries({i - v: x / lead for i, x in enumerate(inv)}, n - v, -v)

    def __truediv__(self, other):
        if not isinstance(other, RationalSeries):
            return self.scale(Fraction(1) / _frac(other))
        return self * other.inverse()

    def __pow__(self, k: int):
        if k < 0:
            return self.inverse() ** (-k)
        if k == 0:
            return RationalSeries({0: 1}, self.trunc - self.offset, 0)
        result = None
        base = self
        while True:
            if k & 1:
                result = base if result is None else result * base
            k >>= 1
            if not k:
                return result
            base = base * base

    # text form: one "exponent<TAB>num/den" line per nonzero coefficient
    def to_text(self) -> str:
        lines = [f"# offset={self.offset} trunc={self.trunc}"]
        lines += [f"{e}\t{v.numerator}/{v.denominator}" for e, v in self.items()]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "RationalSeries":
        offset = trunc = None
        c = {}
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                for tok in line[1:].split():
                    key, _, val = tok.partition("=")
                    if key == "offset":
                        offset = int(val)
                    elif key == "trunc":
                        trunc = int(val)
                continue
            e, v = line.split("\t")
            c[int(e)] = Fraction(v)
        if trunc is None:
            raise SeriesError("missing trunc header")
        return cls(c, trunc, offset)


@dataclass(frozen=True)
class FractionalPower:
    """q^(prefactorNum/prefactorDen) * series."""
    series: RationalSeries
    prefactorNum: int
    prefactorDen: int

    def __post_init__(self):
        if self.prefactorDen <= 0:
            raise SeriesError("prefactor denominator must be positive")

    def __mul__(self, other: "FractionalPower") -> "FractionalPower":
        num = self.prefactorNum * other.prefactorDen + other.prefactorNum * self.prefactorDen
        den = self.prefactorDen * other.prefactorDen
        f = Fraction(num, den)
        return FractionalPower(self.series * other.series, f.numerator, f.denominator)

    def __pow__(self, k: int) -> "FractionalPower":
        f = Fraction(self.prefactorNum * k, self.prefactorDen)
        return FractionalPower(self.series ** k, f.numerator, f.denominator)

    def substitute(self, k: int) -> "FractionalPower":
        f = Fraction(self.prefactorNum * k, self.prefactorDen)
        return FractionalPower(self.series.substitute(k), f.numerator, f.denominator)

    def to_integral(self) -> RationalSeries:
        """Absorb an integral prefactor into the series."""
        f = Fraction(self.prefactorNum, self.prefactorDen)
        if f.denominator != 1:
            raise SeriesError(f"prefactor q^{f} is not integral")
        return self.series.shift(int(f))


def theta_series(trunc: int) -> RationalSeries:
    if trunc < 1:
        raise SeriesError("trunc must be >= 1")
    c = {0: 1}
    n = 1
    while n * n < trunc:
        c[n * n] = 2
        n += 1
    return RationalSeries(c, trunc, 0)


def euler_product(trunc: int) -> RationalSeries:
    """prod_{n>=1} (1 - q^n) via the pentagonal number theorem, checked in tests
    against the naive product."""
    c = {}
    k = 0
    while True:
        done = True
        for kk in ((k,) if k == 0 else (k, -k)):
            e = kk * (3 * kk - 1) // 2
            if e < trunc:
                c[e] = -1 if kk % 2 else 1
                done = False
        if done and k > 0:
            break
        k += 1
    return RationalSeries(c, trunc, 0)


def naive_euler_product(trunc: int) -> RationalSeries:
    p = RationalSeries({0: 1}, trunc, 0)
    for n in range(1, trunc):
        p = p * RationalSeries({0: 1, n: -1}, trunc, 0)
    return p


def eta_series(trunc: int) -> FractionalPower:
    if trunc < 1:
        raise SeriesError("trunc must be >= 1")
    return FractionalPower(euler_product(trunc), 1, 24)


def eisenstein_series(weight: int, trunc: int) -> RationalSeries:
    """Level-one Eisenstein series with constant term 1 (weights 4, 6, 10)."""
    const = {4: 240, 6: -504, 8: 480, 10: -264, 14: -24}[weight]
    c = {0: 1}
    for n in range(1, trunc):
        c[n] = const * divisor_sigma(n, weight - 1)
    return RationalSeries(c, trunc, 0)


def eisenstein_E10(trunc: int) -> RationalSeries:
    if trunc < 1:
        raise SeriesError("trunc must be >= 1")
    return eisenstein_series(10, trunc)


def delta_series(trunc: int) -> RationalSeries:
    if trunc < 2:
        raise SeriesError("trunc must be >= 2")
    return (euler_product(trunc - 1) ** 24).truncate(trunc - 1).shift(1)


def rankin_cohen_1(f: RationalSeries, k, g: RationalSeries, l) -> RationalSeries:
    """[f, g]_1 = k f D(g) - l g D(f) for weights k, l."""
    return f * g.D() * _frac(k) - g * f.D() * _frac(l)


def f3_series(trunc: int) -> RationalSeries:
    """f_3 = q^-3 - 248 q + 26752 q^4 - ... (known through q^(trunc-1))."""
    if trunc < 1:
        raise SeriesError("trunc must be >= 1")
    # dividing by Delta(4 tau) = q^4 + ... costs 8 exponents of window
    t = trunc + 8
    th = theta_series(t)
    e10 = eisenstein_E10((t + 3) // 4 + 1).substitute(4).truncate(t)
    d4 = delta_series((t - 4 + 3) // 4 + 2).substitute(4).truncate(t)
    bracket = rankin_cohen_1(th, Fraction(1, 2), e10, 10)
    f = (bracket / d4 + th * 608) * Fraction(-1, 20)
    f = f.truncate(trunc)
    for e, v in f.items():
        if v.denominator != 1:
            raise SeriesError(f"non-integral coefficient at q^{e}")
    return f


def F3_series(trunc: int) -> RationalSeries:
    """2 f_3 + 248 theta."""
    return f3_series(trunc) * 2 + theta_series(trunc) * 248


def j_cube_root(trunc: int) -> FractionalPower:
    """j^(1/3) = E4 / eta^8, known through q^(trunc - 1/3)."""
    e4 = eisenstein_series(4, trunc)
    return FractionalPower(e4 / (euler_product(trunc) ** 8), -1, 3)


def borcherds_product(trunc: int, f3: RationalSeries | None = None) -> FractionalPower:
    """q^(-1/3) prod_{n>=1} (1 - q^n)^{A(n^2,3)} through q^(trunc - 1/3)."""
    if f3 is None:
        f3 = f3_series((trunc - 1) ** 2 + 1 if trunc > 1 else 2)
    p = RationalSeries({0: 1}, trunc, 0)
    for n in range(1, trunc):
        p = p * _binomial_power(n, int(f3[n * n]), trunc)
    return FractionalPower(p, -1, 3)


def _binomial_power(n: int, A: int, trunc: int) -> RationalSeries:
    """(1 - q^n)^A for any integer A, through q^(trunc-1)."""
    c = {0: Fraction(1)}
    coef = Fraction(1)
    k = 1
    while n * k < trunc:
        coef = coef * (A - k + 1) / k
        c[n * k] = coef * (-1) ** k
        k += 1
    return RationalSeries(c, trunc, 0)


@dataclass
class BorcherdsReport:
    ok: bool
    checked_through: int
    first_mismatch: tuple | None
    product: FractionalPower
    expected: FractionalPower

    def coefficient(self, exponent: Fraction) -> Fraction:
        """Coefficient of q^exponent in the product (exponent in -1/3 + Z)."""
        e = Fraction(exponent) + Fraction(1, 3)
        if e.denominator != 1:
            raise SeriesError("exponent not in -1/3 + Z")
        return self.product.series[int(e)]


def borcherds_product_check(trunc: int) -> BorcherdsReport:
    if trunc < 4:
        raise SeriesError("trunc must be >= 4")
    prod = borcherds_product(trunc)
    expected = j_cube_root(trunc)
    mismatch = None
    for e in range(trunc):
        a, b = prod.series[e], expected.series[e]
        if a != b:
            mismatch = (Fraction(3 * e - 1, 3), a, b)
            break
    return BorcherdsReport(mismatch is None, trunc - 1, mismatch, prod, expected)


# eta-quotient hauptmoduls: exponents r_k of eta(k tau) and the additive constant
HAUPTMODUL_ETA = {
    2: ({1: 24, 2: -24}, 24),
    3: ({1: 12, 3: -12}, 12),
    4: ({1: 8, 4: -8}, 8),
    5: ({1: 6, 5: -6}, 6),
    6: ({1: 5, 3: 1, 2: -1, 6: -5}, 5),
    7: ({1: 4, 7: -4}, 4),
    8: ({1: 4, 4: 2, 2: -2, 8: -4}, 4),
    9: ({1: 3, 9: -3}, 3),
    10: ({1: 3, 5: 1, 2: -1, 10: -3}, 3),
    12: ({1: 3, 4: 1, 6: 2, 2: -2, 3: -1, 12: -3}, 3),
    13: ({1: 2, 13: -2}, 2),
    16: ({1: 2, 8: 1, 2: -1, 16: -2}, 2),
    18: ({1: 2, 6: 1, 9: 1, 2: -1, 3: -1, 18: -2}, 2),
    25: ({1: 1, 25: -1}, 1),
}
HAUPTMODUL_LEVELS = (1,) + tuple(sorted(HAUPTMODUL_ETA))


def eta_quotient(exponents: Mapping[int, int], trunc: int) -> RationalSeries:
    """prod eta(k tau)^r_k as a Laurent series; the total q-power must be integral."""
    pref = Fraction(sum(k * r for k, r in exponents.items()), 24)
    if pref.denominator != 1:
        raise SeriesError("eta quotient has a fractional q-power")
    t = trunc - int(pref) + 1
    num = RationalSeries({0: 1}, t, 0)
    den = RationalSeries({0: 1}, t, 0)
    for k, r in exponents.items():
        base = euler_product((t - 1) // k + 1).substitute(k).truncate(t)
        if r > 0:
            num = num * base ** r
        elif r < 0:
            den = den * base ** (-r)
    return (num / den).shift(int(pref)).truncate(trunc)


def hauptmodul_qexp(level: int, trunc: int) -> RationalSeries:
    """Normalized hauptmodul q^-1 + 0 + O(q) for Gamma_0(level)."""
    if level == 1:
        e4 = eisenstein_series(4, trunc + 2)
        j = (e4 ** 3).truncate(trunc + 1) / delta_series(trunc + 2)
        return (j - 744).truncate(trunc)
    if level not in HAUPTMODUL_ETA:
        raise SeriesError(f"unsupported level {level}")
    exps, const = HAUPTMODUL_ETA[level]
    t = eta_quotient(exps, trunc) + const
    if t[0] != 0 or t[-1] != 1:
        raise SeriesError(f"level {level}: eta quotient not normalized")
    return t
