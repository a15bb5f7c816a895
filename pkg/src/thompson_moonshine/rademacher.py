"""Weight one-half Rademacher coefficients A^{(1,3)}_{N,psi}(n).

Two routes are provided.  :func:`rademacher_coefficient` uses the compiled
(or pure-Python) kernel which evaluates each Kloosterman sum through its
quadratic-form (Salie) expansion; :func:`rademacher_direct` sums the
Kloosterman sums from their definition and is used as an oracle.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

import mpmath

from . import kernels
from .arith import is_square, kronecker
from .bqf import class_reps
from .cmeval import PrecisionContext

MU = 3          # the principal part is q^-3 throughout
DEFAULT_CUTOFF_BASE = 10 ** 4
CUTOFF_CAP_BASE = 10 ** 6


class RademacherError(ValueError):
    pass


@dataclass(frozen=True)
class MultiplierSystem:
    """psi_{N,v,h}(gamma) = psi_0(gamma) e(-v c d / (N h))."""
    N: int
    v: int = 0
    h: int = 1

    def __post_init__(self):
        if self.N < 1 or self.h < 1:
            raise RademacherError("N and h must be positive")
        if (16 * self.v * self.N) % self.h:
            # n' = n - v c^2/(N h) must stay integral for c = 4 N k
            raise RademacherError(f"h={self.h} incompatible with N={self.N}")

    @property
    def is_psi0(self) -> bool:
        return self.v % self.h == 0


def psi0_ms(N: int = 1) -> MultiplierSystem:
    return MultiplierSystem(N, 0, 1)


def _check_pair(c: int, d: int):
    if c % 4 or d % 2 == 0 or math.gcd(c, d) != 1:
        raise RademacherError(f"invalid residue pair (c, d) = ({c}, {d})")


def psi0(c: int, d: int) -> complex:
    """(c/d) eps_d with eps_d = 1 for d = 1 mod 4 and i for d = 3 mod 4."""
    _check_pair(c, d)
    eps = 1 if d % 4 == 1 else 1j
    return kronecker(c, d) * eps


def e(x: Fraction) -> complex:
    x = Fraction(x) % 1
    return cmath.exp(2j * math.pi * float(x))


def psi_twisted(ms: MultiplierSystem, c: int, d: int) -> complex:
    return psi0(c, d) * e(Fraction(-ms.v * c * d, ms.N * ms.h))


def kloosterman(m: int, n: int, c: int, ms: MultiplierSystem) -> complex:
    """sum over d in (Z/c)^* of psi(c, d) e((m dbar + n d)/c)."""
    if c <= 0 or c % 4:
        raise RademacherError("c must be a positive multiple of 4")
    return complex(kernels.kloosterman_direct(m, n, c, ms.N, ms.v, ms.h))


def bessel_I_half(x, ctx: PrecisionContext | None = None):
    ctx = ctx or PrecisionContext()
    with mpmath.workdps(ctx.working_digits):
        x = mpmath.mpf(x)
        if x <= 0:
            raise RademacherError("x must be positive")
        return +(mpmath.sqrt(2 / (mpmath.pi * x)) * mpmath.sinh(x))


def hurwitz(d: int) -> Fraction:
    """Hurwitz class number H(d) = sum of 1/omega_Q over Q_d / SL(2,Z)."""
    if d <= 0 or d % 4 not in (0, 3):
        raise RademacherError(f"H({d}) undefined")
    return sum((Fraction(1, r.stabOrder) for r in class_reps(d, 1)), Fraction(0))


class RademacherEstimate(NamedTuple):
    estimate: float
    tail_indicator: float


@dataclass
class PartialSums:
    """Incremental partial sums of the plus-space coefficient series.

    Blocks are summed in increasing c; extending the cutoff reuses the prefix
    so a doubling sequence costs as much as its final cutoff.
    """
    ms: MultiplierSystem
    n: int
    k_done: int = 0
    blocks: list = field(default_factory=list)     # (k_lo, k_hi, total, lo, hi)

    def extend(self, cutoff: int) -> RademacherEstimate:
        k_max = cutoff // (4 * self.ms.N)
        if k_max < 1:
            raise RademacherError("cutoff must be at least 4N")
        if k_max < self.k_done:
            raise RademacherError("partial sums only extend forwards")
        if k_max > self.k_done:
            lo_k = self.k_done + 1
            # split into two halves so the last half always has its own spread
            mid = max(lo_k - 1, k_max // 2)
            for a, b in ((lo_k, mid), (mid + 1, k_max)):
                if a <= b:
                    tot, lo, hi = kernels.plus_space_block(self.ms.N, self.ms.v, self.ms.h,
                                                           self.n, a, b)
                    self.blocks.append((a, b, tot, lo, hi))
            self.k_done = k_max
        return self.at(k_max)

    def at(self, k_max: int) -> RademacherEstimate:
        est = math.fsum(b[2] for b in self.blocks if b[1] <= k_max)
        # spread of the running partial sums over (K/2, K]
        start = math.fsum(b[2] for b in self.blocks if b[1] <= k_max // 2)
        lo = hi = 0.0
        run = start
        for a, b, tot, blo, bhi in self.blocks:
            if b <= k_max // 2 or b > k_max:
                continue
            lo = min(lo, run - start + blo)
            hi = max(hi, run - start + bhi)
            run += tot
        return RademacherEstimate(est, hi - lo)


def rademacher_coefficient(ms: MultiplierSystem, n: int, cutoff: int | None = None,
                           ctx: PrecisionContext | None = None) -> RademacherEstimate:
    """Partial sum of A^{(1,3)}_{N,psi}(n) over c = 0 mod 4N, c <= cutoff."""
    if n < 0 or n % 4 not in (0, 1):
        raise RademacherError("n must be >= 0 and = 0, 1 mod 4")
    if cutoff is None:
        cutoff = 4 * ms.N * DEFAULT_CUTOFF_BASE
    if cutoff < 4 * ms.N:
        raise RademacherError("cutoff must be at least 4N")
    return PartialSums(ms, n).extend(cutoff)


def rademacher_direct(ms: MultiplierSystem, n: int, cutoff: int,
                      ctx: PrecisionContext | None = None) -> mpmath.mpc:
    """The coefficient formula summed term by term from Kloosterman sums.

    n > 0: pi sqrt(2) (3/n)^(1/4) (1 - i) sum (1 + odd(c/4)) K(-3, n, c)/c I_{1/2}(4 pi sqrt(3n)/c)
    n = 0: 4 pi sqrt(3) (1 - i) sum (1 + odd(c/4)) K(-3, 0, c) / c^(3/2)
    """
    ctx = ctx or PrecisionContext(30, 10)
    with mpmath.workdps(ctx.working_digits):
        total = mpmath.mpc(0)
        for c in range(4 * ms.N, cutoff + 1, 4 * ms.N):
            K = mpmath.mpc(kloosterman(-MU, n, c, ms))
            w = 2 if (c // 4) % 2 else 1
            if n > 0:
                total += w * K / c * bessel_I_half(4 * mpmath.pi * mpmath.sqrt(3 * n) / c, ctx)
            else:
                total += w * K / mpmath.mpf(c) ** 1.5
        if n > 0:
            pref = mpmath.pi * mpmath.sqrt(2) * (mpmath.mpf(MU) / n) ** 0.25
        else:
            pref = 4 * mpmath.pi * mpmath.sqrt(MU)
        return pref * (1 - 1j) * total


def level1_coefficient_direct(n: int, cutoff: int = 4000,
                                 ctx: PrecisionContext | None = None) -> float:
    """A(n, 3) = -24 delta_square(n) H(3) + the level-one Bessel-Kloosterman sum.

    Summed with Kloosterman sums taken from their definition, so it is
    independent of the fast kernel.
    """
    if n <= 0:
        raise RademacherError("n must be positive")
    val = rademacher_direct(psi0_ms(1), n, cutoff, ctx)
    if abs(val.imag) > 1e-6 * max(1.0, abs(val.real)):
        raise RademacherError(f"imaginary part {val.imag} not negligible")
    corr = -24 * hurwitz(3) if is_square(n) else 0
    return float(val.real) + float(corr)


@dataclass
class ConvergedValue:
    value: int | None
    estimate: float
    residue: float
    cutoff: int
    tail_indicator: float
    history: list        # (cutoff, estimate, rounded)
    converged: bool


def converge_rounded(ms: MultiplierSystem, n: int, scale=2, offset=0,
                     cutoff_base: int = DEFAULT_CUTOFF_BASE,
                     cap_base: int = CUTOFF_CAP_BASE, agree: int = 3) -> ConvergedValue:
    """Round scale*A(n) + offset while doubling the cutoff.

    Accepted once `agree` consecutive cutoffs (i.e. agree - 1 successive
    doublings) round to the same integer.  Gives up at cutoff 4N*cap_base.
    """
    ps = PartialSums(ms, n)
    cutoff = 4 * ms.N * cutoff_base
    cap = 4 * ms.N * cap_base
    hist = []
    scale = float(scale)
    offset = float(offset)
    while True:
        est, tail = ps.extend(cutoff)
        val = scale * est + offset
        r = round(val)
        hist.append((cutoff, val, r))
        if len(hist) >= agree and len({h[2] for h in hist[-agree:]}) == 1:
            return ConvergedValue(r, val, abs(val - r), cutoff, abs(scale) * tail, hist, True)
        if cutoff * 2 > cap:
            return ConvergedValue(None, val, abs(val - r), cutoff, abs(scale) * tail, hist, False)
        cutoff *= 2
