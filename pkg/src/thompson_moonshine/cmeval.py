"""High-precision evaluation of eta quotients at CM points and twisted traces."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .bqf import BQF, class_reps, genus_character
from .qseries import HAUPTMODUL_ETA, HAUPTMODUL_LEVELS


class PrecisionInfeasible(ArithmeticError):
    pass


class TraceError(ArithmeticError):
    pass


@dataclass(frozen=True)
class PrecisionContext:
    digits: int = 60
    guard: int = 20

    def __post_init__(self):
        if self.digits < 30 or self.guard < 10:
            raise ValueError("need digits >= 30 and guard >= 10")

    @property
    def working_digits(self) -> int:
        return self.digits + self.guard

    def doubled(self) -> "PrecisionContext":
        return PrecisionContext(2 * self.digits, self.guard)


@dataclass(frozen=True)
class CMPoint:
    """alpha_Q = (-b + i sqrt(d)) / (2a), stored exactly."""
    Q: BQF
    re: Fraction
    imSq: Fraction

    @classmethod
    def of(cls, Q: BQF) -> "CMPoint":
        d = -Q.disc
        if Q.a <= 0 or d <= 0:
            raise ValueError(f"{Q} is not positive definite")
        return cls(Q, Fraction(-Q.b, 2 * Q.a), Fraction(d, 4 * Q.a * Q.a))

    def scaled(self, k: int) -> "CMPoint":
        """k * alpha as a CM point of [a, k b, k^2 c]."""
        a, b, c = self.Q
        return CMPoint(BQF(a, k * b, k * k * c), self.re * k, self.imSq * k * k)

    def to_mpc(self) -> mpmath.mpc:
        return mpmath.mpc(mpmath.mpf(self.re.numerator) / self.re.denominator,
                          mpmath.sqrt(mpmath.mpf(self.imSq.numerator) / self.imSq.denominator))


def _as_tau(tau) -> mpmath.mpc:
    if isinstance(tau, CMPoint):
        return tau.to_mpc()
    return mpmath.mpc(tau)


def eta_product(tau: mpmath.mpc, eps) -> mpmath.mpc:
    """q^(1/24) prod (1 - q^n) without reduction; raises when too many terms are needed."""
    if tau.imag <= 0:
        raise PrecisionInfeasible("Im tau must be positive")
    q = mpmath.exp(2j * mpmath.pi * tau)
    aq = abs(q)
    # |q|^n < eps  <=>  n > log(eps)/log|q|
    nmax = int(mpmath.log(eps) / mpmath.log(aq)) + 2
    if nmax > 100000:
        raise PrecisionInfeasible(f"Im tau = {mpmath.nstr(tau.imag, 5)} needs {nmax} factors")
    p = mpmath.mpc(1)
    qn = q
    for _ in range(nmax):
        p *= 1 - qn
        qn *= q
    return mpmath.exp(2j * mpmath.pi * tau / 24) * p


def eval_eta(tau, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    """eta(tau), after moving tau into the fundamental domain.

    Uses eta(tau + n) = e(n/24) eta(tau) and eta(-1/tau) = sqrt(-i tau) eta(tau).
    """
    ctx = ctx or PrecisionContext()
    with mpmath.workdps(ctx.working_digits + 10):
        tau = _as_tau(tau)
        if tau.imag <= 0:
            raise PrecisionInfeasible("Im tau must be positive")
        factor = mpmath.mpc(1)
        for _ in range(10000):
            n = int(mpmath.floor(tau.real + mpmath.mpf(1) / 2))
            if n:
                tau -= n
                factor *= mpmath.exp(1j * mpmath.pi * n / 12)
            if abs(tau) < 1 - mpmath.mpf(10) ** (-ctx.working_digits):
                factor /= mpmath.sqrt(-1j * tau)
                tau = -1 / tau
            else:
                break
        else:
            raise PrecisionInfeasible("reduction did not terminate")
        val = factor * eta_product(tau, mpmath.mpf(10) ** (-ctx.working_digits))
    return +val


def eval_eta_quotient(exponents: dict, tau, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    ctx = ctx or PrecisionContext()
    with mpmath.workdps(ctx.working_digits + 10):
        if isinstance(tau, CMPoint):
            pts = {k: tau.scaled(k) for k in exponents}
        else:
            t = _as_tau(tau)
            pts = {k: k * t for k in exponents}
        val = mpmath.mpc(1)
        for k, r in exponents.items():
            val *= eval_eta(pts[k], ctx) ** r
    return val


def eval_hauptmodul(level: int, tau, ctx: PrecisionContext | None = None) -> mpmath.mpc:
    """Normalized hauptmodul T_level(tau) = q^-1 + O(q)."""
    ctx = ctx or PrecisionContext()
    if level not in HAUPTMODUL_LEVELS:
        raise ValueError(f"unsupported level {level}")
    with mpmath.workdps(ctx.working_digits + 10):
        if level == 1:
            # j = (x + 256)^3 / x^2 with x = (eta(tau)/eta(2 tau))^24
            x = eval_eta_quotient({1: 24, 2: -24}, tau, ctx)
            val = (x + 256) ** 3 / x ** 2 - 744
        else:
            exps, const = HAUPTMODUL_ETA[level]
            val = eval_eta_quotient(exps, tau, ctx) + const
    return val


def trace_singular_moduli(N: int, D1: int, D2: int, ctx: PrecisionContext | None = None,
                          reps=None):
    """Tr_{N,D1}(T_N; D2): sum of chi_{D1}(Q) T_N(alpha_Q)/omega_Q over Q_{|D1 D2|}/Gamma_0(N), N | a."""
    ctx = ctx or PrecisionContext()
    if D1 * D2 >= 0:
        raise TraceError("need D1 * D2 < 0")
    d = -D1 * D2
    if reps is None:
        reps = class_reps(d, N, True)
    with mpmath.workdps(ctx.working_digits + 10):
        total = mpmath.mpc(0)
        for rep in reps:
            chi = genus_character(rep.form, D1)
            if chi:
                total += chi * eval_hauptmodul(N, CMPoint.of(rep.form), ctx) / rep.stabOrder
        scale = max(mpmath.mpf(1), abs(total.real))
        if abs(total.imag) > scale * mpmath.mpf(10) ** (-ctx.guard):
            raise TraceError(f"imaginary residue {mpmath.nstr(total.imag, 5)} too large")
        return +total.real


@dataclass(frozen=True)
class TraceCoefficient:
    value: int
    estimate: mpmath.mpf
    residue: mpmath.mpf


def trace_coefficient(N: int, n: int, ctx: PrecisionContext | None = None) -> TraceCoefficient:
    """A^{(1,3)}_{N,psi_0}(n) = Tr_{N,-3}(T_N; n)/sqrt(n) for non-square n."""
    ctx = ctx or PrecisionContext()
    if N not in HAUPTMODUL_LEVELS:
        raise TraceError(f"Gamma_0({N}) is not handled (genus zero levels only)")
    if n <= 0 or n % 4 not in (0, 1):
        raise TraceError("n must be positive and = 0, 1 mod 4")
    if mpmath.sqrt(n) == int(mpmath.sqrt(n)):
        raise TraceError("square n is not determined by the trace")
    with mpmath.workdps(ctx.working_digits + 10):
        est = trace_singular_moduli(N, -3, n, ctx) / mpmath.sqrt(n)
        val = int(mpmath.nint(est))
        res = abs(est - val)
    if res >= mpmath.mpf(10) ** (-(ctx.guard // 2)):
        raise TraceError(f"rounding residue {mpmath.nstr(res, 5)} too large for N={N}, n={n}")
    return TraceCoefficient(val, est, res)
