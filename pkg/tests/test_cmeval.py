from fractions import Fraction

import mpmath
import pytest

from thompson_moonshine import qseries as qs
from thompson_moonshine.bqf import BQF, class_reps
from thompson_moonshine.cmeval import (CMPoint, PrecisionContext, PrecisionInfeasible, TraceError,
                                       eta_product, eval_eta, eval_hauptmodul,
                                       trace_coefficient, trace_singular_moduli)

CTX = PrecisionContext(60)


def test_eta_at_i_closed_form():
    with mpmath.workdps(80):
        want = mpmath.gamma(mpmath.mpf(1) / 4) / (2 * mpmath.pi ** (mpmath.mpf(3) / 4))
        assert abs(eval_eta(mpmath.mpc(0, 1), CTX) - want) < mpmath.mpf(10) ** -60


def test_eta_transformation():
    with mpmath.workdps(80):
        tau = mpmath.mpc("0.3", "0.07")
        lhs = eval_eta(-1 / tau, CTX)
        rhs = mpmath.sqrt(-1j * tau) * eval_eta(tau, CTX)
        assert abs(lhs - rhs) < mpmath.mpf(10) ** -55


def test_eta_product_refuses_tiny_imaginary_part():
    with pytest.raises(PrecisionInfeasible):
        eta_product(mpmath.mpc(0, 1e-6), mpmath.mpf(10) ** -60)


@pytest.mark.parametrize("level", qs.HAUPTMODUL_LEVELS)
def test_hauptmodul_value_matches_expansion(level):
    tau = mpmath.mpc("0.1", "1.3")
    series = qs.hauptmodul_qexp(level, 80)
    with mpmath.workdps(40):
        q = mpmath.exp(2j * mpmath.pi * tau)
        s = mpmath.fsum(mpmath.mpf(v.numerator) / v.denominator * q ** e for e, v in series.items())
        assert abs(eval_hauptmodul(level, tau, CTX) - s) < mpmath.mpf(10) ** -30


def test_cm_point_exact():
    p = CMPoint.of(BQF(2, 1, 2))
    assert p.re == Fraction(-1, 4) and p.imSq == Fraction(15, 16)
    assert p.scaled(3).Q == BQF(2, 3, 18)


def test_example_level1():
    reps = class_reps(15, 1, True)
    assert sorted(r.form for r in reps) == [BQF(1, 1, 4), BQF(2, 1, 2)]
    t = trace_coefficient(1, 5, CTX)
    assert t.value == -85995 and t.residue < 1e-10


def test_example_level3():
    forms = {r.form for r in class_reps(15, 3, True)}
    assert forms == {BQF(3, -3, 2), BQF(6, 3, 1)}
    t = trace_coefficient(3, 5, CTX)
    assert t.value == 27 and t.residue < 1e-10


def test_level1_traces_match_series():
    f = qs.f3_series(34)
    for n in range(5, 34):
        if n % 4 in (0, 1) and int(n ** 0.5) ** 2 != n:
            assert trace_coefficient(1, n, CTX).value == f[n], n


def test_digits_doubling_is_stable():
    for N, n in ((1, 33), (7, 20), (18, 29)):
        a = trace_coefficient(N, n, CTX)
        b = trace_coefficient(N, n, CTX.doubled())
        assert a.value == b.value
        assert abs(a.estimate - b.estimate) < mpmath.mpf(10) ** -50


def test_trace_rejects_squares_and_bad_levels():
    with pytest.raises(TraceError):
        trace_coefficient(1, 16, CTX)
    with pytest.raises(TraceError):
        trace_coefficient(11, 5, CTX)
    with pytest.raises(TraceError):
        trace_singular_moduli(1, -3, -5, CTX)


def test_precision_context_validation():
    with pytest.raises(ValueError):
        PrecisionContext(10)
