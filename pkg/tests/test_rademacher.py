import os
import subprocess
import sys
from fractions import Fraction

import pytest

from thompson_moonshine.cli import reduced_form_weight
from thompson_moonshine.rademacher import (MultiplierSystem, PartialSums, RademacherError,
                                           converge_rounded, hurwitz,
                                           level1_coefficient_direct, psi0, psi0_ms,
                                           rademacher_coefficient, rademacher_direct)

KNOWN_H = {3: Fraction(1, 3), 4: Fraction(1, 2), 7: 1, 8: 1, 11: 1, 12: Fraction(4, 3),
           15: 2, 16: Fraction(3, 2), 19: 1, 20: 2, 23: 3, 24: 2, 27: Fraction(4, 3)}


def test_hurwitz_known_values():
    for d, h in KNOWN_H.items():
        assert hurwitz(d) == h, d


def test_hurwitz_matches_reduced_count():
    for d in range(3, 101):
        if d % 4 in (0, 3):
            assert hurwitz(d) == reduced_form_weight(d), d


def test_hurwitz_rejects_bad_input():
    with pytest.raises(RademacherError):
        hurwitz(5)


def test_psi0_values():
    assert psi0(4, 1) == 1
    assert psi0(4, 3) == 1j          # (4/3) = 1, eps_3 = i
    assert psi0(12, 5) == -1         # (12/5) = (2/5) = -1
    with pytest.raises(RademacherError):
        psi0(6, 1)


@pytest.mark.parametrize("n", [1, 4, 5, 8, 9, 12])
def test_direct_route_matches_fast_route(n):
    """Kloosterman-by-definition sum equals the Salie route; squares differ by -24 H(3) = -8."""
    direct = level1_coefficient_direct(n, 1200)
    fast = rademacher_coefficient(psi0_ms(1), n, 1200).estimate
    assert abs(direct - (fast - (8 if int(n ** 0.5) ** 2 == n else 0))) < 1e-6


def test_direct_route_twisted():
    ms = MultiplierSystem(4, 1, 2)
    d = rademacher_direct(ms, 5, 1600)
    f = rademacher_coefficient(ms, 5, 1600).estimate
    assert abs(d.real - f) < 1e-8 and abs(d.imag) < 1e-8


def test_partial_sums_extend_like_fresh():
    ps = PartialSums(psi0_ms(3), 8)
    ps.extend(1200)
    a = ps.extend(4800)
    b = rademacher_coefficient(psi0_ms(3), 8, 4800)
    assert abs(a.estimate - b.estimate) < 1e-9
    assert a.tail_indicator >= 0
    with pytest.raises(RademacherError):
        ps.extend(100)


def test_converge_level3():
    cv = converge_rounded(psi0_ms(3), 5, scale=1)
    assert cv.converged and cv.value == 27
    assert [h[0] for h in cv.history][:2] == [120000, 240000]


def test_invalid_inputs():
    with pytest.raises(RademacherError):
        rademacher_coefficient(psi0_ms(1), 2)
    with pytest.raises(RademacherError):
        MultiplierSystem(3, 1, 5)
    with pytest.raises(RademacherError):
        rademacher_coefficient(psi0_ms(5), 4, cutoff=8)


def test_pure_python_fallback_selected_by_env():
    env = dict(os.environ, MOONSHINE_PURE_PYTHON="1")
    code = ("from thompson_moonshine import kernels, rademacher as r;"
            "print(kernels.BACKEND, round(r.rademacher_coefficient(r.psi0_ms(3), 5, 6000).estimate, 6))")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True).stdout.split()
    assert out[0] == "python"
    here = rademacher_coefficient(psi0_ms(3), 5, 6000).estimate
    assert abs(float(out[1]) - here) < 1e-5
