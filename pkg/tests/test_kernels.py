import cmath
import math
import random
from fractions import Fraction

import pytest

from thompson_moonshine import kernels
from thompson_moonshine import _kernels_py as pyk
from thompson_moonshine.rademacher import MultiplierSystem, psi_twisted

rng = random.Random(7)


def brute_sqrt(D, m):
    return [x for x in range(m) if (x * x - D) % m == 0]


@pytest.mark.parametrize("m", list(range(1, 120)) + [128, 243, 400, 1024, 2000])
def test_sqrt_mod_all_brute(m):
    for D in {-3, -15, -24, -39, 0, 1, m - 1, 4 * m + 9} | {rng.randint(-500, 500) for _ in range(4)}:
        assert pyk.sqrt_mod_all(D, m) == brute_sqrt(D, m), (D, m)


def kloosterman_reference(m, n, c, ms):
    total = 0j
    for d in range(1, c):
        if math.gcd(d, c) == 1:
            dbar = pow(d, -1, c)
            ph = Fraction(m * dbar + n * d, c) % 1
            total += psi_twisted(ms, c, d) * cmath.exp(2j * math.pi * float(ph))
    return total


@pytest.mark.parametrize("backend", ["python", "compiled"])
def test_kloosterman_direct_matches_reference(backend):
    mod = pyk if backend == "python" else kernels.compiled_backend
    if mod is None:
        pytest.skip("compiled kernel unavailable")
    for ms in (MultiplierSystem(1), MultiplierSystem(3), MultiplierSystem(4, 1, 2),
               MultiplierSystem(6, 1, 3), MultiplierSystem(12, 1, 4)):
        for c in range(4 * ms.N, 201, 4 * ms.N):
            for n in (0, 4, 5, 21):
                ref = kloosterman_reference(-3, n, c, ms)
                got = complex(mod.kloosterman_direct(-3, n, c, ms.N, ms.v, ms.h))
                assert abs(got - ref) < 1e-9, (ms, c, n)


@pytest.mark.parametrize("ms", [MultiplierSystem(1), MultiplierSystem(2), MultiplierSystem(5),
                                MultiplierSystem(4, 1, 2), MultiplierSystem(24, 1, 2),
                                MultiplierSystem(9, 1, 3)])
def test_salie_identity(ms):
    """(1 - i)(1 + odd(a)) K(-3, n, 4a) = 2 sqrt(4a) S(a, -3 n')."""
    shift = 16 * ms.v * ms.N // ms.h
    for k in range(1, 25):
        a = ms.N * k
        for n in (0, 1, 4, 5, 8, 12):
            K = kloosterman_reference(-3, n, 4 * a, ms)
            lhs = (1 - 1j) * (2 if a % 2 else 1) * K
            rhs = 2 * math.sqrt(4 * a) * pyk.salie_sum(a, -3 * (n - shift * k * k))
            assert abs(lhs - rhs) < 1e-8, (ms, a, n)


def test_backends_agree():
    cy = kernels.compiled_backend
    if cy is None:
        pytest.skip("compiled kernel unavailable")
    for _ in range(300):
        m = rng.randint(1, 5000)
        D = rng.randint(-10 ** 6, 10 ** 6)
        assert list(cy.sqrt_mod_all(D, m)) == pyk.sqrt_mod_all(D, m)
        a = rng.randint(1, 3000)
        assert abs(cy.salie_sum(a, D) - pyk.salie_sum(a, D)) < 1e-12
    for N, v, h, n in ((1, 0, 1, 5), (13, 0, 1, 8), (8, 1, 4, 0), (36, 1, 6, 20)):
        a = cy.plus_space_block(N, v, h, n, 1, 3000)
        b = pyk.plus_space_block(N, v, h, n, 1, 3000)
        assert all(abs(x - y) < 1e-9 for x, y in zip(a, b))


def test_block_requires_integral_shift():
    with pytest.raises(ValueError):
        kernels.plus_space_block(3, 1, 5, 4, 1, 10)


def test_backend_selection_flag():
    assert kernels.BACKEND in ("cython", "python")
    assert pyk.BACKEND == "python"
