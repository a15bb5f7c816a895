import math
import random
from fractions import Fraction

import pytest

from thompson_moonshine.arith import kronecker

from thompson_moonshine.bqf import (BQF, Matrix, S, T, act, class_reps, coset_reps_gamma0,
                                    gamma0_index, gamma0_reduce, genus_character, in_gamma0,
                                    is_reduced, sl2_reduce, sl2_reduced_forms, stabilizer_order)

rng = random.Random(20240607)


def random_gamma0(N: int, size: int = 12) -> Matrix:
    while True:
        c = N * rng.randint(-size, size)
        d = rng.randint(-size, size)
        if math.gcd(c, d) != 1:
            continue
        # a d - b c = 1
        if c == 0:
            a = d
            b = rng.randint(-size, size)
        else:
            a = pow(d, -1, abs(c)) if abs(c) > 1 else 1
            b = (a * d - 1) // c
        g = Matrix(a, b, c, d)
        if g.det() == 1:
            return g


def test_action_is_a_right_action():
    Q = BQF(3, 5, 7)
    g, h = Matrix(2, 1, 1, 1), Matrix(1, 3, 0, 1)
    assert act(act(Q, g), h) == act(Q, g @ h)
    assert act(Q, g).disc == Q.disc


def test_sl2_reduce_example():
    R, g = sl2_reduce(BQF(3, 3, 1))
    assert R == BQF(1, 1, 1) and g == Matrix(0, -1, 1, 2)
    assert act(BQF(3, 3, 1), g) == R


def test_gamma0_2_reduction_example():
    R, h = gamma0_reduce(BQF(3, 3, 1), 2)
    assert R == BQF(1, -1, 1) and h == Matrix(1, 0, 2, 1)
    assert act(R, h) == BQF(3, 3, 1) and in_gamma0(h, 2)


def test_coset_reps_leading_entries():
    reps = coset_reps_gamma0(6)
    assert len(reps) == gamma0_index(6) == 12
    assert all(g.det() == 1 for g in reps)
    assert reps[0] == Matrix(1, 0, 0, 1) and reps[1] == S


def test_level3_disc_minus4():
    forms = sorted(r.form for r in class_reps(4, 3))
    assert forms == [BQF(1, 0, 1), BQF(2, -2, 1)]


def test_level3_disc_minus15_filtered():
    forms = {r.form for r in class_reps(15, 3, True)}
    assert forms == {BQF(6, 3, 1), BQF(3, -3, 2)}


def test_stabilizer_of_hexagonal_form():
    reps = class_reps(3, 1)
    assert [(r.form, r.stabOrder) for r in reps] == [(BQF(1, 1, 1), 3)]
    assert stabilizer_order(BQF(1, 0, 1), 1) == 2
    assert stabilizer_order(BQF(1, 0, 1), 2) == 1


@pytest.mark.parametrize("d", range(3, 200))
def test_reduced_forms_are_reduced(d):
    if d % 4 not in (0, 3):
        return
    for Q in sl2_reduced_forms(d):
        assert is_reduced(Q) and Q.disc == -d
        R, g = sl2_reduce(Q)
        assert R == Q


@pytest.mark.parametrize("N", range(1, 11))
def test_partition_of_forms(N):
    """Every form in a box lands in exactly one class; classes are Gamma_0(N)-stable."""
    index = gamma0_index(N)
    for d in range(3, 61):
        if d % 4 not in (0, 3):
            continue
        reps = class_reps(d, N)
        keys = [gamma0_reduce(r.form, N)[0] for r in reps]
        assert len(set(keys)) == len(keys)
        keyset = set(keys)
        # mass formula: sum 1/omega_N = [SL2 : Gamma_0(N)] sum 1/omega_1
        mass_N = sum(Fraction(1, r.stabOrder) for r in reps)
        mass_1 = sum(Fraction(1, r.stabOrder) for r in class_reps(d, 1))
        assert mass_N == index * mass_1
        B = 3 * d
        for a in range(1, B + 1):
            for b in range(-B, B + 1):
                if (b * b + d) % (4 * a):
                    continue
                Q = BQF(a, b, (b * b + d) // (4 * a))
                R, h = gamma0_reduce(Q, N)
                assert R in keyset
                assert in_gamma0(h, N) and act(R, h) == Q
        for r in reps[:4]:
            g = random_gamma0(N)
            assert gamma0_reduce(act(r.form, g), N)[0] == gamma0_reduce(r.form, N)[0]


def test_genus_character_values():
    assert genus_character(BQF(1, 1, 4), -3) == 1
    assert genus_character(BQF(2, 1, 2), -3) == -1
    assert genus_character(BQF(6, 3, 1), -3) == 1
    assert genus_character(BQF(3, -3, 2), -3) == -1
    assert genus_character(BQF(3, 3, 3), -3) == 0


@pytest.mark.parametrize("D1,d", [(-3, 15), (-3, 60), (-4, 20), (5, 15), (-7, 35), (-3, 96)])
def test_genus_character_is_class_invariant(D1, d):
    for N in (1, 2, 3, 4):
        for r in class_reps(d, N):
            base = genus_character(r.form, D1)
            for _ in range(5):
                g = random_gamma0(N)
                assert genus_character(act(r.form, g), D1) == base


def test_genus_character_agrees_on_all_values():
    # chi_{D1}(Q) = (D1/r) for every represented r coprime to D1
    for Q, D1 in ((BQF(1, 1, 4), -3), (BQF(2, 1, 2), -3), (BQF(2, 2, 3), -4), (BQF(3, 1, 3), 5)):
        seen = set()
        for x in range(-6, 7):
            for y in range(-6, 7):
                r = Q(x, y)
                if r and math.gcd(r, D1) == 1:
                    seen.add(kronecker(D1, r))
        assert seen == {genus_character(Q, D1)}
