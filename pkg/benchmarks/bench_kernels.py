"""Compare the compiled and pure-Python Rademacher kernels.

    python3 benchmarks/bench_kernels.py [--terms 20000] [--repeat 3]

Both backends sum the same block of terms; the script reports the time per
term, the speed-up, and the largest disagreement between the two totals.
"""

import argparse
import sys
import timeit

from thompson_moonshine import kernels

CASES = [  # (N, v, h, n)
    (1, 0, 1, 5),
    (3, 0, 1, 8),
    (13, 0, 1, 12),
    (24, 1, 2, 4),
    (39, 0, 1, 29),
]


def run(terms: int, repeat: int) -> int:
    py = kernels.python_backend
    cy = kernels.compiled_backend
    if cy is None:
        print("compiled backend unavailable; only the Python kernel can be timed")
    print(f"{'case':<18}{'python us/term':>16}{'cython us/term':>16}{'speed-up':>10}{'|diff|':>12}")
    for N, v, h, n in CASES:
        args = (N, v, h, n, 1, terms)
        t_py = min(timeit.repeat(lambda: py.plus_space_block(*args), number=1, repeat=repeat))
        ref = py.plus_space_block(*args)[0]
        if cy is not None:
            t_cy = min(timeit.repeat(lambda: cy.plus_space_block(*args), number=1, repeat=repeat))
            diff = abs(cy.plus_space_block(*args)[0] - ref)
            print(f"{str((N, v, h, n)):<18}{1e6 * t_py / terms:>16.2f}{1e6 * t_cy / terms:>16.3f}"
                  f"{t_py / t_cy:>10.1f}{diff:>12.2e}")
        else:
            print(f"{str((N, v, h, n)):<18}{1e6 * t_py / terms:>16.2f}")
    return 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser()
    ap.add_argument("--terms", type=int, default=20000)
    ap.add_argument("--repeat", type=int, default=3)
    a = ap.parse_args()
    sys.exit(run(a.terms, a.repeat))
