"""Binary quadratic forms and their reduction under SL(2,Z) and Gamma_0(N).

Matrices act on the right, ``act(Q, g)(X, Y) = Q(pX + qY, rX + sY)``, so
``act(act(Q, g1), g2) == act(Q, g1 @ g2)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple

from .arith import kronecker


class BQFError(ValueError):
    pass


class BQF(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, x: int, y: int) -> int:
        return self.a * x * x + self.b * x * y + self.c * y * y

    def content(self) -> int:
        return math.gcd(math.gcd(self.a, self.b), self.c)

    def __str__(self):
        return f"[{self.a},{self.b},{self.c}]"


class Matrix(NamedTuple):
    """Integer 2x2 matrix [[p, q], [r, s]]."""
    p: int
    q: int
    r: int
    s: int

    def det(self) -> int:
        return self.p * self.s - self.q * self.r

    def __matmul__(self, o: "Matrix") -> "Matrix":
        return Matrix(self.p * o.p + self.q * o.r, self.p * o.q + self.q * o.s,
                      self.r * o.p + self.s * o.r, self.r * o.q + self.s * o.s)

    def inverse(self) -> "Matrix":
        if self.det() != 1:
            raise BQFError("not unimodular")
        return Matrix(self.s, -self.q, -self.r, self.p)

    def neg(self) -> "Matrix":
        return Matrix(-self.p, -self.q, -self.r, -self.s)

    def normalized(self) -> "Matrix":
        """Representative of +-M whose first nonzero entry is positive."""
        for x in self:
            if x:
                return self if x > 0 else self.neg()
        return self

    def rows(self):
        return [[self.p, self.q], [self.r, self.s]]

    def __str__(self):
        return f"[[{self.p},{self.q}],[{self.r},{self.s}]]"


# UnimodularMatrix is the name used in the public API
UnimodularMatrix = Matrix

I = Matrix(1, 0, 0, 1)
S = Matrix(0, -1, 1, 0)


def T(n: int = 1) -> Matrix:
    return Matrix(1, n, 0, 1)


def discriminant(Q: BQF) -> int:
    return Q.b * Q.b - 4 * Q.a * Q.c


def act(Q: BQF, g: Matrix) -> BQF:
    """Q|g (X, Y) = Q(pX + qY, rX + sY)."""
    a, b, c = Q
    p, q, r, s = g
    return BQF(Q(p, r), 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s, Q(q, s))


def in_gamma0(g: Matrix, N: int) -> bool:
    return g.det() == 1 and g.r % N == 0


def is_reduced(Q: BQF) -> bool:
    a, b, c = Q
    if not (-a < b <= a <= c):
        return False
    return not (a == c and b < 0)


def sl2_reduce(Q: BQF) -> tuple[BQF, Matrix]:
    """Reduced form and gamma with act(Q, gamma) == reduced."""
    if Q.a <= 0 or Q.disc >= 0:
        raise BQFError(f"{Q} is not positive definite")
    g = I
    while True:
        a, b, c = Q
        # translate b into (-a, a]
        t = (a - b) // (2 * a)
        if t:
            Q = act(Q, T(t))
            g = g @ T(t)
            a, b, c = Q
        if a > c or (a == c and b < 0):
            Q = act(Q, S)
            g = g @ S
            continue
        return Q, g


def sl2_stabilizer(Qred: BQF) -> list[Matrix]:
    """PSL(2,Z) stabilizer of a reduced form, as matrices h with act(Qred, h) == Qred."""
    a, b, c = Qred
    if not is_reduced(Qred):
        raise BQFError(f"{Qred} is not reduced")
    if a == b == c:
        return [I, Matrix(-1, -1, 1, 0), Matrix(0, 1, -1, -1)]
    if b == 0 and a == c:
        return [I, S]
    return [I]


def gamma0_index(N: int) -> int:
    idx = N
    for p in _prime_divisors(N):
        idx = idx // p * (p + 1)
    return idx


def _prime_divisors(N: int) -> list[int]:
    out, p, n = [], 2, N
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


def _p1_key(c: int, d: int, N: int) -> tuple[int, int]:
    """Canonical point of P^1(Z/N) for the bottom row (c, d)."""
    c, d = c % N, d % N
    best = None
    for u in range(1, N + 1):
        if math.gcd(u, N) == 1:
            cand = ((u * c) % N, (u * d) % N)
            if best is None or cand < best:
                best = cand
    return best if best is not None else (0, 0)


def _lift(c: int, d: int, N: int) -> Matrix:
    """An SL(2,Z) matrix with bottom row congruent to (c, d) mod N."""
    if (c, d) == (0, 1):
        return I
    if (c, d) == (1, 0):
        return S
    if (c, d) == (1, 1):
        return Matrix(1, 0, 1, 1)
    if c == 1:
        return Matrix(0, -1, 1, d)
    while math.gcd(c, d) != 1:
        d += N
    g, x, y = _egcd(d, c)          # x d + y c = 1
    return Matrix(x, -y, c, d)


def _egcd(a: int, b: int) -> tuple[int, int, int]:
    if b == 0:
        return a, 1, 0
    g, x, y = _egcd(b, a % b)
    return g, y, x - (a // b) * y


@lru_cache(maxsize=None)
def _coset_table(N: int) -> tuple[tuple[Matrix, ...], dict]:
    if N < 1:
        raise BQFError("N must be positive")
    if N == 1:
        return (I,), {(0, 0): 0}
    # ordering: (0:1), (1:0), (1:1), (1:2), ... then the remaining points
    order = [(0, 1), (1, 0)] + [(1, d) for d in range(1, N)]
    seen, reps, lookup = set(), [], {}
    rest = sorted((c, d) for c in range(N) for d in range(N) if math.gcd(math.gcd(c, d), N) == 1)
    for c, d in order + rest:
        if math.gcd(math.gcd(c, d), N) != 1:
            continue
        key = _p1_key(c, d, N)
        if key in seen:
            continue
        seen.add(key)
        g = _lift(c, d, N)
        lookup[key] = len(reps)
        reps.append(g)
    if len(reps) != gamma0_index(N):
        raise BQFError(f"coset enumeration for N={N} is incomplete")
    return tuple(reps), lookup


def coset_reps_gamma0(N: int) -> list[Matrix]:
    """Right coset representatives of Gamma_0(N) in SL(2,Z)."""
    return list(_coset_table(N)[0])


def coset_index(g: Matrix, N: int) -> int:
    """Index i with Gamma_0(N) g == Gamma_0(N) reps[i]."""
    if N == 1:
        return 0
    return _coset_table(N)[1][_p1_key(g.r, g.s, N)]


def gamma0_reduce(Q: BQF, N: int) -> tuple[BQF, Matrix]:
    """Canonical Gamma_0(N) representative of Q.

    Returns (R, h) with h in Gamma_0(N) and act(R, h) == Q; equivalently h
    sends Q to R under the left action h.Q = act(Q, h^-1).  Two forms are
    Gamma_0(N)-equivalent exactly when their R agree.
    """
    Qred, M = sl2_reduce(Q)
    reps = coset_reps_gamma0(N)
    best = None
    for s in sl2_stabilizer(Qred):
        Ms = M @ s
        g = reps[coset_index(Ms, N)]
        h = Ms @ g.inverse()        # in Gamma_0(N), act(Q, h) == act(Qred, g^-1)
        cand = act(Qred, g.inverse())
        if best is None or cand < best[0]:
            best = (cand, h)
    cand, h = best
    return cand, h.inverse().normalized()


def stabilizer_order(Q: BQF, N: int) -> int:
    """Order of the stabilizer of Q in Gamma_0(N)/{+-1}."""
    Qred, M = sl2_reduce(Q)
    Minv = M.inverse()
    return sum(1 for s in sl2_stabilizer(Qred) if (M @ s @ Minv).r % N == 0)


@dataclass(frozen=True)
class OrbitRep:
    form: BQF
    stabOrder: int
    transformFromSL2Rep: Matrix   # act(sl2_rep, transform) == form


def sl2_reduced_forms(d: int) -> list[BQF]:
    """All reduced forms of discriminant -d, lexicographically ordered."""
    if d <= 0 or d % 4 not in (0, 3):
        raise BQFError(f"-{d} is not a negative discriminant")
    out = []
    a = 1
    while 3 * a * a <= d:
        for b in range(-a + 1, a + 1):
            if (b * b + d) % (4 * a):
                continue
            c = (b * b + d) // (4 * a)
            Q = BQF(a, b, c)
            if c >= a and is_reduced(Q):
                out.append(Q)
        a += 1
    return sorted(out)


def class_reps(d: int, N: int = 1, requireAdivisibleByN: bool = False) -> list[OrbitRep]:
    """Representatives of Q_d / Gamma_0(N) in order of discovery."""
    reps = coset_reps_gamma0(N)
    seen = set()
    out = []
    for x in sl2_reduced_forms(d):
        for g in reps:
            gi = g.inverse()
            Q = act(x, gi)
            key = gamma0_reduce(Q, N)[0]
            if key in seen:
                continue
            seen.add(key)
            if requireAdivisibleByN and Q.a % N:
                continue
            out.append(OrbitRep(Q, stabilizer_order(Q, N), gi))
    return out


def class_reps_csv(rows: Iterable[tuple[int, int, OrbitRep]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["d", "N", "a", "b", "c", "omega"])
    for d, N, rep in rows:
        w.writerow([d, N, rep.form.a, rep.form.b, rep.form.c, rep.stabOrder])
    return buf.getvalue()


def _small_vectors(bound: int):
    pts = [(x, y) for x in range(-bound, bound + 1) for y in range(-bound, bound + 1)
           if math.gcd(x, y) == 1]
    pts.sort(key=lambda t: (max(abs(t[0]), abs(t[1])), abs(t[0]) + abs(t[1]), t))
    return pts


_VECTORS = _small_vectors(50)


def genus_character(Q: BQF, D1: int, bound: int = 50) -> int:
    """chi_{D1}(Q): 0 if gcd(a, b, c, D1) > 1, else (D1/r) for a represented r coprime to D1."""
    if math.gcd(Q.content(), D1) > 1:
        return 0
    if D1 == -3:
        # a form with content coprime to 3 represents a value prime to 3 among a, c, a+b+c
        for r in (Q.a, Q.c, Q.a + Q.b + Q.c):
            if r % 3:
                return 1 if r % 3 == 1 else -1
        raise BQFError(f"no admissible value for {Q}")
    vecs = _VECTORS if bound == 50 else _small_vectors(bound)
    fallback = None
    for x, y in vecs:
        r = Q(x, y)
        if r and math.gcd(r, D1) == 1:
            if _is_prime(abs(r)):
                return kronecker(D1, r)
            if fallback is None:
                fallback = r
    if fallback is None:
        raise BQFError(f"no value of {Q} coprime to {D1} with |x|,|y| <= {bound}")
    return kronecker(D1, fallback)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True
