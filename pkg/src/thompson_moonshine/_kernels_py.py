"""Pure-Python kernels; the compiled module ``_kernels`` has the same API.

The Rademacher coefficient of weight 1/2 with index -3 is summed through
the identity

    (1 - i) (1 + odd(a)) K_psi(-3, n, 4a) = 2 sqrt(4a) S(a, -3 n')

where S(a, D) sums chi_{-3}([a, b, (b^2 - D)/4a]) cos(pi b / a) over the
square roots b of D mod 4a with 0 <= b < 2a and n' = n - 16 v N k^2 / h
for a = N k.  This turns an O(c) exponential sum into a handful of terms.
"""

from __future__ import annotations

import cmath
import math

BACKEND = "python"

_spf: list[int] = [0, 1]


def _ensure_sieve(n: int) -> None:
    global _spf
    if len(_spf) > n:
        return
    size = max(n + 1, 2 * len(_spf))
    spf = list(range(size))
    i = 2
    while i * i < size:
        if spf[i] == i:
            for j in range(i * i, size, i):
                if spf[j] == j:
                    spf[j] = i
        i += 1
    _spf = spf


def factor(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    if n <= 10 ** 7:
        _ensure_sieve(n)
        while n > 1:
            p = _spf[n]
            out[p] = out.get(p, 0) + 1
            n //= p
        return out
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def _tonelli(u: int, p: int) -> int:
    """Square root of a unit u mod an odd prime p (u must be a QR)."""
    u %= p
    if p % 4 == 3:
        return pow(u, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(u, q, p), pow(u, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _unit_roots(u: int, p: int, e: int) -> list[int]:
    """Roots of x^2 = u mod p^e for a unit u."""
    pe = p ** e
    u %= pe
    if p == 2:
        if e == 1:
            return [1]
        if e == 2:
            return [1, 3] if u % 4 == 1 else []
        if u % 8 != 1:
            return []
        x = 1
        for j in range(3, e):
            # x^2 = u mod 2^j; fix the next bit
            if (x * x - u) % (1 << (j + 1)):
                x += 1 << (j - 1)
        half = 1 << (e - 1)
        return sorted({x % pe, (-x) % pe, (x + half) % pe, (-x + half) % pe})
    if pow(u % p, (p - 1) // 2, p) != 1:
        return []
    x = _tonelli(u, p)
    pk = p
    for _ in range(1, e):
        pk *= p
        # Newton step lifts one p-adic digit at a time
        x = (x - (x * x - u) * pow(2 * x, -1, pk)) % pk
    return sorted({x % pe, (-x) % pe})


def sqrt_mod_prime_power(D: int, p: int, e: int) -> list[int]:
    pe = p ** e
    D %= pe
    if D == 0:
        step = p ** ((e + 1) // 2)
        return list(range(0, pe, step))
    k = 0
    while D % p == 0:
        D //= p
        k += 1
    if k % 2:
        return []
    half = p ** (k // 2)
    base = _unit_roots(D, p, e - k)
    mod_small = p ** (e - k)
    roots = set()
    for y in base:
        # y is only determined mod p^(e-k); each lift gives a distinct root
        for t in range(half):
            roots.add((half * (y + t * mod_small)) % pe)
    return sorted(roots)


def sqrt_mod_all(D: int, m: int) -> list[int]:
    """All x in [0, m) with x^2 = D mod m."""
    roots, mod = [0], 1
    for p, e in sorted(factor(m).items()):
        pe = p ** e
        rs = sqrt_mod_prime_power(D, p, e)
        if not rs:
            return []
        inv = pow(mod, -1, pe) if mod > 1 else 0
        new = []
        for r0 in roots:
            for r1 in rs:
                # x = r0 mod `mod`, x = r1 mod pe
                x = r0 + mod * (((r1 - r0) * inv) % pe) if mod > 1 else r1
                new.append(x)
        roots, mod = new, mod * pe
    return sorted(roots)


def _chi3(a: int, b: int, c: int) -> int:
    if a % 3 == 0 and b % 3 == 0 and c % 3 == 0:
        return 0
    r = a if a % 3 else (c if c % 3 else a + b + c)
    return 1 if r % 3 == 1 else -1


def salie_sum(a: int, D: int) -> float:
    """S(a, D) = sum over b mod 2a, b^2 = D mod 4a, of chi_{-3} * cos(pi b / a)."""
    m = 4 * a
    s = 0.0
    for b in sqrt_mod_all(D, m):
        if b >= 2 * a:
            continue
        c = (b * b - D) // m
        chi = _chi3(a, b, c)
        if chi:
            s += chi * math.cos(math.pi * b / a)
    return s


def plus_space_block(N: int, v: int, h: int, n: int, k_lo: int, k_hi: int):
    """Terms k_lo..k_hi (a = N k) of the index -3 coefficient sum.

    Returns (total, lo, hi) where lo/hi bound the running partial sums inside
    the block (measured from the block start).  Summation is compensated.
    """
    if (16 * v * N) % h:
        raise ValueError("h must divide 16 v N")
    shift = 16 * v * N // h
    total = comp = 0.0
    lo = hi = 0.0
    if n > 0:
        x0 = math.pi * math.sqrt(3 * n)
        pref = 2.0 / math.sqrt(n)
    else:
        x0 = 0.0
        pref = 2 * math.pi * math.sqrt(3)
    for k in range(k_lo, k_hi + 1):
        a = N * k
        D = -3 * (n - shift * k * k)
        s = salie_sum(a, D)
        if s:
            term = s * (pref * math.sinh(x0 / a) if n > 0 else pref / a)
            # Neumaier summation
            t = total + term
            if abs(total) >= abs(term):
                comp += (total - t) + term
            else:
                comp += (term - t) + total
            total = t
        cur = total + comp
        if cur < lo:
            lo = cur
        if cur > hi:
            hi = cur
    return total + comp, lo, hi


def _jacobi(a: int, n: int) -> int:
    a %= n
    r = 1
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                r = -r
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            r = -r
        a %= n
    return r if n == 1 else 0


def kloosterman_direct(m: int, n: int, c: int, N: int, v: int, h: int) -> complex:
    """K_psi(m, n, c) summed from the definition, psi = psi_{N,v,h}."""
    total = 0j
    for d in range(1, c):
        if math.gcd(d, c) != 1:
            continue
        dbar = pow(d, -1, c)
        psi = _jacobi(c, d) * (1 if d % 4 == 1 else 1j)
        # exact phase numerator over c*N*h
        num = ((m * dbar + n * d) * N * h - v * c * c * d) % (c * N * h)
        total += psi * cmath.exp(2j * math.pi * num / (c * N * h))
    return total
