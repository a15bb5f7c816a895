# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled kernels; see ``_kernels_py`` for the reference implementation."""

from libc.math cimport sinh, sqrt, cos, sin, M_PI, fabs
from libc.stdlib cimport malloc, free

import array as _array

BACKEND = "cython"

ctypedef long long i64

cdef enum:
    MAXF = 32          # distinct prime factors of 4a
    MAXR = 65536       # square roots of D mod 4a

# smallest-prime-factor table, grown on demand
_spf = _array.array("i", [0, 1])


cdef void _ensure_sieve(i64 n):
    global _spf
    if len(_spf) > n:
        return
    cdef i64 size = max(n + 1, 2 * len(_spf))
    cdef int[::1] spf
    new = _array.array("i", range(size))
    spf = new
    cdef i64 i = 2, j
    while i * i < size:
        if spf[i] == i:
            j = i * i
            while j < size:
                if spf[j] == j:
                    spf[j] = <int>i
                j += i
        i += 1
    _spf = new


cdef inline i64 _mod(i64 a, i64 m) nogil:
    cdef i64 r = a % m
    return r + m if r < 0 else r


cdef i64 _powmod(i64 b, i64 e, i64 m) nogil:
    cdef i64 r = 1 % m
    b = _mod(b, m)
    while e > 0:
        if e & 1:
            r = r * b % m
        b = b * b % m
        e >>= 1
    return r


cdef i64 _invmod(i64 a, i64 m) nogil:
    cdef i64 g = m, x = 0, x1 = 1, a1 = _mod(a, m), q, t
    while a1:
        q = g // a1
        t = g - q * a1; g = a1; a1 = t
        t = x - q * x1; x = x1; x1 = t
    return _mod(x, m)


cdef i64 _tonelli(i64 u, i64 p) nogil:
    cdef i64 q, s, z, m, c, t, r, i, t2, b
    u = _mod(u, p)
    if p % 4 == 3:
        return _powmod(u, (p + 1) // 4, p)
    q = p - 1
    s = 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while _powmod(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m = s
    c = _powmod(z, q, p)
    t = _powmod(u, q, p)
    r = _powmod(u, (q + 1) // 2, p)
    while t != 1:
        i = 0
        t2 = t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = _powmod(c, (<i64>1) << (m - i - 1), p)
        m = i
        c = b * b % p
        t = t * c % p
        r = r * b % p
    return r


cdef int _unit_roots(i64 u, i64 p, int e, i64* out) nogil:
    cdef i64 pe = 1, x, pk, half, d
    cdef int j, cnt, k
    for j in range(e):
        pe *= p
    u = _mod(u, pe)
    if p == 2:
        if e == 1:
            out[0] = 1
            return 1
        if e == 2:
            if u % 4 != 1:
                return 0
            out[0] = 1
            out[1] = 3
            return 2
        if u % 8 != 1:
            return 0
        x = 1
        for j in range(3, e):
            if _mod(x * x - u, (<i64>1) << (j + 1)) != 0:
                x += (<i64>1) << (j - 1)
        half = (<i64>1) << (e - 1)
        out[0] = _mod(x, pe)
        out[1] = _mod(-x, pe)
        out[2] = _mod(x + half, pe)
        out[3] = _mod(-x + half, pe)
        # remove duplicates (cannot occur for e >= 3, kept for safety)
        cnt = 0
        for j in range(4):
            d = out[j]
            for k in range(cnt):
                if out[k] == d:
                    break
            else:
                out[cnt] = d
                cnt += 1
        return cnt
    if _powmod(u % p, (p - 1) // 2, p) != 1:
        return 0
    x = _tonelli(u, p)
    pk = p
    for j in range(1, e):
        pk *= p
        x = _mod(x - _mod(x * x - u, pk) * _invmod(2 * x, pk) % pk, pk)
    out[0] = x
    if x == 0 or _mod(-x, pe) == x:
        return 1
    out[1] = _mod(-x, pe)
    return 2


cdef int _pp_roots(i64 D, i64 p, int e, i64* out, int cap) nogil:
    """Roots of x^2 = D mod p^e; returns the count or -1 on overflow."""
    cdef i64 pe = 1, step, half, mod_small, x
    cdef i64 base[4]
    cdef int j, k, nb, cnt, t
    for j in range(e):
        pe *= p
    D = _mod(D, pe)
    if D == 0:
        step = 1
        for j in range((e + 1) // 2):
            step *= p
        if pe // step > cap:
            return -1
        cnt = 0
        x = 0
        while x < pe:
            out[cnt] = x
            cnt += 1
            x += step
        return cnt
    k = 0
    while D % p == 0:
        D //= p
        k += 1
    if k % 2:
        return 0
    half = 1
    for j in range(k // 2):
        half *= p
    nb = _unit_roots(D, p, e - k, base)
    mod_small = pe
    for j in range(k):
        mod_small //= p
    if nb * half > cap:
        return -1
    cnt = 0
    for j in range(nb):
        for t in range(half):
            out[cnt] = (half * (base[j] + t * mod_small)) % pe
            cnt += 1
    return cnt


cdef int _all_roots(i64 D, i64* ps, int* es, int nf, i64* buf, i64* tmp, i64* pp) nogil:
    """CRT-combined roots of x^2 = D mod prod p^e, written to buf."""
    cdef int nr = 1, npp, i, j, l, cnt
    cdef i64 mod = 1, pe, inv, r0
    buf[0] = 0
    for i in range(nf):
        npp = _pp_roots(D, ps[i], es[i], pp, MAXR)
        if npp < 0:
            return -1
        if npp == 0:
            return 0
        pe = 1
        for j in range(es[i]):
            pe *= ps[i]
        if <i64>nr * npp > MAXR:
            return -1
        cnt = 0
        if mod == 1:
            for l in range(npp):
                tmp[cnt] = pp[l]
                cnt += 1
        else:
            inv = _invmod(mod % pe, pe)
            for j in range(nr):
                r0 = buf[j]
                for l in range(npp):
                    tmp[cnt] = r0 + mod * (_mod(pp[l] - r0, pe) * inv % pe)
                    cnt += 1
        for j in range(cnt):
            buf[j] = tmp[j]
        nr = cnt
        mod *= pe
    return nr


cdef int _factor_into(i64 n, i64* ps, int* es, int nf, int[::1] spf) nogil:
    """Merge the factorisation of n (n < len(spf)) into (ps, es)."""
    cdef i64 p
    cdef int i
    while n > 1:
        p = spf[n]
        n //= p
        for i in range(nf):
            if ps[i] == p:
                es[i] += 1
                break
        else:
            ps[nf] = p
            es[nf] = 1
            nf += 1
    return nf


cdef int _factor_trial(i64 n, i64* ps, int* es) nogil:
    cdef int nf = 0
    cdef i64 p = 2
    while p * p <= n:
        if n % p == 0:
            ps[nf] = p
            es[nf] = 0
            while n % p == 0:
                n //= p
                es[nf] += 1
            nf += 1
        p += 1
    if n > 1:
        ps[nf] = n
        es[nf] = 1
        nf += 1
    return nf


cdef inline int _chi3(i64 a, i64 b, i64 c) nogil:
    cdef i64 r
    if a % 3 == 0 and _mod(b, 3) == 0 and _mod(c, 3) == 0:
        return 0
    if a % 3:
        r = a
    elif _mod(c, 3):
        r = c
    else:
        r = a + b + c
    return 1 if _mod(r, 3) == 1 else -1


cdef double _salie(i64 a, i64 D, i64* ps, int* es, int nf, i64* buf, i64* tmp, i64* pp) nogil:
    cdef int nr = _all_roots(D, ps, es, nf, buf, tmp, pp)
    cdef int j, chi
    cdef i64 b, m = 4 * a, c
    cdef double s = 0.0
    if nr < 0:
        return 1e300   # caller turns this into an exception
    for j in range(nr):
        b = buf[j]
        if b >= 2 * a:
            continue
        c = (b * b - D) // m
        chi = _chi3(a, b, c)
        if chi:
            s += chi * cos(M_PI * <double>b / <double>a)
    return s


cdef class _Scratch:
    cdef i64* buf
    cdef i64* tmp
    cdef i64* pp

    def __cinit__(self):
        self.buf = <i64*>malloc(MAXR * sizeof(i64))
        self.tmp = <i64*>malloc(MAXR * sizeof(i64))
        self.pp = <i64*>malloc(MAXR * sizeof(i64))
        if not self.buf or not self.tmp or not self.pp:
            raise MemoryError()

    def __dealloc__(self):
        free(self.buf)
        free(self.tmp)
        free(self.pp)


def sqrt_mod_all(i64 D, i64 m):
    """All x in [0, m) with x^2 = D mod m."""
    cdef i64 ps[MAXF]
    cdef int es[MAXF]
    cdef _Scratch sc = _Scratch()
    cdef int nf = _factor_trial(m, ps, es)
    cdef int nr = _all_roots(D, ps, es, nf, sc.buf, sc.tmp, sc.pp)
    if nr < 0:
        raise OverflowError("too many square roots")
    return sorted(sc.buf[j] for j in range(nr))


def salie_sum(i64 a, i64 D):
    cdef i64 ps[MAXF]
    cdef int es[MAXF]
    cdef _Scratch sc = _Scratch()
    cdef int nf = _factor_trial(4 * a, ps, es)
    cdef double s = _salie(a, D, ps, es, nf, sc.buf, sc.tmp, sc.pp)
    if s > 1e299:
        raise OverflowError("too many square roots")
    return s


def plus_space_block(i64 N, i64 v, i64 h, i64 n, i64 k_lo, i64 k_hi):
    """Terms k_lo..k_hi of the index -3 coefficient sum; returns (total, lo, hi)."""
    if (16 * v * N) % h:
        raise ValueError("h must divide 16 v N")
    if N * k_hi > 10 ** 9:
        raise OverflowError("cutoff too large for 64-bit kernels")
    _ensure_sieve(k_hi)
    cdef int[::1] spf = _spf
    cdef i64 shift = 16 * v * N // h
    cdef i64 ps0[MAXF]
    cdef int es0[MAXF]
    cdef i64 ps[MAXF]
    cdef int es[MAXF]
    cdef int nf0 = _factor_trial(4 * N, ps0, es0), nf, i
    cdef _Scratch sc = _Scratch()
    cdef double total = 0.0, comp = 0.0, lo = 0.0, hi = 0.0, cur, term, t, s
    cdef double x0, pref
    cdef i64 k, a, D
    cdef bint overflow = False
    if n > 0:
        x0 = M_PI * sqrt(3.0 * n)
        pref = 2.0 / sqrt(<double>n)
    else:
        x0 = 0.0
        pref = 2.0 * M_PI * sqrt(3.0)
    with nogil:
        k = k_lo
        while k <= k_hi:
            a = N * k
            D = -3 * (n - shift * k * k)
            for i in range(nf0):
                ps[i] = ps0[i]
                es[i] = es0[i]
            nf = _factor_into(k, ps, es, nf0, spf)
            s = _salie(a, D, ps, es, nf, sc.buf, sc.tmp, sc.pp)
            if s > 1e299:
                overflow = True
                break
            if s != 0.0:
                if n > 0:
                    term = s * pref * sinh(x0 / a)
                else:
                    term = s * pref / a
                t = total + term
                if fabs(total) >= fabs(term):
                    comp += (total - t) + term
                else:
                    comp += (term - t) + total
                total = t
            cur = total + comp
            if cur < lo:
                lo = cur
            if cur > hi:
                hi = cur
            k += 1
    if overflow:
        raise OverflowError("too many square roots")
    return total + comp, lo, hi


cdef int _jacobi(i64 a, i64 n) nogil:
    cdef int r = 1
    cdef i64 t
    a = _mod(a, n)
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 == 3 or n % 8 == 5:
                r = -r
        t = a; a = n; n = t
        if a % 4 == 3 and n % 4 == 3:
            r = -r
        a = a % n
    return r if n == 1 else 0


def kloosterman_direct(i64 m, i64 n, i64 c, i64 N, i64 v, i64 h):
    """K_psi(m, n, c) summed from the definition, psi = psi_{N,v,h}."""
    cdef double re = 0.0, im = 0.0, ang, cr, ci, pr, pi_
    cdef i64 d, dbar, num, den = c * N * h
    cdef int j
    if c > 10 ** 6 or N * h > 10 ** 4:
        raise OverflowError("modulus too large for 64-bit kernels")
    with nogil:
        for d in range(1, c):
            if _gcd(d, c) != 1:
                continue
            dbar = _invmod(d, c)
            j = _jacobi(c, d)
            # phase (m dbar + n d)/c - v c d/(N h), as an integer over c N h
            num = _mod(_mod(m * dbar + n * d, c) * (N * h)
                       - c * _mod(_mod(v * c, N * h) * d, N * h), den)
            ang = 2.0 * M_PI * (<double>num) / (<double>den)
            cr = cos(ang)
            ci = sin(ang)
            if d % 4 == 1:
                pr = j * cr
                pi_ = j * ci
            else:
                pr = -j * ci
                pi_ = j * cr
            re += pr
            im += pi_
    return complex(re, im)


cdef i64 _gcd(i64 a, i64 b) nogil:
    cdef i64 t
    while b:
        t = a % b
        a = b
        b = t
    return a
