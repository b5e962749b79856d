# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled integer kernels; API mirrors _purecore exactly.

Arithmetic is C int64 throughout, so inputs are bounded (|D| < 2^31 and
qmax < 2^31 keep every intermediate in range); the pure twin has no bound.
"""

import math

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()

BACKEND = "fast"


cdef long long _kron(long long a, long long b) noexcept:
    cdef long long k = 1, v = 0, t, r
    if b == 0:
        return 1 if (a == 1 or a == -1) else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    while b % 2 == 0:
        b //= 2
        v += 1
    if v % 2 == 1:
        r = a % 8
        if r < 0:
            r += 8
        if r == 3 or r == 5:
            k = -k
    a %= b
    if a < 0:
        a += b
    while a != 0:
        while a % 2 == 0:
            a //= 2
            r = b % 8
            if r == 3 or r == 5:
                k = -k
        t = a
        a = b
        b = t
        if a % 4 == 3 and b % 4 == 3:
            k = -k
        a %= b
    return k if b == 1 else 0


def kronecker(a, b):
    """Kronecker symbol (a|b), fully general."""
    return int(_kron(a, b))


cdef bint _squarefree(long long n) noexcept:
    cdef long long d = 2
    if n <= 0:
        return False
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return False
        d += 1
    return True


def is_squarefree(n):
    return bool(_squarefree(n))


def is_fundamental(D):
    cdef long long d = D, m
    if d >= 0:
        return False
    if (d % 4 + 4) % 4 == 1:
        return bool(_squarefree(-d))
    if d % 4 == 0:
        m = d // 4
        return bool(((m % 4 + 4) % 4 == 2 or (m % 4 + 4) % 4 == 3) and _squarefree(-m))
    return False


def fundamental_discriminants(dmin, dmax):
    """All fundamental D with dmin <= D <= dmax < 0, ascending."""
    if dmax >= 0 or dmin > dmax:
        raise ValueError("need dmin <= dmax < 0")
    cdef long long t2 = -dmin
    squarefree = np.ones(t2 + 1, dtype=bool)
    cdef long long p
    for p in range(2, math.isqrt(t2) + 1):
        squarefree[p * p :: p * p] = False
    t = np.arange(0, t2 + 1)
    odd_ok = (t % 4 == 3) & squarefree
    u = t >> 2
    even_ok = (t % 4 == 0) & ((u % 4 == 1) | (u % 4 == 2)) & squarefree[u]
    ts = np.nonzero(odd_ok | even_ok)[0]
    ts = ts[ts >= -dmax]
    return -ts[::-1].astype(np.int64)


cdef inline long long _fdiv(long long x, long long y) noexcept:
    # floor division, y > 0; cdivision makes // truncate like C
    cdef long long q = x // y
    if x % y != 0 and x < 0:
        q -= 1
    return q


def reduce_form(a, b, c):
    """Gauss-reduce a positive definite form; returns the unique reduced (a,b,c)."""
    cdef long long aa = a, bb = b, cc = c, r, t
    if aa <= 0 or bb * bb - 4 * aa * cc >= 0:
        raise ValueError("form must be positive definite")
    while True:
        if bb > aa or bb <= -aa:
            r = _fdiv(aa - bb, 2 * aa)
            cc = aa * r * r + bb * r + cc
            bb = bb + 2 * aa * r
        if aa > cc or (aa == cc and bb < 0):
            t = aa
            aa = cc
            cc = t
            bb = -bb
        else:
            break
    if bb == -aa:
        bb = aa
    return int(aa), int(bb), int(cc)


def reduced_forms(D):
    """All reduced forms of discriminant D; principal form first, then (a, -b) order."""
    cdef long long d = D, a, b, num, c, amax
    forms = []
    amax = math.isqrt(-d // 3) if d <= -3 else 0
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - d) % 2 != 0:
                continue
            num = b * b - d
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if (b < 0) and (-b == a or a == c):
                continue
            forms.append((int(a), int(b), int(c)))
    principal = (1, 0, -D // 4) if D % 4 == 0 else (1, 1, (1 - D) // 4)
    rest = [f for f in forms if f != principal]
    rest.sort(key=lambda f: (f[0], -f[1]))
    return [principal] + rest


def smallest_prime_factors(limit):
    cdef cnp.ndarray[cnp.int64_t, ndim=1] spf = np.zeros(limit + 1, dtype=np.int64)
    cdef long long i, p, n
    for i in range(1, limit + 1):
        spf[i] = i
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            for n in range(p * p, limit + 1, p):
                if spf[n] == n:
                    spf[n] = p
    return np.asarray(spf)


def chi_values(D, limit, spf=None):
    """chi_D(n) for n = 0..limit as int8 (index 0 is 0)."""
    if spf is None:
        spf = smallest_prime_factors(limit)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] spf_ = np.ascontiguousarray(spf, dtype=np.int64)
    cdef cnp.ndarray[cnp.int8_t, ndim=1] chi = np.zeros(limit + 1, dtype=np.int8)
    cdef long long n, p, d = D
    if limit >= 1:
        chi[1] = 1
    for n in range(2, limit + 1):
        p = spf_[n]
        if n == p:
            chi[n] = <cnp.int8_t> _kron(d, p)
        else:
            chi[n] = chi[n // p] * chi[p]
    return np.asarray(chi)


def lattice_values(a, b, c, qmax):
    """Values of Q(m,n)=am^2+bmn+cn^2 <= qmax over (m,n) != (0,0).

    Returns (values, counts), values ascending. disc must be negative.
    """
    cdef long long aa = a, bb = b, cc = c, qm = qmax
    cdef long long disc = bb * bb - 4 * aa * cc
    if disc >= 0 or aa <= 0:
        raise ValueError("form must be positive definite")
    counts = {}
    cdef long long nmax = math.isqrt((4 * aa * qm) // (-disc))
    cdef long long n, rad, r, lo, hi, m, q
    for n in range(-nmax, nmax + 1):
        rad = 4 * aa * qm + disc * n * n
        if rad < 0:
            continue
        r = math.isqrt(rad)
        lo = -_fdiv(bb * n + r, 2 * aa)  # ceil((-b n - r) / 2a)
        hi = _fdiv(-bb * n + r, 2 * aa)
        for m in range(lo, hi + 1):
            if m == 0 and n == 0:
                continue
            q = aa * m * m + bb * m * n + cc * n * n
            if q <= qm:
                if q in counts:
                    counts[q] += 1
                else:
                    counts[q] = 1
    qs = np.array(sorted(counts), dtype=np.int64)
    cs = np.array([counts[int(q)] for q in qs], dtype=np.int64)
    return qs, cs
