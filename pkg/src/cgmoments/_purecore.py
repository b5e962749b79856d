"""Pure-Python integer kernels: Kronecker symbols, form reduction and
enumeration, character sieves, lattice-point enumeration.

Same API as the compiled twin in _fastcore.pyx; cgmoments._core picks one
at import time.
"""

import math

import numpy as np

BACKEND = "pure"


def kronecker(a: int, b: int) -> int:
    """Kronecker symbol (a|b), fully general."""
    if b == 0:
        return 1 if a in (1, -1) else 0
    if a % 2 == 0 and b % 2 == 0:
        return 0
    k = 1
    if b < 0:
        b = -b
        if a < 0:
            k = -k
    v = 0
    while b % 2 == 0:
        b //= 2
        v += 1
    if v % 2 == 1 and a % 8 in (3, 5):
        k = -k
    a %= b
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if b % 8 in (3, 5):
                k = -k
        a, b = b, a
        if a % 4 == 3 and b % 4 == 3:
            k = -k
        a %= b
    return k if b == 1 else 0


def is_squarefree(n: int) -> bool:
    if n <= 0:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return False
        d += 1
    return True


def is_fundamental(D: int) -> bool:
    if D >= 0:
        return False
    if D % 4 == 1:
        return is_squarefree(-D)
    if D % 4 == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(-m)
    return False


def fundamental_discriminants(dmin: int, dmax: int) -> np.ndarray:
    """All fundamental D with dmin <= D <= dmax < 0, ascending."""
    if dmax >= 0 or dmin > dmax:
        raise ValueError("need dmin <= dmax < 0")
    t2 = -dmin
    squarefree = np.ones(t2 + 1, dtype=bool)
    for p in range(2, math.isqrt(t2) + 1):
        squarefree[p * p :: p * p] = False
    t = np.arange(0, t2 + 1)
    odd_ok = (t % 4 == 3) & squarefree
    u = t >> 2
    even_ok = (t % 4 == 0) & ((u % 4 == 1) | (u % 4 == 2)) & squarefree[u]
    ts = np.nonzero(odd_ok | even_ok)[0]
    ts = ts[ts >= -dmax]
    return -ts[::-1].astype(np.int64)


def reduce_form(a: int, b: int, c: int):
    """Gauss-reduce a positive definite form; returns the unique reduced (a,b,c)."""
    if a <= 0 or b * b - 4 * a * c >= 0:
        raise ValueError("form must be positive definite")
    while True:
        if b > a or b <= -a:
            r = (a - b) // (2 * a)
            c = a * r * r + b * r + c
            b = b + 2 * a * r
        if a > c or (a == c and b < 0):
            a, b, c = c, -b, a
        else:
            break
    if b == -a:
        b = a
    return a, b, c


def reduced_forms(D: int):
    """All reduced forms of discriminant D; principal form first, then (a, -b) order."""
    forms = []
    amax = math.isqrt(-D // 3) if D <= -3 else 0
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            if (b - D) % 2 != 0:
                continue
            num = b * b - D
            if num % (4 * a) != 0:
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if (abs(b) == a or a == c) and b < 0:
                continue
            forms.append((a, b, c))
    principal = (1, 0, -D // 4) if D % 4 == 0 else (1, 1, (1 - D) // 4)
    rest = [f for f in forms if f != principal]
    rest.sort(key=lambda f: (f[0], -f[1]))
    return [principal] + rest


def smallest_prime_factors(limit: int) -> np.ndarray:
    spf = np.zeros(limit + 1, dtype=np.int64)
    spf[1:] = np.arange(1, limit + 1)
    for p in range(2, math.isqrt(limit) + 1):
        if spf[p] == p:
            sl = spf[p * p :: p]
            sl[sl == np.arange(p * p, limit + 1, p)] = p
    return spf


def chi_values(D: int, limit: int, spf: np.ndarray | None = None) -> np.ndarray:
    """chi_D(n) for n = 0..limit as int8 (index 0 is 0)."""
    if spf is None:
        spf = smallest_prime_factors(limit)
    chi = np.zeros(limit + 1, dtype=np.int8)
    if limit >= 1:
        chi[1] = 1
    for n in range(2, limit + 1):
        p = int(spf[n])
        if n == p:
            chi[n] = kronecker(D, p)
        else:
            chi[n] = chi[n // p] * chi[p]
    return chi


def lattice_values(a: int, b: int, c: int, qmax: int):
    """Values of Q(m,n)=am^2+bmn+cn^2 <= qmax over (m,n) != (0,0).

    Returns (values, counts), values ascending. disc must be negative.
    """
    disc = b * b - 4 * a * c
    if disc >= 0 or a <= 0:
        raise ValueError("form must be positive definite")
    counts: dict[int, int] = {}
    nmax = math.isqrt((4 * a * qmax) // (-disc))
    for n in range(-nmax, nmax + 1):
        rad = 4 * a * qmax + disc * n * n
        if rad < 0:
            continue
        r = math.isqrt(rad)
        lo = (-b * n - r + 2 * a - 1) // (2 * a)  # ceil
        hi = (-b * n + r) // (2 * a)  # floor
        for m in range(lo, hi + 1):
            if m == 0 and n == 0:
                continue
            q = a * m * m + b * m * n + c * n * n
            if q <= qmax:
                counts[q] = counts.get(q, 0) + 1
    qs = np.array(sorted(counts), dtype=np.int64)
    cs = np.array([counts[int(q)] for q in qs], dtype=np.int64)
    return qs, cs
