"""Special functions on complex arguments: gamma family, zeta and Dirichlet
L machinery, K-Bessel, upper incomplete gamma, and modular forms.

All arithmetic is complex128; accuracy targets come from PrecisionConfig.
The zeta/Hurwitz engines are Euler-Maclaurin with term-wise analytic
s-derivatives, so every derivative here is exact differentiation of the
truncated formula, not a finite difference.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import lru_cache

import numpy as np

from cgmoments import _core
from cgmoments.heegner import reduce_to_fundamental_domain

EULER_GAMMA = 0.5772156649015328606065120900824024


@dataclass(frozen=True)
class PrecisionConfig:
    target_abs_tol: float = 1e-12
    series_cutoff_exponent: float = 1e-18
    euler_maclaurin_terms: int = 10
    em_cutoff_scale: float = 1.0  # multiplies the ~2|s|+50 summation cutoff

    def __post_init__(self):
        if min(self.target_abs_tol, self.series_cutoff_exponent,
               self.euler_maclaurin_terms, self.em_cutoff_scale) <= 0:
            raise ValueError("PrecisionConfig fields must be positive")

    def doubled(self) -> "PrecisionConfig":
        # tighter everything; used by stability checks that rerun a pipeline
        return replace(
            self,
            target_abs_tol=self.target_abs_tol * 1e-2,
            series_cutoff_exponent=self.series_cutoff_exponent * 1e-6,
            em_cutoff_scale=self.em_cutoff_scale * 2.0,
        )


DEFAULT = PrecisionConfig()

# Lanczos, g=7, 9 terms
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


@lru_cache(maxsize=8192)
def gamma(s: complex) -> complex:
    """Gamma function; Lanczos with reflection for Re s < 1/2."""
    s = complex(s)
    if s.real < 0.5:
        if s.imag == 0 and s.real == round(s.real):
            raise ValueError(f"gamma pole at s={s}")
        return math.pi / (cmath.sin(math.pi * s) * gamma(1 - s))
    z = s - 1
    x = _LANCZOS[0]
    for i, ci in enumerate(_LANCZOS[1:], start=1):
        x += ci / (z + i)
    t = z + _LANCZOS_G + 0.5
    return math.sqrt(2 * math.pi) * t ** (z + 0.5) * cmath.exp(-t) * x


_DIGAMMA_ASY = (  # Bernoulli B_{2k}/(2k), k = 1..7
    1 / 12, -1 / 120, 1 / 252, -1 / 240, 1 / 132, -691 / 32760, 1 / 12,
)


def digamma(s: complex) -> complex:
    """psi(s) by recurrence up to Re >= 12 plus the Stirling tail."""
    s = complex(s)
    acc = 0j
    while s.real < 12:
        if s == 0:
            raise ValueError("digamma pole")
        acc -= 1 / s
        s += 1
    inv2 = 1 / (s * s)
    tail = 0j
    p = inv2
    for coeff in _DIGAMMA_ASY:
        tail -= coeff * p
        p *= inv2
    return acc + cmath.log(s) - 1 / (2 * s) + tail


@lru_cache(maxsize=1)
def _bernoulli_factors(m: int = 12) -> tuple[float, ...]:
    # B_{2k}/(2k)! for the Euler-Maclaurin correction terms
    b = {2: Fraction(1, 6), 4: Fraction(-1, 30), 6: Fraction(1, 42),
         8: Fraction(-1, 30), 10: Fraction(5, 66), 12: Fraction(-691, 2730),
         14: Fraction(7, 6), 16: Fraction(-3617, 510),
         18: Fraction(43867, 798), 20: Fraction(-174611, 330),
         22: Fraction(854513, 138), 24: Fraction(-236364091, 2730)}
    return tuple(float(b[2 * k] / Fraction(math.factorial(2 * k))) for k in range(1, m + 1))


def _em_pair(s: complex, base: float, nterms: int, cfg: PrecisionConfig):
    """(sum_{n>=0} (n+base)^{-s}, its s-derivative), by Euler-Maclaurin.

    With base=1 this is (zeta(s), zeta'(s)); pole term N^{1-s}/(s-1) included,
    so s must stay away from 1.
    """
    N = nterms
    n = np.arange(0, N) + base
    ln = np.log(n)
    e = np.exp(-s * ln)
    S = e.sum()
    Sp = -(ln * e).sum()
    P = float(N + base)
    L = math.log(P)
    pw = cmath.exp(-s * L)  # P^{-s}
    A = pw * P / (s - 1)
    Ap = -L * A - A / (s - 1)
    B = pw / 2
    Bp = -L * B
    T = 0j
    Tp = 0j
    M = cfg.euler_maclaurin_terms
    factors = _bernoulli_factors()
    base_pow = pw / P  # P^{-s-1}
    for k in range(1, M + 1):
        p, dp = 1 + 0j, 0j
        for j in range(2 * k - 1):
            dp = dp * (s + j) + p
            p = p * (s + j)
        term = factors[k - 1] * base_pow
        T += term * p
        Tp += term * (dp - p * L)
        base_pow /= P * P
    # S covered n+base for n = 0..N-1; tail starts at P = N+base
    return S + A + B + T, Sp + Ap + Bp + Tp


def _zeta_cutoff(s: complex, cfg: PrecisionConfig) -> int:
    return int((2 * abs(s) + 50) * cfg.em_cutoff_scale)


@lru_cache(maxsize=4096)
def zeta_pair(s: complex, cfg: PrecisionConfig = DEFAULT) -> tuple[complex, complex]:
    """(zeta(s), zeta'(s)); s != 1."""
    s = complex(s)
    if abs(s - 1) < 1e-12:
        raise ValueError("zeta pole at s=1")
    if s.real < -0.25:
        # reflect: zeta(s) = chi(s) zeta(1-s), chi = 2^s pi^{s-1} sin(pi s/2) Gamma(1-s)
        z1, zp1 = _em_pair(1 - s, 1.0, _zeta_cutoff(1 - s, cfg), cfg)
        chi = 2**s * math.pi ** (s - 1) * cmath.sin(math.pi * s / 2) * gamma(1 - s)
        chi_ld = math.log(2 * math.pi) + math.pi / 2 / cmath.tan(math.pi * s / 2) - digamma(1 - s)
        return chi * z1, chi * (chi_ld * z1 - zp1)
    return _em_pair(s, 1.0, _zeta_cutoff(s, cfg), cfg)


@dataclass(frozen=True)
class ZetaBundle:
    s: complex
    zeta: complex
    zeta_prime: complex
    xi: complex

    @property
    def xi_logderiv(self) -> complex:
        # xi'/xi = -log(pi)/2 + psi(s/2)/2 + zeta'/zeta
        if abs(self.zeta) < 1e-5:
            raise ArithmeticError(f"zeta({self.s}) too close to a zero for xi'/xi")
        return -0.5 * math.log(math.pi) + 0.5 * digamma(self.s / 2) + self.zeta_prime / self.zeta


def zeta_bundle(s: complex, cfg: PrecisionConfig = DEFAULT) -> ZetaBundle:
    s = complex(s)
    z, zp = zeta_pair(s, cfg)
    xi = cmath.exp(-0.5 * s * math.log(math.pi)) * gamma(s / 2) * z
    return ZetaBundle(s, z, zp, xi)


def _bracket_pair(eps: complex, L: float) -> tuple[complex, complex]:
    """((e^{-eps L} - 1)/eps, d/deps of it), stable through eps = 0."""
    if abs(eps * L) < 0.5:
        g = 0j
        gp = 0j
        term = 1.0 + 0j
        for k in range(1, 30):
            term *= -L / k  # (-L)^k / k!
            g += term * eps ** (k - 1)
            if k >= 2:
                gp += term * (k - 1) * eps ** (k - 2)
            if abs(term) < 1e-20:
                break
        return g, gp
    w = cmath.exp(-eps * L)
    return (w - 1) / eps, (-L * w * eps - (w - 1)) / (eps * eps)


def hurwitz_reg_pair(s: complex, x: float, cfg: PrecisionConfig = DEFAULT):
    """(R, R') with R(s,x) = zeta(s,x) - 1/(s-1): entire in s, stable at s=1."""
    s = complex(s)
    N = _zeta_cutoff(s, cfg)
    n = np.arange(0, N) + x
    ln = np.log(n)
    e = np.exp(-s * ln)
    S = e.sum()
    Sp = -(ln * e).sum()
    P = float(N + x)
    L = math.log(P)
    pw = cmath.exp(-s * L)
    # (P^{1-s} - 1)/(s-1) replaces the pole term; subtracting 1/(s-1) overall
    G, Gp = _bracket_pair(s - 1, L)
    B = pw / 2
    Bp = -L * B
    T, Tp = 0j, 0j
    factors = _bernoulli_factors()
    base_pow = pw / P
    for k in range(1, cfg.euler_maclaurin_terms + 1):
        p, dp = 1 + 0j, 0j
        for j in range(2 * k - 1):
            dp = dp * (s + j) + p
            p = p * (s + j)
        term = factors[k - 1] * base_pow
        T += term * p
        Tp += term * (dp - p * L)
        base_pow /= P * P
    return S + G + B + T, Sp + Gp + Bp + Tp


def hurwitz_zeta(s: complex, x: float, derivative_order: int = 0,
                 cfg: PrecisionConfig = DEFAULT) -> complex:
    """zeta(s,x) = sum_{n>=0} (n+x)^{-s}, or its s-derivative."""
    if not 0 < x:
        raise ValueError("need x > 0")
    s = complex(s)
    if abs(s - 1) < 1e-12:
        raise ValueError("Hurwitz zeta pole at s=1")
    R, Rp = hurwitz_reg_pair(s, x, cfg)
    if derivative_order == 0:
        return R + 1 / (s - 1)
    if derivative_order == 1:
        return Rp - 1 / (s - 1) ** 2
    raise ValueError("derivative_order must be 0 or 1")


def dirichlet_L(s: complex, D: int, derivative_order: int = 0,
                cfg: PrecisionConfig = DEFAULT) -> complex:
    """L(s, chi_D) = q^{-s} sum_a chi(a) zeta(s, a/q), q = |D|; entire in s.

    The 1/(s-1) pole of each Hurwitz term cancels against sum chi = 0, so
    the pole-subtracted engine makes s = 1 a regular point.
    """
    if not _core.is_fundamental(D):
        raise ValueError(f"{D} is not a fundamental discriminant < 0")
    s = complex(s)
    q = -D
    chi = _core.chi_values(D, q)
    Ssum = 0j
    Spsum = 0j
    for a in range(1, q):
        ca = int(chi[a])
        if ca == 0:
            continue
        R, Rp = hurwitz_reg_pair(s, a / q, cfg)
        Ssum += ca * R
        Spsum += ca * Rp
    lq = math.log(q)
    qs = cmath.exp(-s * lq)
    if derivative_order == 0:
        return qs * Ssum
    if derivative_order == 1:
        return qs * (Spsum - lq * Ssum)
    raise ValueError("derivative_order must be 0 or 1")


def bessel_K(nu: complex, x: float, cfg: PrecisionConfig = DEFAULT) -> complex:
    """K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt; |Re nu| <= 2, x > 0.

    Trapezoid on the doubly-exponentially decaying integrand, halving the
    step until the value moves less than ~1e-13.
    """
    nu = complex(nu)
    if abs(nu.real) > 2:
        raise ValueError("|Re nu| <= 2 in this regime")
    return _bessel_K_any(nu, x)


def _bessel_K_any(nu: complex, x: float) -> complex:
    # same quadrature without the order guard; callers keep |Re nu| modest
    nu = complex(nu)
    if x <= 0:
        raise ValueError("need x > 0")
    if x > 705:
        return 0j  # e^{-x} underflow region; all uses are additive tails
    # find T with x(cosh T - 1) - |Re nu| T > 46
    T = 1.0
    while x * (math.cosh(T) - 1) - abs(nu.real) * T < 46:
        T += 0.5
    h = 0.25
    prev = None
    val = 0j
    for _ in range(8):
        t = np.arange(0, int(T / h) + 1) * h
        f = np.exp(-x * np.cosh(t)) * np.cosh(nu * t)
        val = h * (f.sum() - 0.5 * f[0] - 0.5 * f[-1])
        if prev is not None and abs(val - prev) < max(1e-15, 1e-13 * abs(val)):
            break
        prev = val
        h /= 2
    return complex(val)


def _bessel_K_vec(nu: complex, xs: np.ndarray) -> np.ndarray:
    """K_nu along a vector of arguments, one shared trapezoid grid.

    Grid length follows the smallest live x; larger arguments only pick up
    extra exact tail from the longer grid.
    """
    nu = complex(nu)
    out = np.zeros(xs.shape, dtype=complex)
    live = xs <= 705.0
    if not live.any():
        return out
    xl = xs[live]
    xmin = float(xl.min())
    if xmin <= 0:
        raise ValueError("need x > 0")
    T = 1.0
    while xmin * (math.cosh(T) - 1) - abs(nu.real) * T < 46:
        T += 0.5
    h = 0.25
    prev = None
    val = None
    for _ in range(8):
        t = np.arange(0, int(T / h) + 1) * h
        w = np.cosh(nu * t)
        w[0] *= 0.5
        w[-1] *= 0.5
        val = h * (np.exp(-np.outer(xl, np.cosh(t))) @ w)
        if prev is not None and np.all(
                np.abs(val - prev) < np.maximum(1e-15, 1e-13 * np.abs(val))):
            break
        prev = val
        h /= 2
    out[live] = val
    return out


def _bessel_K_matrix(nus: np.ndarray, xs: np.ndarray) -> np.ndarray:
    """K_nu(x) on the outer grid nus x xs, all orders on shared nodes."""
    nus = np.asarray(nus, dtype=complex)
    out = np.zeros((nus.size, xs.size), dtype=complex)
    live = xs <= 705.0
    if not live.any():
        return out
    xl = xs[live]
    xmin = float(xl.min())
    if xmin <= 0:
        raise ValueError("need x > 0")
    renu = float(np.max(np.abs(nus.real)))
    T = 1.0
    while xmin * (math.cosh(T) - 1) - renu * T < 46:
        T += 0.5
    h = 0.25
    prev = None
    val = None
    for _ in range(8):
        t = np.arange(0, int(T / h) + 1) * h
        w = np.cosh(np.outer(nus, t))
        w[:, 0] *= 0.5
        w[:, -1] *= 0.5
        f = np.exp(-np.outer(np.cosh(t), xl))
        val = h * (w @ f)
        if prev is not None and np.all(
                np.abs(val - prev) < np.maximum(1e-15, 1e-13 * np.abs(val))):
            break
        prev = val
        h /= 2
    out[:, live] = val
    return out


def _lentz_cf_vec(a: complex, x: np.ndarray, max_iter: int = 500) -> np.ndarray:
    """Continued fraction for Gamma(a,x)/(x^a e^{-x}), valid for x >= |a|+1.

    Lanes freeze individually once their delta settles; small-x lanes need
    far more iterations than large-x ones and must not stall the rest.
    """
    tiny = 1e-300
    b = x + 1.0 - a
    c = np.full_like(b, 1 / tiny)
    d = 1 / np.where(np.abs(b) < tiny, tiny, b)
    h = d.copy()
    active = np.arange(b.size)
    for i in range(1, max_iter):
        an = -i * (i - a)
        bn = b[active] + 2
        b[active] = bn
        dn = an * d[active] + bn
        dn = np.where(np.abs(dn) < tiny, tiny, dn)
        cn = bn + an / c[active]
        cn = np.where(np.abs(cn) < tiny, tiny, cn)
        dn = 1 / dn
        delta = dn * cn
        h[active] *= delta
        d[active] = dn
        c[active] = cn
        still = np.abs(delta - 1) >= 1e-15
        if not still.any():
            break
        if not still.all():
            active = active[still]
    return h


def _series_lower_vec(a: complex, x: np.ndarray, max_iter: int = 400) -> np.ndarray:
    """gamma_lower(a,x)/(x^a e^{-x}) = sum_n x^n / (a (a+1) ... (a+n))."""
    total = np.full_like(x, 1 / a, dtype=complex)
    term = total.copy()
    ap = a
    for _ in range(max_iter):
        ap = ap + 1
        term = term * x / ap
        total += term
        if np.max(np.abs(term)) < 1e-18 * max(np.max(np.abs(total)), 1e-30):
            break
    return total


def _e1_series_vec(x: np.ndarray, max_iter: int = 200) -> np.ndarray:
    # Gamma(0,x) = -gamma - log x + sum_k (-1)^{k+1} x^k / (k k!)
    out = -EULER_GAMMA - np.log(x)
    term = np.ones_like(x)
    for k in range(1, max_iter):
        term = term * (-x) / k
        out = out - term / k
        if np.max(np.abs(term)) < 1e-19:
            break
    return out.astype(complex)


def uinc_gamma_vec(a: complex, x: np.ndarray, cfg: PrecisionConfig = DEFAULT) -> np.ndarray:
    """Upper incomplete Gamma(a, x) for an array of x > 0, complex order a.

    Continued fraction for x >= |a|+1, series below; nonpositive integer a
    goes through E_1 and downward recurrence.  Noninteger a within 1e-3 of
    a nonpositive integer is rejected (accuracy loss band).
    """
    x = np.asarray(x, dtype=float)
    a = complex(a)
    out = np.empty(x.shape, dtype=complex)
    am = round(a.real)
    near_int = abs(a - am) < 1e-3 and am <= 0
    exact_int = abs(a - am) < 1e-12 and am <= 0
    if near_int and not exact_int:
        raise ValueError("a within 1e-3 of a nonpositive integer: unsupported band")
    cf_mask = x >= abs(a) + 1
    if cf_mask.any():
        xs = x[cf_mask]
        h = _lentz_cf_vec(a, xs)
        out[cf_mask] = np.exp(-xs + a * np.log(xs)) * h
    lo = ~cf_mask
    if lo.any():
        xs = x[lo]
        if exact_int:
            m = -int(am)
            g = _e1_series_vec(xs)  # Gamma(0, x)
            if m:
                ex = np.exp(-xs)
                for k in range(1, m + 1):
                    g = (xs ** (-k) * ex - g) / k
            out[lo] = g
        else:
            ser = _series_lower_vec(a, xs)
            out[lo] = gamma(a) - np.exp(-xs + a * np.log(xs)) * ser
    return out


def incomplete_gamma_upper(s: complex, x: float, cfg: PrecisionConfig = DEFAULT) -> complex:
    """Gamma(s, x) = int_x^inf t^{s-1} e^{-t} dt, x > 0."""
    if x <= 0:
        raise ValueError("need x > 0")
    return complex(uinc_gamma_vec(s, np.array([float(x)]), cfg)[0])


# -- modular forms -----------------------------------------------------------

_JCOEFF_COUNT = 64


@lru_cache(maxsize=1)
def _j_coefficients() -> tuple[int, ...]:
    """Exact integer q-coefficients c(-1), c(0), ..., of j = E4^3 / Delta."""
    K = _JCOEFF_COUNT + 2
    # sigma_3 convolution for E4 = 1 + 240 sum sigma_3(n) q^n
    sig3 = [0] * (K + 1)
    for d in range(1, K + 1):
        for n in range(d, K + 1, d):
            sig3[n] += d ** 3
    e4 = [1] + [240 * sig3[n] for n in range(1, K + 1)]
    e4sq = _poly_mul(e4, e4, K)
    e4cu = _poly_mul(e4sq, e4, K)
    # 1 / prod (1-q^n)^24 by inverting the unit power series
    prod = [1] + [0] * K
    for n in range(1, K + 1):
        # multiply by (1 - q^n)^24 via repeated (1 - q^n)
        for _ in range(24):
            for i in range(K, n - 1, -1):
                prod[i] -= prod[i - n]
    inv = [0] * (K + 1)
    inv[0] = 1
    for n in range(1, K + 1):
        inv[n] = -sum(prod[k] * inv[n - k] for k in range(1, n + 1))
    jq = _poly_mul(e4cu, inv, K)  # j * q = sum jq[n] q^n
    return tuple(jq[: _JCOEFF_COUNT + 2])


def _poly_mul(p: list[int], q: list[int], K: int) -> list[int]:
    out = [0] * (K + 1)
    for i, pi in enumerate(p):
        if pi == 0 or i > K:
            continue
        for j in range(0, min(len(q), K - i + 1)):
            out[i + j] += pi * q[j]
    return out


def log_eta(z: complex, cfg: PrecisionConfig = DEFAULT) -> complex:
    """log eta(z) = pi i z / 12 + sum_n log(1 - q^n), principal branches."""
    y = z.imag
    if y <= 0:
        raise ValueError("need Im z > 0")
    cut = math.log(cfg.series_cutoff_exponent)
    nmax = max(3, int(-cut / (2 * math.pi * y)) + 3)
    n = np.arange(1, nmax + 1)
    qn = np.exp(2j * math.pi * n * z)
    return 1j * math.pi * z / 12 + np.log1p(-qn).sum()


@dataclass(frozen=True)
class ModularValues:
    z: complex
    eta: complex
    log_abs_im_eta4: float  # log|Im z * eta(z)^4|, SL2(Z)-invariant
    delta: complex
    j: complex
    j_prime: complex
    log_abs_j_prime: float  # finite even when j_prime overflows


def modular_values(z: complex, cfg: PrecisionConfig = DEFAULT) -> ModularValues:
    z = complex(z)
    le = log_eta(z, cfg)
    eta = cmath.exp(le)
    log_im_eta4 = math.log(z.imag) + 4 * le.real
    delta = cmath.exp(24 * le)
    # j and j' at the reduced point, pulled back through the matrix
    w, (a, b, c, d) = reduce_to_fundamental_domain(z)
    coeffs = _j_coefficients()
    q = cmath.exp(2j * math.pi * w)
    # j*q = sum_{n>=0} c(n-1) q^n ; factor q^{-1} out stably
    acc = 0j
    for n in range(len(coeffs) - 1, -1, -1):
        acc = acc * q + coeffs[n]
    jw = acc / q if abs(q) > 0 else complex("inf")
    # j' * q / (2 pi i) = sum n c(n) q^{n+1} -> series in q with leading -1
    accp = 0j
    for n in range(len(coeffs) - 1, -1, -1):
        accp = accp * q + (n - 1) * coeffs[n]
    jp_w = 2j * math.pi * accp / q if abs(q) > 0 else complex("inf")
    czd = c * z + d
    jz = jw
    jp_z = jp_w / (czd * czd)
    # log|j'(w)| = log(2 pi) + 2 pi Im w + log|sum (n-1) c(n) q^n|
    log_jp_w = math.log(2 * math.pi) + 2 * math.pi * w.imag + _log_abs_series(coeffs, q)
    log_jp = log_jp_w - 2 * math.log(abs(czd))
    return ModularValues(z, eta, log_im_eta4, delta, jz, jp_z, log_jp)


def _log_abs_series(coeffs: tuple[int, ...], q: complex) -> float:
    acc = 0j
    for n in range(len(coeffs) - 1, -1, -1):
        acc = acc * q + (n - 1) * coeffs[n]
    return math.log(abs(acc))


@lru_cache(maxsize=8)
def kronecker_limit_constant(cfg: PrecisionConfig = DEFAULT) -> float:
    """c = gamma - log 2 - zeta'(2)/zeta(2); the 2c shift in the Kronecker limit."""
    z, zp = zeta_pair(2.0, cfg)
    return EULER_GAMMA - math.log(2) - (zp / z).real
