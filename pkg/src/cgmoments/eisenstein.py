"""Real-analytic Eisenstein series on the modular surface, level 1 and prime level N.

Three independent evaluators for E(s, z) = sum over cosets of Im(gamma z)^s:

  E_fourier  divisor-sum Fourier expansion, valid in the whole s-plane away
             from s = 1 and s = 1/2 (dedicated paths exist for both points)
  E_direct   row-condensed lattice sum, Re s >= 1.1
  E_theta    incomplete-gamma continuation of the associated Epstein zeta

All three return the same numbers where their domains overlap; only the first
is meant for production use.
"""

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from cgmoments.heegner import reduce_to_fundamental_domain
from cgmoments.specfun import (
    DEFAULT,
    EULER_GAMMA,
    PrecisionConfig,
    _bessel_K_any,
    _bessel_K_matrix,
    _bessel_K_vec,
    gamma,
    kronecker_limit_constant,
    modular_values,
    uinc_gamma_vec,
    zeta_bundle,
    zeta_pair,
)

_GUARD = 1e-3  # radius of excluded neighborhoods around s = 1 and s = 1/2

_Y_REDUCE = math.sqrt(3) / 2


@dataclass(frozen=True)
class EisensteinValue:
    """E(s,z) together with the split of zeta(2s)E into constant term and tail."""

    value: complex
    constant_term: complex  # zeta(2s) y^s + c1(s) y^(1-s), at the evaluation point
    tail: complex  # value * zeta(2s) - constant_term, exact by construction


def _cutoff_exponent(cfg: PrecisionConfig) -> float:
    return -math.log(cfg.series_cutoff_exponent) + 2.0


def _divisors(n: int) -> tuple:
    return _DIVISOR_TABLE[n]


_DIVISOR_TABLE = tuple(
    tuple(d for d in range(1, n + 1) if n % d == 0) for n in range(65)
)


@lru_cache(maxsize=65536)
def _sigma(n: int, w: complex) -> complex:
    return sum(d**w for d in _divisors(n))


@lru_cache(maxsize=4096)
def _c1(s: complex) -> complex:
    # sqrt(pi) Gamma(s-1/2) zeta(2s-1) / Gamma(s); equals
    # pi^(2s-1) Gamma(1-s) zeta(2-2s) / Gamma(s) but stays conditioned at integer s
    return math.sqrt(math.pi) * gamma(s - 0.5) * zeta_pair(2 * s - 1)[0] / gamma(s)


def E_fourier(s: complex, z: complex, cfg: PrecisionConfig = DEFAULT) -> EisensteinValue:
    """Fourier-expansion evaluation of E(s, z), any s away from 1 and 1/2.

    zeta(2s) E(s,z) = zeta(2s) y^s + c1(s) y^(1-s)
        + (4 pi^s sqrt(y) / Gamma(s)) * sum_n n^(s-1/2) sigma_(1-2s)(n)
                                        K_(s-1/2)(2 pi n y) cos(2 pi n x)

    Points with y < sqrt(3)/2 are reduced to the fundamental domain first.
    """
    s = complex(s)
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    if abs(s - 1) < _GUARD:
        raise ValueError("pole at s = 1; use E_kronecker_expansion")
    if abs(s - 0.5) < _GUARD:
        raise ValueError("constant-term assembly degenerates at s = 1/2; use E_completed_half")
    if z.imag < _Y_REDUCE:
        z, _ = reduce_to_fundamental_domain(z)
    x, y = z.real, z.imag

    zeta2s = zeta_pair(2 * s)[0]
    ct = zeta2s * y**s + _c1(s) * y ** (1 - s)

    xcut = _cutoff_exponent(cfg)
    nmax = int(xcut / (2 * math.pi * y))
    tail = 0.0 + 0.0j
    if nmax >= 1:
        nu = s - 0.5
        pref = 4 * cmath.exp(s * math.log(math.pi)) * math.sqrt(y) / gamma(s)
        ns = np.arange(1, nmax + 1)
        kv = _bessel_K_vec(nu, 2 * math.pi * y * ns)
        sig = np.array([_sigma(n, 1 - 2 * s) for n in range(1, nmax + 1)])
        modes = ns.astype(complex) ** nu * sig * kv * np.cos(2 * math.pi * x * ns)
        tail = pref * complex(modes.sum())
    # value is built from the split, so the identity value*zeta(2s) = ct + tail
    # holds to roundoff; tail is the raw mode sum (meaningful far below ulp(ct))
    return EisensteinValue((ct + tail) / zeta2s, ct, tail)


def _E_fourier_many(ss, z: complex, cfg: PrecisionConfig = DEFAULT) -> np.ndarray:
    """E(s, z) for a batch of s at one z, sharing the Bessel grid.

    Quadrature loops evaluate dozens of spectral points per node; the
    divisor sums, zeta values and gamma factors are all s-cached, so the
    remaining per-point cost is the K-Bessel, done here as one matrix.
    Same s-guards as E_fourier.
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    ss = [complex(s) for s in ss]
    for s in ss:
        if abs(s - 1) < _GUARD or abs(s - 0.5) < _GUARD:
            raise ValueError("batch must keep clear of s = 1 and s = 1/2")
    if z.imag < _Y_REDUCE:
        z, _ = reduce_to_fundamental_domain(z)
    x, y = z.real, z.imag
    logy = math.log(y)
    sv = np.array(ss)
    zetas = np.array([zeta_pair(2 * s)[0] for s in ss])
    cts = zetas * np.exp(sv * logy)
    cts += np.array([_c1(s) for s in ss]) * np.exp((1 - sv) * logy)
    nmax = int(_cutoff_exponent(cfg) / (2 * math.pi * y))
    if nmax < 1:
        return cts / zetas
    ns = np.arange(1, nmax + 1)
    kmat = _bessel_K_matrix(sv - 0.5, 2 * math.pi * y * ns)
    sig = np.array([[_sigma(n, 1 - 2 * s) for n in range(1, nmax + 1)]
                    for s in ss])
    pows = ns.astype(complex)[None, :] ** (sv - 0.5)[:, None]
    prefs = np.array([4 * cmath.exp(s * math.log(math.pi)) * math.sqrt(y) / gamma(s)
                      for s in ss])
    tails = prefs * (pows * sig * kmat * np.cos(2 * math.pi * x * ns)).sum(axis=1)
    return (cts + tails) / zetas


def E_completed_half(z: complex, cfg: PrecisionConfig = DEFAULT) -> complex:
    """lim_{s->1/2} zeta(2s) E(s, z); the two constant-term poles cancel.

    Equals sqrt(y)(log y + gamma - log 4pi) + 4 sqrt(y) sum_n d(n) K_0(2 pi n y) cos(2 pi n x).
    """
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    if z.imag < _Y_REDUCE:
        z, _ = reduce_to_fundamental_domain(z)
    x, y = z.real, z.imag
    out = math.sqrt(y) * (math.log(y) + EULER_GAMMA - math.log(4 * math.pi))
    nmax = int(_cutoff_exponent(cfg) / (2 * math.pi * y))
    for n in range(1, nmax + 1):
        out += (
            4
            * math.sqrt(y)
            * len(_divisors(n))
            * _bessel_K_any(0.0, 2 * math.pi * n * y).real
            * math.cos(2 * math.pi * n * x)
        )
    return out


def E_direct(
    s: complex,
    z: complex,
    height_floor: float = 1e-6,
    cfg: PrecisionConfig = DEFAULT,
) -> complex:
    """Lattice-sum evaluation of E(s, z) for Re s >= 1.1.

    The full lattice sum L(s,z) = sum'_(m,n) y^s |mz+n|^(-2s) = 2 zeta(2s) E(s,z)
    is summed row by row in m.  Every coset of height >= height_floor lies in a
    row that is summed in closed form (Poisson main term plus Bessel corrections
    truncated below cfg.series_cutoff_exponent); the remaining rows contribute
    their main terms through the zeta(2s-1) tail.  No reduction of z is
    performed, so invariance under SL2(Z) is a nontrivial property of the output.
    """
    s = complex(s)
    return lattice_epstein(s, z, height_floor, cfg) / (2 * zeta_pair(2 * s)[0])


def lattice_epstein(
    s: complex,
    z: complex,
    height_floor: float = 1e-6,
    cfg: PrecisionConfig = DEFAULT,
) -> complex:
    """Row-condensed sum'_(m,n) (|mz+n|^2 / y)^(-s) over nonzero integer pairs."""
    s = complex(s)
    z = complex(z)
    if s.real < 1.1 - 1e-12:
        raise ValueError("lattice sum requires Re s >= 1.1")
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    if height_floor <= 0:
        raise ValueError("height_floor must be positive")
    x, y = z.real, z.imag

    xcut = _cutoff_exponent(cfg)
    m_bessel = int(xcut / (2 * math.pi * y))
    m_rows = max(m_bessel + 1, math.ceil(math.sqrt(1.0 / (y * height_floor))) + 1)

    zeta2s = zeta_pair(2 * s)[0]
    c1g = math.sqrt(math.pi) * gamma(s - 0.5) / gamma(s)

    L = 2 * zeta2s * y**s

    # enumerated rows 1 <= m < m_rows, main terms only beyond the Bessel range
    ms = np.arange(1, m_rows, dtype=np.float64)
    partial = np.exp((1 - 2 * s) * np.log(ms)).sum()
    L += 2 * c1g * y ** (1 - s) * partial
    # condensed remainder rows m >= m_rows
    L += 2 * c1g * y ** (1 - s) * (zeta_pair(2 * s - 1)[0] - partial)

    nu = s - 0.5
    pref = 4 * cmath.exp(s * math.log(math.pi)) / gamma(s) * math.sqrt(y)
    for m in range(1, m_bessel + 1):
        kmax = int(xcut / (2 * math.pi * m * y))
        acc = 0.0 + 0.0j
        for k in range(1, kmax + 1):
            acc += (
                k**nu
                * _bessel_K_any(nu, 2 * math.pi * k * m * y)
                * math.cos(2 * math.pi * k * m * x)
            )
        L += 2 * pref * m ** (0.5 - s) * acc

    return L


def _theta_F(
    s: complex,
    qhat: np.ndarray,
    counts: np.ndarray | None = None,
) -> complex:
    """Symmetrized incomplete-gamma sum for a determinant-one quadratic form.

    qhat holds the form values over nonzero lattice points (normalized so the
    form has determinant 1), already truncated at the cfg cutoff.  Satisfies
    F(s) = F(1-s) identically.
    """
    xs = math.pi * qhat
    t1 = np.exp(-s * np.log(xs)) * uinc_gamma_vec(s, xs)
    t2 = np.exp((s - 1) * np.log(xs)) * uinc_gamma_vec(1 - s, xs)
    terms = t1 + t2
    if counts is not None:
        terms = terms * counts
    return complex(terms.sum()) - 1.0 / s - 1.0 / (1.0 - s)


def _z_lattice_qhat(z: complex, qcut: float) -> np.ndarray:
    """Values |mz+n|^2 / y <= qcut over nonzero integer pairs (m, n)."""
    x, y = z.real, z.imag
    vals = []
    mmax = int(math.sqrt(qcut / y))
    for m in range(-mmax, mmax + 1):
        r2 = qcut * y - (m * y) ** 2
        if r2 < 0:
            continue
        r = math.sqrt(r2)
        for n in range(math.ceil(-m * x - r), math.floor(-m * x + r) + 1):
            if m == 0 and n == 0:
                continue
            vals.append(((m * x + n) ** 2 + (m * y) ** 2) / y)
    return np.array(vals, dtype=np.float64)


def E_theta(s: complex, z: complex, cfg: PrecisionConfig = DEFAULT) -> complex:
    """Theta-continuation evaluation of E(s, z); valid for all s away from 0, 1/2, 1.

    |mz+n|^2/y is a determinant-one form in (m, n), so its Epstein zeta
    continues through the symmetrized incomplete-gamma sum: the lattice sum
    equals pi^s F(s) / Gamma(s) and E = lattice / (2 zeta(2s)).
    """
    s = complex(s)
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    for bad, name in ((0.0, "0"), (0.5, "1/2"), (1.0, "1")):
        if abs(s - bad) < _GUARD:
            raise ValueError(f"E_theta undefined within {_GUARD} of s = {name}")
    qhat = _z_lattice_qhat(z, _cutoff_exponent(cfg) / math.pi)
    F = _theta_F(s, qhat)
    lattice = cmath.exp(s * math.log(math.pi)) * F / gamma(s)
    return lattice / (2 * zeta_pair(2 * s)[0])


def E_kronecker_expansion(z: complex) -> tuple[float, complex]:
    """Laurent data of (pi/3) E(s, z) at s = 1: residue coefficient and constant term.

    (pi/3) E(1+h, z) = 1/h + constant + O(h) with
    constant = -log|Im z * eta(z)^4| + 2c,  c = gamma - log 2 - zeta'(2)/zeta(2).
    Returns (3/pi, constant): the former is the residue of E itself.
    """
    mv = modular_values(z)
    constant = -mv.log_abs_im_eta4 + 2 * kronecker_limit_constant()
    return 3 / math.pi, complex(constant)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    return all(n % d for d in range(2, math.isqrt(n) + 1))


def E_level_N(
    cusp: str,
    s: complex,
    z: complex,
    N: int,
    cfg: PrecisionConfig = DEFAULT,
) -> complex:
    """Eisenstein series of Gamma_0(N), N prime, at the cusp infinity or zero.

    E_inf(s,z) = (N^s - N^-s)^-1 [E(s, Nz) - N^-s E(s, z)]
    E_0(s,z)   = (N^s - N^-s)^-1 [E(s, z)  - N^-s E(s, Nz)]
    """
    if cusp not in ("infinity", "zero"):
        raise ValueError("cusp must be 'infinity' or 'zero'")
    if not _is_prime(N):
        raise ValueError("level must be prime")
    s = complex(s)
    den = cmath.exp(s * math.log(N)) - cmath.exp(-s * math.log(N))
    if abs(den) < 1e-6:
        raise ValueError("N^s - N^-s vanishes; cusp decomposition is singular here")
    e1 = E_fourier(s, N * z, cfg).value
    e0 = E_fourier(s, z, cfg).value
    ninv = cmath.exp(-s * math.log(N))
    if cusp == "infinity":
        return (e1 - ninv * e0) / den
    return (e0 - ninv * e1) / den


def scattering_matrix(s: complex, N: int) -> np.ndarray:
    """2x2 scattering matrix of Gamma_0(N), N prime, in the cusp order (inf, 0).

    Entries r(N-1)/(N^2s - 1) on the diagonal and r(N^s - N^(1-s))/(N^2s - 1)
    off it, with r = xi(2s-1)/xi(2s).  Equals M(s)^-1 M(1-s) for
    M(s) = xi(2s) [[1, N^s], [N^s, 1]].
    """
    if not _is_prime(N):
        raise ValueError("level must be prime")
    s = complex(s)
    for bad in (0.5, 1.0):
        if abs(s - bad) < _GUARD:
            raise ValueError(f"scattering matrix is singular at s = {bad}")
    xi_num = zeta_bundle(2 * s - 1).xi
    xi_den = zeta_bundle(2 * s).xi
    if abs(xi_den) < 1e-12:
        raise ArithmeticError("xi(2s) vanishes; s is too close to a zeta zero")
    r = xi_num / xi_den
    den = cmath.exp(2 * s * math.log(N)) - 1.0
    diag = r * (N - 1) / den
    off = r * (cmath.exp(s * math.log(N)) - cmath.exp((1 - s) * math.log(N))) / den
    return np.array([[diag, off], [off, diag]], dtype=np.complex128)


def psi0(u: float) -> float:
    """Fixed smooth cutoff: 0 on (-inf, 1], 1 on [2, inf), C^2 quintic join on [1, 2]."""
    if u <= 1.0:
        return 0.0
    if u >= 2.0:
        return 1.0
    w = u - 1.0
    return w * w * w * (10.0 - 15.0 * w + 6.0 * w * w)


def E_incomplete(z: complex, Y: float, psi_profile: str = "quintic") -> float:
    """Incomplete Eisenstein series sum_gamma psi0(Im gamma z / Y) for Y > 1.

    Only cosets reaching height >= Y contribute; they are enumerated through
    |cz+d|^2 <= y/Y over coprime pairs, plus the identity coset.
    """
    if psi_profile != "quintic":
        raise ValueError("only the fixed quintic profile is available")
    z = complex(z)
    if z.imag <= 0:
        raise ValueError("z must lie in the upper half-plane")
    if Y <= 1:
        raise ValueError("Y must exceed 1")
    x, y = z.real, z.imag
    out = psi0(y / Y)
    cmax = int(math.sqrt(y / Y) / y)
    for c in range(1, cmax + 1):
        r2 = y / Y - (c * y) ** 2
        if r2 < 0:
            continue
        r = math.sqrt(r2)
        for d in range(math.ceil(-c * x - r), math.floor(-c * x + r) + 1):
            if math.gcd(c, d) != 1:
                continue
            out += psi0(y / (((c * x + d) ** 2 + (c * y) ** 2) * Y))
    return out
