"""Heegner points on the modular curve, fundamental domain reduction, and
their level-N refinements.

The point of a form (A,B,C) is tau = (-B + i sqrt(|D|)) / (2A); reduced
forms give points in the standard fundamental domain, principal class
highest up.  Level-N points use forms with N | A and B fixed mod 2N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from cgmoments import _core
from cgmoments.classgroup import ClassGroup, QuadForm, reduced_forms, split_ideal_classes

_TIE = 1e-14


def heegner_point(form: QuadForm) -> complex:
    return form.root()


def heegner_points(D: int) -> list[complex]:
    """Points of the reduced forms, aligned with reduced_forms(D); principal first."""
    return [f.root() for f in reduced_forms(D)]


def principal_point(D: int) -> complex:
    return QuadForm.principal(D).root()


def is_in_fundamental_domain(z: complex, tol: float = _TIE) -> bool:
    x, r2 = z.real, abs(z) ** 2
    if not (-0.5 - tol <= x < 0.5 - tol):
        return False
    if r2 < 1 - tol:
        return False
    if abs(r2 - 1) <= tol and x > tol:
        return False
    return True


def reduce_to_fundamental_domain(z: complex, max_steps: int = 400):
    """Move z to the fundamental domain; returns (z', (a,b,c,d)) with z' = (az+b)/(cz+d).

    Ties: Re in [-1/2, 1/2); on the arc |z| = 1, Re <= 0.
    """
    if z.imag <= 0:
        raise ValueError("need Im z > 0")
    a, b, c, d = 1, 0, 0, 1
    for _ in range(max_steps):
        k = math.floor(z.real + 0.5)
        if k:
            z -= k
            a, b = a - k * c, b - k * d
        r2 = abs(z) ** 2
        if r2 < 1 - _TIE or (abs(r2 - 1) <= _TIE and z.real > _TIE):
            z = -1 / z
            a, b, c, d = -c, -d, a, b
        else:
            break
    else:
        raise ArithmeticError("fundamental domain reduction did not converge")
    return z, (a, b, c, d)


def apply_mobius(mat, z: complex) -> complex:
    a, b, c, d = mat
    return (a * z + b) / (c * z + d)


def equivalent_mod_sl2(z1: complex, z2: complex, tol: float = 1e-9) -> bool:
    """Whether z1 and z2 lie in one SL2(Z) orbit, up to boundary mirroring.

    Points within tol of the domain boundary may reduce to either side of
    the arc |z| = 1 or the strip edge; both mirrors count as equal.
    """
    w1, _ = reduce_to_fundamental_domain(z1)
    w2, _ = reduce_to_fundamental_domain(z2)
    if abs(w1 - w2) < tol:
        return True
    if abs(w1 + w2.conjugate()) < tol and abs(abs(w1) - 1) < tol:
        return True
    if abs(abs(w1.real) - 0.5) < tol and (abs(w1 + 1 - w2) < tol or abs(w1 - 1 - w2) < tol):
        return True
    return False


def fricke(z: complex, N: int) -> complex:
    """The Fricke involution w_N: z -> -1/(Nz)."""
    return -1 / (N * z)


@dataclass(frozen=True)
class LevelPoint:
    """Heegner point of level N: form (aN, B, C) in class cls, orientation beta mod 2N."""

    form: QuadForm  # unreduced: a = a1*N, b = B, c = C
    tau: complex
    cls_index: int  # class of the form in ClassGroup order
    target_index: int  # class of (a1, B, C*N), i.e. cls * [n]^{-1}
    N: int
    beta: int

    @property
    def n_tau(self) -> complex:
        return self.N * self.tau


def _coprime_leading_form(f: QuadForm, N: int) -> QuadForm:
    """An equivalent form whose leading coefficient is prime to N."""
    if math.gcd(f.a, N) == 1:
        return f
    if math.gcd(f.c, N) == 1:
        return QuadForm(f.c, -f.b, f.a)
    a, b, c = f.a, f.b, f.c
    for m in range(1, 60):
        for l in range(-60, 61):
            if math.gcd(m, l) != 1 or math.gcd(f(m, l), N) != 1:
                continue
            # complete column (m,l) to [[m,p],[l,q]] in SL2: m q - p l = 1
            g, x0, y0 = _xgcd(m, l)
            if g < 0:
                x0, y0 = -x0, -y0
            q, p = x0, -y0
            a1 = f(m, l)
            b1 = 2 * (a * m * p + c * l * q) + b * (m * q + p * l)
            c1 = a * p * p + b * p * q + c * q * q
            return QuadForm(a1, b1, c1)
    raise ArithmeticError("no representation prime to N found")


def _xgcd(a: int, b: int):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _crt(r1: int, m1: int, r2: int, m2: int) -> int:
    g, p, _q = _xgcd(m1, m2)
    if (r2 - r1) % g:
        raise ArithmeticError("no CRT solution")
    lcm = m1 // g * m2
    return (r1 + (r2 - r1) // g * p % (m2 // g) * m1) % lcm


def level_N_points(D: int, N: int, group: ClassGroup | None = None) -> list[LevelPoint]:
    """One level-N Heegner point per ideal class, orientation fixed by the
    smallest beta >= 0 with beta^2 = D mod 4N.

    The point for class A satisfies N*tau = tau of class A*[n]^{-1} mod SL2(Z),
    where [n] is the class of (N, beta, *).
    """
    if group is None:
        group = ClassGroup(D)
    fn, _fnbar, beta = split_ideal_classes(D, N)
    n_idx = group.class_of(fn)
    points = []
    for i, _f in enumerate(group.forms):
        j = group.mul(i, group.inverse(n_idx))  # class A*[n]^{-1}
        f1 = _coprime_leading_form(group.forms[j], N)
        B = _crt(f1.b % (2 * f1.a), 2 * f1.a, beta % (2 * N), 2 * N)
        C = (B * B - D) // (4 * f1.a * N)
        form = QuadForm(f1.a * N, B, C)
        tau = complex(-B, math.sqrt(-D)) / (2 * f1.a * N)
        points.append(LevelPoint(form, tau, i, j, N, beta))
    return points


def heegner_height(form: QuadForm) -> float:
    """Im tau = sqrt(|D|)/(2a); maximal exactly for the principal class."""
    return math.sqrt(-form.disc) / (2 * form.a)
