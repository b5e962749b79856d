"""Class groups of imaginary quadratic fields via binary quadratic forms.

A form (a,b,c) with b^2-4ac = D < 0 fundamental represents the ideal class
of a*Z + ((-b+sqrt(D))/2)*Z.  Composition multiplies ideals in the maximal
order Z[omega], omega = (D+sqrt(D))/2, and takes the primitive part of the
Hermite normal form, so it is exact integer arithmetic throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import product as iter_product

import numpy as np

from cgmoments import _core

is_fundamental = _core.is_fundamental
reduced_form_tuples = _core.reduced_forms


def kronecker_chi(D: int, n: int) -> int:
    """The quadratic character chi_D(n) attached to Q(sqrt(D))."""
    return _core.kronecker(D, n)


@dataclass(frozen=True)
class Discriminant:
    """A fundamental discriminant D < 0 with its unit weight."""

    D: int

    def __post_init__(self):
        if not is_fundamental(self.D):
            raise ValueError(f"{self.D} is not a fundamental discriminant < 0")

    @property
    def w(self) -> int:
        # half the number of units: 3 for D=-3, 2 for D=-4, else 1
        if self.D == -3:
            return 3
        if self.D == -4:
            return 2
        return 1

    @property
    def sqrt_abs(self) -> float:
        return math.sqrt(-self.D)

    def chi(self, n: int) -> int:
        return _core.kronecker(self.D, n)


@dataclass(frozen=True)
class QuadForm:
    """Reduced positive definite binary quadratic form a x^2 + b xy + c y^2."""

    a: int
    b: int
    c: int

    @property
    def disc(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __call__(self, m: int, n: int) -> int:
        return self.a * m * m + self.b * m * n + self.c * n * n

    @staticmethod
    def reduced(a: int, b: int, c: int) -> "QuadForm":
        return QuadForm(*_core.reduce_form(a, b, c))

    @staticmethod
    def principal(D: int) -> "QuadForm":
        if D % 4 == 0:
            return QuadForm(1, 0, -D // 4)
        return QuadForm(1, 1, (1 - D) // 4)

    def is_principal(self) -> bool:
        return self == QuadForm.principal(self.disc)

    def inverse(self) -> "QuadForm":
        return QuadForm.reduced(self.a, -self.b, self.c)

    def __mul__(self, other: "QuadForm") -> "QuadForm":
        return compose(self, other)

    def __pow__(self, k: int) -> "QuadForm":
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadForm.principal(self.disc)
        base = self
        while k:
            if k & 1:
                out = compose(out, base)
            base = compose(base, base)
            k >>= 1
        return out

    def root(self) -> complex:
        """The root tau = (-b + i sqrt(|D|)) / (2a) in the upper half plane."""
        return complex(-self.b, math.sqrt(-self.disc)) / (2 * self.a)


def reduce_form(form) -> QuadForm:
    a, b, c = (form.a, form.b, form.c) if isinstance(form, QuadForm) else form
    return QuadForm.reduced(a, b, c)


def reduced_forms(D: int) -> list[QuadForm]:
    """All reduced forms of discriminant D, principal class first."""
    return [QuadForm(a, b, c) for a, b, c in _core.reduced_forms(D)]


def class_number(D: int) -> int:
    return len(_core.reduced_forms(D))


def _ideal_basis(form: QuadForm) -> tuple[int, int]:
    # a*Z + (bt + omega)*Z with bt = (-b - D)/2, writing sqrt(D) = 2*omega - D
    return form.a, (-form.b - form.disc) // 2


def _hnf_product(a1: int, t1: int, a2: int, t2: int, D: int) -> tuple[int, int, int]:
    """HNF basis (n, x + g*omega) of the product of [a1, t1+omega], [a2, t2+omega]."""
    dd = D * (D - 1) // 4  # omega^2 = D*omega - dd
    rows = [
        (a1 * a2, 0),
        (a1 * t2, a1),
        (a2 * t1, a2),
        (t1 * t2 - dd, t1 + t2 + D),
    ]
    # combine rows to gcd out the omega column
    gu, gv = rows[0]
    for u, v in rows[1:]:
        if gv == 0:
            ng, s, t = v, 0, 1
        else:
            ng, s, t = _xgcd(gv, v)
        gu, gv = s * gu + t * u, ng
        if gv < 0:
            gu, gv = -gu, -gv
    n = 0
    for u, v in rows:
        if gv:
            u -= (v // gv) * gu
        n = math.gcd(n, u)
    x = gu % n if n else gu
    return n, x, gv


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f1: QuadForm, f2: QuadForm) -> QuadForm:
    """Gaussian composition of form classes, reduced representative."""
    D = f1.disc
    if f2.disc != D:
        raise ValueError("forms must share a discriminant")
    a1, t1 = _ideal_basis(f1)
    a2, t2 = _ideal_basis(f2)
    n, x, g = _hnf_product(a1, t1, a2, t2, D)
    if n % g or x % g:
        raise ArithmeticError("non-invertible ideal product")
    a3, t3 = n // g, x // g
    b3 = -(2 * t3 + D)
    if (b3 * b3 - D) % (4 * a3):
        raise ArithmeticError("product basis is not an ideal")
    c3 = (b3 * b3 - D) // (4 * a3)
    return QuadForm.reduced(a3, b3, c3)


@dataclass(frozen=True)
class ClassCharacter:
    """Character of the class group, given by exponents k_i on the cyclic factors."""

    k: tuple[int, ...]
    orders: tuple[int, ...]
    values: np.ndarray  # indexed like ClassGroup.forms

    def __call__(self, cls_index: int) -> complex:
        return complex(self.values[cls_index])

    @property
    def is_trivial(self) -> bool:
        return all(v == 0 for v in self.k)

    @property
    def is_real(self) -> bool:
        return all((2 * v) % n == 0 for v, n in zip(self.k, self.orders))

    def conjugate_index(self) -> tuple[int, ...]:
        return tuple((-v) % n for v, n in zip(self.k, self.orders))


class ClassGroup:
    """Class group of a fundamental discriminant, with structure and characters.

    Structure comes from successive quotienting: take a class of maximal
    order as first generator, quotient by it, recurse, then lift the
    quotient generators back.  Orders n_1 >= n_2 >= ... with n_{i+1} | n_i.
    """

    def __init__(self, D: int):
        self.disc = Discriminant(D)
        self.D = D
        self.forms = reduced_forms(D)
        self.h = len(self.forms)
        self.index = {f: i for i, f in enumerate(self.forms)}
        self._table: dict[tuple[int, int], int] = {}
        self.generators: list[QuadForm] = []
        self.orders: list[int] = []
        self._exponents: dict[QuadForm, tuple[int, ...]] = {}
        self._build_structure()

    # -- composition on indices, memoized ------------------------------------
    def mul(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        k = self._table.get((i, j))
        if k is None:
            k = self.index[compose(self.forms[i], self.forms[j])]
            self._table[(i, j)] = k
        return k

    def pow(self, i: int, e: int) -> int:
        e %= self.order_of(i)
        out = 0
        base = i
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def inverse(self, i: int) -> int:
        return self.index[self.forms[i].inverse()]

    def order_of(self, i: int) -> int:
        n, j = 1, i
        while j != 0:
            j = self.mul(j, i)
            n += 1
        return n

    def class_of(self, form) -> int:
        return self.index[reduce_form(form)]

    # -- structure -----------------------------------------------------------
    def _build_structure(self):
        cosets = {i: (i,) for i in range(self.h)}  # element -> coset key under <gens so far>

        def quotient_gens(elems: list[int], mul, identity):
            # elems: coset representatives forming a group under mul
            if len(elems) == 1:
                return []
            orders = {e: _elem_order(e, mul, identity) for e in elems}
            g = max(elems, key=lambda e: orders[e])
            n = orders[g]
            sub = _cyclic(g, mul, identity)
            rep = {}
            for e in elems:
                key = frozenset(mul(e, s) for s in sub)
                rep.setdefault(key, e)
            qelems = list(rep.values())
            qmap = {}
            for e in elems:
                key = frozenset(mul(e, s) for s in sub)
                qmap[e] = rep[key]

            def qmul(x, y):
                return qmap[mul(x, y)]

            tail = quotient_gens(qelems, qmul, qmap[identity])
            return [(g, n, sub, qmap)] + tail

        layers = quotient_gens(list(range(self.h)), self.mul, 0)
        # lift each layer's generator so its order in G equals its quotient order
        gens: list[int] = []
        orders: list[int] = []
        for depth, (g, n, _sub, _qmap) in enumerate(layers):
            x = g
            if depth > 0:
                x = self._lift(x, n, gens, orders, depth)
            gens.append(x)
            orders.append(n)
        self.generators = [self.forms[g] for g in gens]
        self.orders = orders
        # exponent vectors by direct-product enumeration
        for vec in iter_product(*(range(n) for n in orders)) if orders else [()]:
            e = 0
            for g, a in zip(gens, vec):
                e = self.mul(e, self.pow(g, a))
            self._exponents.setdefault(self.forms[e], vec)
        if len(self._exponents) != self.h:
            raise ArithmeticError("generator lift failed to span the group")

    def _lift(self, x: int, m: int, gens: list[int], orders: list[int], depth: int) -> int:
        # x^m lies in <gens so far>; divide it out so the lift has exact order m
        target = self.pow(x, m)
        for vec in iter_product(*(range(n) for n in orders[:depth])):
            e = 0
            for g, a in zip(gens[:depth], vec):
                e = self.mul(e, self.pow(g, a))
            if e == target:
                y = x
                for g, a, n in zip(gens[:depth], vec, orders[:depth]):
                    if a % m:
                        raise ArithmeticError("order obstruction in lift")
                    y = self.mul(y, self.pow(g, (n - a // m) % n))
                return y
        raise ArithmeticError("power not found in subgroup")

    def exponents(self, form) -> tuple[int, ...]:
        return self._exponents[reduce_form(form)]

    # -- characters ----------------------------------------------------------
    def characters(self) -> list[ClassCharacter]:
        """All h characters; trivial character first, values aligned with forms."""
        orders = tuple(self.orders)
        expo = np.array([self._exponents[f] for f in self.forms], dtype=np.int64)
        if not orders:
            expo = expo.reshape(self.h, 0)
        chars = []
        for k in iter_product(*(range(n) for n in orders)) if orders else [()]:
            if orders:
                phase = (expo * np.array(k)) / np.array(orders)
                vals = np.exp(2j * np.pi * phase.sum(axis=1))
            else:
                vals = np.ones(self.h, dtype=complex)
            chars.append(ClassCharacter(tuple(k), orders, vals))
        chars.sort(key=lambda ch: ch.k != tuple(0 for _ in orders))
        return chars


def _elem_order(e, mul, identity):
    n, x = 1, e
    while x != identity:
        x = mul(x, e)
        n += 1
    return n


def _cyclic(g, mul, identity):
    out = [identity]
    x = g
    while x != identity:
        out.append(x)
        x = mul(x, g)
    return out


def group_structure(D: int) -> ClassGroup:
    return ClassGroup(D)


def split_ideal_classes(D: int, N: int) -> tuple[QuadForm, QuadForm, int]:
    """The two conjugate classes of prime norm N, as (form, conjugate form, beta).

    beta is the smallest nonnegative solution of beta^2 = D mod 4N; the forms
    are the reductions of (N, beta, (beta^2-D)/(4N)) and its inverse.
    """
    if _core.kronecker(D, N) != 1:
        raise ValueError(f"{N} does not split in discriminant {D}")
    beta = None
    for t in range(2 * N):
        if (t * t - D) % (4 * N) == 0:
            beta = t
            break
    if beta is None:
        raise ValueError(f"no square root of {D} mod {4 * N}")
    c = (beta * beta - D) // (4 * N)
    f = QuadForm.reduced(N, beta, c)
    fbar = QuadForm.reduced(N, -beta, c)
    return f, fbar, beta
