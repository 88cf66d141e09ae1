"""Real quadratic class groups from cycles of reduced indefinite forms.

Narrow classes are the rho-cycles; the wide group is the quotient by the class
of the form (-1, b, (D - b^2)/4), which is principal exactly when the
fundamental unit has norm -1.
"""

from __future__ import annotations

import math
from functools import lru_cache

import numpy as np

from ..arith import divisors, is_fundamental_discriminant
from ..errors import InvalidInputError
from .forms import (
    QuadraticForm,
    compose,
    is_reduced_indefinite,
    principal_form,
    reduce_indefinite,
    rho,
)
from .structure import ClassGroup, abelian_structure

_SPF_LIMIT = 1 << 18


@lru_cache(maxsize=1)
def _spf() -> np.ndarray:
    spf = np.zeros(_SPF_LIMIT + 1, dtype=np.int64)
    for p in range(2, _SPF_LIMIT + 1):
        if spf[p] == 0:
            spf[p :: p][spf[p :: p] == 0] = p
    return spf


def _divisors(n: int) -> list[int]:
    if n > _SPF_LIMIT:
        return divisors(n)
    spf = _spf()
    divs = [1]
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return divs


def _check_positive_fundamental(D: int) -> None:
    if D <= 0 or not is_fundamental_discriminant(D):
        raise InvalidInputError(f"{D} is not a positive fundamental discriminant")


def reduced_indefinite_forms(D: int) -> list[QuadraticForm]:
    """All reduced forms (both signs of a) of discriminant D, sorted."""
    _check_positive_fundamental(D)
    s = math.isqrt(D)
    out = []
    for b in range(2 - D % 2, s + 1, 2):
        n = (D - b * b) // 4
        for A in _divisors(n):
            f = QuadraticForm(A, b, -(n // A))
            if is_reduced_indefinite(f, D):
                out.append(f)
                out.append(QuadraticForm(-A, b, n // A))
    out.sort()
    return out


class NarrowGroup:
    """Narrow class group of a real quadratic field, elements are cycle indices."""

    def __init__(self, D: int):
        _check_positive_fundamental(D)
        self.D = D
        s = math.isqrt(D)
        forms = reduced_indefinite_forms(D)
        self.cycle_of: dict[QuadraticForm, int] = {}
        self.cycles: list[list[QuadraticForm]] = []
        for f in forms:
            if f in self.cycle_of:
                continue
            cid = len(self.cycles)
            cyc = []
            g = f
            while g not in self.cycle_of:
                self.cycle_of[g] = cid
                cyc.append(g)
                g = rho(g, D, s)
            if g != f:
                raise ArithmeticError(f"rho is not a permutation on reduced forms of {D}")
            self.cycles.append(cyc)
        self.reps = [min(g for g in cyc if g.a > 0) for cyc in self.cycles]
        self.identity = self.class_of(principal_form(D))
        self._table: dict[tuple[int, int], int] = {}

    @property
    def order(self) -> int:
        return len(self.cycles)

    def class_of(self, f) -> int:
        f = reduce_indefinite(QuadraticForm(*f), self.D)
        return self.cycle_of[f]

    def mul(self, i: int, j: int) -> int:
        key = (i, j) if i <= j else (j, i)
        out = self._table.get(key)
        if out is None:
            out = self.class_of(compose(self.reps[i], self.reps[j], self.D))
            self._table[key] = out
        return out

    def negative_one_class(self) -> int:
        b = self.D % 2
        return self.class_of(QuadraticForm(-1, b, (self.D - b * b) // 4))

    def structure(self) -> ClassGroup:
        h = self.order
        divs, sylow = abelian_structure(h, lambda: range(h), self.mul, self.identity)
        return ClassGroup(self.D, h, divs, "narrow", sylow)

    def wide_structure(self) -> ClassGroup:
        j = self.negative_one_class()
        if j == self.identity:
            g = self.structure()
            return ClassGroup(self.D, g.h, g.divisors, "wide", g.sylow)

        def key(x):
            return min(x, self.mul(x, j))

        elems = sorted({key(x) for x in range(self.order)})
        h = len(elems)
        divs, sylow = abelian_structure(
            h, lambda: iter(elems), lambda x, y: key(self.mul(x, y)), key(self.identity)
        )
        return ClassGroup(self.D, h, divs, "wide", sylow)


def narrow_class_number(D: int) -> int:
    return NarrowGroup(D).order


def class_group_real(D: int, kind: str = "narrow") -> ClassGroup:
    G = NarrowGroup(D)
    if kind == "narrow":
        return G.structure()
    if kind == "wide":
        return G.wide_structure()
    raise InvalidInputError(f"kind must be wide or narrow, not {kind!r}")


def continued_fraction_period(m: int) -> int:
    """Length of the period of the continued fraction of sqrt(m), m not a square."""
    a0 = math.isqrt(m)
    if a0 * a0 == m:
        raise InvalidInputError(f"{m} is a perfect square")
    P, Q, a = 0, 1, a0
    length = 0
    while True:
        P = a * Q - P
        Q = (m - P * P) // Q
        a = (a0 + P) // Q
        length += 1
        if a == 2 * a0:
            return length


def fundamental_unit_norm(D: int) -> int:
    """Norm (+1 or -1) of the fundamental unit of Q(sqrt D)."""
    _check_positive_fundamental(D)
    m = D if D % 4 == 1 else D // 4
    return -1 if continued_fraction_period(m) % 2 else 1
