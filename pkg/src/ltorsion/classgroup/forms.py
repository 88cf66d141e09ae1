"""Binary quadratic forms a*x^2 + b*x*y + c*y^2: composition and reduction."""

from __future__ import annotations

import math
from typing import NamedTuple

from ..arith import kronecker_symbol, sqrt_mod_prime, xgcd
from ..errors import InvalidInputError


class QuadraticForm(NamedTuple):
    a: int
    b: int
    c: int

    @property
    def discriminant(self) -> int:
        return self.b * self.b - 4 * self.a * self.c

    def __str__(self):
        return f"({self.a},{self.b},{self.c})"


def principal_form(D: int) -> QuadraticForm:
    k = D % 2
    return reduce_form(QuadraticForm(1, k, (k - D) // 4), D)


def inverse(f: QuadraticForm) -> QuadraticForm:
    return QuadraticForm(f.a, -f.b, f.c)


def is_reduced_definite(f: QuadraticForm) -> bool:
    a, b, c = f
    if not (-a < b <= a <= c):
        return False
    return not (a == c and b < 0)


def reduce_definite(a: int, b: int, c: int) -> QuadraticForm:
    """Gauss reduction of a positive definite form."""
    while True:
        if not -a < b <= a:
            r = (a - b) // (2 * a)
            b, c = b + 2 * r * a, a * r * r + b * r + c
        if a > c:
            a, b, c = c, -b, a
            continue
        if a == c and b < 0:
            b = -b
        return QuadraticForm(a, b, c)


def is_reduced_indefinite(f: QuadraticForm, D: int) -> bool:
    """|sqrt(D) - 2|a|| < b < sqrt(D), decided with integers only (D not a square)."""
    a, b, _ = f
    if b <= 0 or b * b >= D:
        return False
    A = 2 * abs(a)
    if (b + A) ** 2 <= D:
        return False
    return A - b < 0 or (A - b) ** 2 < D


def _rho_b(b: int, a: int, D: int, s: int) -> int:
    A = abs(a)
    m = 2 * A
    if A * A > D:
        r = b % m
        return r - m if r > A else r
    return s - ((s - b) % m)


def rho(f: QuadraticForm, D: int, s: int | None = None) -> QuadraticForm:
    """One step of the indefinite reduction operator (a proper equivalence)."""
    if s is None:
        s = math.isqrt(D)
    _, b, c = f
    b2 = _rho_b(-b, c, D, s)
    return QuadraticForm(c, b2, (b2 * b2 - D) // (4 * c))


def reduce_indefinite(f: QuadraticForm, D: int) -> QuadraticForm:
    s = math.isqrt(D)
    for _ in range(10_000 + 4 * D.bit_length() ** 2):
        if is_reduced_indefinite(f, D):
            return f
        f = rho(f, D, s)
    raise RuntimeError(f"indefinite reduction did not terminate for {f}")


def reduce_form(f, D: int | None = None) -> QuadraticForm:
    f = QuadraticForm(*f)
    if D is None:
        D = f.discriminant
    if D < 0:
        if f.a < 0:
            raise InvalidInputError("negative definite forms are not supported")
        return reduce_definite(*f)
    return reduce_indefinite(f, D)


def compose_raw(f: QuadraticForm, g: QuadraticForm, D: int) -> QuadraticForm:
    """Dirichlet/Shanks composition, unreduced; needs f.a, g.a > 0."""
    a1, b1, _ = f
    a2, b2, c2 = g
    if a1 > a2:
        a1, b1, a2, b2, c2 = a2, b2, a1, b1, f.c
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, u, _ = xgcd(a2, a1)
        y1 = u
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, v = xgcd(s, d)
        y2 = -v
    v1 = a1 // d1
    v2 = a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return QuadraticForm(a3, b3, c3)


def compose(f, g, D: int | None = None) -> QuadraticForm:
    """Reduced representative of the Gauss composition of two forms of discriminant D."""
    f = QuadraticForm(*f)
    g = QuadraticForm(*g)
    if D is None:
        D = f.discriminant
    if f.discriminant != D or g.discriminant != D:
        raise InvalidInputError("forms must share the discriminant D")
    if D > 0:
        f = positive_lead(f, D)
        g = positive_lead(g, D)
    return reduce_form(compose_raw(f, g, D), D)


def positive_lead(f: QuadraticForm, D: int) -> QuadraticForm:
    """An equivalent indefinite form with a > 0 (reduced neighbours alternate sign)."""
    if f.a > 0:
        return f
    s = math.isqrt(D)
    f = rho(f, D, s)
    while f.a <= 0:
        f = rho(f, D, s)
    return f


def power(f: QuadraticForm, n: int, D: int) -> QuadraticForm:
    result = principal_form(D)
    base = f
    if n < 0:
        base, n = inverse(f), -n
    while n:
        if n & 1:
            result = compose(result, base, D)
        n >>= 1
        if n:
            base = compose(base, base, D)
    return result


def prime_form_or_none(D: int, p: int) -> QuadraticForm | None:
    """Reduced form representing the prime p, or None when p is inert in Q(sqrt D)."""
    if kronecker_symbol(D, p) == -1:
        return None
    if p == 2:
        r = D % 8
        if r == 1:
            b = 1
        elif r == 0:
            b = 0
        elif r == 4:
            b = 2
        else:
            return None
    else:
        b = sqrt_mod_prime(D % p, p)
        if (b - D) % 2:
            b = p - b
    c = (b * b - D) // (4 * p)
    return reduce_form(QuadraticForm(p, b, c), D)
