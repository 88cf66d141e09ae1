"""Imaginary quadratic class groups from reduced positive definite forms."""

from __future__ import annotations

import math
from typing import Iterator

import numpy as np

from ..arith import fundamental_mask, is_fundamental_discriminant, primes_up_to
from ..errors import InvalidInputError
from .forms import QuadraticForm, compose, prime_form_or_none, principal_form
from .structure import ClassGroup, abelian_structure


def _check_negative_fundamental(D: int) -> None:
    if D >= 0 or not is_fundamental_discriminant(D):
        raise InvalidInputError(f"{D} is not a negative fundamental discriminant")


def reduced_forms(D: int) -> set[QuadraticForm]:
    """The reduced forms of discriminant D, one per class."""
    _check_negative_fundamental(D)
    N = -D
    out = set()
    for a in range(1, math.isqrt(N // 3) + 1):
        for b in range(-a + 1, a + 1):
            num = b * b + N
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            out.add(QuadraticForm(a, b, c))
    return out


def imaginary_class_numbers(X: int) -> np.ndarray:
    """h[n] = number of reduced forms of discriminant -n, for 0 <= n <= X.

    Equals the class number whenever -n is fundamental (every form is then primitive).
    """
    counts = np.zeros(X + 1, dtype=np.int64)
    for a in range(1, math.isqrt(X // 3) + 1):
        four_a = 4 * a
        for b in range(-a + 1, a + 1):
            cmin = a + 1 if b < 0 else a
            cmax = (X + b * b) // four_a
            if cmax < cmin:
                continue
            idx = four_a * np.arange(cmin, cmax + 1, dtype=np.int64) - b * b
            counts[idx] += 1
    return counts


def class_number_imaginary(D: int) -> int:
    return len(reduced_forms(D))


def _prime_forms(D: int) -> Iterator[QuadraticForm]:
    # every class holds a reduced form whose a <= sqrt(|D|/3), so these primes generate
    bound = math.isqrt(-D // 3) + 1
    for p in primes_up_to(max(bound, 2)):
        f = prime_form_or_none(D, p)
        if f is not None:
            yield f


def class_group_imaginary(D: int, h: int | None = None) -> ClassGroup:
    _check_negative_fundamental(D)
    if h is None:
        h = class_number_imaginary(D)
    one = principal_form(D)
    divisors, sylow = abelian_structure(
        h, lambda: _prime_forms(D), lambda f, g: compose(f, g, D), one
    )
    return ClassGroup(D, h, divisors, "wide", sylow)


def negative_fundamentals(X: int) -> list[int]:
    mask = fundamental_mask(X, -1)
    return [-int(n) for n in np.flatnonzero(mask)]


__all__ = [
    "reduced_forms",
    "imaginary_class_numbers",
    "class_number_imaginary",
    "class_group_imaginary",
    "negative_fundamentals",
]
