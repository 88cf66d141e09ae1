"""Exact integer arithmetic: primality, factorization, multiplicative functions,
Kronecker symbols and fundamental discriminants.

Everything here works on Python ints, so there is no overflow to worry about.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import InvalidInputError

# Deterministic for n < 3.3e24, which covers all 64-bit inputs.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)
_SMALL_PRIMES_LIMIT = 1000
_TRIAL_LIMIT = 10**6


@dataclass(frozen=True)
class Factorization:
    n: int
    factors: tuple[tuple[int, int], ...]

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    @property
    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]

    def value(self) -> int:
        out = 1
        for p, e in self.factors:
            out *= p**e
        return out

    def as_dict(self) -> dict[int, int]:
        return dict(self.factors)


@lru_cache(maxsize=None)
def primes_up_to(limit: int) -> tuple[int, ...]:
    """All primes <= limit, by a numpy sieve."""
    if limit < 2:
        return ()
    sieve = np.ones(limit + 1, dtype=bool)
    sieve[:2] = False
    for i in range(2, math.isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = False
    return tuple(int(p) for p in np.flatnonzero(sieve))


_SMALL_PRIMES = primes_up_to(_SMALL_PRIMES_LIMIT)
_SMALL_PRIME_SET = frozenset(_SMALL_PRIMES)


def is_prime(n: int) -> bool:
    """Miller-Rabin with a base set that is deterministic far beyond 2**64."""
    if n < 2:
        return False
    if n <= _SMALL_PRIMES_LIMIT:
        return n in _SMALL_PRIME_SET
    for p in _SMALL_PRIMES[:25]:
        if n % p == 0:
            return False
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _brent(n: int) -> int:
    """Return a nontrivial factor of the odd composite n (Pollard rho, Brent's cycle)."""
    for c in range(1, 200):
        y, r, q, g = 2, 1, 1, 1
        m = 128
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


def _split(n: int, out: dict[int, int]) -> None:
    if n == 1:
        return
    if is_prime(n):
        out[n] = out.get(n, 0) + 1
        return
    r = math.isqrt(n)
    if r * r == n:
        _split(r, out)
        _split(r, out)
        return
    d = _brent(n)
    _split(d, out)
    _split(n // d, out)


def factor(n: int) -> Factorization:
    """Prime factorization of a positive integer."""
    if not isinstance(n, (int, np.integer)) or n <= 0:
        raise InvalidInputError(f"factor expects a positive integer, got {n!r}")
    n = int(n)
    m = n
    found: dict[int, int] = {}
    for p in _SMALL_PRIMES:
        if p * p > m:
            break
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            found[p] = e
    if m > 1 and m.bit_length() > 64:
        # big inputs: push trial division further before rho
        p = _SMALL_PRIMES_LIMIT + 1
        while p <= _TRIAL_LIMIT and p * p <= m:
            if m % p == 0:
                e = 0
                while m % p == 0:
                    m //= p
                    e += 1
                found[p] = e
            p += 2
    if m > 1:
        _split(m, found)
    return Factorization(n, tuple(sorted(found.items())))


def omega(n: int) -> int:
    return len(factor(n))


def divisor_count(n: int) -> int:
    out = 1
    for _, e in factor(n):
        out *= e + 1
    return out


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factor(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def squarefree_kernel(a: int) -> int:
    """Product of the distinct primes dividing a (the radical)."""
    out = 1
    for p, _ in factor(a):
        out *= p
    return out


def is_squarefree(n: int) -> bool:
    return all(e == 1 for _, e in factor(abs(n)))


def sixth_power_free_part(n: int) -> tuple[int, int]:
    """Write n = a * d**6 with d maximal; returns (a, d) with sign(a) == sign(n)."""
    if n == 0:
        raise InvalidInputError("sixth_power_free_part(0) is undefined")
    a, d = (1 if n > 0 else -1), 1
    for p, e in factor(abs(n)):
        d *= p ** (e // 6)
        a *= p ** (e % 6)
    return a, d


def valuation(n: int, p: int) -> int:
    """p-adic valuation; v(0) is reported as a large sentinel."""
    if n == 0:
        return 10**9
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def kronecker_symbol(D: int, n: int) -> int:
    """Kronecker symbol (D | n) for n >= 1."""
    if n <= 0:
        raise InvalidInputError("kronecker_symbol needs n >= 1")
    result = 1
    # factor out powers of two: (D|2) depends on D mod 8
    while n % 2 == 0:
        n //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    # now Jacobi symbol (D | n) with n odd
    a = D % n
    while a:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                result = -result
        a, n = n, a
        if a % 4 == 3 and n % 4 == 3:
            result = -result
        a %= n
    return result if n == 1 else 0


def is_fundamental_discriminant(D: int) -> bool:
    if D in (0, 1):
        return False
    r = D % 4
    if r == 1:
        return is_squarefree(D)
    if r == 0:
        m = D // 4
        return m % 4 in (2, 3) and is_squarefree(m)
    return False


def _squarefree_mask(hi: int) -> np.ndarray:
    mask = np.ones(hi + 1, dtype=bool)
    mask[0] = False
    for p in primes_up_to(math.isqrt(hi)):
        mask[p * p :: p * p] = False
    return mask


@lru_cache(maxsize=8)
def fundamental_mask(hi: int, sign: int) -> np.ndarray:
    """Boolean array m with m[n] true iff sign*n is a fundamental discriminant (n <= hi)."""
    sq = _squarefree_mask(hi)
    n = np.arange(hi + 1)
    out = np.zeros(hi + 1, dtype=bool)
    res = (sign * n) % 4
    out |= (res == 1) & sq
    quarter = np.zeros(hi + 1, dtype=bool)
    q = n[0::4] // 4
    qres = (sign * q) % 4
    quarter[0::4] = ((qres == 2) | (qres == 3)) & sq[q]
    out |= quarter
    out[:2] = False
    out.setflags(write=False)
    return out


def _sign_value(sign) -> int:
    if sign in (-1, "negative", "imaginary", "-"):
        return -1
    if sign in (1, "positive", "real", "+"):
        return 1
    raise InvalidInputError(f"unknown sign {sign!r}")


def fundamental_discriminants(lo: int, hi: int, sign) -> Iterator[int]:
    """Fundamental discriminants D of the given sign with lo <= |D| <= hi, by increasing |D|."""
    s = _sign_value(sign)
    if lo <= 0 or hi < lo:
        if lo <= 0:
            raise InvalidInputError("need 0 < lo <= hi")
        return iter(())
    mask = fundamental_mask(hi, s)
    return (s * int(n) for n in np.flatnonzero(mask[lo:]) + lo)


def sqrt_mod_prime(a: int, p: int) -> int:
    """A square root of a modulo the prime p (Tonelli-Shanks)."""
    a %= p
    if p == 2 or a == 0:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        raise InvalidInputError(f"{a} is not a square modulo {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c, t, r = i, b * b % p, t * b * b % p, r * b % p
    return r


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, x, y) with a*x + b*y = g = gcd(a, b) >= 0."""
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0
