"""Unconditional ell-torsion bounds for imaginary quadratic fields from small split primes.

Fields are Q(sqrt(-D)) with -D a fundamental discriminant and D > 0 throughout.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

from .arith import is_fundamental_discriminant, is_prime, kronecker_symbol, primes_up_to
from .classgroup.forms import QuadraticForm, compose, inverse, power, prime_form_or_none, principal_form
from .classgroup.imaginary import class_group_imaginary
from .classgroup.structure import ClassGroup, torsion_size
from .errors import InvalidInputError


def _check(D: int, ell: int) -> None:
    if D <= 0 or not is_fundamental_discriminant(-D):
        raise InvalidInputError(f"-{D} is not a negative fundamental discriminant")
    if ell == 2 or not is_prime(ell):
        raise InvalidInputError("ell must be an odd prime")


def below_threshold(p: int, D: int, ell: int) -> bool:
    """p < D^(1/(2 ell)) / 4, decided as (4p)^(2 ell) < D."""
    return (4 * p) ** (2 * ell) < D


@dataclass(frozen=True)
class SplitPrimeCertificate:
    D: int
    ell: int
    primes: tuple[int, ...]

    @property
    def M(self) -> int:
        return len(self.primes)

    def as_row(self) -> dict:
        return {"D": self.D, "ell": self.ell, "M": self.M, "primes": " ".join(map(str, self.primes))}


def small_split_primes(D: int, ell: int) -> SplitPrimeCertificate:
    """Every prime splitting in Q(sqrt(-D)) and lying below the exact threshold."""
    _check(D, ell)
    limit = 1
    while below_threshold(limit + 1, D, ell):
        limit += 1
    out = []
    for p in primes_up_to(limit):
        # a split 2 (-D = 1 mod 8) satisfies the same norm argument as odd primes
        if D % p and kronecker_symbol(-D, p) == 1:
            out.append(p)
    return SplitPrimeCertificate(D, ell, tuple(out))


def prime_form(D: int, p: int) -> QuadraticForm:
    """Reduced form of discriminant -D whose class contains a prime ideal above p."""
    if D <= 0 or not is_fundamental_discriminant(-D):
        raise InvalidInputError(f"-{D} is not a negative fundamental discriminant")
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    if D % p == 0 or kronecker_symbol(-D, p) != 1:
        raise InvalidInputError(f"{p} does not split in Q(sqrt(-{D}))")
    f = prime_form_or_none(-D, p)
    assert f is not None
    return f


@dataclass(frozen=True)
class CosetVerdict:
    D: int
    ell: int
    primes: tuple[int, ...]
    collisions: tuple[tuple[int, int], ...]

    @property
    def distinct(self) -> bool:
        return not self.collisions


def same_coset(D: int, ell: int, p1: int, p2: int) -> bool:
    """Whether the classes above p1 and p2 agree modulo Cl[ell]."""
    f1 = prime_form(D, p1)
    f2 = prime_form(D, p2)
    q = compose(f1, inverse(f2), -D)
    return power(q, ell, -D) == principal_form(-D)


def coset_distinctness_check(D: int, ell: int, primes=None) -> CosetVerdict:
    """Pairwise test that the given (default: certificate) primes lie in distinct cosets of Cl[ell]."""
    _check(D, ell)
    if primes is None:
        primes = small_split_primes(D, ell).primes
    primes = tuple(primes)
    bad = tuple((p1, p2) for p1, p2 in combinations(primes, 2) if same_coset(D, ell, p1, p2))
    return CosetVerdict(D, ell, primes, bad)


def norm_equation_search(D: int, ell: int, p1: int, p2: int) -> list[tuple[int, int]]:
    """All integer (u, v) with u^2 + D v^2 = 4 (p1 p2)^ell."""
    N = 4 * (p1 * p2) ** ell
    out = set()
    for v in range(math.isqrt(N // D) + 1):
        rem = N - D * v * v
        u = math.isqrt(rem)
        if u * u == rem:
            for su in {u, -u}:
                for sv in {v, -v}:
                    out.add((su, sv))
    return sorted(out)


def torsion_upper_bound(D: int, ell: int, group: ClassGroup | None = None) -> int:
    """ceil(h / max(M, 1)), an upper bound for |Cl[ell]|."""
    _check(D, ell)
    if group is None:
        group = class_group_imaginary(-D)
    M = small_split_primes(D, ell).M
    return -(-group.h // max(M, 1))


@dataclass(frozen=True)
class BoundRow:
    D: int
    ell: int
    h: int
    M: int
    bound: int
    torsion: int
    norm_solutions: int

    @property
    def holds(self) -> bool:
        return self.bound >= self.torsion and self.norm_solutions == 0


def bound_report(D: int, ell: int) -> BoundRow:
    """Bound, true torsion, and the norm-equation count over all certificate prime pairs."""
    g = class_group_imaginary(-D)
    cert = small_split_primes(D, ell)
    sols = sum(len(norm_equation_search(D, ell, p1, p2)) for p1, p2 in combinations(cert.primes, 2))
    return BoundRow(D, ell, g.h, cert.M, torsion_upper_bound(D, ell, g), torsion_size(g, ell), sols)
