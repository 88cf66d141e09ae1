"""Field-counting correspondences for quadratic fields.

Includes the unramified-extension count N(ell, r), the Hasse count of cubic
fields of a given discriminant, an independent brute-force cubic field oracle,
and an explicit evaluator for a D4 quartic-field bound.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations

import mpmath
import numpy as np

from .arith import divisors, factor, is_fundamental_discriminant, is_prime, omega, primes_up_to
from .classgroup import class_group
from .classgroup.structure import torsion_size
from .errors import InvalidInputError, ResourceLimitError

ORACLE_CAP = 10**4


def unramified_count(ell: int, r: int) -> int:
    if not is_prime(ell):
        raise InvalidInputError("ell must be prime")
    if r < 0:
        raise InvalidInputError("r must be >= 0")
    return (ell**r - 1) // (ell - 1)


def torsion_multiplicity_identity(ell: int, r: int) -> int:
    out = (ell - 1) * unramified_count(ell, r) + 1
    if out != ell**r:
        raise ArithmeticError(f"(ell-1)N(ell,r)+1 != ell^r for ell={ell}, r={r}")
    return out


def cubic_count_via_hasse(D: int) -> int:
    """Number of cubic fields of discriminant D predicted by 3-torsion of Q(sqrt D)."""
    if not is_fundamental_discriminant(D):
        raise InvalidInputError(f"{D} is not a fundamental discriminant")
    return (torsion_size(class_group(D), 3) - 1) // 2


def disc_tower_prediction(D_K: int, ell: int) -> int:
    if D_K < 1:
        raise InvalidInputError("D_K must be >= 1")
    return D_K**ell


# ---- D4 bound -----------------------------------------------------------


def _fundamental_square_divisors(D: int) -> list[int]:
    """Fundamental discriminants d (either sign) with d^2 | D."""
    out = []
    for m in divisors(D):
        if m * m > D:
            break
        if D % (m * m) == 0:
            for d in (-m, m):
                if is_fundamental_discriminant(d):
                    out.append(d)
    return sorted(out, key=lambda d: (abs(d), d))


def d4_terms(D: int, exact_class_number: bool = False) -> dict[int, int]:
    """Per-d contributions to the D4 bound; keys are the fundamental d with d^2 | D."""
    if D < 1:
        raise InvalidInputError("D must be >= 1")
    terms = {}
    for d in _fundamental_square_divisors(D):
        if exact_class_number:
            h2 = class_group(d, "wide").h
        else:
            h2 = 2 ** (omega(abs(d)) - 1)
        terms[d] = 4 * h2 * 2 ** omega(D // (d * d))
    return terms


def d4_bound(D: int, exact_class_number: bool = False) -> int:
    """Upper bound for the number of D4 quartic fields of discriminant D."""
    return sum(d4_terms(D, exact_class_number).values())


# ---- cubic field oracle -------------------------------------------------


@dataclass(frozen=True)
class CubicField:
    a: int
    b: int
    disc: int

    @property
    def poly_disc(self) -> int:
        return -4 * self.a**3 - 27 * self.b**2

    @property
    def index(self) -> int:
        return math.isqrt(self.poly_disc // self.disc)


def _form_eval(F, x, y):
    a, b, c, d = F
    return a * x**3 + b * x * x * y + c * x * y * y + d * y**3


def _form_disc(F) -> int:
    a, b, c, d = F
    return b * b * c * c - 4 * a * c**3 - 4 * b**3 * d - 27 * a * a * d * d + 18 * a * b * c * d


def _transform(F, M):
    """F(m11 X + m12 Y, m21 X + m22 Y) as coefficients of X^3, X^2Y, XY^2, Y^3."""
    (p, q), (r, s) = M
    a, b, c, d = F
    # expand each monomial; exact integer polynomial algebra on the 4 coefficients
    lin1 = (p, q)
    lin2 = (r, s)

    def mul(u, v):
        out = [0] * (len(u) + len(v) - 1)
        for i, x in enumerate(u):
            for j, y in enumerate(v):
                out[i + j] += x * y
        return out

    def power(u, n):
        out = [1]
        for _ in range(n):
            out = mul(out, u)
        return out

    res = [0, 0, 0, 0]
    for coef, i in ((a, 3), (b, 2), (c, 1), (d, 0)):
        term = mul(power(lin1, i), power(lin2, 3 - i))
        for k, t in enumerate(term):
            res[k] += coef * t
    return tuple(res)


def _enlarge_at(F, p):
    """An overring form at p, or None when F is p-maximal."""
    if all(x % p == 0 for x in F):
        return tuple(x // p for x in F)
    a, b, c, d = F
    pts = [(1, 0)] + [(x, 1) for x in range(p)]
    for x0, y0 in pts:
        if _form_eval(F, x0, y0) % p:
            continue
        fx = 3 * a * x0 * x0 + 2 * b * x0 * y0 + c * y0 * y0
        fy = b * x0 * x0 + 2 * c * x0 * y0 + 3 * d * y0 * y0
        if fx % p or fy % p:
            continue
        # multiple root mod p; F(x0,y0) mod p^2 does not depend on the lift
        if _form_eval(F, x0, y0) % (p * p):
            continue
        g, u, v = _ext(x0, y0)
        M = ((x0, -v), (y0, u))
        G = _transform(F, M)
        return (G[0] // (p * p), G[1] // p, G[2], G[3] * p)
    return None


def _ext(x, y):
    """(g, u, v) with u*x + v*y = g = 1 for coprime x, y."""
    old_r, r = x, y
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def field_discriminant(a: int, b: int) -> int:
    """Discriminant of the maximal order of Q[x]/(x^3 + a x + b), assumed irreducible."""
    F = (1, 0, a, b)
    disc = _form_disc(F)
    for p, e in factor(abs(disc)):
        if e < 2:
            continue
        while True:
            G = _enlarge_at(F, p)
            if G is None:
                break
            F = G
            if _form_disc(F) % (p * p):
                break
    return _form_disc(F)


def _has_integer_root(a: int, b: int) -> bool:
    for r in divisors(abs(b)):
        for s in (r, -r):
            if s**3 + a * s + b == 0:
                return True
    return False


def _squarefree_core(n: int) -> int:
    out = 1
    for p, e in factor(abs(n)):
        if e % 2:
            out *= p
    return out


def _split_pattern(a: int, b: int, p: int) -> int:
    """Number of roots of x^3 + a x + b modulo p."""
    return sum(1 for x in range(p) if (x * x * x + a * x + b) % p == 0)


def _signature(fld: CubicField, primes) -> dict[int, int]:
    """Root counts mod p at primes where the polynomial reflects the splitting."""
    return {p: _split_pattern(fld.a, fld.b, p) for p in primes if fld.poly_disc % p}


def _compatible(s1: dict[int, int], s2: dict[int, int]) -> bool:
    return all(s2[p] == v for p, v in s1.items() if p in s2)


def _poly_mod(num: list[Fraction], a: int, b: int) -> list[Fraction]:
    """Reduce a polynomial (low degree first) modulo x^3 + a x + b."""
    num = list(num)
    while len(num) > 3:
        top = num.pop()
        k = len(num) - 3
        # x^(k+3) = x^k * (-a x - b)
        num[k + 1] -= a * top
        num[k] -= b * top
    return num + [Fraction(0)] * (3 - len(num))


def _isomorphic(f1: CubicField, f2: CubicField) -> bool:
    """Exact test that x^3 + a2 x + b2 has a root in Q[x]/(x^3 + a1 x + b1)."""
    with mpmath.workdps(60):
        r1 = mpmath.polyroots([1, 0, f1.a, f1.b], maxsteps=200, extraprec=200)
        r2 = mpmath.polyroots([1, 0, f2.a, f2.b], maxsteps=200, extraprec=200)
        V = mpmath.matrix([[1, r, r * r] for r in r1])
        ind = f1.index
        for perm in permutations(range(3)):
            rhs = mpmath.matrix([r2[i] for i in perm])
            try:
                sol = mpmath.lu_solve(V, rhs)
            except ZeroDivisionError:
                continue
            coeffs = []
            ok = True
            for c in sol:
                if abs(mpmath.im(c)) > mpmath.mpf(10) ** -20:
                    ok = False
                    break
                scaled = mpmath.re(c) * ind
                k = int(mpmath.nint(scaled))
                if abs(scaled - k) > mpmath.mpf(10) ** -20:
                    ok = False
                    break
                coeffs.append(Fraction(k, ind))
            if not ok:
                continue
            # beta = c0 + c1 x + c2 x^2; check beta^3 + a2 beta + b2 == 0 mod f1
            beta = coeffs
            sq = _poly_mod(_pmul(beta, beta), f1.a, f1.b)
            cube = _poly_mod(_pmul(sq, beta), f1.a, f1.b)
            val = [cube[i] + f2.a * beta[i] + (f2.b if i == 0 else 0) for i in range(3)]
            if all(v == 0 for v in val):
                return True
    return False


def _pmul(u, v):
    out = [Fraction(0)] * (len(u) + len(v) - 1)
    for i, x in enumerate(u):
        for j, y in enumerate(v):
            out[i + j] += x * y
    return out


def _coefficient_box(bound: int) -> tuple[int, int]:
    # a trace-zero generator phi with sum |phi_i|^2 <= 6 sqrt(bound) always exists
    t2 = 6 * math.sqrt(bound)
    A = math.floor(t2 / 2 + 1e-9)
    B = math.floor((t2 / 3) ** 1.5 + 1e-9)
    return A, B


def cubic_fields(bound: int, cap: int = ORACLE_CAP) -> dict[int, list[CubicField]]:
    """Representatives of every cubic field with |disc| <= bound, keyed by discriminant."""
    if bound < 1:
        raise InvalidInputError("bound must be >= 1")
    if bound > cap:
        raise ResourceLimitError(f"oracle bound {bound} exceeds cap {cap}")
    A, B = _coefficient_box(bound)
    aa, bb = np.meshgrid(np.arange(-A, A + 1, dtype=np.int64), np.arange(1, B + 1, dtype=np.int64), indexing="ij")
    pdisc = -4 * aa**3 - 27 * bb**2
    keep = pdisc != 0
    cand = [(int(a), int(b)) for a, b in zip(aa[keep], bb[keep])]
    found: dict[int, list[CubicField]] = {}
    for a, b in cand:
        pd = -4 * a**3 - 27 * b * b
        if _squarefree_core(pd) > bound:
            continue
        if _has_integer_root(a, b):
            continue
        d = field_discriminant(a, b)
        if abs(d) > bound:
            continue
        found.setdefault(d, []).append(CubicField(a, b, d))
    check_primes = primes_up_to(400)
    out: dict[int, list[CubicField]] = {}
    for d in sorted(found, key=lambda x: (abs(x), x)):
        reps: list[CubicField] = []
        sigs: list[dict] = []
        # smallest polynomials first so representatives are canonical
        for fld in sorted(found[d], key=lambda f: (abs(f.a) + abs(f.b), abs(f.b), abs(f.a), f.a)):
            sig = _signature(fld, check_primes)
            dup = False
            for rep, s in zip(reps, sigs):
                if _compatible(s, sig) and _isomorphic(rep, fld):
                    dup = True
                    break
            if not dup:
                reps.append(fld)
                sigs.append(sig)
        out[d] = reps
    return out


def cubic_field_oracle(bound: int, cap: int = ORACLE_CAP) -> dict[int, int]:
    """{field discriminant: number of cubic fields} for |disc| <= bound."""
    return {d: len(v) for d, v in cubic_fields(bound, cap).items()}


def oracle_csv(bound: int, cap: int = ORACLE_CAP) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["disc", "count", "poly_a", "poly_b"])
    for d, reps in cubic_fields(bound, cap).items():
        for f in reps:
            w.writerow([d, len(reps), f.a, f.b])
    return buf.getvalue()
