"""Tate's algorithm: local conductor exponent and Kodaira type at a prime."""

from __future__ import annotations

from ..arith import factor, is_prime, valuation
from ..errors import InvalidInputError
from .curves import WeierstrassCurve, _b_invariants, invariants, minimal_model, transform


def _root_mod_p(coeffs, p: int, double: bool) -> int:
    """A (double) root mod p of the monic cubic T^3 + b T^2 + c T + d, by search."""
    b, c, d = coeffs
    for T in range(p):
        if (T**3 + b * T * T + c * T + d) % p:
            continue
        if double and (3 * T * T + 2 * b * T + c) % p:
            continue
        return T
    raise ArithmeticError("expected root not found")


def tate_local_conductor(E: WeierstrassCurve, p: int) -> tuple[int, str, str]:
    """(f_p, Kodaira symbol, reduction kind) for E minimal at p.

    kind is one of good, multiplicative, additive.
    """
    if not is_prime(p):
        raise InvalidInputError(f"{p} is not prime")
    inv = invariants(E)
    vD = valuation(inv.disc, p)
    if vD == 0:
        return 0, "I0", "good"
    if inv.c4 % p:
        return 1, f"I{vD}", "multiplicative"
    half = (p + 1) // 2
    a1, a2, a3, a4, a6 = E.ainvs
    b2, b4, b6, b8 = _b_invariants(E)

    # move the cusp to (0, 0)
    if p == 2:
        r = a4 % 2
        t = (r**3 + a2 * r * r + a4 * r + a6) % 2
    elif p == 3:
        r = (-b6) % 3
        t = (-(a1 * r + a3) * half) % 3
    else:
        r = (-b2 * pow(12, -1, p)) % p
        t = (-(a1 * r + a3) * half) % p
    E = transform(E, r=r, t=t)
    a1, a2, a3, a4, a6 = E.ainvs
    if a3 % p or a4 % p or a6 % p:
        raise ArithmeticError("singular point not moved to the origin")
    b2, b4, b6, b8 = _b_invariants(E)

    if a6 % (p * p):
        return vD, "II", "additive"
    if b8 % p**3:
        return vD - 1, "III", "additive"
    if b6 % p**3:
        return vD - 2, "IV", "additive"

    if p == 2:
        s = a2 % 2
        t = 2 * ((a6 // 4) % 2)
    else:
        s = -a1 * half
        t = -a3 * half
    E = transform(E, s=s, t=t)
    a1, a2, a3, a4, a6 = E.ainvs
    b = a2 // p
    c = a4 // p**2
    d = a6 // p**3
    w = 27 * d * d - b * b * c * c + 4 * b**3 * d - 18 * b * c * d + 4 * c**3
    x = 3 * c - b * b
    if w % p:
        return vD - 4, "I0*", "additive"

    if x % p:
        # one simple root and one double root: I_m^*
        if p <= 3:
            T0 = _root_mod_p((b, c, d), p, True)
        else:
            T0 = (b * c - 9 * d) * pow(2 * x, -1, p) % p
        E = transform(E, r=p * T0)
        m = 0
        k = 2
        y_step = True
        while True:
            a1, a2, a3, a4, a6 = E.ainvs
            m += 1
            if y_step:
                A3 = a3 // p**k
                A6 = a6 // p ** (2 * k)
                if (A3 * A3 + 4 * A6) % p:
                    break
                y0 = A6 % 2 if p == 2 else (-A3 * half) % p
                E = transform(E, t=p**k * y0)
            else:
                A2 = a2 // p
                A4 = a4 // p ** (k + 1)
                A6 = a6 // p ** (2 * k + 1)
                if (A4 * A4 - 4 * A2 * A6) % p:
                    break
                x0 = A6 % 2 if p == 2 else (-A4 * pow(2 * A2, -1, p)) % p
                E = transform(E, r=p**k * x0)
                k += 1
            y_step = not y_step
        return vD - 4 - m, f"I{m}*", "additive"

    # triple root
    if p == 2:
        T0 = b % 2
    elif p == 3:
        T0 = (-d) % 3
    else:
        T0 = (-b * pow(3, -1, p)) % p
    E = transform(E, r=p * T0)
    a1, a2, a3, a4, a6 = E.ainvs
    A3 = a3 // p**2
    A6 = a6 // p**4
    if (A3 * A3 + 4 * A6) % p:
        return vD - 6, "IV*", "additive"
    y0 = A6 % 2 if p == 2 else (-A3 * half) % p
    E = transform(E, t=p**2 * y0)
    a1, a2, a3, a4, a6 = E.ainvs
    if a4 % p**4:
        return vD - 7, "III*", "additive"
    if a6 % p**6:
        return vD - 8, "II*", "additive"
    raise InvalidInputError(f"model is not minimal at {p}")


def local_data(E: WeierstrassCurve) -> dict[int, tuple[int, str, str]]:
    """Tate data at every bad prime of the minimal model."""
    Em = minimal_model(E)
    disc = invariants(Em).disc
    return {p: tate_local_conductor(Em, p) for p, _ in factor(abs(disc))}


def conductor(E: WeierstrassCurve) -> int:
    out = 1
    for p, (f, _, _) in local_data(E).items():
        out *= p**f
    return out
