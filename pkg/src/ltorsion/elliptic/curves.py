"""Weierstrass models, their invariants, and global minimal models."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..arith import factor, valuation
from ..errors import InvalidInputError, SingularCurveError


@dataclass(frozen=True)
class WeierstrassCurve:
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int

    @classmethod
    def from_list(cls, coeffs) -> "WeierstrassCurve":
        coeffs = [int(c) for c in coeffs]
        if len(coeffs) == 2:
            coeffs = [0, 0, 0] + coeffs
        if len(coeffs) != 5:
            raise InvalidInputError("need [a1,a2,a3,a4,a6] or [a4,a6]")
        return cls(*coeffs)

    @property
    def ainvs(self) -> tuple[int, int, int, int, int]:
        return (self.a1, self.a2, self.a3, self.a4, self.a6)

    def __str__(self):
        return "[" + ",".join(str(a) for a in self.ainvs) + "]"


@dataclass(frozen=True)
class CurveInvariants:
    b2: int
    b4: int
    b6: int
    b8: int
    c4: int
    c6: int
    disc: int

    @property
    def j_invariant(self) -> Fraction:
        return Fraction(self.c4**3, self.disc)


def _b_invariants(E: WeierstrassCurve):
    a1, a2, a3, a4, a6 = E.ainvs
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    return b2, b4, b6, b8


def invariants(E: WeierstrassCurve) -> CurveInvariants:
    b2, b4, b6, b8 = _b_invariants(E)
    c4 = b2 * b2 - 24 * b4
    c6 = -(b2**3) + 36 * b2 * b4 - 216 * b6
    disc = -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    if disc == 0:
        raise SingularCurveError(f"curve {E} is singular")
    return CurveInvariants(b2, b4, b6, b8, c4, c6, disc)


def transform(E: WeierstrassCurve, r: int = 0, s: int = 0, t: int = 0, u: int = 1) -> WeierstrassCurve:
    """Substitute x = u^2 x' + r, y = u^3 y' + s u^2 x' + t; requires an integral result."""
    a1, a2, a3, a4, a6 = E.ainvs
    n1 = a1 + 2 * s
    n2 = a2 - s * a1 + 3 * r - s * s
    n3 = a3 + r * a1 + 2 * t
    n4 = a4 - s * a3 + 2 * r * a2 - (t + r * s) * a1 + 3 * r * r - 2 * s * t
    n6 = a6 + r * a4 + r * r * a2 + r**3 - t * a3 - t * t - r * t * a1
    out = []
    for num, w in ((n1, 1), (n2, 2), (n3, 3), (n4, 4), (n6, 6)):
        den = u**w
        if num % den:
            raise InvalidInputError(f"transform with u={u} is not integral")
        out.append(num // den)
    return WeierstrassCurve(*out)


def kraus_integral(c4: int, c6: int) -> bool:
    """True when an integral model with invariants (c4, c6) exists."""
    if (c4**3 - c6 * c6) % 1728 or c4**3 == c6 * c6:
        return False
    return _kraus_local(c4, c6, 2) and _kraus_local(c4, c6, 3)


def _kraus_local(c4: int, c6: int, p: int) -> bool:
    if p == 3:
        return valuation(c6, 3) != 2
    if p == 2:
        if c6 % 4 == 3:
            return True
        return valuation(c4, 2) >= 4 and c6 % 32 in (0, 8)
    return True


def model_from_c4c6(c4: int, c6: int) -> WeierstrassCurve:
    """The reduced integral model (a1, a3 in {0,1}, a2 in {-1,0,1}) with these invariants."""
    if not kraus_integral(c4, c6):
        raise InvalidInputError(f"no integral model has invariants c4={c4}, c6={c6}")
    b2 = (-c6) % 12
    if b2 > 6:
        b2 -= 12
    b4, r4 = divmod(b2 * b2 - c4, 24)
    b6, r6 = divmod(-(b2**3) + 36 * b2 * b4 - c6, 216)
    if r4 or r6:
        raise ArithmeticError(f"model construction failed for c4={c4}, c6={c6}")
    a1 = b2 % 2
    a3 = b6 % 2
    a2 = (b2 - a1) // 4
    a4 = (b4 - a1 * a3) // 2
    a6 = (b6 - a3) // 4
    E = WeierstrassCurve(a1, a2, a3, a4, a6)
    inv = invariants(E)
    if (inv.c4, inv.c6) != (c4, c6):
        raise ArithmeticError(f"model construction failed for c4={c4}, c6={c6}")
    return E


def minimal_scaling(c4: int, c6: int, disc: int) -> int:
    """Largest u such that (c4/u^4, c6/u^6) are the invariants of an integral model."""
    u = 1
    for p, e in factor(abs(disc)):
        if e < 12:
            continue
        k = min(e // 12, valuation(c4, p) // 4 if c4 else e, valuation(c6, p) // 6 if c6 else e)
        while k > 0:
            q = p**k
            if _kraus_local(c4 // q**4, c6 // q**6, p):
                break
            k -= 1
        u *= p**k
    return u


def minimal_model(E: WeierstrassCurve) -> WeierstrassCurve:
    """Reduced global minimal model of E."""
    inv = invariants(E)
    u = minimal_scaling(inv.c4, inv.c6, inv.disc)
    return model_from_c4c6(inv.c4 // u**4, inv.c6 // u**6)


def is_minimal(E: WeierstrassCurve) -> bool:
    inv = invariants(E)
    return minimal_scaling(inv.c4, inv.c6, inv.disc) == 1
