"""Conductor census over a naive-height box, the Brumer-Silverman map, and
moment comparisons against quadratic 3-torsion.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from ..arith import factor, is_fundamental_discriminant, sixth_power_free_part, squarefree_kernel
from ..classgroup.batch import family_groups
from ..classgroup.structure import torsion_size
from ..errors import DependencyMissingError, InvalidInputError, ResourceLimitError
from .._parallel import map_chunks
from .curves import WeierstrassCurve, invariants, minimal_scaling, model_from_c4c6
from .tate import tate_local_conductor

HEIGHT_CAP = 10**14


def icbrt(n: int) -> int:
    """floor(n^(1/3)) for n >= 0."""
    x = round(n ** (1 / 3)) if n else 0
    while x**3 > n:
        x -= 1
    while (x + 1) ** 3 <= n:
        x += 1
    return x


def _kraus_pairs(c4_values: Sequence[int], c6_max: int) -> list[tuple[int, int]]:
    c6 = np.arange(-c6_max, c6_max + 1, dtype=object if c6_max > 3 * 10**9 else np.int64)
    out = []
    for c4 in c4_values:
        lhs = c4**3 - c6 * c6
        ok = (lhs % 1728 == 0) & (lhs != 0)
        # v_3(c6) != 2
        ok &= ~((c6 % 9 == 0) & (c6 % 27 != 0))
        # 2-adic condition
        ok &= (c6 % 4 == 3) | ((c4 % 16 == 0) & ((c6 % 32 == 0) | (c6 % 32 == 8)))
        out.extend((int(c4), int(x)) for x in c6[ok])
    return out


def _local_profile(E: WeierstrassCurve, disc: int) -> dict[int, tuple[int, str, str]]:
    return {p: tate_local_conductor(E, p) for p, _ in factor(abs(disc))}


@dataclass(frozen=True)
class CensusCurve:
    curve: WeierstrassCurve
    c4: int
    c6: int
    disc: int
    conductor: int
    local: dict = field(compare=False, hash=False, repr=False)


def _census_worker(args):
    c4_values, c6_max, Q = args
    rows = []
    for c4, c6 in _kraus_pairs(c4_values, c6_max):
        disc = (c4**3 - c6 * c6) // 1728
        if Q is not None and squarefree_kernel(abs(disc)) > Q:
            continue
        if minimal_scaling(c4, c6, disc) != 1:
            continue
        E = model_from_c4c6(c4, c6)
        local = _local_profile(E, disc)
        N = 1
        for p, (f, _, _) in local.items():
            N *= p**f
        if Q is None or N <= Q:
            rows.append(CensusCurve(E, c4, c6, disc, N, local))
    return rows


def _run_chunks(chunks):
    out = []
    for c in chunks:
        out.extend(_census_worker(c))
    return out


@dataclass
class CensusTable:
    H: int
    Q: int | None
    curves: dict[int, list[CensusCurve]]

    # counts are certified lower bounds for E'(q): only curves inside the box are seen
    lower_bound: bool = True

    def count(self, q: int) -> int:
        return len(self.curves.get(q, ()))

    def counts(self) -> dict[int, int]:
        return {q: len(v) for q, v in sorted(self.curves.items())}

    def all_curves(self) -> list[CensusCurve]:
        return [c for q in sorted(self.curves) for c in self.curves[q]]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["q", "count", "H", "a1", "a2", "a3", "a4", "a6"])
        for q in sorted(self.curves):
            rows = self.curves[q]
            w.writerow([q, len(rows), self.H, "", "", "", "", ""])
            for c in rows:
                w.writerow([q, len(rows), self.H, *c.curve.ainvs])
        return buf.getvalue()


def census(Q: int | None, H: int, threads: int = 1) -> CensusTable:
    """Minimal curves with max(|c4|^3, c6^2) <= H, grouped by conductor (<= Q unless Q is None)."""
    if H < 1:
        raise InvalidInputError("H must be >= 1")
    if H > HEIGHT_CAP:
        raise ResourceLimitError(f"height bound {H} exceeds cap {HEIGHT_CAP}")
    if Q is not None and Q < 1:
        return CensusTable(H, Q, {})
    c4_max = icbrt(H)
    c6_max = math.isqrt(H)
    c4_values = list(range(-c4_max, c4_max + 1))
    strips = [(c4_values[i : i + 16], c6_max, Q) for i in range(0, len(c4_values), 16)]
    rows = map_chunks(_run_chunks, strips, threads)
    table: dict[int, list[CensusCurve]] = {}
    for r in rows:
        table.setdefault(r.conductor, []).append(r)
    for q in table:
        table[q].sort(key=lambda c: (abs(c.disc), c.disc, c.curve.ainvs))
    return CensusTable(H, Q, dict(sorted(table.items())))


@dataclass(frozen=True)
class BrumerSilverman:
    a: int
    d: int
    X: Fraction
    Y: Fraction
    field_disc: int | None

    def on_curve(self) -> bool:
        return self.Y**3 == self.X**2 + self.a


def _quadratic_field_disc(n: int) -> int | None:
    """Fundamental discriminant of Q(sqrt n), None when n is a square."""
    if n == 0:
        return None
    core = 1 if n > 0 else -1
    for p, e in factor(abs(n)):
        if e % 2:
            core *= p
    if core == 1:
        return None
    return core if core % 4 == 1 else 4 * core


def brumer_silverman_map(E: WeierstrassCurve) -> BrumerSilverman:
    inv = invariants(E)
    a, d = sixth_power_free_part(1728 * inv.disc)
    X = Fraction(inv.c6, d**3)
    Y = Fraction(inv.c4, d**2)
    return BrumerSilverman(a, d, X, Y, _quadratic_field_disc(-a))


def delta_factor(q: int) -> int:
    if q < 1:
        raise InvalidInputError("q must be >= 1")
    return 6 // math.gcd(6, q)


@dataclass(frozen=True)
class DivisorSumVerdict:
    Q: int
    double_sum: Fraction
    floor_sum: Fraction
    bound: Fraction

    @property
    def identity_holds(self) -> bool:
        return self.double_sum == self.floor_sum

    @property
    def bound_holds(self) -> bool:
        return self.floor_sum <= self.bound

    @property
    def holds(self) -> bool:
        return self.identity_holds and self.bound_holds


def divisor_sum_check(alpha: Sequence) -> DivisorSumVerdict:
    """alpha[0] is alpha_1; checks sum_q sum_{n|q} alpha_n = sum_n alpha_n floor(Q/n) <= Q sum alpha_n/n."""
    vals = [Fraction(x) for x in alpha]
    if any(v < 0 for v in vals):
        raise InvalidInputError("alpha must be nonnegative")
    Q = len(vals)
    double = Fraction(0)
    for q in range(1, Q + 1):
        for n in range(1, q + 1):
            if q % n == 0:
                double += vals[n - 1]
    floor_sum = sum((vals[n - 1] * (Q // n) for n in range(1, Q + 1)), Fraction(0))
    bound = Q * sum((vals[n - 1] / n for n in range(1, Q + 1)), Fraction(0))
    return DivisorSumVerdict(Q, double, floor_sum, bound)


@dataclass(frozen=True)
class ECConstants:
    beta: float = 0.2782
    beta_alternative: float = 0.2787

    @property
    def gamma(self) -> float:
        return math.log(3) / (2 * self.beta)

    @property
    def pointwise_exponent(self) -> float:
        return 2 * self.beta / (3 * math.log(3))

    @staticmethod
    def reference_exponents(k) -> list[Fraction]:
        """Moment exponents Theta(k) quoted for comparison; both apply at k = 4."""
        k = Fraction(k)
        out = []
        if 1 <= k <= 4:
            out.append((5 * k + 13) / 18)
        if k >= 4:
            out.append((2 * k + 3) / 6)
        return out


def _slope(xs: Sequence[int], ys: Sequence[float]) -> float | None:
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if y > 0]
    if len(pts) < 2:
        return None
    lx, ly = zip(*pts)
    return float(np.polyfit(lx, ly, 1)[0])


def _power_sum(values: Sequence[int], exponent) -> tuple[str, float]:
    """(decimal string, float) of sum v^exponent; exact when the exponent is an integer."""
    if isinstance(exponent, Fraction) and exponent.denominator == 1:
        total = sum(v ** int(exponent) for v in values)
        return str(total), float(total)
    with mpmath.workdps(30):
        total = mpmath.fsum(mpmath.power(v, exponent) for v in values if v)
        return mpmath.nstr(total, 20), float(total)


def ec_moment_comparison(
    Q: int,
    k,
    H: int = 10**8,
    table: CensusTable | None = None,
    constants: ECConstants = ECConstants(),
    checkpoints: Sequence[int] | None = None,
    threads: int = 1,
    store=None,
) -> dict:
    """Census moment sum of E'(q)^(gamma k) against the quadratic 3-torsion moment."""
    k = Fraction(k)
    if k <= 0:
        raise InvalidInputError("k must be positive")
    if Q < 3:
        raise InvalidInputError("Q must be >= 3")
    if table is None:
        table = census(Q, H, threads)
    elif table.Q is not None and table.Q < Q:
        raise DependencyMissingError(f"census covers conductors <= {table.Q}, need {Q}")
    if checkpoints is None:
        checkpoints = sorted({max(3, Q // 8), max(3, Q // 4), max(3, Q // 2), Q})
    gk = constants.gamma * float(k)
    counts = table.counts()
    torsion = []
    for sign in (-1, 1):
        kind = "wide" if sign < 0 else "narrow"
        torsion += [(abs(g.D), torsion_size(g, 3)) for g in family_groups(Q, sign, kind, threads=threads, store=store)]
    rows = []
    for c in checkpoints:
        e_str, e_val = _power_sum([n for q, n in counts.items() if q <= c], gk)
        t_str, t_val = _power_sum([t for n, t in torsion if n <= c], k)
        rows.append({"Q": c, "ec_sum": e_str, "cl3_sum": t_str, "_e": e_val, "_t": t_val})
    report = {
        "Q": Q,
        "k": str(k),
        "H": H,
        "beta": constants.beta,
        "beta_alternative": constants.beta_alternative,
        "gamma": round(constants.gamma, 6),
        "gamma_k": round(gk, 6),
        "statistic": "E' (census lower bound)",
        "checkpoints": [{key: r[key] for key in ("Q", "ec_sum", "cl3_sum")} for r in rows],
        "ec_slope": _rounded(_slope([r["Q"] for r in rows], [r["_e"] for r in rows])),
        "cl3_slope": _rounded(_slope([r["Q"] for r in rows], [r["_t"] for r in rows])),
        "reference_exponents": [str(x) for x in constants.reference_exponents(k)],
    }
    return report


def _rounded(x: float | None) -> float | None:
    return None if x is None else round(x, 6)
