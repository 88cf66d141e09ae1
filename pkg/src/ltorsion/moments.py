"""Moment sums over quadratic families and exact checks of Chebyshev-type bounds.

Rational exponents u/v are never evaluated in floating point: a test such as
t > n^(u/v) is decided as t^v > n^u.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from fractions import Fraction
from typing import Iterable, Sequence

from .arith import _sign_value, is_prime
from .classgroup.batch import family_groups
from .classgroup.structure import ClassGroup, torsion_size, two_rank_doubled
from .errors import InvalidInputError


@dataclass(frozen=True)
class FamilySpec:
    sign: str = "imaginary"
    kind: str = "wide"
    degree: int = 2

    def __post_init__(self):
        if self.degree != 2:
            raise InvalidInputError("only quadratic families are supported")
        s = _sign_value(self.sign)
        object.__setattr__(self, "sign", "imaginary" if s < 0 else "real")
        if self.kind not in ("wide", "narrow"):
            raise InvalidInputError(f"kind must be wide or narrow, not {self.kind!r}")

    @property
    def sign_value(self) -> int:
        return -1 if self.sign == "imaginary" else 1


IMAGINARY = FamilySpec("imaginary")
REAL = FamilySpec("real")


def as_family(spec) -> FamilySpec:
    if isinstance(spec, FamilySpec):
        return spec
    return FamilySpec(spec)


def parse_rational(delta) -> Fraction:
    """Accept Fraction, int, or 'u/v' text; must be >= 0."""
    if isinstance(delta, float):
        raise InvalidInputError("exponents must be exact rationals, not floats")
    try:
        q = Fraction(delta)
    except (ValueError, ZeroDivisionError) as exc:
        raise InvalidInputError(f"bad rational exponent {delta!r}") from exc
    if q < 0:
        raise InvalidInputError("exponent must be nonnegative")
    return q


def round6(q) -> Decimal:
    q = Fraction(q)
    return (Decimal(q.numerator) / Decimal(q.denominator)).quantize(
        Decimal("0.000001"), rounding=ROUND_HALF_EVEN
    )


def exceeds_power(t: int, n: int, delta: Fraction) -> bool:
    """t > n^delta, exactly."""
    return t**delta.denominator > n**delta.numerator


@dataclass(frozen=True)
class MomentReport:
    X: int
    ell: int
    k: int
    family_count: int
    moment_sum: int
    sign: str = "imaginary"
    statistic: str = "torsion"

    @property
    def ratio(self) -> Decimal:
        if self.family_count == 0:
            return Decimal("0.000000")
        return round6(Fraction(self.moment_sum, self.family_count))

    def as_row(self) -> dict:
        return {
            "statistic": self.statistic,
            "sign": self.sign,
            "X": self.X,
            "ell": self.ell,
            "k": self.k,
            "family_count": self.family_count,
            "moment_sum": self.moment_sum,
            "ratio": str(self.ratio),
        }


@dataclass(frozen=True)
class ExceptionalReport:
    X: int
    ell: int
    delta: Fraction
    members: list[int]
    dyadic_counts: list[tuple[Fraction, Fraction, int]]


@dataclass(frozen=True)
class Verdict:
    holds: bool
    lhs: int
    rhs: int
    strict: bool
    exceptional: int
    detail: dict = field(default_factory=dict)


def _validate(ell: int, k: int, X: int) -> None:
    if ell < 1:
        raise InvalidInputError("ell must be >= 1")
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    if X < 3:
        raise InvalidInputError("X must be >= 3")


def family(spec, X: int, threads: int = 1, store=None) -> list[ClassGroup]:
    spec = as_family(spec)
    return family_groups(X, spec.sign_value, spec.kind, threads=threads, store=store)


def moment_sum(spec, ell: int, k: int, X: int, threads: int = 1, store=None) -> MomentReport:
    """Exact sum of |Cl[ell]|^k over the family up to X."""
    _validate(ell, k, X)
    spec = as_family(spec)
    groups = family(spec, X, threads, store)
    total = sum(torsion_size(g, ell) ** k for g in groups)
    return MomentReport(X, ell, k, len(groups), total, spec.sign)


def h3_max(X: int, threads: int = 1, store=None) -> int:
    if X < 3:
        raise InvalidInputError("X must be >= 3")
    best = 1
    for sign in (-1, 1):
        # odd torsion does not see the narrow/wide distinction
        for g in family_groups(X, sign, "narrow" if sign > 0 else "wide", threads=threads, store=store):
            best = max(best, torsion_size(g, 3))
    return best


def dyadic_blocks(X: int) -> list[tuple[Fraction, Fraction]]:
    """Half-open blocks (X/2^(j+1), X/2^j] covering every |D| >= 3 up to X."""
    out = []
    j = 0
    while Fraction(X, 2**j) >= 3:
        out.append((Fraction(X, 2 ** (j + 1)), Fraction(X, 2**j)))
        j += 1
    return out


def exceptional_set(spec, ell: int, delta, X: int, threads: int = 1, store=None) -> ExceptionalReport:
    """Fields with |Cl[ell]| > |D|^delta, plus their counts per dyadic block."""
    _validate(ell, 1, X)
    delta = parse_rational(delta)
    spec = as_family(spec)
    members = [
        g.D for g in family(spec, X, threads, store) if exceeds_power(torsion_size(g, ell), abs(g.D), delta)
    ]
    counts = []
    for lo, hi in dyadic_blocks(X):
        counts.append((lo, hi, sum(1 for D in members if lo < abs(D) <= hi)))
    return ExceptionalReport(X, ell, delta, members, counts)


def chebyshev_check(values: Iterable[tuple[int, int]], delta, p: int, R: int) -> Verdict:
    """R^(delta*p) * #{n : f(n) > n^delta} <= sum f(n)^p over n in [R, 2R], exactly."""
    delta = parse_rational(delta)
    if p < 1 or R < 1:
        raise InvalidInputError("need p >= 1 and R >= 1")
    values = list(values)
    for n, _ in values:
        if not R <= n <= 2 * R:
            raise InvalidInputError(f"{n} lies outside [{R}, {2 * R}]")
    u, v = delta.numerator, delta.denominator
    count = sum(1 for n, f in values if exceeds_power(f, n, delta))
    total = sum(f**p for _, f in values)
    lhs = R ** (u * p) * count**v
    rhs = total**v
    holds = lhs < rhs if count else lhs <= rhs
    return Verdict(holds, lhs, rhs, count > 0, count)


def dyadic_bound_check(
    spec,
    ell: int,
    k: int,
    delta,
    X: int,
    checkpoints: Sequence[int] | None = None,
    threads: int = 1,
    store=None,
) -> Verdict:
    """Per-block bound |B0|*(Y/2)^(delta*k) < sum_{B0 block} |Cl[ell]|^k for every dyadic block.

    The first block's comparison is reported as lhs/rhs; per-block results and
    exceptional densities at each checkpoint are in ``detail``.
    """
    _validate(ell, k, X)
    delta = parse_rational(delta)
    spec = as_family(spec)
    u, v = delta.numerator, delta.denominator
    groups = family(spec, X, threads, store)
    blocks = dyadic_blocks(X)
    # at most 2*log2(X) blocks  <=>  2^len <= X^2
    block_count_ok = 2 ** len(blocks) <= X * X
    per_block = []
    all_hold = block_count_ok
    exceptional_total = 0
    for j, (lo, hi) in enumerate(blocks):
        in_block = [g for g in groups if lo < abs(g.D) <= hi]
        tors = [(abs(g.D), torsion_size(g, ell)) for g in in_block]
        bad = sum(1 for n, t in tors if exceeds_power(t, n, delta))
        S = sum(t**k for _, t in tors)
        # |B|^v * (X/2^(j+1))^(u k) vs S^v, cleared of the power of two
        lhs = bad**v * X ** (u * k)
        rhs = S**v * 2 ** ((j + 1) * u * k)
        ok = lhs < rhs if bad else lhs <= rhs
        all_hold &= ok
        exceptional_total += bad
        per_block.append({"lo": lo, "hi": hi, "exceptional": bad, "moment": S, "holds": ok})
    direct = sum(1 for g in groups if exceeds_power(torsion_size(g, ell), abs(g.D), delta))
    all_hold &= direct == exceptional_total
    if checkpoints is None:
        checkpoints = [X]
    densities = {}
    for c in checkpoints:
        fam = [g for g in groups if abs(g.D) <= c]
        bad = sum(1 for g in fam if exceeds_power(torsion_size(g, ell), abs(g.D), delta))
        densities[c] = round6(Fraction(bad, len(fam))) if fam else Decimal("0.000000")
    first = per_block[0]
    lhs0 = first["exceptional"] ** v * X ** (u * k)
    rhs0 = first["moment"] ** v * 2 ** (u * k)
    return Verdict(
        all_hold,
        lhs0,
        rhs0,
        first["exceptional"] > 0,
        exceptional_total,
        {"blocks": per_block, "block_count_ok": block_count_ok, "densities": densities},
    )


def fk_moment(spec, k: int, X: int, threads: int = 1, store=None) -> MomentReport:
    """Sum of 2^(k * rk_2(2 Cl)) over the family."""
    if k < 1:
        raise InvalidInputError("k must be >= 1")
    spec = as_family(spec)
    if X < 3:
        return MomentReport(X, 4, k, 0, 0, spec.sign, "fk")
    groups = family(spec, X, threads, store)
    total = sum(2 ** (k * two_rank_doubled(g)) for g in groups)
    return MomentReport(X, 4, k, len(groups), total, spec.sign, "fk")


def empirical_density(spec, p: int, G, X: int, threads: int = 1, store=None) -> Fraction:
    """Proportion of the family whose Sylow p-subgroup has partition G.partition."""
    if p == 2 or not is_prime(p):
        raise InvalidInputError("p must be an odd prime")
    if getattr(G, "p", p) != p:
        raise InvalidInputError("group prime does not match p")
    target = tuple(getattr(G, "partition", G))
    groups = family(as_family(spec), X, threads, store)
    if not groups:
        return Fraction(0)
    hits = sum(1 for g in groups if g.sylow_partition(p) == target)
    return Fraction(hits, len(groups))
