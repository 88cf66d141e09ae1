"""Invariant suite behind ``ltorsion verify``; every check is exact."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

from .arith import fundamental_discriminants, omega
from .classgroup.batch import family_groups
from .classgroup.real import fundamental_unit_norm
from .classgroup.structure import torsion_size
from .elliptic import (
    WeierstrassCurve,
    brumer_silverman_map,
    census,
    conductor,
    divisor_sum_check,
    invariants,
    minimal_model,
)
from .fieldcount import cubic_count_via_hasse, cubic_field_oracle
from .heuristics import AbelianPGroup, cl_density_prediction, subspace_count
from .moments import chebyshev_check, dyadic_bound_check, exceeds_power
from .torsionbounds import bound_report


@dataclass(frozen=True)
class CheckResult:
    name: str
    ok: bool
    detail: str


def genus_theory(X: int, threads: int = 1) -> CheckResult:
    bad = [g.D for g in family_groups(X, -1, threads=threads) if torsion_size(g, 2) != 2 ** (omega(-g.D) - 1)]
    return CheckResult("genus-theory", not bad, f"|D| <= {X}, failures {bad[:5]}")


def landau_envelope(X: int, threads: int = 1) -> CheckResult:
    bad = []
    for g in family_groups(X, -1, threads=threads):
        n = -g.D
        if not g.h < math.sqrt(n) * (2 + math.log(n)):
            bad.append(g.D)
    return CheckResult("landau-envelope", not bad, f"|D| <= {X}, failures {bad[:5]}")


def composite_ell(X: int, threads: int = 1) -> CheckResult:
    groups = family_groups(X, -1, threads=threads) + family_groups(min(X, 5000), 1, "wide", threads=threads)
    bad = 0
    pairs = [(2, 3), (3, 4), (4, 5), (3, 5), (8, 9), (5, 12)]
    for g in groups:
        for a, b in pairs:
            if torsion_size(g, a * b) != torsion_size(g, a) * torsion_size(g, b):
                bad += 1
        for ell in (2, 3, 5):
            for k in range(1, 4):
                for kp in range(k, 7):
                    if torsion_size(g, ell**kp) > torsion_size(g, ell**k) ** (-(-kp // k)):
                        bad += 1
    return CheckResult("composite-ell", bad == 0, f"{len(groups)} groups, failures {bad}")


def narrow_wide_odd(X: int, threads: int = 1) -> CheckResult:
    wide = family_groups(X, 1, "wide", threads=threads)
    narrow = family_groups(X, 1, "narrow", threads=threads)
    bad = 0
    for w, n in zip(wide, narrow):
        for ell in (3, 5, 7):
            if torsion_size(w, ell) != torsion_size(n, ell):
                bad += 1
        expect = n.h if fundamental_unit_norm(n.D) == -1 else n.h // 2
        if w.h != expect:
            bad += 1
    return CheckResult("narrow-wide", bad == 0, f"D <= {X}, failures {bad}")


def moment_matrix(X: int, threads: int = 1) -> CheckResult:
    bad = []
    for spec in ("imaginary", "real"):
        groups = family_groups(X, -1 if spec == "imaginary" else 1, "wide", threads=threads)
        for ell in (2, 3, 5):
            for k in (1, 2, 3):
                for delta in (Fraction(0), Fraction(1, 4), Fraction(1, 3)):
                    if not dyadic_bound_check(spec, ell, k, delta, X, threads=threads).holds:
                        bad.append(("dyadic", spec, ell, k, delta))
                    R = X // 4
                    vals = [(abs(g.D), torsion_size(g, ell)) for g in groups if R <= abs(g.D) <= 2 * R]
                    if not chebyshev_check(vals, delta, k, R).holds:
                        bad.append(("chebyshev", spec, ell, k, delta))
    return CheckResult("moment-matrix", not bad, f"X = {X}, failures {bad[:3]}")


def hasse(bound: int, threads: int = 1) -> CheckResult:
    oracle = cubic_field_oracle(bound)
    bad = []
    for sign in (-1, 1):
        for D in fundamental_discriminants(3, bound, sign):
            if cubic_count_via_hasse(D) != oracle.get(D, 0):
                bad.append(D)
    return CheckResult("hasse", not bad, f"|D| <= {bound}, {len(oracle)} oracle discriminants, failures {bad[:5]}")


def elliptic_identities(H: int, threads: int = 1) -> CheckResult:
    table = census(None, H, threads)
    bad = 0
    n = 0
    for c in table.all_curves():
        n += 1
        inv = invariants(c.curve)
        if inv.c4**3 - inv.c6**2 != 1728 * inv.disc:
            bad += 1
        if minimal_model(c.curve) != c.curve:
            bad += 1
        for p, (f, _, _) in c.local.items():
            cap = 8 if p == 2 else 5 if p == 3 else 2
            if f > cap or f < 1:
                bad += 1
        bs = brumer_silverman_map(c.curve)
        if not bs.on_curve() or bs.a * bs.d**6 != 1728 * inv.disc:
            bad += 1
    return CheckResult("elliptic-identities", bad == 0, f"H = {H}, {n} curves, failures {bad}")


def worked_curve() -> CheckResult:
    E = WeierstrassCurve(0, -1, 1, 0, 0)
    inv = invariants(E)
    bs = brumer_silverman_map(E)
    got = (inv.c4, inv.c6, inv.disc, conductor(E), bs.a, bs.d, bs.X, bs.Y)
    want = (16, -152, -11, 11, -297, 2, -19, 4)
    ok = got == want and bs.Y**3 == bs.X**2 + bs.a
    return CheckResult("worked-curve", ok, "(" + ", ".join(map(str, got)) + ")")


def split_bound(samples: int, seed: int, lo: int = 3 * 10**5, hi: int = 10**6) -> CheckResult:
    rng = random.Random(seed)
    pool = [-D for D in fundamental_discriminants(lo, hi, -1)]
    chosen = sorted(rng.sample(pool, samples))
    bad = [(D, ell) for D in chosen for ell in (3, 5) if not bound_report(D, ell).holds]
    return CheckResult("split-bound", not bad, f"{samples} fields in [{lo}, {hi}], failures {bad[:5]}")


def constants() -> CheckResult:
    d = cl_density_prediction(AbelianPGroup(3))
    ok = abs(d.midpoint - Fraction(560126, 10**6)) <= Fraction(1, 10**5)
    ok &= subspace_count(3, 1) == 2
    return CheckResult("constants", ok, f"eta_3 = {d.decimal(8)}")


def divisor_sums(seed: int, trials: int = 100, Q: int = 100) -> CheckResult:
    rng = random.Random(seed)
    bad = 0
    for _ in range(trials):
        alpha = [Fraction(rng.randint(0, 50), rng.randint(1, 20)) for _ in range(Q)]
        if not divisor_sum_check(alpha).holds:
            bad += 1
    return CheckResult("divisor-sum", bad == 0, f"{trials} sequences at Q = {Q}, failures {bad}")


def exceptional_monotone(X: int, threads: int = 1) -> CheckResult:
    groups = family_groups(X, -1, threads=threads)
    bad = 0
    deltas = [Fraction(0), Fraction(1, 8), Fraction(1, 4), Fraction(1, 3), Fraction(1, 2)]
    for g in groups:
        t = torsion_size(g, 3)
        flags = [exceeds_power(t, -g.D, d) for d in deltas]
        # once a field drops out it must stay out for larger exponents
        if any(not a and b for a, b in zip(flags, flags[1:])):
            bad += 1
    return CheckResult("exceptional-monotone", bad == 0, f"failures {bad}")


def run_all(scale: str = "quick", seed: int = 0, threads: int = 1) -> list[CheckResult]:
    big = scale == "full"
    plan: list[Callable[[], CheckResult]] = [
        lambda: genus_theory(10**5 if big else 10**4, threads),
        lambda: landau_envelope(10**5 if big else 10**4, threads),
        lambda: composite_ell(10**5 if big else 10**4, threads),
        lambda: narrow_wide_odd(5000 if big else 1000, threads),
        lambda: moment_matrix(10**4 if big else 2000, threads),
        lambda: exceptional_monotone(10**4, threads),
        lambda: hasse(1000 if big else 300, threads),
        lambda: elliptic_identities(10**8 if big else 10**6, threads),
        worked_curve,
        lambda: split_bound(100 if big else 10, seed),
        constants,
        lambda: divisor_sums(seed),
    ]
    return [step() for step in plan]
