import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from ltorsion.arith import fundamental_discriminants
from ltorsion.classgroup import class_group_imaginary, power, principal_form, reduced_forms
from ltorsion.classgroup.forms import QuadraticForm
from ltorsion.classgroup.structure import torsion_size
from ltorsion.errors import InvalidInputError
from ltorsion.torsionbounds import (
    below_threshold,
    bound_report,
    coset_distinctness_check,
    norm_equation_search,
    prime_form,
    same_coset,
    small_split_primes,
    torsion_upper_bound,
)


def brute_split_primes(D, ell):
    out = []
    for p in sympy.primerange(2, 10**4):
        if (4 * p) ** (2 * ell) >= D:
            break
        splits = (-D) % 8 == 1 if p == 2 else D % p != 0 and sympy.legendre_symbol(-D % p, p) == 1
        if splits:
            out.append(p)
    return tuple(out)


def test_threshold_exact():
    assert below_threshold(1, 4**6 + 1, 3)
    assert not below_threshold(1, 4**6, 3)


def test_small_split_primes_examples():
    assert small_split_primes(23, 3).primes == ()
    cert = small_split_primes(262151, 3)
    assert cert.primes == (2,) and cert.M == 1


def test_small_split_primes_brute_force():
    for D in list(fundamental_discriminants(262144, 263000, -1))[:200]:
        D = -D
        assert small_split_primes(D, 3).primes == brute_split_primes(D, 3), D
    for D in list(fundamental_discriminants(3 * 10**6, 3 * 10**6 + 2000, -1))[:200]:
        D = -D
        assert small_split_primes(D, 3).primes == brute_split_primes(D, 3), D


def test_split_primes_validation():
    with pytest.raises(InvalidInputError):
        small_split_primes(12, 3)
    with pytest.raises(InvalidInputError):
        small_split_primes(23, 4)
    with pytest.raises(InvalidInputError):
        small_split_primes(23, 2)


def test_prime_form_examples():
    assert prime_form(23, 2) == QuadraticForm(2, 1, 3)
    assert prime_form(20, 3) == QuadraticForm(2, 2, 3)
    with pytest.raises(InvalidInputError):
        prime_form(23, 5)


@given(st.sampled_from([-d for d in fundamental_discriminants(3, 5000, -1)]), st.sampled_from(list(sympy.primerange(2, 60))))
@settings(max_examples=100, deadline=None)
def test_prime_form_represents_p(D, p):
    try:
        f = prime_form(D, p)
    except InvalidInputError:
        return
    assert f.b * f.b - 4 * f.a * f.c == -D
    assert f in reduced_forms(-D)


def test_constructed_collision():
    # (2,1,1) and (11,...) classes collide modulo Cl[3] when h(-7) = 1
    assert same_coset(7, 3, 2, 11)
    assert len(norm_equation_search(7, 3, 2, 2)) == 14
    assert len(norm_equation_search(7, 3, 2, 11)) == 32


@given(st.integers(1, 40), st.integers(1, 40))
def test_norm_equation_search_complete(D0, m):
    D = 3 + D0
    N = 4 * m**3
    found = set(norm_equation_search(D, 3, m, 1))
    brute = {(u, v) for v in range(-20, 21) for u in range(-300, 301) if u * u + D * v * v == N}
    assert {s for s in found if abs(s[0]) <= 300 and abs(s[1]) <= 20} == brute


def test_first_two_prime_certificate():
    r = bound_report(2986007, 3)
    assert r.M == 2 and (r.h, r.bound) == (1676, 838)
    assert r.norm_solutions == 0 and r.holds
    assert coset_distinctness_check(2986007, 3).distinct


def test_bound_dominates_sampled():
    import random

    rng = random.Random(7)
    pool = [-d for d in fundamental_discriminants(3 * 10**5, 10**6, -1)]
    for D in rng.sample(pool, 15):
        for ell in (3, 5):
            r = bound_report(D, ell)
            assert r.bound >= r.torsion and r.norm_solutions == 0


@pytest.mark.parametrize("D,ell", [(2986007, 3), (3299, 3), (4027, 3), (3896, 3), (11199, 5), (12451, 5)])
def test_same_coset_matches_torsion_subgroup(D, ell):
    e = principal_form(-D)
    torsion = {f for f in reduced_forms(-D) if power(f, ell, -D) == e}
    assert len(torsion) == torsion_size(class_group_imaginary(-D), ell)
    from ltorsion.classgroup import compose, inverse

    split = [p for p in sympy.primerange(2, 80) if D % p and (p > 2 or D % 8 == 7) and (p == 2 or sympy.legendre_symbol(-D % p, p) == 1)]
    for i, p1 in enumerate(split):
        for p2 in split[i + 1 :]:
            q = compose(prime_form(D, p1), inverse(prime_form(D, p2)), -D)
            assert same_coset(D, ell, p1, p2) == (q in torsion)


def test_torsion_upper_bound_without_certificate():
    g = class_group_imaginary(-23)
    assert torsion_upper_bound(23, 3) == g.h
    assert torsion_size(g, 3) <= torsion_upper_bound(23, 3)


def test_bound_row_fields():
    r = bound_report(262151, 3)
    assert r.M == 1 and r.bound == r.h == 565
