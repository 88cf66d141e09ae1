import math

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.polys.numberfields.basis import round_two

from ltorsion.arith import fundamental_discriminants
from ltorsion.errors import InvalidInputError, ResourceLimitError
from ltorsion.fieldcount import (
    cubic_count_via_hasse,
    cubic_field_oracle,
    cubic_fields,
    d4_bound,
    d4_terms,
    disc_tower_prediction,
    field_discriminant,
    oracle_csv,
    torsion_multiplicity_identity,
    unramified_count,
)

X = sympy.symbols("x")


def sympy_field_disc(a, b):
    return int(round_two(sympy.Poly(X**3 + a * X + b))[1])


def test_unramified_count_examples():
    assert unramified_count(3, 1) == 1
    assert unramified_count(3, 2) == 4
    assert unramified_count(2, 3) == 7


def test_torsion_multiplicity_identity():
    assert torsion_multiplicity_identity(3, 1) == 3
    assert torsion_multiplicity_identity(3, 2) == 9
    assert torsion_multiplicity_identity(5, 0) == 1
    for ell in sympy.primerange(2, 14):
        for r in range(7):
            assert (ell - 1) * unramified_count(ell, r) + 1 == ell**r


def test_hasse_examples():
    assert cubic_count_via_hasse(-23) == 1
    assert cubic_count_via_hasse(-3) == 0
    # |Cl[3]| = 9 here, so the correspondence predicts (9 - 1)/2 fields
    assert cubic_count_via_hasse(-4027) == 4
    with pytest.raises(InvalidInputError):
        cubic_count_via_hasse(-12)


def test_disc_tower_prediction():
    assert disc_tower_prediction(23, 3) == 12167
    assert disc_tower_prediction(17, 2) == 289
    assert disc_tower_prediction(1, 7) == 1


def test_oracle_examples():
    assert cubic_field_oracle(22) == {}
    assert cubic_field_oracle(23) == {-23: 1}
    assert cubic_field_oracle(49) == {-23: 1, -31: 1, -44: 1, 49: 1}


def test_oracle_cap():
    with pytest.raises(ResourceLimitError):
        cubic_field_oracle(10**4 + 1)


@pytest.fixture(scope="module")
def fields400():
    return cubic_fields(400)


def test_hasse_matches_oracle_400(fields400):
    for sign in (-1, 1):
        for D in fundamental_discriminants(3, 400, sign):
            assert cubic_count_via_hasse(D) == len(fields400.get(D, [])), D


def test_oracle_fields_are_consistent(fields400):
    for D, flds in fields400.items():
        for f in flds:
            assert f.disc == D
            assert f.poly_disc == D * f.index**2
            assert sympy.Poly(X**3 + f.a * X + f.b).is_irreducible
            assert sympy_field_disc(f.a, f.b) == D


def test_oracle_fields_pairwise_distinct(fields400):
    # distinct fields of equal discriminant differ in some splitting pattern
    for D, flds in fields400.items():
        if len(flds) < 2:
            continue
        pats = set()
        for f in flds:
            pats.add(tuple(len(sympy.Poly(X**3 + f.a * X + f.b, modulus=p).ground_roots()) for p in sympy.primerange(3, 400) if D % p))
        assert len(pats) == len(flds)


@given(st.integers(-60, 60), st.integers(1, 60))
@settings(max_examples=60, deadline=None)
def test_field_discriminant_matches_round_two(a, b):
    if not sympy.Poly(X**3 + a * X + b).is_irreducible:
        return
    assert field_discriminant(a, b) == sympy_field_disc(a, b)


def test_oracle_csv_header():
    text = oracle_csv(49)
    lines = text.splitlines()
    assert lines[0] == "disc,count,poly_a,poly_b"
    assert [ln.split(",")[0] for ln in lines[1:]] == ["-23", "-31", "-44", "49"]


def test_d4_examples():
    assert d4_bound(7) == 0
    assert d4_bound(1) == 0
    # d^2 | 144 for d in {-3, -4, 12}
    assert d4_terms(144) == {-3: 8, -4: 8, 12: 8}
    assert d4_bound(144) == 24
    assert d4_bound(144, exact_class_number=True) == 20


@given(st.integers(1, 10**6))
@settings(max_examples=100, deadline=None)
def test_d4_terms_index_set(D):
    terms = d4_terms(D)
    for d, v in terms.items():
        assert D % (d * d) == 0
        assert v >= 4
    assert d4_bound(D) == sum(terms.values())
    assert d4_bound(D, exact_class_number=True) >= 0
    # every subsum is dominated by the full sum
    assert all(v <= d4_bound(D) for v in terms.values())


def test_d4_prime_is_zero():
    for p in sympy.primerange(2, 500):
        assert d4_bound(p) == 0
