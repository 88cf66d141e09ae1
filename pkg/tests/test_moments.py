from decimal import Decimal
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ltorsion.classgroup import compose, power, principal_form, reduced_forms
from ltorsion.classgroup.structure import torsion_size
from ltorsion.errors import InvalidInputError
from ltorsion.heuristics import AbelianPGroup
from ltorsion.moments import (
    FamilySpec,
    chebyshev_check,
    dyadic_blocks,
    dyadic_bound_check,
    empirical_density,
    exceeds_power,
    exceptional_set,
    family,
    fk_moment,
    h3_max,
    moment_sum,
    parse_rational,
)

IMAG = FamilySpec("imaginary", "wide")
REAL = FamilySpec("real", "wide")


def torsion_by_forms(D, ell):
    e = principal_form(D)
    return sum(1 for f in reduced_forms(D) if power(f, ell, D) == e)


def test_moment_sum_examples():
    r = moment_sum(IMAG, 3, 1, 25)
    assert (r.moment_sum, r.family_count, r.ratio) == (12, 10, Decimal("1.200000"))
    assert moment_sum(IMAG, 2, 1, 25).moment_sum == 13
    r = moment_sum(IMAG, 1, 5, 25)
    assert r.moment_sum == r.family_count == 10


def test_moment_sum_against_form_counting():
    for ell in (2, 3, 4, 5):
        for k in (1, 2):
            want = sum(torsion_by_forms(g.D, ell) ** k for g in family(IMAG, 1500))
            assert moment_sum(IMAG, ell, k, 1500).moment_sum == want


def test_moment_sum_validation():
    for args in ((0, 1, 25), (3, 0, 25), (3, 1, 2)):
        with pytest.raises(InvalidInputError):
            moment_sum(IMAG, *args)


@given(st.integers(3, 3000), st.integers(3, 3000), st.sampled_from([1, 2, 3, 5]), st.integers(1, 3))
@settings(max_examples=40, deadline=None)
def test_moment_sum_monotone(x1, x2, ell, k):
    lo, hi = sorted((x1, x2))
    for spec in (IMAG, REAL):
        a = moment_sum(spec, ell, k, lo).moment_sum
        assert a <= moment_sum(spec, ell, k, hi).moment_sum
        assert a <= moment_sum(spec, ell, k + 1, lo).moment_sum
        assert a <= moment_sum(spec, ell * 2, k, lo).moment_sum


def test_h3_max_examples():
    assert h3_max(22) == 1
    assert h3_max(23) == 3
    assert h3_max(3) == 1


def test_exceptional_set_examples():
    assert exceptional_set(IMAG, 3, Fraction(1, 2), 100).members == []
    assert exceptional_set(IMAG, 3, 0, 25).members == [-23]
    assert exceptional_set(IMAG, 2, 2, 1000).members == []
    with pytest.raises(InvalidInputError):
        exceptional_set(IMAG, 3, Fraction(-1, 2), 100)


@given(st.fractions(min_value=0, max_value=1, max_denominator=12), st.fractions(min_value=0, max_value=1, max_denominator=12))
@settings(max_examples=30, deadline=None)
def test_exceptional_sets_nested(d1, d2):
    lo, hi = sorted((d1, d2))
    small = set(exceptional_set(IMAG, 3, hi, 2000).members)
    big = set(exceptional_set(IMAG, 3, lo, 2000).members)
    assert small <= big


@given(st.integers(0, 10**6), st.integers(1, 10**6), st.fractions(min_value=0, max_value=3, max_denominator=20))
def test_exceeds_power_exact(t, n, delta):
    # t > n^delta  <=>  t^v > n^u with delta = u/v
    assert exceeds_power(t, n, delta) == (t**delta.denominator > n**delta.numerator)


def test_parse_rational():
    assert parse_rational("1/4") == Fraction(1, 4)
    assert parse_rational(0) == 0
    for bad in (0.25, "-1/3", "x"):
        with pytest.raises(InvalidInputError):
            parse_rational(bad)


def test_chebyshev_examples():
    v = chebyshev_check([(n, 1) for n in range(10, 21)], 1, 1, 10)
    assert v.holds and v.exceptional == 0 and v.lhs == 0
    v = chebyshev_check([(2, 5), (3, 1), (4, 1)], 1, 2, 2)
    assert (v.lhs, v.rhs, v.strict, v.holds) == (4, 27, True, True)
    with pytest.raises(InvalidInputError):
        chebyshev_check([(100, 1)], 1, 1, 10)


def test_chebyshev_real_family():
    R = 50
    vals = [(g.D, torsion_size(g, 3)) for g in family(REAL, 2 * R) if R <= g.D]
    assert chebyshev_check(vals, Fraction(1, 4), 3, R).holds


@given(
    st.integers(1, 200),
    st.lists(st.integers(0, 40), min_size=1, max_size=30),
    st.fractions(min_value=0, max_value=2, max_denominator=6),
    st.integers(1, 4),
)
@settings(max_examples=100, deadline=None)
def test_chebyshev_holds_for_any_data(R, fs, delta, p):
    vals = [(R + (i % (R + 1)), f) for i, f in enumerate(fs)]
    v = chebyshev_check(vals, delta, p, R)
    assert v.holds


def test_dyadic_blocks_half_open():
    blocks = dyadic_blocks(25)
    assert blocks[0] == (Fraction(25, 2), Fraction(25))
    assert all(b[0] == a[0] / 2 for a, b in zip(blocks, blocks[1:]))
    assert 2 ** len(blocks) <= 25**2


def test_dyadic_example():
    v = dyadic_bound_check(IMAG, 3, 1, 0, 25)
    first = v.detail["blocks"][0]
    assert (first["exceptional"], first["moment"]) == (1, 7)
    assert v.holds and v.strict


def test_dyadic_k3_at_10k():
    v = dyadic_bound_check(IMAG, 3, 3, Fraction(1, 3), 10**4)
    assert v.holds
    assert v.detail["block_count_ok"]


def test_dyadic_matrix_small():
    for spec in (IMAG, REAL):
        for ell in (2, 3, 5):
            for delta in (0, Fraction(1, 4)):
                assert dyadic_bound_check(spec, ell, 2, delta, 3000, checkpoints=[1000, 3000]).holds


def test_fk_moment():
    assert fk_moment(IMAG, 1, 25).moment_sum == 10
    r = fk_moment(IMAG, 2, 100)
    assert (r.moment_sum, r.family_count) == (46, 31)
    four_cyclic = [g.D for g in family(IMAG, 100) if any(d % 4 == 0 for d in g.divisors)]
    assert four_cyclic == [-39, -55, -56, -68, -95]
    assert fk_moment(IMAG, 3, 2).moment_sum == 0


def test_empirical_density_examples():
    assert empirical_density(IMAG, 3, AbelianPGroup(3), 22) == 1
    assert empirical_density(IMAG, 3, AbelianPGroup(3, (1,)), 25) == Fraction(1, 10)
    assert empirical_density(IMAG, 5, AbelianPGroup(5), 40) == 1
    with pytest.raises(InvalidInputError):
        empirical_density(IMAG, 2, AbelianPGroup(2), 40)
    with pytest.raises(InvalidInputError):
        empirical_density(IMAG, 9, (), 40)


def test_density_partition_sums_to_one():
    from ltorsion.heuristics import partitions

    total = sum(empirical_density(IMAG, 3, AbelianPGroup(3, lam), 5000) for n in range(0, 6) for lam in partitions(n))
    assert total == 1


def test_report_row_shape():
    row = moment_sum(REAL, 3, 2, 100).as_row()
    exact = Fraction(row["moment_sum"], row["family_count"])
    assert abs(Fraction(Decimal(row["ratio"])) - exact) <= Fraction(1, 2 * 10**6)
    assert len(row["ratio"].split(".")[1]) == 6
    assert row["sign"] == "real"
