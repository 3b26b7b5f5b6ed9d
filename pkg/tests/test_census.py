from fractions import Fraction

import mpmath
import pytest

from arith.order_service import has_odd_order
from census.census_service import get_census_service, ord_parity_sieve, pm_count, stufe_census, value_census
from census.density_service import artin_constant, logarithmic_integral, pm_density, residue_class_density
from common.errors import DomainError
from primes.classify_service import get_prime_class_service
from primes.sieve_service import primes_up_to

ARTIN = 0.3739558136


def test_artin_constant():
    assert artin_constant().value == pytest.approx(ARTIN, abs=1e-9)
    assert artin_constant().accelerated
    assert round(artin_constant(1e-3).value, 3) == 0.374


def test_artin_constant_direct_product_is_rough():
    direct = artin_constant(accelerated=False)
    assert not direct.accelerated
    assert 1e-5 < abs(direct.value - ARTIN) < 1e-2
    assert direct.error_bound > 1e-3


def test_artin_constant_rejects_unreachable_precision():
    with pytest.raises(DomainError):
        artin_constant(1e-40)


def test_logarithmic_integral():
    assert logarithmic_integral(2) == 0.0
    for x in (10, 1000, 10**6):
        assert logarithmic_integral(x) == pytest.approx(float(mpmath.li(x, offset=True)), rel=1e-9)


@pytest.mark.parametrize("m, multiple", [(2, "A/2"), (6, "4A/45"), (8, "A/16"), (10, "12A/475")])
def test_pm_density_multiples(m, multiple):
    assert pm_density(m).artin_multiple == multiple


def test_pm_density_values():
    assert pm_density(2).value == pytest.approx(ARTIN / 2, abs=1e-9)
    # N_8 grows like 8A/45 x / log x through P_6
    assert 2 * pm_density(6).value == pytest.approx(8 * ARTIN / 45, abs=1e-9)


@pytest.mark.parametrize("m", [1, 3, 4, 5, 12, 20])
def test_pm_density_empty_classes(m):
    assert pm_density(m).value == 0.0


def test_residue_class_density_closed_form():
    d = residue_class_density(1, 7, 12)
    assert d.artin_multiple == "A/5"
    assert d.value == pytest.approx(ARTIN / 5, abs=1e-9)
    assert "4A/5" in d.note


def test_residue_class_density_normalizes_modulus():
    d = residue_class_density(1, 1, 3)
    assert d.artin_multiple == "A/5"
    assert "2A/5" in d.note


def test_residue_class_density_truncated_product():
    d = residue_class_density(1, 7, 12, truncation=10**4)
    assert not d.accelerated
    assert d.value == pytest.approx(ARTIN / 5, rel=1e-3)


@pytest.mark.parametrize("e, f", [(1, 5), (1, 7), (3, 7), (5, 3), (4, 9)])
def test_residue_class_density_positive_for_coprime_odd_moduli(e, f):
    for a in range(1, f):
        if Fraction(a, f).denominator == f:
            assert residue_class_density(e, a, f).value > 0


@pytest.mark.parametrize("e, a, f", [(2, 1, 5), (1, 1, 4), (1, 7, 8), (1, 3, 3), (0, 1, 3)])
def test_residue_class_density_rejects_hypothesis_violations(e, a, f):
    with pytest.raises(DomainError):
        residue_class_density(e, a, f)


def test_residue_class_density_matches_prime_count():
    svc = get_prime_class_service()
    x = 2 * 10**5
    hits = [p for p in svc.pm_members(2, x) if p % 3 == 1]
    total = len(primes_up_to(x))
    assert len(hits) / total == pytest.approx(ARTIN / 5, rel=0.15)


def test_ord_parity_sieve_small():
    report = ord_parity_sieve(64)
    assert report.counts["N"] == 12
    assert report.counts["N0"] == 52
    assert report.members["N"] == [1, 4, 12, 16, 24, 25, 36, 37, 40, 45, 52, 64]
    assert report.checks["N_plus_N0"]
    assert ord_parity_sieve(5).members["N"] == [1, 4]
    assert ord_parity_sieve(1).counts == {"N": 1, "N0": 0, "P": 0, "P_2x": 0}


def test_ord_parity_sieve_agrees_with_orders():
    report = ord_parity_sieve(3000)
    assert report.members["N"] == [n for n in range(1, 3001) if has_odd_order(2 * n - 1)]


def test_ord_parity_sieve_counts_p():
    report = ord_parity_sieve(2000)
    classes = get_prime_class_service()
    assert report.counts["P"] == len(classes.p_members(2000))
    assert report.counts["P_2x"] == len(classes.p_members(3999))
    assert report.predicted["P"] == pytest.approx(7 / 24 * logarithmic_integral(2000))
    assert report.predicted["P_2x"] == pytest.approx(7 / 24 * logarithmic_integral(3999))


def test_proportion_of_n_decreases():
    ratios = [ord_parity_sieve(x).ratios["N"] for x in (10**3, 10**4, 10**5)]
    assert ratios == sorted(ratios, reverse=True)


def test_ord_parity_sieve_bounds():
    with pytest.raises(DomainError):
        ord_parity_sieve(0)
    with pytest.raises(DomainError):
        ord_parity_sieve(10**7 + 1)


def test_value_census_small():
    report = value_census(64)
    assert report.members["N1"] == [1]
    assert report.members["N2"] == [4, 12, 24, 36, 40, 52]
    assert report.members["N4"] == [25]
    assert report.members["N8"] == [16]
    assert report.members["N16"] == [37, 45]
    assert report.counts["P2"] == 6
    assert report.checks["N2_equals_P2"]


def test_value_census_smallest_members():
    report = value_census(5000)
    assert report.counts["N1"] == 1
    assert report.members["N4"][0] == 25
    assert report.members["N16"][0] == 37
    assert report.checks["N2_equals_P2"]


def test_value_census_rejects_non_powers():
    with pytest.raises(DomainError):
        value_census(100, (2, 6))


def test_n4_and_n8_membership():
    x = 10**5
    report = get_census_service().value_census(x, (4, 8), first=x)
    classes = get_prime_class_service()
    limit = 2 * x - 1
    p2_prime = classes.pm_prime_members(2, limit)
    n4 = sorted((p * p + 1) // 2 for p in p2_prime if p * p <= limit)
    n8 = sorted([(p**3 + 1) // 2 for p in p2_prime if p**3 <= limit] + [(p + 1) // 2 for p in classes.pm_members(6, limit)])
    assert report.members["N4"] == n4
    assert report.members["N8"] == n8


def test_stufe_census_tracks_n():
    report = stufe_census(2000)
    assert report.counts["St4"] == report.counts["N"] - 1
    assert report.checks["St4_equals_N_minus_1"]


def test_pm_count():
    empty = pm_count(3, 10**4)
    assert empty.counts["P3"] == 0
    assert empty.checks["P3_empty"]
    report = pm_count(2, 10**5)
    assert abs(report.ratios["P2_li"] - 1) < 0.1


def test_report_only_ratios():
    svc = get_census_service()
    assert svc.c0_estimate(10**4) > 0
    assert svc.n16_ratio(10**4) > 0


@pytest.mark.slow
def test_p_count_against_li():
    report = ord_parity_sieve(10**6)
    assert abs(report.ratios["P"] - 1) < 0.05


@pytest.mark.slow
@pytest.mark.parametrize("m", [2, 6, 8])
def test_pm_count_at_ten_million(m):
    report = pm_count(m, 10**7)
    assert abs(report.ratios[f"P{m}"] - 1) < 0.1


@pytest.mark.slow
def test_n8_asymptotic_constant():
    report = value_census(10**6, (8,))
    assert abs(report.ratios["N8"] - 1) < 0.25
