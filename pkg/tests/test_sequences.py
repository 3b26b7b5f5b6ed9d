import itertools

import pytest

from arith.factor_service import factorize
from arith.order_service import has_odd_order, mult_order
from common.errors import DomainError, SizeError
from gf2poly.polynomial import Gf2Poly
from models.sequence import BitSequence
from sequences.sequence_service import (
    autocorrelation_profile,
    brute_force_vos,
    enumerate_vos,
    get_sequence_service,
    is_periodic,
    is_very_odd,
    s_count,
    sequence_polynomial,
    tensor,
)

COUNTEREXAMPLE = "101011100011"


def bits(seqs):
    return {s.bits for s in seqs}


@pytest.mark.parametrize(
    "s, expected",
    [
        (COUNTEREXAMPLE, [7, 3, 3, 1, 3, 3, 3, 1, 1, 1, 1, 1]),
        ("1", [1]),
        ("1101", [3, 1, 1, 1]),
    ],
)
def test_autocorrelation_profile(s, expected):
    assert autocorrelation_profile(s).values == expected


@pytest.mark.parametrize("s, expected", [(COUNTEREXAMPLE, True), ("11", False), ("1", True), ("1011", True)])
def test_is_very_odd(s, expected):
    assert is_very_odd(s) is expected


def test_bit_sequence_validation():
    with pytest.raises(ValueError):
        BitSequence(bits="10a1")


@pytest.mark.parametrize(
    "n, expected",
    [(4, 2), (12, 2), (16, 8), (24, 2), (25, 4), (36, 2), (37, 16), (40, 2), (45, 16), (52, 2), (64, 512)],
)
def test_table_one_counts(n, expected):
    assert s_count(n) == expected


def test_small_counts():
    assert s_count(1) == 1
    assert s_count(2) == 0
    assert s_count(5) == 0


def test_count_record_carries_exponent():
    record = get_sequence_service().count(64)
    assert record.exponent == 9 and record.i2 == 19
    assert get_sequence_service().count(2).exponent is None


def test_enumerate_examples():
    assert bits(enumerate_vos(4)) == {"1101", "1011"}
    assert enumerate_vos(2) == []
    twelve = bits(enumerate_vos(12))
    assert len(twelve) == 2 and COUNTEREXAMPLE in twelve


def test_first_vos_needs_no_enumeration():
    svc = get_sequence_service()
    assert svc.first_vos(2) is None
    first = svc.first_vos(64)
    assert is_very_odd(first) and first.length == 64
    assert svc.first_vos(12).bits in bits(enumerate_vos(12))


def test_enumerate_cap_reports_exact_count():
    with pytest.raises(SizeError) as info:
        enumerate_vos(64, cap=100)
    assert info.value.count == 512
    assert info.value.exponent == 9


@pytest.mark.parametrize("n, expected", [(4, {"1101", "1011"}), (1, {"1"}), (5, set())])
def test_brute_force_examples(n, expected):
    assert bits(brute_force_vos(n)) == expected


def test_brute_force_limit():
    with pytest.raises(SizeError):
        brute_force_vos(26)


@pytest.mark.parametrize("n", range(1, 19))
def test_enumeration_matches_brute_force(n):
    enumerated = enumerate_vos(n)
    assert len(enumerated) == len(bits(enumerated)) == s_count(n)
    assert bits(enumerated) == bits(brute_force_vos(n))


@pytest.mark.slow
@pytest.mark.parametrize("n", range(19, 23))
def test_enumeration_matches_brute_force_desk_scale(n):
    assert bits(enumerate_vos(n)) == bits(brute_force_vos(n))


def test_factorization_identity_for_enumerated_sequences():
    for n in (4, 12, 16, 25, 37):
        target = Gf2Poly.x_power_plus_one(2 * n - 1)
        for s in enumerate_vos(n):
            b = sequence_polynomial(s)
            assert Gf2Poly(3) * b * b.reciprocal() == target


def test_enumerated_sequences_are_not_periodic():
    for n in range(2, 41):
        for s in enumerate_vos(n):
            assert is_very_odd(s)
            assert not is_periodic(s)


def test_positive_count_iff_odd_order_primes():
    for n in range(1, 3000):
        m = 2 * n - 1
        by_primes = all(mult_order(2, p) % 2 == 1 for p in factorize(m).primes)
        assert (s_count(n) > 0) == by_primes


def test_positive_count_forces_residue_mod_eight():
    for n in range(1, 10**4):
        if has_odd_order(2 * n - 1):
            assert (2 * n - 1) % 8 in (1, 7)
            assert n % 4 in (0, 1)


def test_tensor_examples():
    product = tensor("1101", "1101")
    assert product.length == 25 and is_very_odd(product)
    assert tensor("1", "1101").bits == "1101"
    for a in enumerate_vos(12):
        assert tensor(a, "1101").length == 7 * 12 - 3


def test_tensor_rejects_non_very_odd():
    with pytest.raises(DomainError):
        tensor("11", "1101")


def test_tensor_is_injective():
    left, right = enumerate_vos(4), enumerate_vos(12)
    outputs = [tensor(a, b).bits for a, b in itertools.product(left, right)]
    assert len(set(outputs)) == len(outputs) == 4


def test_count_is_supermultiplicative_under_tensor():
    for m in range(1, 41):
        for n in range(1, 41):
            assert s_count(2 * m * n - n - m + 1) >= s_count(m) * s_count(n)


@pytest.mark.parametrize("s, expected", [("110110", True), (COUNTEREXAMPLE, False), ("1", False), ("11", True)])
def test_is_periodic(s, expected):
    assert is_periodic(s) is expected


def test_square_law():
    service = get_sequence_service()
    for n in range(2, 201):
        assert service.square_law_holds(n) == service.square_law_criterion(n), n


def test_alles_successor_keeps_very_odd():
    service = get_sequence_service()
    s = service.alles_successor(COUNTEREXAMPLE)
    assert s.length == 81 and is_very_odd(s)
