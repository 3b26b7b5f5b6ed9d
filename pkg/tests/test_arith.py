import random
from math import gcd

import pytest

from arith.cyclotomic_service import i2, irreducible_count, stufe_level, ulmer_rank
from arith.factor_service import (
    SMALL_PRIMES,
    arithmetic_functions,
    crt,
    divisors,
    factorize,
    is_prime,
    nu,
    phi,
)
from arith.order_service import has_odd_order, mult_order, order_record, residual_index
from common.errors import DomainError, InconsistentCongruencesError


def naive_order(a, m):
    if m == 1:
        return 1
    x, k = a % m, 1
    while x != 1:
        x = x * a % m
        k += 1
    return k


@pytest.mark.parametrize(
    "n, expected",
    [
        (1, []),
        (49, [(7, 2)]),
        (174990, [(2, 1), (3, 1), (5, 1), (19, 1), (307, 1)]),
        (248407**2, [(248407, 2)]),
        (7**14 * 73, [(7, 14), (73, 1)]),
    ],
)
def test_factorize_examples(n, expected):
    assert factorize(n).factors == expected


def test_factorize_large_semiprime_uses_rho():
    p, q = 1000003, 998244353
    assert factorize(p * q).factors == [(p, 1), (q, 1)]
    n = (2**61 - 1) * 3
    assert factorize(n).factors == [(3, 1), (2**61 - 1, 1)]


def test_trial_division_reaches_a_million():
    assert SMALL_PRIMES[-1] == 999983
    assert len(SMALL_PRIMES) == 78498
    assert factorize(999983 * 1000003).factors == [(999983, 1), (1000003, 1)]
    assert factorize(999979 * 999983).factors == [(999979, 1), (999983, 1)]


def test_factorize_rejects_zero():
    with pytest.raises(DomainError):
        factorize(0)


def test_factorization_invariants_random():
    rng = random.Random(7)
    for _ in range(200):
        n = rng.randrange(1, 10**12)
        fac = factorize(n)
        prod = 1
        for p, e in fac.factors:
            assert is_prime(p) and e >= 1
            prod *= p**e
        assert prod == n
        assert fac.primes == sorted(fac.primes)


def test_is_prime_small_range():
    naive = [n for n in range(2, 2000) if all(n % d for d in range(2, int(n**0.5) + 1))]
    assert [n for n in range(2000) if is_prime(n)] == naive
    assert not is_prime(3215031751)
    assert is_prime(2**61 - 1)


@pytest.mark.parametrize(
    "n, phi_, mu, omega, omega1",
    [(12, 4, 0, 2, 1), (1, 1, 1, 0, 0), (105, 48, -1, 3, 3)],
)
def test_arithmetic_functions(n, phi_, mu, omega, omega1):
    rec = arithmetic_functions(n)
    assert (rec.phi, rec.moebius, rec.omega, rec.omega1) == (phi_, mu, omega, omega1)


def test_divisors_and_nu():
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(1) == [1]
    assert nu(2, 48) == 4
    assert nu(3, 48) == 1
    assert nu(5, 48) == 0


def test_crt_combines_and_rejects():
    assert crt([(1, 3), (2, 5)]) == (7, 15)
    assert crt([(1, 4), (3, 6)]) == (9, 12)
    assert crt([]) == (0, 1)
    with pytest.raises(InconsistentCongruencesError):
        crt([(1, 4), (2, 6)])


@pytest.mark.parametrize("a, m, expected", [(2, 7, 3), (2, 23, 11), (2, 17, 8), (2, 1, 1)])
def test_mult_order_examples(a, m, expected):
    assert mult_order(a, m) == expected


def test_mult_order_matches_naive_oracle():
    for m in range(1, 10**4, 2):
        assert mult_order(2, m) == naive_order(2, m), m
    for m in range(1, 2000):
        if gcd(3, m) == 1:
            assert mult_order(3, m) == naive_order(3, m), m


def test_mult_order_rejects_non_units():
    with pytest.raises(DomainError):
        mult_order(2, 6)


@pytest.mark.parametrize("q, n, expected", [(2, 7, 2), (2, 73, 8), (2, 1, 1)])
def test_residual_index(q, n, expected):
    assert residual_index(q, n) == expected


def test_order_record():
    rec = order_record(2, 73)
    assert rec.order == 9 and rec.index == 8


@pytest.mark.parametrize(
    "n, expected",
    [(1, 1), (7, 3), (49, 5), (79 * 991 * 1721, 601), (9, 3)],
)
def test_i2_examples(n, expected):
    assert i2(n) == expected


@pytest.mark.parametrize(
    "m, expected",
    [
        (7**2, 5),
        (31**2, 13),
        (631**2, 29),
        (127**2, 37),
        (14327**2, 53),
        (3391**2, 61),
        (7 * 631, 101),
        (7**2 * 73, 109),
        (11471**2, 149),
        (71 * 631, 157),
        (71**2 * 1721, 173),
        (23671**2, 181),
        (151 * 919, 197),
        (7**3 * 151, 197),
        (23**3 * 47, 197),
        (248407**2, 229),
        (7**2 * 71 * 191, 389),
        (71**2 * 191 * 271, 509),
        (7**14 * 73, 709),
    ],
)
def test_i2_of_sparse_witnesses(m, expected):
    assert i2(m) == expected


def test_irreducible_count_other_fields():
    assert irreducible_count(4, 5) == 3
    assert irreducible_count(3, 8) == sum(phi(d) // mult_order(3, d) for d in divisors(8))
    with pytest.raises(DomainError):
        irreducible_count(6, 5)
    with pytest.raises(DomainError):
        irreducible_count(2, 6)


@pytest.mark.parametrize("q, d, expected", [(2, 5, 2), (4, 5, 3), (2, 1, 1)])
def test_ulmer_rank(q, d, expected):
    assert ulmer_rank(q, d) == expected


def test_ulmer_rank_rejects_multiples_of_three():
    with pytest.raises(DomainError):
        ulmer_rank(2, 9)


@pytest.mark.parametrize("m, expected", [(12, 1), (7, 4), (5, 2), (1, None), (2, None), (14, 4), (10, 2)])
def test_stufe_level(m, expected):
    assert stufe_level(m) == expected


def test_stufe_four_iff_odd_order():
    for m in range(3, 3000, 2):
        assert (stufe_level(m) == 4) == (naive_order(2, m) % 2 == 1)
        assert has_odd_order(m) == (naive_order(2, m) % 2 == 1)


def test_residual_index_divisibility():
    for d in range(1, 600, 2):
        for delta in divisors(d):
            assert residual_index(2, d) % residual_index(2, delta) == 0


def test_order_lifting():
    for p in [q for q in range(3, 100) if is_prime(q)]:
        if mult_order(2, p) == mult_order(2, p * p):
            continue
        for e in range(1, 5):
            assert mult_order(2, p**e) == p ** (e - 1) * mult_order(2, p)


def test_product_inequalities():
    rng = random.Random(11)
    checked = 0
    while checked < 500:
        n1 = rng.randrange(1, 1000, 2)
        n2 = rng.randrange(1, 1000, 2)
        if gcd(n1, n2) != 1 or n1 * n2 > 10**6:
            continue
        prod, a, b = i2(n1 * n2), i2(n1), i2(n2)
        assert prod >= a * b
        assert prod >= a + b - 1
        if gcd(mult_order(2, n1), mult_order(2, n2)) == 1:
            assert prod == a * b
        checked += 1


def test_odd_order_gives_odd_count():
    for m in range(3, 5000, 2):
        if has_odd_order(m):
            assert i2(m) % 2 == 1
