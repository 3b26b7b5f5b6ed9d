import itertools
import random
from math import gcd

import pytest

from arith.cyclotomic_service import i2
from arith.factor_service import lcm
from common.errors import DomainError
from models.tableau import Tableau
from primes.classify_service import p_members
from tableaux.tableau_service import (
    column_bound,
    enumerate_solution_tableaux,
    format_tableau,
    get_tableau_service,
    is_realizable,
    iter_realizations,
    lambda_map,
    max_omega_stats,
    parse_tableau,
    realize_tableau,
    tableau_of,
    tableau_value,
)

EXAMPLE_ONE = Tableau.of([(2, 3), (2, 15), (8, 5)])


@pytest.mark.parametrize("a, expected", [((3, 45), (3, 3)), ((6, 10, 15), (6, 10, 15)), ((4, 2), (2, 2))])
def test_lambda_map(a, expected):
    assert lambda_map(a) == expected


def test_lambda_map_needs_two_entries():
    with pytest.raises(DomainError):
        lambda_map((3,))


@pytest.mark.parametrize("a, expected", [((2, 2), True), ((4, 2), False), ((3, 15, 5), True), ((1, 1), True)])
def test_is_realizable(a, expected):
    assert is_realizable(a) is expected


@pytest.mark.parametrize(
    "m, expected",
    [(79 * 991 * 1721, "(2/3 2/15 8/5)"), (7 * 23, "(2/1 2/1)"), (7 * 631, "(2/3 14/3)")],
)
def test_tableau_of(m, expected):
    assert str(tableau_of(m)) == expected


@pytest.mark.parametrize("m", [7, 49 * 23, 7 * 17, 2 * 7 * 23])
def test_tableau_of_rejects(m):
    with pytest.raises(DomainError):
        tableau_of(m)


@pytest.mark.parametrize(
    "pairs, expected", [([(2, 3), (2, 15), (8, 5)], 601), ([(2, 5), (38, 5)], 421), ([(2, 1), (2, 1)], 9)]
)
def test_tableau_value(pairs, expected):
    assert tableau_value(Tableau.of(pairs)) == expected


def test_parse_and_format():
    assert parse_tableau("(2/3 2/15 8/5)") == EXAMPLE_ONE
    assert parse_tableau("[[8, 5], [2, 3], [2, 15]]") == EXAMPLE_ONE
    assert format_tableau(EXAMPLE_ONE) == "(2/3 2/15 8/5)"
    assert format_tableau(EXAMPLE_ONE, style="json") == "[[2, 3], [2, 15], [8, 5]]"
    for bad in ("2/3 2/15", "(2/3 x/5)", "[[2]]"):
        with pytest.raises(DomainError):
            parse_tableau(bad)


def test_is_solution_tableau():
    service = get_tableau_service()
    generalized_only = Tableau.of([(4, 3), (8, 3)])
    assert not service.is_solution_tableau(generalized_only)
    assert service.is_solution_tableau(generalized_only, generalized=True)
    assert not service.is_solution_tableau(Tableau.of([(2, 3)]))
    assert not service.is_solution_tableau(Tableau.of([(2, 3), (2, 5)]))
    assert service.is_solution_tableau(EXAMPLE_ONE)


def test_enumerate_examples():
    assert Tableau.of([(2, 3), (14, 3)]) in enumerate_solution_tableaux(101)
    assert enumerate_solution_tableaux(5) == []
    assert Tableau.of([(2, 1), (2, 1)]) in enumerate_solution_tableaux(9)
    generalized = enumerate_solution_tableaux(109, generalized=True)
    assert Tableau.of([(4, 3), (8, 3)]) in generalized
    assert Tableau.of([(4, 3), (8, 3)]) not in enumerate_solution_tableaux(109)
    with pytest.raises(DomainError):
        enumerate_solution_tableaux(100)


@pytest.mark.parametrize("r", [101, 109, 157, 173, 197])
def test_two_column_enumeration_matches_direct_search(r):
    # two columns are realizable only with l1 = l2 = l, value 1 + e1 + e2 + e1 e2 l
    direct = set()
    for e1 in range(2, r, 2):
        for e2 in range(e1, r, 2):
            for l in range(1, r, 2):
                if 1 + e1 + e2 + e1 * e2 * l == r:
                    direct.add(((e1, l), (e2, l)))
    enumerated = {tuple(t.pairs()) for t in enumerate_solution_tableaux(r, generalized=True) if len(t.columns) == 2}
    assert enumerated == direct


def test_enumerated_tableaux_are_solutions_within_column_bound():
    service = get_tableau_service()
    for r in range(3, 400, 2):
        for generalized in (False, True):
            for t in enumerate_solution_tableaux(r, generalized):
                assert 2 <= len(t.columns) <= column_bound(r)
                assert service.is_solution_tableau(t, generalized)
                assert tableau_value(t) == r


def test_column_bound():
    assert [column_bound(r) for r in (1, 3, 8, 9, 26, 27, 101)] == [0, 1, 1, 2, 2, 3, 4]


def test_lambda_is_idempotent():
    rng = random.Random(7)
    for _ in range(2000):
        a = tuple(rng.randint(1, 200) for _ in range(rng.randint(2, 5)))
        assert lambda_map(lambda_map(a)) == lambda_map(a)


def test_lambda_image_is_realizable_tuples():
    for s in (2, 3):
        for a in itertools.product(range(1, 13), repeat=s):
            assert is_realizable(lambda_map(a))
            assert (lambda_map(a) == a) == is_realizable(a)


def test_lcm_identity():
    rng = random.Random(11)
    for _ in range(1000):
        a = [rng.randint(1, 500) for _ in range(rng.randint(2, 5))]
        l = lambda_map(a)
        for k in range(2, len(a) + 1):
            for idx in itertools.combinations(range(len(a)), k):
                num = den = 1
                for i in idx:
                    num *= a[i]
                    den *= l[i]
                assert num % den == 0
                assert lcm(*(a[i] for i in idx)) == num // den * lcm(*(l[i] for i in idx))


def _odd_order_squarefree(limit):
    primes = p_members(limit // 7)
    out = []

    def extend(start, m, k):
        if k >= 2:
            out.append(m)
        if k == 3:
            return
        for i in range(start, len(primes)):
            if m * primes[i] > limit:
                break
            extend(i + 1, m * primes[i], k + 1)

    extend(0, 1, 0)
    return out


def test_tableau_value_equals_i2():
    for m in _odd_order_squarefree(10**4):
        assert tableau_value(tableau_of(m)) == i2(m), m


@pytest.mark.slow
def test_tableau_value_equals_i2_desk_scale():
    for m in _odd_order_squarefree(10**5):
        assert tableau_value(tableau_of(m)) == i2(m), m


def test_realize_small_tableau():
    assert realize_tableau(Tableau.of([(2, 1), (2, 1)]), 1000) == (7, 23)


def test_realize_value_601_tableau():
    found = list(iter_realizations(EXAMPLE_ONE, 2000))
    assert (79, 991, 1721) in found
    first = found[0]
    assert tableau_of(first[0] * first[1] * first[2]) == EXAMPLE_ONE
    assert i2(first[0] * first[1] * first[2]) == 601


def test_realize_two_prime_tableau():
    tableau = Tableau.of([(2, 5), (38, 5)])
    assert tableau_of(71 * 174991) == tableau
    primes = realize_tableau(tableau, 200000)
    assert primes is not None
    assert tableau_of(primes[0] * primes[1]) == tableau
    assert i2(primes[0] * primes[1]) == 421


def test_realize_rejects_non_solution():
    with pytest.raises(DomainError):
        realize_tableau(Tableau.of([(4, 3), (8, 3)]), 1000)


def test_realize_returns_none_within_small_bound():
    assert realize_tableau(EXAMPLE_ONE, 100) is None


def test_stats_two_column_target():
    stats = max_omega_stats(50, bound=10**4)
    assert (stats.target, stats.r_mu, stats.min_mu) == (101, 2, 7 * 631)
    assert stats.r_omega1_lower == 2
    assert stats.column_bound == 4 and not stats.omega_exact
    assert 7 * 631 in [w.m for w in stats.witnesses]


def test_stats_sparse_targets():
    stats = max_omega_stats(2, bound=10**4)
    assert (stats.r_mu, stats.r_omega1_lower, stats.r_omega_lower) == (0, 0, 1)
    assert stats.min_mu is None
    assert 49 in [w.m for w in stats.witnesses]
    stats = max_omega_stats(6, bound=10**4)
    assert stats.r_mu == 0
    assert min(w.m for w in stats.witnesses if w.omega == 1) == 31**2


def test_stats_three_columns():
    stats = max_omega_stats(13, bound=10**4)
    assert stats.r_mu == 3
    assert stats.min_mu == 7 * 23 * 47
    assert stats.r_omega_lower == 3 and stats.omega_exact


def test_stats_exponent_reduction():
    stats = max_omega_stats(54, bound=1000)
    assert stats.r_mu == 0
    assert stats.r_omega1_lower == 1
    assert stats.r_omega_lower >= 2
    assert 49 * 73 in [w.m for w in stats.witnesses]


def test_pair_equation_values():
    service = get_tableau_service()
    assert service.pair_equation_values(229) == [101, 157, 197]
    assert service.pair_equation_values(509, restricted=False) == [101, 109, 157, 173, 197, 269, 317, 349, 421, 509]


def test_classify_type():
    service = get_tableau_service()
    assert service.classify_type(23**3 * 47) == "II"
    assert service.classify_type(49 * 73) == "I"
    assert service.classify_type(7 * 23) == "I"


def test_type_two_witnesses():
    service = get_tableau_service()
    found = [w.m for w in service.type_two_witnesses(197, bound=100)]
    assert 23**3 * 47 in found
    assert i2(23**3 * 47) == 197
    for z in (5, 13, 29, 37, 53, 61, 101, 109, 149, 157, 173, 181, 229):
        assert service.type_two_witnesses(z, bound=1000) == []


def test_sparse_values():
    assert get_tableau_service().sparse_values(229) == [5, 13, 29, 37, 53, 61, 149, 181, 229]


def test_gcd_pairs_in_realizations():
    for primes in itertools.islice(iter_realizations(EXAMPLE_ONE, 2000), 5):
        orders = [(p - 1) // e for p, e in zip(primes, EXAMPLE_ONE.e)]
        assert gcd(orders[0], orders[2]) == 1
