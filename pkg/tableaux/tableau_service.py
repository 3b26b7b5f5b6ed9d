"""Solution tableaux.

The tableau of a squarefree m = p_1 ... p_s with every ord_2(p_i) odd records, per prime,
the residual index e_i = r_2(p_i) and l_i, the lcm of the gcds of ord_2(p_i) with the other
orders. i_2(m) depends on the tableau alone:

    i_2(m) = sum over subsets S of prod_{i in S} e_i * prod_{i in S} l_i / lcm_{i in S} l_i

which turns "is r a value of i_2 on integers with s prime factors" into a finite search
over tableaux, followed by a prime search realizing a chosen tableau.
"""
import json
import logging
import re
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from arith.cyclotomic_service import CyclotomicService, get_cyclotomic_service
from arith.factor_service import FactorService, get_factor_service, is_prime, lcm, nu2
from arith.order_service import OrderService, get_order_service
from common.errors import DomainError
from config.settings import get_settings
from models.prime import SearchSpec
from models.tableau import OmegaStats, Tableau, Witness
from primes.classify_service import PrimeClassService, get_prime_class_service
from primes.search_service import PrimeSearchService, get_prime_search_service

logger = logging.getLogger(__name__)

TABLEAU_TEXT = re.compile(r"^\(\s*(\d+\s*/\s*\d+(?:\s+\d+\s*/\s*\d+)*)\s*\)$")

# a column to realize: (e, l, squared)
RealizeColumn = Tuple[int, int, bool]


def column_bound(r: int) -> int:
    """Largest s with 3^s <= r; no tableau of value r has more columns"""
    s, power = 0, 3
    while power <= r:
        s += 1
        power *= 3
    return s


def _add_column(subsets: List[Tuple[int, int, int]], e: int, l: int) -> List[Tuple[int, int, int]]:
    """Extend the (prod e, prod l, lcm l) records of all nonempty subsets by one column"""
    return subsets + [(e, l, l)] + [(pe * e, pl * l, lcm(ll, l)) for pe, pl, ll in subsets]


def _subset_sum(subsets: List[Tuple[int, int, int]]) -> int:
    return 1 + sum(pe * pl // ll for pe, pl, ll in subsets)


def format_tableau(tableau: Tableau, style: str = "text") -> str:
    if style == "json":
        return json.dumps([list(p) for p in tableau.pairs()])
    return str(tableau)


class TableauService:
    """Tableau calculus for i_2 values: lambda map, enumeration and realization by primes"""

    def __init__(
        self,
        factor_service: Optional[FactorService] = None,
        order_service: Optional[OrderService] = None,
        cyclotomic_service: Optional[CyclotomicService] = None,
        prime_class_service: Optional[PrimeClassService] = None,
        prime_search_service: Optional[PrimeSearchService] = None,
    ):
        self._factors = factor_service or get_factor_service()
        self._orders = order_service or get_order_service()
        self._cyclotomic = cyclotomic_service or get_cyclotomic_service()
        self._classes = prime_class_service or get_prime_class_service()
        self._search = prime_search_service or get_prime_search_service()
        self._realize_bound = get_settings().VOS_REALIZE_BOUND

    # -- lambda map -------------------------------------------------------------------

    def lambda_map(self, a: Sequence[int]) -> Tuple[int, ...]:
        """l_i = lcm over j != i of gcd(a_j, a_i)"""
        if len(a) < 2:
            raise DomainError(f"lambda needs at least two entries, got {len(a)}")
        if any(x < 1 for x in a):
            raise DomainError(f"entries must be positive: {tuple(a)}")
        return tuple(lcm(*(gcd(a[j], a[i]) for j in range(len(a)) if j != i)) for i in range(len(a)))

    def is_realizable(self, a: Sequence[int]) -> bool:
        """Every prime's largest exponent among the entries is attained at least twice"""
        if len(a) < 2:
            raise DomainError(f"realizability needs at least two entries, got {len(a)}")
        exponents: Dict[int, List[int]] = {}
        for i, x in enumerate(a):
            if x < 1:
                raise DomainError(f"entries must be positive: {tuple(a)}")
            for p, k in self._factors.factorize(x).factors:
                exponents.setdefault(p, [0] * len(a))[i] = k
        for p, ks in exponents.items():
            top = max(ks)
            if ks.count(top) < 2:
                return False
        return True

    # -- tableaux of integers ---------------------------------------------------------

    def tableau_of(self, m: int) -> Tableau:
        fac = self._factors.factorize(m) if m >= 1 else None
        if fac is None or m % 2 == 0:
            raise DomainError(f"{m} is not a positive odd integer")
        if any(k > 1 for _, k in fac.factors):
            raise DomainError(f"{m} = {fac} is not squarefree")
        if len(fac.factors) < 2:
            raise DomainError(f"{m} needs at least two prime factors")
        orders = [self._orders.mult_order(2, p) for p in fac.primes]
        if any(o % 2 == 0 for o in orders):
            raise DomainError(f"ord_2({m}) is even")
        ls = self.lambda_map(orders)
        return Tableau.of(((p - 1) // o, l) for p, o, l in zip(fac.primes, orders, ls))

    def tableau_value(self, tableau: Tableau) -> int:
        subsets: List[Tuple[int, int, int]] = []
        for e, l in tableau.pairs():
            subsets = _add_column(subsets, e, l)
        return _subset_sum(subsets)

    def is_solution_tableau(self, tableau: Tableau, generalized: bool = False) -> bool:
        if len(tableau.columns) < 2:
            return False
        for e, l in tableau.pairs():
            if e < 2 or e % 2 or l < 1 or l % 2 == 0:
                return False
            if not generalized and nu2(e) == 2:
                return False
        return self.is_realizable(tableau.l)

    def parse_tableau(self, text: str) -> Tableau:
        """Read "(e1/l1 e2/l2 ...)" or a JSON array of [e, l] pairs"""
        text = text.strip()
        if text.startswith("["):
            try:
                pairs = [(int(e), int(l)) for e, l in json.loads(text)]
            except (ValueError, TypeError) as err:
                raise DomainError(f"malformed tableau {text!r}") from err
            return Tableau.of(pairs)
        match = TABLEAU_TEXT.match(text)
        if not match:
            raise DomainError(f"malformed tableau {text!r}")
        pairs = []
        for column in match.group(1).split():
            e, l = column.split("/")
            pairs.append((int(e), int(l)))
        return Tableau.of(pairs)

    # -- enumeration --------------------------------------------------------------------

    def _allowed(self, e: int, generalized: bool) -> bool:
        return e % 2 == 0 and (generalized or nu2(e) != 2)

    def _exponent_tuples(self, s: int, r: int, generalized: bool) -> Iterator[Tuple[int, ...]]:
        """Non-decreasing even (e_1, ..., e_s) with prod (1 + e_i) <= r"""

        def extend(prefix: Tuple[int, ...], budget: int, low: int):
            if len(prefix) == s:
                yield prefix
                return
            rest = s - len(prefix) - 1
            e = low
            while (1 + e) * 3**rest <= budget:
                if self._allowed(e, generalized):
                    yield from extend(prefix + (e,), budget // (1 + e), e)
                e += 2

        yield from extend((), r, 2)

    def _tableaux_with_exponents(self, es: Tuple[int, ...], r: int) -> List[Tableau]:
        s = len(es)
        prod_e = prod_1e = 1
        for e in es:
            prod_e *= e
            prod_1e *= 1 + e
        # the full-subset term is at least prod_e * lcm(l)
        lcm_cap = (r - prod_1e + prod_e) // prod_e
        found: List[Tableau] = []

        def extend(ls: List[int], subsets, inner_1e: int, lcm_l: int):
            k = len(ls)
            if k == s - 1:
                # a realizable tuple has each entry dividing the lcm of the others
                for l in self._factors.divisors(lcm_l):
                    if es[k] == es[k - 1] and l < ls[-1]:
                        continue
                    cand = ls + [l]
                    if not self.is_realizable(cand):
                        continue
                    if _subset_sum(_add_column(subsets, es[k], l)) == r:
                        found.append(Tableau.of(zip(es, cand)))
                return
            start = ls[-1] if k and es[k] == es[k - 1] else 1
            for l in range(start, lcm_cap + 1, 2):
                new_lcm = lcm(lcm_l, l)
                if new_lcm > lcm_cap:
                    continue
                grown = _add_column(subsets, es[k], l)
                grown_1e = inner_1e * (1 + es[k])
                lower = _subset_sum(grown) + (prod_1e - grown_1e) + prod_e * (new_lcm - 1)
                if lower > r:
                    continue
                extend(ls + [l], grown, grown_1e, new_lcm)

        extend([], [], 1, 1)
        return found

    def enumerate_solution_tableaux(self, r: int, generalized: bool = False) -> List[Tableau]:
        """All (generalized) solution tableaux with at least two columns and value r"""
        if r % 2 == 0 or r < 3:
            raise DomainError(f"target must be odd and at least 3, got {r}")
        found: List[Tableau] = []
        for s in range(2, column_bound(r) + 1):
            for es in self._exponent_tuples(s, r, generalized):
                found.extend(self._tableaux_with_exponents(es, r))
        found = sorted(set(found), key=lambda t: (len(t.columns), t.pairs()))
        logger.debug(f"[TABLEAU] r={r} generalized={generalized}: {len(found)} tableaux")
        return found

    # -- realization ----------------------------------------------------------------------

    def _column_spec(self, columns: List[RealizeColumn], i: int, bound: int) -> SearchSpec:
        e, l, squared = columns[i]
        forbidden = set()
        # a prime of another column's l may not divide this order unless it divides l_i
        for j, (_, other, _) in enumerate(columns):
            if j != i:
                for ell in self._factors.factorize(other).primes:
                    if l % ell:
                        forbidden.add((1, e * ell))
        return SearchSpec(
            index_m=e,
            required=[(1, e * l)],
            forbidden=sorted(forbidden),
            non_wieferich_at_m=squared,
            bound=bound,
        )

    def _candidates(self, columns: List[RealizeColumn], bound: int) -> List[List[Tuple[int, int]]]:
        out = []
        for i in range(len(columns)):
            primes = list(self._search.iter_constrained_primes(self._column_spec(columns, i, bound)))
            logger.debug(f"[REALIZE] column {i + 1} {columns[i]} has {len(primes)} candidates")
            out.append([(p, (p - 1) // columns[i][0]) for p in primes])
        return out

    def _walk(self, columns: List[RealizeColumn], bound: int, best: Optional[List[int]] = None) -> Iterator[Tuple[int, ...]]:
        """Prime tuples realizing columns, in column order; with best, only improving products"""
        cands = self._candidates(columns, bound)
        ls = [l for _, l, _ in columns]
        s = len(columns)

        def extend(chosen: List[int], orders: List[int], weight: int):
            k = len(chosen)
            if k == s:
                if self.lambda_map(orders) == tuple(ls):
                    yield tuple(chosen)
                return
            power = 2 if columns[k][2] else 1
            for p, o in cands[k]:
                if best is not None and weight * p**power >= best[0]:
                    break
                if p in chosen or (k and columns[k] == columns[k - 1] and p <= chosen[-1]):
                    continue
                if any(gcd(ls[k], ls[j]) % gcd(o, orders[j]) for j in range(k)):
                    continue
                yield from extend(chosen + [p], orders + [o], weight * p**power)

        yield from extend([], [], 1)

    def iter_realizations(self, tableau: Tableau, bound: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
        """Prime tuples, one per column, whose product has the given tableau"""
        if not self.is_solution_tableau(tableau):
            raise DomainError(f"{tableau} is not a solution tableau")
        bound = bound or self._realize_bound
        columns = [(e, l, False) for e, l in tableau.pairs()]
        yield from self._walk(columns, bound)

    def realize_tableau(self, tableau: Tableau, bound: Optional[int] = None) -> Optional[Tuple[int, ...]]:
        return next(self.iter_realizations(tableau, bound), None)

    def _smallest(self, columns: List[RealizeColumn], bound: int) -> Optional[Tuple[int, ...]]:
        best = [bound**len(columns) * bound**sum(c[2] for c in columns) + 1]
        found = None
        for primes in self._walk(columns, bound, best):
            weight = 1
            for p, (_, _, squared) in zip(primes, columns):
                weight *= p ** (2 if squared else 1)
            if weight < best[0]:
                best[0], found = weight, primes
        return found

    # -- statistics ------------------------------------------------------------------------

    def _witness(self, m: int, tableau: Optional[Tableau] = None) -> Witness:
        fn = self._factors.arithmetic_functions(m)
        return Witness(
            m=m,
            factorization=str(self._factors.factorize(m)),
            omega=fn.omega,
            omega1=fn.omega1,
            i2=self._cyclotomic.irreducible_count(2, m),
            tableau=None if tableau is None else str(tableau),
        )

    def max_omega_stats(self, e: int, bound: Optional[int] = None) -> OmegaStats:
        """How many prime factors 2n - 1 can have when S(n) = 2^e, with witnesses up to bound"""
        if e < 1:
            raise DomainError(f"e must be positive, got {e}")
        bound = bound or self._realize_bound
        r = 1 + 2 * e
        restricted = self.enumerate_solution_tableaux(r) if r >= 3 else []
        generalized = self.enumerate_solution_tableaux(r, generalized=True) if r >= 3 else []

        # a single prime of P_2e exists exactly when nu_2(2e) != 2
        r_mu = max([len(t.columns) for t in restricted] + [1 if nu2(2 * e) != 2 else 0])

        witnesses: Dict[int, Witness] = {}
        p = self._search.constrained_prime_search(SearchSpec(index_m=2 * e, bound=bound))
        if p is not None:
            witnesses[p] = self._witness(p)
        for k in self._factors.divisors(2 * e):
            index = 2 * e // k
            if k < 2 or index % 2 or nu2(index) == 2:
                continue
            p = self._search.constrained_prime_search(SearchSpec(index_m=index, non_wieferich_at_m=True, bound=bound))
            if p is not None and self._cyclotomic.irreducible_count(2, p**k) == r:
                witnesses[p**k] = self._witness(p**k)
        for tableau in generalized:
            # columns with nu_2(f) = 2 come from squares p^2 with r_2(p) = f/2
            columns = [(f // 2, l, True) if nu2(f) == 2 else (f, l, False) for f, l in tableau.pairs()]
            columns.sort()
            primes = self._smallest(columns, bound)
            if primes is None:
                continue
            m = 1
            for q, (_, _, squared) in zip(primes, columns):
                m *= q ** (2 if squared else 1)
            if self._cyclotomic.irreducible_count(2, m) != r:
                logger.warning(f"[STATS] {m} realizes {tableau} but i_2 differs from {r}")
                continue
            witnesses[m] = self._witness(m, tableau)

        ranked = sorted(witnesses.values(), key=lambda w: (-w.omega, -w.omega1, w.m))
        squarefree = [w for w in ranked if w.omega == w.omega1 == r_mu]
        r_omega_lower = max((w.omega for w in ranked), default=0)
        cb = column_bound(r)
        logger.info(f"[STATS] e={e}: r_mu={r_mu}, {len(ranked)} witnesses up to {bound}")
        return OmegaStats(
            e=e,
            target=r,
            r_mu=r_mu,
            min_mu=min((w.m for w in squarefree), default=None) if r_mu else None,
            r_omega1_lower=max((w.omega1 for w in ranked), default=0),
            r_omega_lower=r_omega_lower,
            column_bound=cb,
            omega_exact=r_omega_lower == cb and cb > 0,
            witnesses=ranked,
        )

    # -- the two-prime equation and type II integers ------------------------------------------

    def pair_equation_values(self, z_max: int, restricted: bool = True) -> List[int]:
        """Primes z = 5 (mod 8) up to z_max with 1 + 2e1 + 2e2 + 4 e1 e2 w = z, w >= 3 odd"""
        found = set()
        e1 = 1
        while 1 + 2 * e1 + 2 * e1 + 12 * e1 * e1 <= z_max:
            e2 = e1
            while 1 + 2 * e1 + 2 * e2 + 12 * e1 * e2 <= z_max:
                if not restricted or (nu2(e1) != 1 and nu2(e2) != 1):
                    w = 3
                    while True:
                        z = 1 + 2 * e1 + 2 * e2 + 4 * e1 * e2 * w
                        if z > z_max:
                            break
                        if z % 8 == 5 and is_prime(z):
                            found.add(z)
                        w += 2
                e2 += 1
            e1 += 1
        return sorted(found)

    def classify_type(self, m: int) -> str:
        """Type "II" when some p^k || m with k >= 2 has p dividing ord_2 of another prime factor"""
        if m < 1 or m % 2 == 0:
            raise DomainError(f"{m} is not a positive odd integer")
        factors = self._factors.factorize(m).factors
        for p, k in factors:
            if k < 2:
                continue
            for q, _ in factors:
                if q != p and self._orders.mult_order(2, q) % p == 0:
                    return "II"
        return "I"

    def type_two_witnesses(self, r: int, bound: Optional[int] = None) -> List[Witness]:
        """p^a q^b of type II with i_2 = r; type II forces i_2 >= 11 + 4 min(p, q)"""
        if r % 2 == 0:
            raise DomainError(f"target must be odd, got {r}")
        bound = bound or self._realize_bound
        small = self._classes.p_members((r - 11) // 4)
        others = self._classes.p_members(bound)
        i2 = lambda n: self._cyclotomic.irreducible_count(2, n)
        found: Dict[int, Witness] = {}
        for p in small:
            ord_p = self._orders.mult_order(2, p)
            for q in others:
                if q == p:
                    continue
                ord_q = self._orders.mult_order(2, q)
                if ord_q % p and ord_p % q:
                    continue
                a = 1
                while i2(p**a * q) <= r:
                    b = 1
                    while True:
                        m = p**a * q**b
                        value = i2(m)
                        if value > r:
                            break
                        if value == r and ((a >= 2 and ord_q % p == 0) or (b >= 2 and ord_p % q == 0)):
                            found[m] = self._witness(m)
                        b += 1
                    a += 1
        return sorted(found.values(), key=lambda w: w.m)

    def sparse_values(self, r_max: int, bound: int = 10**4) -> List[int]:
        """Odd r <= r_max with no known source of an integer with omega_1 >= 1 and i_2 = r.

        Sources: a prime of P_{r-1} (nu_2(r - 1) != 2), the 7^a q construction for composite
        r = 5 (mod 8), generalized solution tableaux having a column with nu_2(e) != 2, and
        type II integers p^a q^b with q <= bound.
        """
        sparse = []
        for r in range(3, r_max + 1, 2):
            if r % 8 != 5 or not is_prime(r):
                continue
            tableaux = self.enumerate_solution_tableaux(r, generalized=True)
            if any(any(nu2(e) != 2 for e in t.e) for t in tableaux):
                continue
            if any(w.omega1 >= 1 for w in self.type_two_witnesses(r, bound)):
                continue
            sparse.append(r)
        logger.info(f"[SPARSE] up to {r_max}: {sparse}")
        return sparse


_tableau_service: Optional[TableauService] = None


def get_tableau_service() -> TableauService:
    global _tableau_service
    if _tableau_service is None:
        _tableau_service = TableauService()
    return _tableau_service


def lambda_map(a: Sequence[int]) -> Tuple[int, ...]:
    return get_tableau_service().lambda_map(a)


def is_realizable(a: Sequence[int]) -> bool:
    return get_tableau_service().is_realizable(a)


def tableau_of(m: int) -> Tableau:
    return get_tableau_service().tableau_of(m)


def tableau_value(tableau: Tableau) -> int:
    return get_tableau_service().tableau_value(tableau)


def parse_tableau(text: str) -> Tableau:
    return get_tableau_service().parse_tableau(text)


def enumerate_solution_tableaux(r: int, generalized: bool = False) -> List[Tableau]:
    return get_tableau_service().enumerate_solution_tableaux(r, generalized)


def iter_realizations(tableau: Tableau, bound: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    return get_tableau_service().iter_realizations(tableau, bound)


def realize_tableau(tableau: Tableau, bound: Optional[int] = None) -> Optional[Tuple[int, ...]]:
    return get_tableau_service().realize_tableau(tableau, bound)


def max_omega_stats(e: int, bound: Optional[int] = None) -> OmegaStats:
    return get_tableau_service().max_omega_stats(e, bound)
