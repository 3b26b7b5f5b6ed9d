import logging
from math import gcd
from typing import Iterator, Optional

from arith.factor_service import is_prime
from arith.order_service import OrderService, get_order_service
from common.errors import DomainError
from config.settings import get_settings
from primes.sieve_service import SieveService, get_sieve_service

logger = logging.getLogger(__name__)


class ExchangeService:
    """Hypotheses under which a prime factor can be swapped without changing i_2.

    If (m, 2pq) = 1, r_2(p) = r_2(q) and (ord_2(p), ord_2(m)) = (ord_2(q), ord_2(m)),
    then i_2(pm) = i_2(qm). The generalized form trades p^s for a single prime q
    with r_2(q) equal to r_2(p) + ... + r_2(p^s), provided (p^(s-1), ord_2(m)) = 1.
    """

    def __init__(self, order_service: Optional[OrderService] = None, sieve_service: Optional[SieveService] = None):
        self._orders = order_service or get_order_service()
        self._sieve = sieve_service or get_sieve_service()

    def _check(self, p: int, q: int, m: int):
        for r in (p, q):
            if r < 3 or not is_prime(r):
                raise DomainError(f"{r} is not an odd prime")
        if m < 1:
            raise DomainError(f"m must be positive, got {m}")

    def exchange_hypotheses(self, p: int, q: int, m: int) -> bool:
        self._check(p, q, m)
        if gcd(m, 2 * p * q) != 1:
            return False
        if self._orders.residual_index(2, p) != self._orders.residual_index(2, q):
            return False
        ord_m = self._orders.mult_order(2, m)
        return gcd(self._orders.mult_order(2, p), ord_m) == gcd(self._orders.mult_order(2, q), ord_m)

    def generalized_exchange_hypotheses(self, p: int, s: int, q: int, m: int) -> bool:
        self._check(p, q, m)
        if s < 1:
            raise DomainError(f"s must be positive, got {s}")
        if gcd(m, 2 * p * q) != 1:
            return False
        ord_m = self._orders.mult_order(2, m)
        if gcd(p ** (s - 1), ord_m) != 1:
            return False
        if self._orders.residual_index(2, q) != sum(self._orders.residual_index(2, p**j) for j in range(1, s + 1)):
            return False
        return gcd(self._orders.mult_order(2, p), ord_m) == gcd(self._orders.mult_order(2, q), ord_m)

    def exchange_partners(self, p: int, m: int, bound: Optional[int] = None) -> Iterator[int]:
        """Primes q != p up to bound that may replace p in p * m"""
        bound = bound or get_settings().VOS_SEARCH_BOUND
        index = self._orders.residual_index(2, p)
        for q in self._sieve.iter_primes(3, bound):
            if q != p and (q - 1) % index == 0 and self.exchange_hypotheses(p, q, m):
                yield q


_exchange_service: Optional[ExchangeService] = None


def get_exchange_service() -> ExchangeService:
    global _exchange_service
    if _exchange_service is None:
        _exchange_service = ExchangeService()
    return _exchange_service


def exchange_hypotheses(p: int, q: int, m: int) -> bool:
    return get_exchange_service().exchange_hypotheses(p, q, m)


def generalized_exchange_hypotheses(p: int, s: int, q: int, m: int) -> bool:
    return get_exchange_service().generalized_exchange_hypotheses(p, s, q, m)
