import logging
from functools import lru_cache
from math import gcd
from typing import List, Optional

from arith.factor_service import FactorService, get_factor_service, lcm, odd_part
from common.errors import DomainError
from models.arith import OrderRecord

logger = logging.getLogger(__name__)


class OrderService:
    """Multiplicative orders and residual indices.

    The order modulo m is assembled from orders modulo each prime power of m:
    the order mod p comes from stripping prime factors off p - 1, the lift to
    p^e multiplies by p^(e - j) where j is the largest exponent with
    a^ord = 1 (mod p^j), and the pieces are combined with lcm.
    """

    def __init__(self, factor_service: Optional[FactorService] = None):
        self._factors = factor_service or get_factor_service()
        self.prime_power_orders = lru_cache(maxsize=65536)(self._prime_power_orders)

    def _order_mod_prime(self, a: int, p: int) -> int:
        t = p - 1
        for ell, k in self._factors.factorize(p - 1).factors:
            for _ in range(k):
                if pow(a, t // ell, p) == 1:
                    t //= ell
                else:
                    break
        return t

    def _prime_power_orders(self, a: int, p: int, e: int) -> List[int]:
        """Orders of a modulo p, p^2, ..., p^e"""
        if p == 2:
            out = []
            for k in range(1, e + 1):
                mod = 1 << k
                t, x = 1, a % mod
                while x != 1 % mod:
                    x = x * x % mod
                    t *= 2
                out.append(t)
            return out
        t = self._order_mod_prime(a, p)
        j = 1
        while j < e and pow(a, t, p ** (j + 1)) == 1:
            j += 1
        return [t * p ** max(0, k - j) for k in range(1, e + 1)]

    def mult_order(self, a: int, m: int) -> int:
        """Order of a modulo m"""
        if m < 1:
            raise DomainError(f"modulus must be positive, got {m}")
        if m == 1:
            return 1
        if gcd(a, m) != 1:
            raise DomainError(f"{a} is not a unit modulo {m}")
        order = 1
        for p, e in self._factors.factorize(m).factors:
            order = lcm(order, self.prime_power_orders(a % p**e, p, e)[-1])
        return order

    def residual_index(self, q: int, n: int) -> int:
        if n == 1:
            return 1
        return self._factors.phi(n) // self.mult_order(q, n)

    def order_record(self, a: int, m: int) -> OrderRecord:
        order = self.mult_order(a, m)
        return OrderRecord(base=a, modulus=m, order=order, index=self._factors.phi(m) // order)

    def has_odd_order(self, m: int) -> bool:
        """ord_2(m) is odd, for odd m.

        The order divides phi(m), so it is odd exactly when it divides the odd part of phi(m).
        """
        if m % 2 == 0:
            raise DomainError(f"2 is not a unit modulo {m}")
        if m == 1:
            return True
        return pow(2, odd_part(self._factors.phi(m)), m) == 1


_order_service: Optional[OrderService] = None


def get_order_service() -> OrderService:
    global _order_service
    if _order_service is None:
        _order_service = OrderService()
    return _order_service


def mult_order(a: int, m: int) -> int:
    return get_order_service().mult_order(a, m)


def residual_index(q: int, n: int) -> int:
    return get_order_service().residual_index(q, n)


def order_record(a: int, m: int) -> OrderRecord:
    return get_order_service().order_record(a, m)


def has_odd_order(m: int) -> bool:
    return get_order_service().has_odd_order(m)
