import logging
from math import gcd
from typing import Optional

from arith.factor_service import FactorService, get_factor_service, lcm
from arith.order_service import OrderService, get_order_service
from common.errors import DomainError
from config.settings import get_settings
from models.arith import UlmerRank

logger = logging.getLogger(__name__)


class CyclotomicService:
    """Counting irreducible factors of X^n - 1 over the q-element field, and what derives from it"""

    def __init__(
        self,
        factor_service: Optional[FactorService] = None,
        order_service: Optional[OrderService] = None,
    ):
        self._factors = factor_service or get_factor_service()
        self._orders = order_service or get_order_service()

    def _check_prime_power(self, q: int) -> int:
        fac = self._factors.factorize(q) if q >= 2 else None
        if fac is None or len(fac.factors) != 1:
            raise DomainError(f"{q} is not a prime power")
        return fac.factors[0][0]

    def irreducible_count(self, q: int, n: int) -> int:
        """i_q(n) = sum over d | n of phi(d) / ord_q(d)"""
        self._check_prime_power(q)
        if n < 1:
            raise DomainError(f"n must be positive, got {n}")
        if gcd(q, n) != 1:
            raise DomainError(f"gcd({q}, {n}) != 1")
        # (phi(d), ord_q(d)) for every divisor d, built one prime power at a time
        terms = [(1, 1)]
        for p, e in self._factors.factorize(n).factors:
            orders = self._orders.prime_power_orders(q % p**e, p, e)
            grown = []
            for phi_d, ord_d in terms:
                grown.append((phi_d, ord_d))
                for k in range(1, e + 1):
                    grown.append((phi_d * p ** (k - 1) * (p - 1), lcm(ord_d, orders[k - 1])))
            terms = grown
        return sum(phi_d // ord_d for phi_d, ord_d in terms)

    def ulmer_record(self, q: int, d: int) -> UlmerRank:
        p = self._check_prime_power(q)
        if d < 1 or gcd(d, 6 * q) != 1:
            raise DomainError(f"rank formula needs gcd(d, 6q) = 1, got d={d}, q={q}")
        witness: Optional[int] = 1
        if d > 1:
            order = self._orders.mult_order(p, d)
            bound = get_settings().VOS_ULMER_SEARCH_BOUND
            if order % 2 == 0 and order // 2 <= bound and pow(p, order // 2, d) == d - 1:
                witness = order // 2
            else:
                witness = None
                logger.warning(f"[ULMER] no n <= {bound} with {d} | {p}^n + 1; rank formula may not apply")
        return UlmerRank(q=q, d=d, rank=self.irreducible_count(q, d), witness_exponent=witness)

    def ulmer_rank(self, q: int, d: int) -> int:
        return self.ulmer_record(q, d).rank

    def stufe_level(self, m: int) -> Optional[int]:
        """Level of the m-th cyclotomic field, None for the orderable cases m = 1, 2"""
        if m < 1:
            raise DomainError(f"m must be positive, got {m}")
        if m % 4 == 0:
            return 1
        if m % 2 == 0:
            m //= 2
        if m == 1:
            return None
        return 4 if self._orders.has_odd_order(m) else 2


_cyclotomic_service: Optional[CyclotomicService] = None


def get_cyclotomic_service() -> CyclotomicService:
    global _cyclotomic_service
    if _cyclotomic_service is None:
        _cyclotomic_service = CyclotomicService()
    return _cyclotomic_service


def irreducible_count(q: int, n: int) -> int:
    return get_cyclotomic_service().irreducible_count(q, n)


def i2(n: int) -> int:
    return get_cyclotomic_service().irreducible_count(2, n)


def ulmer_rank(q: int, d: int) -> int:
    return get_cyclotomic_service().ulmer_rank(q, d)


def stufe_level(m: int) -> Optional[int]:
    return get_cyclotomic_service().stufe_level(m)
