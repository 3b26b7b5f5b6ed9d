import logging
from typing import List, Optional

from arith.factor_service import FactorService, get_factor_service, is_prime, odd_part
from arith.order_service import OrderService, get_order_service
from common.errors import DomainError
from models.prime import PrimeClass
from primes.sieve_service import SieveService, get_sieve_service

logger = logging.getLogger(__name__)


class PrimeClassService:
    """Primes sorted by the order of 2: P, P_m, P'_m and the Wieferich primes"""

    def __init__(
        self,
        factor_service: Optional[FactorService] = None,
        order_service: Optional[OrderService] = None,
        sieve_service: Optional[SieveService] = None,
    ):
        self._factors = factor_service or get_factor_service()
        self._orders = order_service or get_order_service()
        self._sieve = sieve_service or get_sieve_service()

    def _check_odd_prime(self, p: int):
        if p < 3 or not is_prime(p):
            raise DomainError(f"{p} is not an odd prime")

    def has_order(self, p: int, t: int) -> bool:
        """ord_2(p) == t, for a prime p and t | p - 1"""
        if pow(2, t, p) != 1:
            return False
        return all(pow(2, t // ell, p) != 1 for ell in self._factors.factorize(t).primes)

    def classify_prime(self, p: int) -> PrimeClass:
        self._check_odd_prime(p)
        ord2 = self._orders.mult_order(2, p)
        odd = ord2 % 2 == 1
        return PrimeClass(
            p=p,
            ord2=ord2,
            index_m=(p - 1) // ord2,
            in_P=odd,
            wieferich=pow(2, p - 1, p * p) == 1,
            in_Pm=odd,
            in_Pm_prime=odd and pow(2, ord2, p * p) != 1,
        )

    def in_Pm(self, p: int, m: int) -> bool:
        if m < 1 or (p - 1) % m:
            return False
        t = (p - 1) // m
        return t % 2 == 1 and self.has_order(p, t)

    def in_Pm_prime(self, p: int, m: int) -> bool:
        return self.in_Pm(p, m) and pow(2, (p - 1) // m, p * p) != 1

    def pm_members(self, m: int, x: int) -> List[int]:
        """Primes p <= x with (p - 1)/m odd and equal to ord_2(p)"""
        if m < 1:
            raise DomainError(f"index must be positive, got {m}")
        residue = (1 + m) % (2 * m)
        out = []
        for p in self._sieve.iter_primes(3, x):
            if p % (2 * m) == residue and self.has_order(p, (p - 1) // m):
                out.append(p)
        logger.debug(f"[CLASSIFY] |P_{m}(<= {x})| = {len(out)}")
        return out

    def pm_prime_members(self, m: int, x: int) -> List[int]:
        return [p for p in self.pm_members(m, x) if pow(2, (p - 1) // m, p * p) != 1]

    def p_members(self, x: int) -> List[int]:
        """Primes p <= x with ord_2(p) odd"""
        return [p for p in self._sieve.iter_primes(3, x) if pow(2, odd_part(p - 1), p) == 1]

    def wieferich_scan(self, x: int) -> List[int]:
        found = [p for p in self._sieve.iter_primes(3, x) if pow(2, p - 1, p * p) == 1]
        logger.info(f"[WIEFERICH] {len(found)} primes up to {x}: {found}")
        return found


_prime_class_service: Optional[PrimeClassService] = None


def get_prime_class_service() -> PrimeClassService:
    global _prime_class_service
    if _prime_class_service is None:
        _prime_class_service = PrimeClassService()
    return _prime_class_service


def classify_prime(p: int) -> PrimeClass:
    return get_prime_class_service().classify_prime(p)


def in_Pm(p: int, m: int) -> bool:
    return get_prime_class_service().in_Pm(p, m)


def pm_members(m: int, x: int) -> List[int]:
    return get_prime_class_service().pm_members(m, x)


def p_members(x: int) -> List[int]:
    return get_prime_class_service().p_members(x)


def wieferich_scan(x: int) -> List[int]:
    return get_prime_class_service().wieferich_scan(x)
