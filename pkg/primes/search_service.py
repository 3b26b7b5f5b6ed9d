import logging
from typing import Iterator, Optional

from arith.cyclotomic_service import CyclotomicService, get_cyclotomic_service
from arith.factor_service import FactorService, crt, get_factor_service, is_prime
from common.errors import DomainError
from config.settings import get_settings
from models.prime import SearchSpec
from primes.classify_service import PrimeClassService, get_prime_class_service

logger = logging.getLogger(__name__)


class PrimeSearchService:
    """Primes of prescribed residual index inside congruence classes"""

    def __init__(
        self,
        prime_class_service: Optional[PrimeClassService] = None,
        factor_service: Optional[FactorService] = None,
        cyclotomic_service: Optional[CyclotomicService] = None,
    ):
        self._classes = prime_class_service or get_prime_class_service()
        self._factors = factor_service or get_factor_service()
        self._cyclotomic = cyclotomic_service or get_cyclotomic_service()

    def iter_constrained_primes(self, spec: SearchSpec) -> Iterator[int]:
        """Ascending primes p <= spec.bound with r_2(p) = spec.index_m meeting every congruence.

        Candidates walk the single progression obtained by combining the required
        classes with p = 1 + m (mod 2m), or p = 1 (mod m) when the order may be even.
        """
        m = spec.index_m
        if m < 1:
            raise DomainError(f"index must be positive, got {m}")
        if len(spec.forbidden) > get_settings().VOS_FORBIDDEN_CAP:
            raise DomainError(f"{len(spec.forbidden)} forbidden classes exceed VOS_FORBIDDEN_CAP")
        base = (1 + m, 2 * m) if spec.require_odd_order else (1, m)
        a, f = crt([base] + list(spec.required))
        logger.debug(f"[SEARCH] index {m}: progression {a} mod {f} up to {spec.bound}")
        p = a if a > 2 else a + f
        found = 0
        while p <= spec.bound:
            if spec.admits(p) and is_prime(p):
                t = (p - 1) // m
                if self._classes.has_order(p, t) and not (spec.non_wieferich_at_m and pow(2, t, p * p) == 1):
                    found += 1
                    yield p
            p += f
        logger.debug(f"[SEARCH] index {m}: {found} primes up to {spec.bound}")

    def constrained_prime_search(self, spec: SearchSpec) -> Optional[int]:
        """Smallest prime meeting spec, or None when nothing is found up to spec.bound"""
        return next(self.iter_constrained_primes(spec), None)

    def prime_power_witness(self, e: int) -> int:
        """n = (7^e + 1)/2; 7 is a non-Wieferich prime with r_2(7) = 2, so S(n) = 2^e"""
        if e < 1:
            raise DomainError(f"exponent must be positive, got {e}")
        return (7**e + 1) // 2

    def seven_power_witness(self, e: int, bound: Optional[int] = None) -> Optional[int]:
        """Some n with S(n) = 2^e, whenever 1 + 2e is not a prime = 5 (mod 8).

        If 1 + 2e is not 5 mod 8, n = (q + 1)/2 for q in P_{2e}. Otherwise 1 + 2e = (1 + 2e1)(1 + 2e2)
        with 1 + 2e1 not 5 mod 8, and 2n - 1 = 7^e2 q where q is in P_{2e1} and 3, 7 do not divide ord_2(q).
        """
        if e < 1:
            raise DomainError(f"exponent must be positive, got {e}")
        bound = bound or get_settings().VOS_SEARCH_BOUND
        z = 1 + 2 * e
        if z % 8 != 5:
            q = self.constrained_prime_search(SearchSpec(index_m=2 * e, bound=bound))
            return None if q is None else (q + 1) // 2
        if is_prime(z):
            raise DomainError(f"1 + 2e = {z} is a prime = 5 (mod 8)")
        d = next(d for d in self._factors.divisors(z) if 1 < d < z and d % 8 != 5)
        e1, e2 = (d - 1) // 2, (z // d - 1) // 2
        spec = SearchSpec(index_m=2 * e1, forbidden=[(1, 6 * e1), (1, 14 * e1)], bound=bound)
        for q in self.iter_constrained_primes(spec):
            m = 7**e2 * q
            if self._cyclotomic.irreducible_count(2, m) == z:
                logger.info(f"[WITNESS] S(n) = 2^{e} from 2n - 1 = 7^{e2} * {q}")
                return (m + 1) // 2
        logger.info(f"[WITNESS] no q <= {bound} for 2n - 1 = 7^{e2} * q")
        return None

    def seven_square_witness(self, z: int, bound: Optional[int] = None) -> Optional[int]:
        """n with i_2(2n - 1) = z for a prime z = 5 (mod 104): 2n - 1 = 49 p, p in P_{(z-5)/13}, (ord_2(p), 21) = 3"""
        if z % 104 != 5 or not is_prime(z):
            raise DomainError(f"{z} is not a prime = 5 (mod 104)")
        bound = bound or get_settings().VOS_SEARCH_BOUND
        m = (z - 5) // 13
        spec = SearchSpec(index_m=m, required=[(1, 3 * m)], forbidden=[(1, 7 * m)], bound=bound)
        p = self.constrained_prime_search(spec)
        if p is None:
            logger.info(f"[WITNESS] no p <= {bound} in P_{m} with (ord_2(p), 21) = 3")
            return None
        return (49 * p + 1) // 2


_prime_search_service: Optional[PrimeSearchService] = None


def get_prime_search_service() -> PrimeSearchService:
    global _prime_search_service
    if _prime_search_service is None:
        _prime_search_service = PrimeSearchService()
    return _prime_search_service


def iter_constrained_primes(spec: SearchSpec) -> Iterator[int]:
    return get_prime_search_service().iter_constrained_primes(spec)


def constrained_prime_search(spec: SearchSpec) -> Optional[int]:
    return get_prime_search_service().constrained_prime_search(spec)
