import logging
from math import isqrt
from typing import Iterator, List, Optional, Tuple

import numpy as np

from common.errors import DomainError, SizeError
from common.workers import map_ordered, progress
from config.settings import get_settings

logger = logging.getLogger(__name__)


def _base_primes(limit: int) -> np.ndarray:
    """Primes <= limit from an odd-only sieve; slot i stands for 2i + 1"""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    flags = np.ones((limit + 1) // 2, dtype=bool)
    flags[0] = False
    for i in range(1, (isqrt(limit) - 1) // 2 + 1):
        if flags[i]:
            p = 2 * i + 1
            flags[p * p // 2 :: p] = False
    odd = 2 * np.nonzero(flags)[0] + 1
    return np.concatenate((np.array([2], dtype=np.int64), odd.astype(np.int64)))


class SieveService:
    """Segmented sieve of Eratosthenes and smallest-prime-factor tables"""

    def __init__(self, segment: Optional[int] = None, spf_limit: Optional[int] = None):
        settings = get_settings()
        self._segment = segment or settings.VOS_SIEVE_SEGMENT
        self._spf_limit = spf_limit or settings.VOS_SPF_LIMIT

    def primes_up_to(self, x: int) -> List[int]:
        return list(self.iter_primes(2, x))

    def _sieve_segment(self, bounds: Tuple[int, int], base: np.ndarray) -> np.ndarray:
        lo, hi = bounds
        flags = np.ones(hi - lo, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= hi:
                break
            start = max(p * p, (lo + p - 1) // p * p)
            flags[start - lo :: p] = False
        if lo < 2:
            flags[: 2 - lo] = False
        return np.nonzero(flags)[0] + lo

    def iter_primes(self, lo: int, hi: int) -> Iterator[int]:
        """Primes p with lo <= p <= hi, ascending"""
        if hi < 2 or hi < lo:
            return
        lo = max(lo, 0)
        base = _base_primes(isqrt(hi))
        bounds = [(a, min(a + self._segment, hi + 1)) for a in range(lo, hi + 1, self._segment)]
        batch = max(1, get_settings().VOS_THREADS)
        logger.debug(f"[SIEVE] [{lo}, {hi}] in {len(bounds)} segments")
        for start in progress(range(0, len(bounds), batch), desc="sieve", total=-(-len(bounds) // batch)):
            chunk = bounds[start : start + batch]
            for found in map_ordered(lambda b: self._sieve_segment(b, base), chunk):
                for p in found:
                    yield int(p)

    def smallest_prime_factor_table(self, limit: int) -> np.ndarray:
        """spf[n] is the least prime factor of n for 2 <= n <= limit; spf[0] = spf[1] = 0"""
        if limit < 1:
            raise DomainError(f"table limit must be positive, got {limit}")
        if limit > self._spf_limit:
            raise SizeError(f"smallest-prime-factor table up to {limit} exceeds VOS_SPF_LIMIT={self._spf_limit}", count=limit)
        spf = np.zeros(limit + 1, dtype=np.int32 if limit < 2**31 else np.int64)
        spf[2::2] = 2
        for p in range(3, isqrt(limit) + 1, 2):
            if spf[p] == 0:
                block = spf[p * p :: 2 * p]
                block[block == 0] = p
        rest = np.nonzero(spf == 0)[0]
        rest = rest[rest >= 2]
        spf[rest] = rest
        logger.info(f"[SIEVE] smallest-prime-factor table built up to {limit}")
        return spf


_sieve_service: Optional[SieveService] = None


def get_sieve_service() -> SieveService:
    global _sieve_service
    if _sieve_service is None:
        _sieve_service = SieveService()
    return _sieve_service


def primes_up_to(x: int) -> List[int]:
    return get_sieve_service().primes_up_to(x)


def iter_primes(lo: int, hi: int) -> Iterator[int]:
    return get_sieve_service().iter_primes(lo, hi)


def smallest_prime_factor_table(limit: int) -> np.ndarray:
    return get_sieve_service().smallest_prime_factor_table(limit)
