import logging
import random
from functools import lru_cache
from typing import List, Optional, Tuple

from arith.factor_service import FactorService, get_factor_service
from arith.order_service import OrderService, get_order_service
from common.errors import DomainError, VosError
from config.settings import get_settings
from gf2poly.polynomial import Gf2Poly, _divmod, _gcd, _mod, _square

logger = logging.getLogger(__name__)

MAX_SPLIT_ATTEMPTS = 64


def _square_cyclic(a: int, d: int, mask: int) -> int:
    """a^2 mod X^d + 1 for a of degree < d"""
    s = _square(a)
    return (s & mask) ^ (s >> d)


def _trace_cyclic(a: int, k: int, d: int) -> int:
    """a + a^2 + ... + a^(2^(k-1)) mod X^d + 1"""
    mask = (1 << d) - 1
    t = x = a
    for _ in range(k - 1):
        x = _square_cyclic(x, d, mask)
        t ^= x
    return t


class Gf2FactorService:
    """Factorization of X^m + 1 into distinct irreducibles over the two-element field.

    Each cyclotomic factor Phi_d splits into phi(d)/ord_2(d) irreducibles of degree
    ord_2(d), so the split only needs the equal-degree stage. Trace polynomials are
    evaluated modulo X^d + 1, where squaring is a bit permutation, and then taken
    through a gcd with the factor being split.
    """

    def __init__(
        self,
        seed: Optional[int] = None,
        factor_service: Optional[FactorService] = None,
        order_service: Optional[OrderService] = None,
    ):
        self._seed = get_settings().VOS_SEED if seed is None else seed
        self._factors = factor_service or get_factor_service()
        self._orders = order_service or get_order_service()
        self.cyclotomic_polynomial = lru_cache(maxsize=4096)(self._cyclotomic_polynomial)
        self.factor_cyclotomic = lru_cache(maxsize=4096)(self._factor_cyclotomic)

    def cyclotomic_cosets(self, m: int) -> List[List[int]]:
        """2-cyclotomic cosets modulo odd m, ordered by least element"""
        if m < 1 or m % 2 == 0:
            raise DomainError(f"cosets need an odd positive modulus, got {m}")
        seen = bytearray(m)
        cosets = []
        for i in range(m):
            if seen[i]:
                continue
            coset, j = [], i
            while not seen[j]:
                seen[j] = 1
                coset.append(j)
                j = 2 * j % m
            cosets.append(sorted(coset))
        return cosets

    def _cyclotomic_polynomial(self, d: int) -> Gf2Poly:
        if d < 1 or d % 2 == 0:
            raise DomainError(f"cyclotomic polynomials are taken for odd d, got {d}")
        f = (1 << d) | 1
        for e in self._factors.divisors(d)[:-1]:
            f, r = _divmod(f, self.cyclotomic_polynomial(e).bits)
            if r:
                raise VosError(f"Phi_{e} does not divide X^{d} + 1")
        return Gf2Poly(f)

    def _factor_cyclotomic(self, d: int) -> Tuple[Gf2Poly, ...]:
        phi_d = self.cyclotomic_polynomial(d)
        k = self._orders.mult_order(2, d)
        count = self._factors.phi(d) // k
        if count == 1:
            return (phi_d,)
        rng = random.Random(self._seed * 1000003 + d)
        pieces = sorted(self._split(phi_d.bits, k, d, rng))
        if len(pieces) != count:
            raise VosError(f"Phi_{d} split into {len(pieces)} factors, expected {count}")
        logger.debug(f"[FACTOR-CYCLIC] d={d}: {count} factors of degree {k}")
        return tuple(Gf2Poly(p) for p in pieces)

    def _split(self, f: int, k: int, d: int, rng: random.Random) -> List[int]:
        """Equal-degree splitting of f | X^d + 1 whose irreducible factors all have degree k"""
        if f.bit_length() - 1 == k:
            return [f]
        for _ in range(MAX_SPLIT_ATTEMPTS):
            a = _mod(rng.getrandbits(d), f)
            g = _gcd(f, _mod(_trace_cyclic(a, k, d), f))
            if 1 < g.bit_length() < f.bit_length():
                h = _divmod(f, g)[0]
                return self._split(g, k, d, rng) + self._split(h, k, d, rng)
        raise VosError(f"equal-degree split of a factor of Phi_{d} did not succeed")

    def factor_cyclic(self, m: int) -> List[Tuple[int, List[Gf2Poly]]]:
        """Irreducible factors of X^m + 1 grouped by the divisor d whose Phi_d they divide"""
        if m < 1 or m % 2 == 0:
            raise DomainError(f"X^m + 1 is factored for odd m only, got {m}")
        groups = [(d, list(self.factor_cyclotomic(d))) for d in self._factors.divisors(m)]
        logger.info(f"[FACTOR-CYCLIC] m={m}: {sum(len(g) for _, g in groups)} irreducible factors")
        return groups

    def irreducible_factors(self, m: int) -> List[Gf2Poly]:
        return [f for _, group in self.factor_cyclic(m) for f in group]


_gf2_factor_service: Optional[Gf2FactorService] = None


def get_gf2_factor_service() -> Gf2FactorService:
    global _gf2_factor_service
    if _gf2_factor_service is None:
        _gf2_factor_service = Gf2FactorService()
    return _gf2_factor_service


def factor_cyclic(m: int) -> List[Tuple[int, List[Gf2Poly]]]:
    return get_gf2_factor_service().factor_cyclic(m)


def cyclotomic_cosets(m: int) -> List[List[int]]:
    return get_gf2_factor_service().cyclotomic_cosets(m)


def cyclotomic_polynomial(d: int) -> Gf2Poly:
    return get_gf2_factor_service().cyclotomic_polynomial(d)
