import logging
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Optional

import mpmath

from arith.factor_service import FactorService, crt, get_factor_service, lcm, nu2
from common.errors import DomainError, InconsistentCongruencesError
from config.settings import get_settings
from models.census import DensityValue
from primes.sieve_service import SieveService, get_sieve_service

logger = logging.getLogger(__name__)


def _epsilon(m: int) -> int:
    return 1 if nu2(m) == 1 else 2


def _lucas(k: int) -> int:
    a, b = 2, 1
    for _ in range(k):
        a, b = b, a + b
    return a


def _multiple(c: Fraction) -> str:
    if c.denominator == 1:
        return f"{c.numerator}A"
    return f"{c.numerator}A/{c.denominator}"


class DensityService:
    """Density constants of P_m and of its congruence classes, in units of the Artin constant"""

    def __init__(self, factor_service: Optional[FactorService] = None, sieve_service: Optional[SieveService] = None):
        settings = get_settings()
        self._factors = factor_service or get_factor_service()
        self._sieve = sieve_service or get_sieve_service()
        self._prime_limit = settings.VOS_ARTIN_PRIME_LIMIT
        self._dps = settings.VOS_MP_DPS
        self.artin_constant = lru_cache(maxsize=16)(self._artin_constant)

    def _artin_constant(self, precision: float = 1e-9, accelerated: bool = True) -> DensityValue:
        """A = prod over p of (1 - 1/(p(p-1))).

        log(1 - 1/(p(p-1))) = -sum_{k>=2} (L_k - 1)/k p^-k with L_k the Lucas numbers, so the
        primes above the cut-off contribute -sum (L_k - 1)/k (P(k) - sum_{p<=Q} p^-k), P the
        prime zeta function. Terms shrink like (golden ratio / Q)^k.
        """
        if precision <= 0 or precision < 10.0 ** -min(self._dps, 15):
            raise DomainError(f"precision {precision} is finer than VOS_MP_DPS={self._dps} allows")
        primes = self._sieve.primes_up_to(self._prime_limit)
        with mpmath.workdps(self._dps + 40):
            head = mpmath.mpf(1)
            for p in primes:
                head *= 1 - mpmath.mpf(1) / (p * (p - 1))
            if not accelerated:
                q = primes[-1]
                # sum over p > q of 1/(p(p-1)) is below 1/q
                tail = 1.0 / q
                logger.info(f"[ARTIN] direct product over p <= {q}, relative error up to {tail:.1e}")
                return DensityValue(value=float(head), error_bound=float(head) * tail, accelerated=False, artin_multiple="A")
            eps = mpmath.mpf(10) ** (-self._dps)
            log_tail = mpmath.mpf(0)
            k = 2
            while True:
                partial = mpmath.fsum(mpmath.mpf(p) ** (-k) for p in primes)
                term = mpmath.mpf(_lucas(k) - 1) / k * (mpmath.primezeta(k) - partial)
                log_tail -= term
                if abs(term) < eps:
                    break
                k += 1
            value = head * mpmath.exp(log_tail)
        logger.debug(f"[ARTIN] accelerated with {k - 1} prime zeta terms")
        return DensityValue(value=float(value), error_bound=10.0 ** -min(self._dps, 15), accelerated=True, artin_multiple="A")

    def pm_density(self, m: int) -> DensityValue:
        """Density of P_m among the primes: (2 A eps(m) / 3 m^2) prod_{p | m} (p^2 - 1)/(p^2 - p - 1)"""
        if m < 1:
            raise DomainError(f"m must be positive, got {m}")
        if m % 2 or nu2(m) == 2:
            return DensityValue(value=0.0, artin_multiple="0", note="P_m is empty")
        c = Fraction(2 * _epsilon(m), 3 * m * m)
        for p in self._factors.factorize(m).primes:
            c *= Fraction(p * p - 1, p * p - p - 1)
        artin = self.artin_constant()
        return DensityValue(value=float(c) * artin.value, error_bound=float(c) * artin.error_bound, artin_multiple=_multiple(c))

    def normalize_class(self, e: int, a: int, f: int):
        """Lift p = a (mod f) to a modulus divisible by 4e with the same 2-adic valuation"""
        if nu2(f) > nu2(4 * e):
            raise DomainError(f"nu_2({f}) exceeds nu_2({4 * e})")
        try:
            a, f = crt([(a, f), (1 + 2 * e, 4 * e)])
        except InconsistentCongruencesError as err:
            raise DomainError(f"p = {a} (mod {f}) is incompatible with r_2(p) = {2 * e} and odd order") from err
        if gcd(a, f) != 1:
            raise DomainError(f"gcd({a}, {f}) != 1")
        return a, f

    def residue_class_density(self, e: int, a: int, f: int, truncation: Optional[int] = None) -> DensityValue:
        """Density of primes p = a (mod f) with r_2(p) = 2e and odd order, for nu_2(e) != 1.

        eps(2e)/(phi([f,2e]) 2e) times the product over primes p with a = 1 (mod (f, 2ep)) of
        1 - phi([f,2e])/(phi([f,2ep]) p). Primes not dividing 2ef always qualify and give the
        Artin factors, so the value is a rational multiple of A. With truncation the product
        is taken directly over p <= truncation instead.
        """
        if e < 1 or nu2(e) == 1:
            raise DomainError(f"e must be positive with nu_2(e) != 1, got {e}")
        a0, f0 = a % f, f
        a, f = self.normalize_class(e, a, f)
        big = lcm(f, 2 * e)
        phi_big = self._factors.phi(big)

        def factor(p: int) -> Fraction:
            if (a - 1) % gcd(f, 2 * e * p):
                return Fraction(1)
            return 1 - Fraction(phi_big, self._factors.phi(lcm(f, 2 * e * p)) * p)

        lead = Fraction(_epsilon(2 * e), phi_big * 2 * e)
        if truncation is not None:
            value = lead
            primes = self._sieve.primes_up_to(truncation)
            for p in primes:
                value *= factor(p)
            tail = 1.0 / max(primes[-1], 2) if primes else 1.0
            return DensityValue(value=float(value), error_bound=float(value) * tail, accelerated=False)

        c = lead
        for p in self._factors.factorize(2 * e * f).primes:
            c *= factor(p) / (1 - Fraction(1, p * (p - 1)))
        artin = self.artin_constant()
        logger.debug(f"[DENSITY] e={e}, p = {a} (mod {f}): {_multiple(c)}")
        return DensityValue(
            value=float(c) * artin.value,
            error_bound=float(c) * artin.error_bound,
            artin_multiple=_multiple(c),
            note=f"relative density in p = {a0} (mod {f0}): {_multiple(c * self._factors.phi(f0))}",
        )

    def logarithmic_integral(self, x: float) -> float:
        """Li(x), the integral of 1/log t from 2 to x"""
        if x <= 2:
            return 0.0
        with mpmath.workdps(self._dps):
            nodes = [mpmath.mpf(2)]
            while nodes[-1] * 4 < x:
                nodes.append(nodes[-1] * 4)
            nodes.append(mpmath.mpf(x))
            return float(mpmath.quad(lambda t: 1 / mpmath.log(t), nodes))


_density_service: Optional[DensityService] = None


def get_density_service() -> DensityService:
    global _density_service
    if _density_service is None:
        _density_service = DensityService()
    return _density_service


def artin_constant(precision: float = 1e-9, accelerated: bool = True) -> DensityValue:
    return get_density_service().artin_constant(precision, accelerated)


def pm_density(m: int) -> DensityValue:
    return get_density_service().pm_density(m)


def residue_class_density(e: int, a: int, f: int, truncation: Optional[int] = None) -> DensityValue:
    return get_density_service().residue_class_density(e, a, f, truncation)


def logarithmic_integral(x: float) -> float:
    return get_density_service().logarithmic_integral(x)
