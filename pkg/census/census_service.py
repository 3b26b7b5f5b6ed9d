import logging
from math import log
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from arith.cyclotomic_service import CyclotomicService, get_cyclotomic_service
from arith.factor_service import FactorService, get_factor_service, odd_part
from census.density_service import DensityService, get_density_service
from common.errors import DomainError
from common.workers import progress
from config.settings import get_settings
from models.census import CensusReport
from primes.classify_service import PrimeClassService, get_prime_class_service
from primes.sieve_service import SieveService, get_sieve_service
from sequences.sequence_service import SequenceService, get_sequence_service

logger = logging.getLogger(__name__)

PARITY_LIMIT = 10**7
VALUE_LIMIT = 10**6
MEMBER_LIST_LIMIT = 10**4
# density of P among the primes
P_DENSITY = 7 / 24


class CensusService:
    """Counts of n <= x by S(n) and of primes by the order of 2, against the predicted densities"""

    def __init__(
        self,
        factor_service: Optional[FactorService] = None,
        sieve_service: Optional[SieveService] = None,
        prime_class_service: Optional[PrimeClassService] = None,
        cyclotomic_service: Optional[CyclotomicService] = None,
        sequence_service: Optional[SequenceService] = None,
        density_service: Optional[DensityService] = None,
    ):
        self._factors = factor_service or get_factor_service()
        self._sieve = sieve_service or get_sieve_service()
        self._classes = prime_class_service or get_prime_class_service()
        self._cyclotomic = cyclotomic_service or get_cyclotomic_service()
        self._sequences = sequence_service or get_sequence_service()
        self._density = density_service or get_density_service()
        self._tolerance = get_settings().VOS_TOLERANCE

    def _odd_order_flags(self, limit: int) -> Tuple[np.ndarray, np.ndarray, List[int]]:
        """flags[m] for odd m <= limit says ord_2(m) is odd; also returns the table and the primes of P up to limit.

        ord_2(m) is odd iff every prime factor of m lies in P, so each prime outside P
        clears its odd multiples.
        """
        spf = self._sieve.smallest_prime_factor_table(limit)
        primes = np.nonzero(spf == np.arange(limit + 1))[0]
        primes = primes[primes > 2]
        flags = np.zeros(limit + 1, dtype=bool)
        flags[1::2] = True
        in_p: List[int] = []
        for p in progress(primes.tolist(), desc="parity", total=len(primes)):
            if pow(2, odd_part(p - 1), p) == 1:
                in_p.append(p)
            elif 3 * p <= limit:
                flags[p :: 2 * p] = False
            else:
                flags[p] = False
        return flags, spf, in_p

    def ord_parity_sieve(self, x: int) -> CensusReport:
        """N(x), the number of n <= x with S(n) > 0, and N_0(x) = x - N(x).

        The same pass counts P(x) against (7/24) Li(x); P_2x is the count up to 2x - 1,
        the range the sieve covers.
        """
        if x < 1:
            raise DomainError(f"x must be positive, got {x}")
        if x > PARITY_LIMIT:
            raise DomainError(f"x = {x} exceeds {PARITY_LIMIT}")
        limit = 2 * x - 1
        flags, _, in_p = self._odd_order_flags(limit)
        odd = np.nonzero(flags)[0]
        members = ((odd + 1) // 2).tolist()
        n = len(members)
        p_x = sum(1 for p in in_p if p <= x)
        report = CensusReport(
            x=x,
            counts={"N": n, "N0": x - n, "P": p_x, "P_2x": len(in_p)},
            ratios={"N": n / x},
            checks={"N_plus_N0": n + (x - n) == x},
        )
        for key, bound, count in (("P", x, p_x), ("P_2x", limit, len(in_p))):
            predicted = P_DENSITY * self._density.logarithmic_integral(bound)
            report.predicted[key] = predicted
            if predicted > 0:
                report.ratios[key] = count / predicted
        if x <= MEMBER_LIST_LIMIT:
            report.members["N"] = members
        logger.info(f"[CENSUS] N({x}) = {n}, P({x}) = {p_x}, P({limit}) = {len(in_p)}")
        return report

    def value_census(self, x: int, values: Sequence[int] = (2, 4, 8, 16), first: int = 10) -> CensusReport:
        """N_v(x) for each requested v, through S(n) on every n <= x with ord_2(2n - 1) odd"""
        if x < 1:
            raise DomainError(f"x must be positive, got {x}")
        if x > VALUE_LIMIT:
            raise DomainError(f"x = {x} exceeds {VALUE_LIMIT}")
        for v in values:
            if v < 1 or v & (v - 1):
                raise DomainError(f"S(n) is a power of 2, got {v}")
        limit = 2 * x - 1
        flags, spf, _ = self._odd_order_flags(limit)
        self._factors.use_table(spf)
        wanted = set(values) | {1}
        found: Dict[int, List[int]] = {v: [] for v in sorted(wanted)}
        odd = np.nonzero(flags)[0].tolist()
        for m in progress(odd, desc="S(n)", total=len(odd)):
            n = (m + 1) // 2
            v = self._sequences.s_count(n)
            if v in found:
                found[v].append(n)

        p2 = len(self._classes.pm_members(2, limit))
        report = CensusReport(x=x)
        for v, ns in found.items():
            report.counts[f"N{v}"] = len(ns)
            report.members[f"N{v}"] = ns[:first]
        report.counts["P2"] = p2
        report.checks["N2_equals_P2"] = len(found.get(2, [])) == p2
        if x > 2:
            scale = x / log(x)
            artin = self._density.artin_constant().value
            for v, coefficient in ((2, artin), (8, 8 * artin / 45)):
                if v in values:
                    report.predicted[f"N{v}"] = coefficient * scale
                    report.ratios[f"N{v}"] = len(found[v]) / (coefficient * scale)
        logger.info(f"[CENSUS] value counts up to {x}: {report.counts}")
        return report

    def stufe_census(self, x: int) -> CensusReport:
        """St_4(x), the number of n <= x whose field of (2n - 1)-th roots of unity has level 4"""
        if x < 1:
            raise DomainError(f"x must be positive, got {x}")
        if x > VALUE_LIMIT:
            raise DomainError(f"x = {x} exceeds {VALUE_LIMIT}")
        st4 = sum(1 for n in progress(range(1, x + 1), desc="stufe", total=x) if self._cyclotomic.stufe_level(2 * n - 1) == 4)
        n = self.ord_parity_sieve(x).counts["N"]
        # n = 1 counts towards N(x) but the first cyclotomic field is the rationals
        return CensusReport(x=x, counts={"St4": st4, "N": n}, checks={"St4_equals_N_minus_1": st4 == n - 1})

    def pm_count(self, m: int, x: int) -> CensusReport:
        """|P_m(x)| against pm_density(m) x / log x and against pm_density(m) Li(x)"""
        if x < 3:
            raise DomainError(f"x must be at least 3, got {x}")
        count = len(self._classes.pm_members(m, x))
        delta = self._density.pm_density(m).value
        report = CensusReport(x=x, counts={f"P{m}": count})
        if delta > 0:
            rough = delta * x / log(x)
            smooth = delta * self._density.logarithmic_integral(x)
            report.predicted = {f"P{m}": rough, f"P{m}_li": smooth}
            report.ratios = {f"P{m}": count / rough, f"P{m}_li": count / smooth}
            report.checks[f"P{m}_within_tolerance"] = abs(count / rough - 1) <= self._tolerance
        else:
            report.checks[f"P{m}_empty"] = count == 0
        return report

    def c0_estimate(self, x: int) -> float:
        """N(x) log(x)^(17/24) / x; report-only"""
        if x < 3:
            raise DomainError(f"x must be at least 3, got {x}")
        return self.ord_parity_sieve(x).counts["N"] * log(x) ** (17 / 24) / x

    def n16_ratio(self, x: int) -> float:
        """N_16(x) log(x) / (x log log x); report-only"""
        if x < 16:
            raise DomainError(f"x must be at least 16, got {x}")
        count = self.value_census(x, (16,)).counts["N16"]
        return count * log(x) / (x * log(log(x)))


_census_service: Optional[CensusService] = None


def get_census_service() -> CensusService:
    global _census_service
    if _census_service is None:
        _census_service = CensusService()
    return _census_service


def ord_parity_sieve(x: int) -> CensusReport:
    return get_census_service().ord_parity_sieve(x)


def value_census(x: int, values: Sequence[int] = (2, 4, 8, 16)) -> CensusReport:
    return get_census_service().value_census(x, values)


def stufe_census(x: int) -> CensusReport:
    return get_census_service().stufe_census(x)


def pm_count(m: int, x: int) -> CensusReport:
    return get_census_service().pm_count(m, x)
