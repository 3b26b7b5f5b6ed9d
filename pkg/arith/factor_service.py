import logging
import random
import threading
from functools import reduce
from math import gcd, isqrt
from typing import Dict, Iterable, List, Optional, Tuple

from tenacity import Retrying, retry_if_exception_type, stop_after_attempt

from common.errors import DomainError, InconsistentCongruencesError, VosError
from config.settings import get_settings
from models.arith import ArithmeticFunctions, Factorization

logger = logging.getLogger(__name__)

# Deterministic Miller-Rabin witnesses, valid for every n < 3.3e24
MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)

TRIAL_LIMIT = 10**6

MEMO_LIMIT = 1 << 20


def _small_primes(limit: int) -> List[int]:
    sieve = bytearray([1]) * (limit + 1)
    sieve[0:2] = b"\x00\x00"
    for i in range(2, isqrt(limit) + 1):
        if sieve[i]:
            sieve[i * i :: i] = bytearray(len(sieve[i * i :: i]))
    return [i for i, flag in enumerate(sieve) if flag]


SMALL_PRIMES = _small_primes(TRIAL_LIMIT)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin test"""
    if n < 2:
        return False
    for p in MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in MR_BASES:
        x = pow(a, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


class RhoFailure(Exception):
    """A Pollard-rho walk collapsed onto the trivial divisor"""


def _brent(n: int, rng: random.Random) -> int:
    """Brent's variant of Pollard rho, returns a nontrivial divisor or raises RhoFailure"""
    if n % 2 == 0:
        return 2
    y = rng.randrange(1, n)
    c = rng.randrange(1, n)
    m = 128
    g = r = q = 1
    x = ys = y
    while g == 1:
        x = y
        for _ in range(r):
            y = (y * y + c) % n
        k = 0
        while k < r and g == 1:
            ys = y
            for _ in range(min(m, r - k)):
                y = (y * y + c) % n
                q = q * abs(x - y) % n
            g = gcd(q, n)
            k += m
        r *= 2
    if g == n:
        while True:
            ys = (ys * ys + c) % n
            g = gcd(abs(x - ys), n)
            if g > 1:
                break
    if g == n:
        raise RhoFailure(f"rho walk failed for {n}")
    return g


class FactorService:
    """Integer factorization with a lock-protected memo table"""

    def __init__(self, seed: Optional[int] = None, attempts: int = 8):
        self._seed = get_settings().VOS_SEED if seed is None else seed
        self._attempts = attempts
        self._memo: Dict[int, Tuple[Tuple[int, int], ...]] = {}
        self._lock = threading.Lock()
        self._spf = None

    def use_table(self, spf) -> None:
        """Factor integers below len(spf) through a smallest-prime-factor table"""
        self._spf = spf
        logger.info(f"[FACTOR] smallest-prime-factor table attached, limit {len(spf) - 1}")

    def factorize(self, n: int) -> Factorization:
        if n < 1:
            raise DomainError(f"factorize expects a positive integer, got {n}")
        with self._lock:
            cached = self._memo.get(n)
        if cached is None:
            counts: Dict[int, int] = {}
            for p in self._prime_factors(n):
                counts[p] = counts.get(p, 0) + 1
            cached = tuple(sorted(counts.items()))
            with self._lock:
                if len(self._memo) >= MEMO_LIMIT:
                    self._memo.clear()
                self._memo[n] = cached
        return Factorization(value=n, factors=list(cached))

    def factor_dict(self, n: int) -> Dict[int, int]:
        return self.factorize(n).as_dict()

    def _prime_factors(self, n: int) -> List[int]:
        out: List[int] = []
        spf = self._spf
        if spf is not None and n < len(spf):
            while n > 1:
                p = int(spf[n])
                out.append(p)
                n //= p
            return out
        for p in SMALL_PRIMES:
            if p * p > n:
                break
            while n % p == 0:
                out.append(p)
                n //= p
        if n == 1:
            return out
        if n < TRIAL_LIMIT * TRIAL_LIMIT or is_prime(n):
            out.append(n)
            return out
        stack = [n]
        while stack:
            m = stack.pop()
            if is_prime(m):
                out.append(m)
                continue
            d = self._split(m)
            stack.extend((d, m // d))
        return out

    def _split(self, n: int) -> int:
        rng = random.Random(self._seed ^ n)
        try:
            for attempt in Retrying(
                stop=stop_after_attempt(self._attempts),
                retry=retry_if_exception_type(RhoFailure),
                reraise=True,
                before_sleep=lambda state: logger.debug(
                    f"[FACTOR] rho attempt {state.attempt_number} failed for {n}, retrying"
                ),
            ):
                with attempt:
                    return _brent(n, rng)
        except RhoFailure as e:
            logger.error(f"[FACTOR] giving up on {n} after {self._attempts} attempts")
            raise VosError(f"could not split {n}") from e
        raise VosError(f"could not split {n}")

    def divisors(self, n: int) -> List[int]:
        divs = [1]
        for p, e in self.factorize(n).factors:
            divs = [d * p**k for d in divs for k in range(e + 1)]
        return sorted(divs)

    def arithmetic_functions(self, n: int) -> ArithmeticFunctions:
        fac = self.factorize(n)
        phi = 1
        for p, e in fac.factors:
            phi *= p ** (e - 1) * (p - 1)
        squarefree = all(e == 1 for _, e in fac.factors)
        return ArithmeticFunctions(
            n=n,
            phi=phi,
            moebius=(-1) ** len(fac.factors) if squarefree else 0,
            omega=len(fac.factors),
            omega1=sum(1 for _, e in fac.factors if e == 1),
            nu=fac.as_dict(),
        )

    def phi(self, n: int) -> int:
        out = 1
        for p, e in self.factorize(n).factors:
            out *= p ** (e - 1) * (p - 1)
        return out


def nu(p: int, n: int) -> int:
    """Exponent of p in n"""
    if n == 0:
        raise DomainError("valuation of 0 is undefined")
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def nu2(n: int) -> int:
    return (n & -n).bit_length() - 1


def odd_part(n: int) -> int:
    return n >> nu2(n)


def lcm(*values: int) -> int:
    return reduce(lambda a, b: a // gcd(a, b) * b, values, 1)


def crt(congruences: Iterable[Tuple[int, int]]) -> Tuple[int, int]:
    """Combine x = a (mod f) pairs, moduli need not be coprime"""
    a, f = 0, 1
    for b, g in congruences:
        if g < 1:
            raise DomainError(f"modulus must be positive: {g}")
        b %= g
        d = gcd(f, g)
        if (b - a) % d:
            raise InconsistentCongruencesError(f"x = {a} (mod {f}) and x = {b} (mod {g}) are incompatible")
        # solve a + f*t = b (mod g)
        step = g // d
        t = ((b - a) // d) * pow(f // d, -1, step) % step if step > 1 else 0
        a, f = a + f * t, f * step
        a %= f
    return a, f


_factor_service: Optional[FactorService] = None


def get_factor_service() -> FactorService:
    global _factor_service
    if _factor_service is None:
        _factor_service = FactorService()
    return _factor_service


def factorize(n: int) -> Factorization:
    return get_factor_service().factorize(n)


def divisors(n: int) -> List[int]:
    return get_factor_service().divisors(n)


def arithmetic_functions(n: int) -> ArithmeticFunctions:
    return get_factor_service().arithmetic_functions(n)


def phi(n: int) -> int:
    return get_factor_service().phi(n)
