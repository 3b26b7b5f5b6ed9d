import logging
from typing import List, Optional, Union

from arith.cyclotomic_service import CyclotomicService, get_cyclotomic_service
from arith.factor_service import FactorService, get_factor_service
from arith.order_service import OrderService, get_order_service
from common.errors import DomainError, SizeError
from common.workers import map_ordered, progress
from config.settings import get_settings
from gf2poly.factor_service import Gf2FactorService, get_gf2_factor_service
from gf2poly.polynomial import Gf2Poly, _divmod, _mul
from models.sequence import AutocorrelationProfile, BitSequence, SequenceCount

logger = logging.getLogger(__name__)

BRUTE_FORCE_LIMIT = 25
BRUTE_FORCE_CHUNK = 1 << 14

ALLES_SEED = "1101"

SequenceLike = Union[BitSequence, str]


def _popcount(v: int) -> int:
    return bin(v).count("1")


def as_sequence(s: SequenceLike) -> BitSequence:
    return s if isinstance(s, BitSequence) else BitSequence(bits=s)


def sequence_value(s: SequenceLike) -> int:
    """Pack a_1 ... a_n into an integer whose bit i is a_(i+1)"""
    return int(as_sequence(s).bits[::-1], 2)


def sequence_polynomial(s: SequenceLike) -> Gf2Poly:
    """b(X) with b_k = a_(k+1)"""
    return Gf2Poly(sequence_value(s))


def sequence_from_polynomial(f: Gf2Poly, n: int) -> BitSequence:
    if f.degree >= n:
        raise DomainError(f"polynomial of degree {f.degree} does not fit a sequence of length {n}")
    return BitSequence(bits=format(f.bits, f"0{n}b")[::-1])


def _all_odd(v: int, n: int) -> bool:
    # A_(n-1) = a_1 a_n fails fastest, so scan k downward
    for k in range(n - 1, -1, -1):
        if not _popcount(v & (v >> k)) & 1:
            return False
    return True


class SequenceService:
    """Very odd sequences: checks, exact counts, enumeration and composition"""

    def __init__(
        self,
        factor_service: Optional[FactorService] = None,
        order_service: Optional[OrderService] = None,
        cyclotomic_service: Optional[CyclotomicService] = None,
        gf2_factor_service: Optional[Gf2FactorService] = None,
    ):
        self._factors = factor_service or get_factor_service()
        self._orders = order_service or get_order_service()
        self._cyclotomic = cyclotomic_service or get_cyclotomic_service()
        self._gf2 = gf2_factor_service or get_gf2_factor_service()

    def autocorrelation_profile(self, s: SequenceLike) -> AutocorrelationProfile:
        s = as_sequence(s)
        v = sequence_value(s)
        return AutocorrelationProfile(values=[_popcount(v & (v >> k)) for k in range(s.length)])

    def is_very_odd(self, s: SequenceLike) -> bool:
        s = as_sequence(s)
        return _all_odd(sequence_value(s), s.length)

    def count(self, n: int) -> SequenceCount:
        if n < 1:
            raise DomainError(f"sequence length must be positive, got {n}")
        m = 2 * n - 1
        if not self._orders.has_odd_order(m):
            return SequenceCount(n=n, value=0)
        i2 = self._cyclotomic.irreducible_count(2, m)
        h = (i2 - 1) // 2
        return SequenceCount(n=n, value=1 << h, exponent=h, i2=i2)

    def s_count(self, n: int) -> int:
        return self.count(n).value

    def _reciprocal_pairs(self, n: int, exponent: int) -> List[tuple]:
        pairs = []
        seen = set()
        for f in self._gf2.irreducible_factors(2 * n - 1):
            if f.degree == 1 or f in seen:
                continue
            g = f.reciprocal()
            seen.update((f, g))
            pairs.append((min(f, g).bits, max(f, g).bits))
        pairs.sort()
        if len(pairs) != exponent:
            raise DomainError(f"found {len(pairs)} reciprocal pairs for n={n}, expected {exponent}")
        return pairs

    def first_vos(self, n: int) -> Optional[BitSequence]:
        """The very odd sequence taking the smaller factor of every reciprocal pair, None when S(n) = 0"""
        record = self.count(n)
        if record.value == 0:
            return None
        b = 1
        for low, _ in self._reciprocal_pairs(n, record.exponent):
            b = _mul(b, low)
        return sequence_from_polynomial(Gf2Poly(b), n)

    def enumerate_vos(self, n: int, cap: Optional[int] = None) -> List[BitSequence]:
        """All very odd sequences of length n, one per choice of factor in each reciprocal pair.

        X^(2n-1) + 1 = (X + 1) b(X) b*(X); the choices are walked in reflected Gray-code
        order so each step swaps a single factor for its reciprocal.
        """
        cap = get_settings().VOS_ENUMERATION_CAP if cap is None else cap
        record = self.count(n)
        if record.value == 0:
            return []
        if record.value > cap:
            raise SizeError(
                f"S({n}) = 2^{record.exponent} exceeds the enumeration cap {cap}",
                count=record.value,
                exponent=record.exponent,
            )
        pairs = self._reciprocal_pairs(n, record.exponent)
        b = 1
        for low, _ in pairs:
            b = _mul(b, low)
        chosen = [0] * len(pairs)
        out = [sequence_from_polynomial(Gf2Poly(b), n)]
        for i in range(1, record.value):
            j = (i & -i).bit_length() - 1
            old, new = pairs[j][chosen[j]], pairs[j][1 - chosen[j]]
            chosen[j] ^= 1
            b = _mul(_divmod(b, old)[0], new)
            out.append(sequence_from_polynomial(Gf2Poly(b), n))
        logger.info(f"[ENUMERATE] n={n} count={len(out)}")
        return out

    def brute_force_vos(self, n: int) -> List[BitSequence]:
        """Exhaustive scan; a_1 = a_n = 1 is forced by A_(n-1) = a_1 a_n"""
        if n < 1:
            raise DomainError(f"sequence length must be positive, got {n}")
        if n > BRUTE_FORCE_LIMIT:
            raise SizeError(f"brute-force scan is limited to n <= {BRUTE_FORCE_LIMIT}, got {n}", count=2**n)
        if n == 1:
            return [BitSequence(bits="1")]
        ends = 1 | (1 << (n - 1))
        total = 1 << (n - 2)

        def scan(start: int) -> List[int]:
            found = []
            for mid in range(start, min(start + BRUTE_FORCE_CHUNK, total)):
                v = ends | (mid << 1)
                if _all_odd(v, n):
                    found.append(v)
            return found

        starts = range(0, total, BRUTE_FORCE_CHUNK)
        chunks = map_ordered(scan, progress(starts, desc=f"scan n={n}", total=len(starts)))
        values = [v for chunk in chunks for v in chunk]
        logger.info(f"[BRUTE-FORCE] n={n} count={len(values)}")
        return [sequence_from_polynomial(Gf2Poly(v), n) for v in values]

    def tensor(self, a: SequenceLike, b: SequenceLike) -> BitSequence:
        """a(X) b(X^(2n-1)), a very odd sequence of length 2mn - n - m + 1"""
        a, b = as_sequence(a), as_sequence(b)
        for s in (a, b):
            if not self.is_very_odd(s):
                raise DomainError(f"{s.bits} is not very odd")
        n, m = a.length, b.length
        stride = 2 * n - 1
        spread = 0
        for k, c in enumerate(b.bits):
            if c == "1":
                spread |= 1 << (k * stride)
        c = _mul(sequence_value(a), spread)
        return sequence_from_polynomial(Gf2Poly(c), 2 * m * n - n - m + 1)

    def alles_successor(self, s: SequenceLike) -> BitSequence:
        return self.tensor(s, ALLES_SEED)

    def is_periodic(self, s: SequenceLike) -> bool:
        bits = as_sequence(s).bits
        n = len(bits)
        return any(n % p == 0 and bits == bits[:p] * (n // p) for p in range(1, n // 2 + 1))

    def square_law_holds(self, n: int) -> bool:
        """S(n^2 + (n-1)^2) = S(n)^2 > 0"""
        base = self.s_count(n)
        return base > 0 and self.s_count(n * n + (n - 1) * (n - 1)) == base * base

    def square_law_criterion(self, n: int) -> bool:
        """ord_2(2n-1) odd and 2n-1 = p^k with ord_2(p) != ord_2(p^2)"""
        m = 2 * n - 1
        fac = self._factors.factorize(m)
        if len(fac.factors) != 1 or not self._orders.has_odd_order(m):
            return False
        p = fac.factors[0][0]
        return self._orders.mult_order(2, p) != self._orders.mult_order(2, p * p)


_sequence_service: Optional[SequenceService] = None


def get_sequence_service() -> SequenceService:
    global _sequence_service
    if _sequence_service is None:
        _sequence_service = SequenceService()
    return _sequence_service


def autocorrelation_profile(s: SequenceLike) -> AutocorrelationProfile:
    return get_sequence_service().autocorrelation_profile(s)


def is_very_odd(s: SequenceLike) -> bool:
    return get_sequence_service().is_very_odd(s)


def s_count(n: int) -> int:
    return get_sequence_service().s_count(n)


def enumerate_vos(n: int, cap: Optional[int] = None) -> List[BitSequence]:
    return get_sequence_service().enumerate_vos(n, cap)


def brute_force_vos(n: int) -> List[BitSequence]:
    return get_sequence_service().brute_force_vos(n)


def tensor(a: SequenceLike, b: SequenceLike) -> BitSequence:
    return get_sequence_service().tensor(a, b)


def is_periodic(s: SequenceLike) -> bool:
    return get_sequence_service().is_periodic(s)
