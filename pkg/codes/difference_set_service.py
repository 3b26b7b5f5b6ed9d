import logging
from typing import Iterable, List, Optional

import numpy as np

from arith.factor_service import is_prime
from arith.order_service import OrderService, get_order_service
from common.errors import DomainError, NotADifferenceSetError
from gf2poly.factor_service import Gf2FactorService, get_gf2_factor_service
from gf2poly.polynomial import Gf2Poly, gcd, product
from models.code import DifferenceSetWitness
from models.sequence import BitSequence
from sequences.sequence_service import sequence_from_polynomial

logger = logging.getLogger(__name__)

# exhaustive difference-set search is only offered at this scale
SEARCH_LIMIT = 40


def _difference_counts(residues: List[int], modulus: int) -> np.ndarray:
    arr = np.array(residues, dtype=np.int64)
    diffs = (arr[:, None] - arr[None, :]) % modulus
    counts = np.bincount(diffs.ravel(), minlength=modulus)
    counts[0] -= len(residues)
    return counts


class DifferenceSetService:
    """Cyclic difference sets and the very odd sequences they carry"""

    def __init__(
        self,
        order_service: Optional[OrderService] = None,
        gf2_factor_service: Optional[Gf2FactorService] = None,
    ):
        self._orders = order_service or get_order_service()
        self._gf2 = gf2_factor_service or get_gf2_factor_service()

    def verify_difference_set(self, residues: Iterable[int], modulus: int) -> DifferenceSetWitness:
        if modulus < 2:
            raise DomainError(f"modulus must be at least 2, got {modulus}")
        residues = list(residues)
        elements = sorted({r % modulus for r in residues})
        if not elements:
            raise DomainError("difference set must be nonempty")
        if len(elements) != len(residues):
            raise DomainError("residues must be distinct modulo N")
        k = len(elements)
        counts = _difference_counts(elements, modulus)
        if k * (k - 1) % (modulus - 1) == 0:
            lam = k * (k - 1) // (modulus - 1)
        else:
            lam = int(counts[1])
        for r in range(1, modulus):
            if counts[r] != lam:
                raise NotADifferenceSetError(
                    f"residue {r} occurs {int(counts[r])} times among the differences, expected {lam}",
                    residue=r,
                    occurrences=int(counts[r]),
                )
        return DifferenceSetWitness(modulus=modulus, elements=elements, k=k, lam=lam)

    def difference_set_sequence(self, witness: DifferenceSetWitness) -> BitSequence:
        """Very odd sequence of length (N + 1)/2 from a difference set with K and lambda odd.

        Reduced mod 2, D(X) D(1/X) = (X^N + 1)/(X + 1) modulo X^N + 1, so every
        factor other than X + 1 divides D or its reciprocal partner does.
        """
        n_mod, k, lam = witness.modulus, witness.k, witness.lam
        if n_mod % 2 == 0:
            raise DomainError(f"modulus {n_mod} must be odd")
        if k % 2 == 0 or lam % 2 == 0:
            raise DomainError(f"K = {k} and lambda = {lam} must both be odd")
        if not self._orders.has_odd_order(n_mod):
            raise DomainError(f"ord_2({n_mod}) is even, no very odd sequence of length {(n_mod + 1) // 2} exists")
        length = (n_mod + 1) // 2
        indicator = Gf2Poly.from_exponents(witness.elements)
        g = gcd(indicator, Gf2Poly.x_power_plus_one(n_mod))
        if g.degree == length - 1:
            return sequence_from_polynomial(g, length)

        chosen, seen = [], set()
        for f in self._gf2.irreducible_factors(n_mod):
            if f.degree == 1 or f in seen:
                continue
            partner = f.reciprocal()
            seen.update((f, partner))
            low, high = min(f, partner), max(f, partner)
            chosen.append(low if low.divides(indicator) or not high.divides(indicator) else high)
        logger.debug(f"[DIFFERENCE-SET] N={n_mod}: gcd had degree {g.degree}, chose {len(chosen)} pair members")
        return sequence_from_polynomial(product(chosen), length)

    def quadratic_residue_set(self, p: int) -> List[int]:
        if p < 3 or not is_prime(p):
            raise DomainError(f"{p} is not an odd prime")
        return sorted({x * x % p for x in range(1, p)})

    def find_difference_sets(self, modulus: int, k: int) -> List[List[int]]:
        """All (N, K, lambda) cyclic difference sets containing 0 and 1, by backtracking"""
        if modulus > SEARCH_LIMIT:
            raise DomainError(f"difference-set search is limited to N <= {SEARCH_LIMIT}")
        if k < 2 or k >= modulus or k * (k - 1) % (modulus - 1):
            return []
        lam = k * (k - 1) // (modulus - 1)
        found: List[List[int]] = []
        counts = [0] * modulus

        def extend(chosen: List[int], start: int):
            if len(chosen) == k:
                found.append(list(chosen))
                return
            for x in range(start, modulus - (k - len(chosen)) + 1):
                touched = []
                ok = True
                for y in chosen:
                    for r in ((x - y) % modulus, (y - x) % modulus):
                        counts[r] += 1
                        touched.append(r)
                        if counts[r] > lam:
                            ok = False
                if ok:
                    chosen.append(x)
                    extend(chosen, x + 1)
                    chosen.pop()
                for r in touched:
                    counts[r] -= 1

        counts[1] = counts[modulus - 1] = 1
        extend([0, 1], 2)
        return found


_difference_set_service: Optional[DifferenceSetService] = None


def get_difference_set_service() -> DifferenceSetService:
    global _difference_set_service
    if _difference_set_service is None:
        _difference_set_service = DifferenceSetService()
    return _difference_set_service


def verify_difference_set(residues: Iterable[int], modulus: int) -> DifferenceSetWitness:
    return get_difference_set_service().verify_difference_set(residues, modulus)


def difference_set_sequence(witness: DifferenceSetWitness) -> BitSequence:
    return get_difference_set_service().difference_set_sequence(witness)
