from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel


class Factorization(BaseModel):
    """Prime-power decomposition of a positive integer"""
    value: int
    factors: List[Tuple[int, int]] = []

    def as_dict(self) -> Dict[int, int]:
        return dict(self.factors)

    @property
    def primes(self) -> List[int]:
        return [p for p, _ in self.factors]

    def __str__(self) -> str:
        if not self.factors:
            return "1"
        return "*".join(f"{p}^{e}" if e > 1 else str(p) for p, e in self.factors)


class ArithmeticFunctions(BaseModel):
    n: int
    phi: int
    moebius: int
    omega: int
    omega1: int
    nu: Dict[int, int] = {}


class OrderRecord(BaseModel):
    base: int
    modulus: int
    order: int
    index: int


class UlmerRank(BaseModel):
    q: int
    d: int
    rank: int
    # smallest n with d | p^n + 1, None when not found within the search bound
    witness_exponent: Optional[int] = None
