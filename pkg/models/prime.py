from math import gcd
from typing import List, Tuple

from pydantic import BaseModel, field_validator, model_validator

from common.errors import DomainError


class PrimeClass(BaseModel):
    p: int
    ord2: int
    index_m: int
    in_P: bool
    wieferich: bool
    in_Pm: bool
    in_Pm_prime: bool


class SearchSpec(BaseModel):
    """Congruence description of a prime search inside P_m"""
    index_m: int
    required: List[Tuple[int, int]] = []
    forbidden: List[Tuple[int, int]] = []
    non_wieferich_at_m: bool = False
    require_odd_order: bool = True
    bound: int = 10**7

    @field_validator("required", "forbidden")
    @classmethod
    def _check_moduli(cls, value: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
        for a, f in value:
            if f < 1:
                raise ValueError(f"modulus must be positive: {f}")
        return [(a % f, f) for a, f in value]

    @model_validator(mode="after")
    def _check_required_units(self) -> "SearchSpec":
        # a class a mod f with gcd(a, f) > 1 holds at most one prime
        for a, f in self.required:
            if f > 1 and gcd(a, f) != 1:
                raise DomainError(f"required class {a} mod {f} is not coprime to its modulus")
        return self

    def admits(self, p: int) -> bool:
        """Congruence conditions only"""
        for a, f in self.required:
            if p % f != a:
                return False
        for a, f in self.forbidden:
            if p % f == a:
                return False
        return True
