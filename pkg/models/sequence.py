import re
from typing import List, Optional

from pydantic import BaseModel, field_validator

_BITS = re.compile(r"^[01]+$")


class BitSequence(BaseModel):
    """A 0/1 sequence a_1 ... a_n; the leftmost character is a_1"""
    bits: str

    @field_validator("bits")
    @classmethod
    def _check_bits(cls, value: str) -> str:
        value = value.strip()
        if not _BITS.match(value):
            raise ValueError(f"not a bit string: {value!r}")
        return value

    @property
    def length(self) -> int:
        return len(self.bits)

    def __str__(self) -> str:
        return self.bits

    def __hash__(self) -> int:
        return hash(self.bits)


class AutocorrelationProfile(BaseModel):
    values: List[int]


class SequenceCount(BaseModel):
    n: int
    value: int
    # S(n) = 2^exponent; None when S(n) = 0
    exponent: Optional[int] = None
    i2: Optional[int] = None
