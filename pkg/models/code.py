from typing import Dict, List, Optional

from pydantic import BaseModel


class BinaryLinearCode(BaseModel):
    """Generator rows packed as integers, bit j is coordinate j"""
    length: int
    dimension: int
    generator: List[int]

    def rows_hex(self) -> List[str]:
        words = (self.length + 63) // 64
        out = []
        for row in self.generator:
            out.append("".join(f"{(row >> (64 * w)) & 0xFFFFFFFFFFFFFFFF:016x}" for w in range(words)))
        return out


class CodeProperties(BaseModel):
    length: int
    dimension: int
    self_dual: bool
    doubly_even: bool
    min_distance: int
    weight_enumerator: Dict[int, int] = {}
    # False when weights come from sampling; min_distance is then an upper bound
    exhaustive: bool = True


class DifferenceSetWitness(BaseModel):
    modulus: int
    elements: List[int]
    k: int
    lam: int


class WeightSample(BaseModel):
    samples: int
    seed: int
    histogram: Dict[int, int] = {}
    min_nonzero_weight: Optional[int] = None
