from typing import Dict, List, Optional

from pydantic import BaseModel


class CensusReport(BaseModel):
    x: int
    counts: Dict[str, int] = {}
    predicted: Dict[str, float] = {}
    ratios: Dict[str, float] = {}
    checks: Dict[str, bool] = {}
    members: Dict[str, List[int]] = {}


class DensityValue(BaseModel):
    value: float
    error_bound: float = 0.0
    accelerated: bool = True
    # density / A when the constant is a rational multiple of the Artin constant
    artin_multiple: Optional[str] = None
    note: Optional[str] = None
