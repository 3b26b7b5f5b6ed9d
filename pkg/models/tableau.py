from typing import List, Optional, Tuple

from pydantic import BaseModel


class Column(BaseModel):
    e: int
    l: int

    def key(self) -> Tuple[int, int]:
        return (self.e, self.l)


class Tableau(BaseModel):
    """Columns (e_i, l_i) sorted by e, then l"""
    columns: List[Column]

    @classmethod
    def of(cls, pairs) -> "Tableau":
        cols = sorted((Column(e=e, l=l) for e, l in pairs), key=Column.key)
        return cls(columns=cols)

    @property
    def e(self) -> List[int]:
        return [c.e for c in self.columns]

    @property
    def l(self) -> List[int]:
        return [c.l for c in self.columns]

    def pairs(self) -> List[Tuple[int, int]]:
        return [c.key() for c in self.columns]

    def __str__(self) -> str:
        return "(" + " ".join(f"{c.e}/{c.l}" for c in self.columns) + ")"

    def __hash__(self) -> int:
        return hash(tuple(self.pairs()))

    def __eq__(self, other) -> bool:
        return isinstance(other, Tableau) and self.pairs() == other.pairs()


class Witness(BaseModel):
    m: int
    factorization: str
    omega: int
    omega1: int
    i2: int
    tableau: Optional[str] = None


class OmegaStats(BaseModel):
    e: int
    target: int
    r_mu: int
    min_mu: Optional[int] = None
    r_omega1_lower: int
    r_omega_lower: int
    column_bound: int
    # True when the witness-backed lower bounds meet the column bound
    omega_exact: bool = False
    witnesses: List[Witness] = []
