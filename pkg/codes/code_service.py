import logging
from collections import Counter
from typing import Dict, List, Optional

import numpy as np

from common.errors import DomainError, SizeError
from common.workers import map_ordered, progress
from config.settings import get_settings
from models.code import BinaryLinearCode, CodeProperties, WeightSample
from sequences.sequence_service import (
    SequenceLike,
    SequenceService,
    as_sequence,
    get_sequence_service,
    sequence_value,
)

logger = logging.getLogger(__name__)

# codes above this dimension are never scanned, not even partially
MAX_DIMENSION = 28

# popcount of every byte value
BYTE_WEIGHTS = np.array([bin(i).count("1") for i in range(256)], dtype=np.int64)


def _popcount(v: int) -> int:
    return bin(v).count("1")


def _span(rows: List[int]) -> np.ndarray:
    """All 2^len(rows) combinations of rows, as uint64"""
    words = np.zeros(1, dtype=np.uint64)
    for row in rows:
        words = np.concatenate((words, words ^ np.uint64(row)))
    return words


def _weights_u64(words: np.ndarray) -> np.ndarray:
    return BYTE_WEIGHTS[words.view(np.uint8)].reshape(-1, 8).sum(axis=1)


class CodeService:
    """Extended cyclic self-dual codes built from very odd sequences, and their weights"""

    def __init__(self, sequence_service: Optional[SequenceService] = None):
        self._sequences = sequence_service or get_sequence_service()
        settings = get_settings()
        self._exhaustive_limit = settings.VOS_CODE_EXHAUSTIVE_LIMIT
        self._samples = settings.VOS_CODE_SAMPLES
        self._seed = settings.VOS_SEED

    def build_self_dual_code(self, s: SequenceLike) -> BinaryLinearCode:
        """Rows X^i b(X), i < n, of the cyclic code of length 2n - 1, plus an overall parity bit"""
        s = as_sequence(s)
        if not self._sequences.is_very_odd(s):
            raise DomainError(f"{s.bits} is not very odd")
        n = s.length
        b = sequence_value(s)
        parity = 1 << (2 * n - 1)
        rows = []
        for i in range(n):
            row = b << i
            if _popcount(row) & 1:
                row |= parity
            rows.append(row)
        return BinaryLinearCode(length=2 * n, dimension=n, generator=rows)

    def is_self_orthogonal(self, code: BinaryLinearCode) -> bool:
        rows = code.generator
        return all(_popcount(rows[i] & rows[j]) % 2 == 0 for i in range(len(rows)) for j in range(i, len(rows)))

    def weight_distribution(self, code: BinaryLinearCode) -> Dict[int, int]:
        """Exact weight enumerator by scanning all 2^k codewords"""
        k = code.dimension
        if k > MAX_DIMENSION:
            raise SizeError(f"dimension {k} is too large for a codeword scan", count=2**k)
        if code.length <= 64:
            return self._weights_meet_in_middle(code.generator)
        return self._weights_gray(code.generator)

    def _weights_meet_in_middle(self, rows: List[int]) -> Dict[int, int]:
        half = len(rows) // 2
        left = _span(rows[half:])
        right = [int(w) for w in _span(rows[:half])]
        chunk = max(1, len(right) // 64)

        def tally(start: int) -> np.ndarray:
            hist = np.zeros(65, dtype=np.int64)
            for w in right[start : start + chunk]:
                hist += np.bincount(_weights_u64(left ^ np.uint64(w)), minlength=65)
            return hist

        starts = range(0, len(right), chunk)
        total = sum(map_ordered(tally, progress(starts, desc="codewords", total=len(starts))))
        return {w: int(c) for w, c in enumerate(total) if c}

    def _weights_gray(self, rows: List[int]) -> Dict[int, int]:
        hist: Counter = Counter({0: 1})
        word = 0
        for i in range(1, 1 << len(rows)):
            word ^= rows[(i & -i).bit_length() - 1]
            hist[_popcount(word)] += 1
        return dict(sorted(hist.items()))

    def sample_weights(self, code: BinaryLinearCode, samples: Optional[int] = None, seed: Optional[int] = None) -> WeightSample:
        """Weights of uniformly random codewords, computed as a matrix product mod 2"""
        samples = self._samples if samples is None else samples
        seed = self._seed if seed is None else seed
        rng = np.random.default_rng(seed)
        generator = np.array(
            [[(row >> j) & 1 for j in range(code.length)] for row in code.generator], dtype=np.int32
        )
        coefficients = rng.integers(0, 2, size=(samples, code.dimension), dtype=np.int32)
        weights = ((coefficients @ generator) % 2).sum(axis=1)
        counts = np.bincount(weights, minlength=code.length + 1)
        nonzero = weights[weights > 0]
        return WeightSample(
            samples=samples,
            seed=seed,
            histogram={w: int(c) for w, c in enumerate(counts) if c},
            min_nonzero_weight=int(nonzero.min()) if nonzero.size else None,
        )

    def code_properties(self, code: BinaryLinearCode) -> CodeProperties:
        self_dual = 2 * code.dimension == code.length and self.is_self_orthogonal(code)
        if code.dimension <= self._exhaustive_limit:
            weights = self.weight_distribution(code)
            exhaustive = True
            nonzero = [w for w in weights if w > 0]
            min_distance = min(nonzero) if nonzero else 0
        elif code.dimension <= MAX_DIMENSION:
            sample = self.sample_weights(code)
            weights = sample.histogram
            exhaustive = False
            min_distance = sample.min_nonzero_weight or 0
            logger.warning(
                f"[CODE] dimension {code.dimension} above exhaustive limit {self._exhaustive_limit}; "
                f"weights sampled, minimum distance {min_distance} is an upper bound"
            )
        else:
            raise SizeError(f"dimension {code.dimension} is too large for weight enumeration", count=2**code.dimension)
        return CodeProperties(
            length=code.length,
            dimension=code.dimension,
            self_dual=self_dual,
            doubly_even=all(w % 4 == 0 for w in weights),
            min_distance=min_distance,
            weight_enumerator=weights,
            exhaustive=exhaustive,
        )


_code_service: Optional[CodeService] = None


def get_code_service() -> CodeService:
    global _code_service
    if _code_service is None:
        _code_service = CodeService()
    return _code_service


def build_self_dual_code(s: SequenceLike) -> BinaryLinearCode:
    return get_code_service().build_self_dual_code(s)


def code_properties(code: BinaryLinearCode) -> CodeProperties:
    return get_code_service().code_properties(code)
