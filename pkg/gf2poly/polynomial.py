"""Polynomials over the two-element field, packed into Python integers.

Bit k of the integer is the coefficient of X^k, so word w of the packed
vector holds the coefficients of X^(64w) .. X^(64w + 63). Addition is xor,
multiplication is carry-free. The zero polynomial has degree ZERO_DEGREE.

Hex form: each 64-bit word as 16 lowercase hex digits, least significant
word first, words concatenated. The zero polynomial serializes to "".
"""
import math
from dataclasses import dataclass
from typing import Iterable, List, Union

from arith.factor_service import factorize
from common.errors import DomainError

ZERO_DEGREE = -math.inf

WORD_BITS = 64
WORD_MASK = (1 << WORD_BITS) - 1


def _degree(a: int) -> int:
    return a.bit_length() - 1


def _mul(a: int, b: int) -> int:
    if a.bit_length() < b.bit_length():
        a, b = b, a
    c = 0
    while b:
        low = b & -b
        c ^= a << (low.bit_length() - 1)
        b ^= low
    return c


def _square(a: int) -> int:
    # squaring spreads the bits: coefficient k moves to 2k
    return int("0".join(bin(a)[2:]), 2)


def _mod(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    n = b.bit_length()
    while a.bit_length() >= n:
        a ^= b << (a.bit_length() - n)
    return a


def _divmod(a: int, b: int):
    if b == 0:
        raise ZeroDivisionError("division by zero polynomial")
    n = b.bit_length()
    q = 0
    while a.bit_length() >= n:
        shift = a.bit_length() - n
        q ^= 1 << shift
        a ^= b << shift
    return q, a


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, _mod(a, b)
    return a


def _mulmod(a: int, b: int, f: int) -> int:
    return _mod(_mul(a, b), f)


def _powmod(a: int, e: int, f: int) -> int:
    result = 1
    a = _mod(a, f)
    while e:
        if e & 1:
            result = _mulmod(result, a, f)
        e >>= 1
        if e:
            a = _mod(_square(a), f)
    return _mod(result, f)


def _x_pow2k(k: int, f: int) -> int:
    """X^(2^k) mod f"""
    h = _mod(2, f)
    for _ in range(k):
        h = _mod(_square(h), f)
    return h


def _reverse(a: int) -> int:
    return int(bin(a)[:1:-1], 2) if a else 0


@dataclass(frozen=True, order=True)
class Gf2Poly:
    bits: int = 0

    def __post_init__(self):
        if self.bits < 0:
            raise DomainError("coefficient vector must be nonnegative")

    @classmethod
    def from_exponents(cls, exponents: Iterable[int]) -> "Gf2Poly":
        bits = 0
        for k in exponents:
            bits ^= 1 << k
        return cls(bits)

    @classmethod
    def from_bits(cls, coefficients: Iterable[int]) -> "Gf2Poly":
        """Coefficients listed from X^0 upward"""
        bits = 0
        for k, c in enumerate(coefficients):
            if c & 1:
                bits |= 1 << k
        return cls(bits)

    @classmethod
    def from_hex(cls, text: str) -> "Gf2Poly":
        text = text.strip().lower()
        if len(text) % 16:
            raise DomainError(f"hex form must be a sequence of 16-digit words, got {len(text)} digits")
        bits = 0
        for w in range(len(text) // 16):
            bits |= int(text[16 * w : 16 * w + 16], 16) << (WORD_BITS * w)
        return cls(bits)

    def to_hex(self) -> str:
        words = []
        a = self.bits
        while a:
            words.append(f"{a & WORD_MASK:016x}")
            a >>= WORD_BITS
        return "".join(words)

    def words(self) -> List[int]:
        out, a = [], self.bits
        while a:
            out.append(a & WORD_MASK)
            a >>= WORD_BITS
        return out

    @classmethod
    def x_power_plus_one(cls, m: int) -> "Gf2Poly":
        return cls((1 << m) | 1)

    @property
    def degree(self) -> Union[int, float]:
        return _degree(self.bits) if self.bits else ZERO_DEGREE

    def coefficient(self, k: int) -> int:
        return (self.bits >> k) & 1

    def exponents(self) -> List[int]:
        return [k for k in range(self.bits.bit_length()) if (self.bits >> k) & 1]

    def __bool__(self) -> bool:
        return self.bits != 0

    def __int__(self) -> int:
        return self.bits

    def __add__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(self.bits ^ other.bits)

    __sub__ = __add__
    __xor__ = __add__

    def __mul__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(_mul(self.bits, other.bits))

    def __divmod__(self, other: "Gf2Poly"):
        q, r = _divmod(self.bits, other.bits)
        return Gf2Poly(q), Gf2Poly(r)

    def __floordiv__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(_divmod(self.bits, other.bits)[0])

    def __mod__(self, other: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(_mod(self.bits, other.bits))

    def square(self) -> "Gf2Poly":
        return Gf2Poly(_square(self.bits))

    def pow_mod(self, e: int, modulus: "Gf2Poly") -> "Gf2Poly":
        return Gf2Poly(_powmod(self.bits, e, modulus.bits))

    def divides(self, other: "Gf2Poly") -> bool:
        return _mod(other.bits, self.bits) == 0

    def reciprocal(self) -> "Gf2Poly":
        """X^deg f * f(1/X)"""
        if not self.bits & 1:
            raise DomainError("reciprocal needs a nonzero constant term")
        return Gf2Poly(_reverse(self.bits))

    def is_self_reciprocal(self) -> bool:
        return bool(self.bits & 1) and _reverse(self.bits) == self.bits

    def __str__(self) -> str:
        if not self.bits:
            return "0"
        terms = []
        for k in reversed(self.exponents()):
            terms.append("1" if k == 0 else "X" if k == 1 else f"X^{k}")
        return " + ".join(terms)

    def __repr__(self) -> str:
        return f"Gf2Poly({self})"


ZERO = Gf2Poly(0)
ONE = Gf2Poly(1)
X = Gf2Poly(2)


def gcd(f: Gf2Poly, g: Gf2Poly) -> Gf2Poly:
    return Gf2Poly(_gcd(f.bits, g.bits))


def x_pow_mod(e: int, f: Gf2Poly) -> Gf2Poly:
    """X^e mod f"""
    return Gf2Poly(_powmod(2, e, f.bits))


def product(factors: Iterable[Gf2Poly]) -> Gf2Poly:
    out = 1
    for f in factors:
        out = _mul(out, f.bits)
    return Gf2Poly(out)


def is_irreducible(f: Gf2Poly) -> bool:
    """Rabin's test: X^(2^n) = X mod f and gcd(X^(2^(n/l)) - X, f) = 1 for each prime l | n"""
    if not f or f.degree < 1:
        raise DomainError("irreducibility is defined for polynomials of positive degree")
    n = int(f.degree)
    if n == 1:
        return True
    if not f.bits & 1:
        return False
    x = _mod(2, f.bits)
    if _x_pow2k(n, f.bits) != x:
        return False
    for ell in factorize(n).primes:
        h = _x_pow2k(n // ell, f.bits) ^ x
        if _gcd(f.bits, h) != 1:
            return False
    return True


def distinct_degree_factor(f: Gf2Poly) -> List[tuple]:
    """Split a squarefree f into (degree, product of all its irreducible factors of that degree)"""
    if not f:
        raise DomainError("cannot factor the zero polynomial")
    out = []
    a = f.bits
    h = _mod(2, a)
    k = 0
    while _degree(a) >= 2 * (k + 1):
        k += 1
        h = _mod(_square(h), a)
        g = _gcd(a, h ^ 2)
        if g != 1:
            out.append((k, Gf2Poly(g)))
            a = _divmod(a, g)[0]
            h = _mod(h, a)
    if _degree(a) > 0:
        out.append((_degree(a), Gf2Poly(a)))
    return out
