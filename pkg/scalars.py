"""
Scalars Module
Exact field arithmetic over F_p and Q, p-ary digits, digit factorials and
Lucas-style binomial / multinomial coefficients modulo p.

Scalars are plain Python values: an ``int`` in [0, p) for a prime field and
a ``fractions.Fraction`` in lowest terms for the rationals. ``FieldSpec``
owns normalization, parsing and formatting.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Union

Scalar = Union[int, Fraction]


class InvalidFieldError(ValueError):
    """Raised for a non-prime characteristic or a field of the wrong kind."""


class ContractViolation(ValueError):
    """Raised when a documented precondition does not hold."""


def is_prime(n: int) -> bool:
    """Deterministic primality check by trial division (p < 2^31)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    for i in range(3, math.isqrt(n) + 1, 2):
        if n % i == 0:
            return False
    return True


def _require_prime(p: int) -> None:
    if not isinstance(p, int) or not is_prime(p):
        raise InvalidFieldError(f"p={p!r} is not a prime")


@dataclass(frozen=True)
class FieldSpec:
    """
    The coefficient field: F_p when ``p`` is set, Q when ``p`` is None.

    Use ``FieldSpec.prime(p)`` and ``FieldSpec.rational()`` to build one.
    """
    p: Optional[int] = None

    def __post_init__(self):
        if self.p is not None:
            _require_prime(self.p)

    @classmethod
    def prime(cls, p: int) -> 'FieldSpec':
        return cls(p)

    @classmethod
    def rational(cls) -> 'FieldSpec':
        return cls(None)

    @property
    def is_prime(self) -> bool:
        return self.p is not None

    @property
    def characteristic(self) -> int:
        return self.p if self.p is not None else 0

    @property
    def zero(self) -> Scalar:
        return 0 if self.is_prime else Fraction(0)

    @property
    def one(self) -> Scalar:
        return 1 if self.is_prime else Fraction(1)

    def element(self, value: Union[int, Fraction, str]) -> Scalar:
        """
        Normalize a value into its canonical form in this field.

        Args:
            value: an int, a Fraction, or a value-string ("3", "-2/5")

        Returns:
            The canonical residue (prime field) or reduced Fraction (Q)
        """
        if isinstance(value, str):
            return self.parse(value)
        if self.p is None:
            return Fraction(value)
        if isinstance(value, Fraction):
            if value.denominator % self.p == 0:
                raise ZeroDivisionError(f"{value} has no image in F_{self.p}")
            return value.numerator * pow(value.denominator, -1, self.p) % self.p
        return int(value) % self.p

    def inverse(self, value: Scalar) -> Scalar:
        if value == 0:
            raise ZeroDivisionError("division by zero in " + str(self))
        if self.p is None:
            return 1 / Fraction(value)
        return pow(int(value), -1, self.p)

    def divide(self, a: Scalar, b: Scalar) -> Scalar:
        return self.element(a * self.inverse(b))

    def parse(self, text: str) -> Scalar:
        """Parse a value-string. Prime fields accept only canonical residues."""
        text = text.strip()
        if self.p is None:
            try:
                return Fraction(text)
            except (ValueError, ZeroDivisionError) as e:
                raise ValueError(f"invalid rational value {text!r}: {e}")
        if not text.isdigit():
            raise ValueError(f"invalid F_{self.p} value {text!r}")
        value = int(text)
        if value >= self.p:
            raise ValueError(f"value {value} is not a canonical residue mod {self.p}")
        return value

    def format(self, value: Scalar) -> str:
        """Canonical value-string: decimal residue, integer, or a/b."""
        value = self.element(value)
        if self.p is not None:
            return str(value)
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"

    def __str__(self) -> str:
        return f"F_{self.p}" if self.p is not None else "Q"


def p_digits(n: int, p: int) -> List[int]:
    """
    p-ary digits of n, least significant first, no trailing zeros.

    Args:
        n: nonnegative integer
        p: prime

    Returns:
        Digit list; empty for n = 0
    """
    _require_prime(p)
    if n < 0:
        raise ContractViolation(f"n={n} must be nonnegative")
    digits = []
    while n:
        n, d = divmod(n, p)
        digits.append(d)
    return digits


def reconstruct(digits: Sequence[int], p: int) -> int:
    return sum(d * p ** i for i, d in enumerate(digits))


@lru_cache(maxsize=None)
def _digit_factorial(d: int, p: int) -> int:
    return math.factorial(d) % p


def gamma(n: int, p: int) -> int:
    """Product of the factorials of the p-digits of n, mod p. Always a unit."""
    result = 1
    for d in p_digits(n, p):
        result = result * _digit_factorial(d, p) % p
    return result


@lru_cache(maxsize=65536)
def lucas_binomial(n: int, r: int, p: int) -> int:
    """
    C(n, r) mod p computed digit-wise (Lucas).

    Zero exactly when some digit of r exceeds the matching digit of n.
    By convention r > n (or r < 0) gives 0.
    """
    _require_prime(p)
    if r < 0 or r > n:
        return 0
    result = 1
    while r:
        n, nd = divmod(n, p)
        r, rd = divmod(r, p)
        if rd > nd:
            return 0
        result = result * math.comb(nd, rd) % p
    return result


def lucas_multinomial(n: int, parts: Sequence[int], p: int) -> int:
    """
    Multinomial coefficient C(n; parts) mod p.

    Zero iff some digit column of the parts sums to p or more ("carrying");
    otherwise the product of the per-digit multinomials.

    Raises:
        ContractViolation: parts do not sum to n
    """
    _require_prime(p)
    if any(part < 0 for part in parts) or sum(parts) != n:
        raise ContractViolation(f"parts {list(parts)} do not sum to {n}")
    result = 1
    parts = list(parts)
    while any(parts):
        column = []
        for i, part in enumerate(parts):
            parts[i], d = divmod(part, p)
            column.append(d)
        total = sum(column)
        if total >= p:
            return 0
        term = math.factorial(total)
        for d in column:
            term //= math.factorial(d)
        result = result * term % p
    return result


def binomial_in(field: FieldSpec, n: int, r: int) -> Scalar:
    """C(n, r) as an element of ``field`` (Lucas path for prime fields)."""
    if field.is_prime:
        return lucas_binomial(n, r, field.p)
    if r < 0 or r > n:
        return Fraction(0)
    return Fraction(math.comb(n, r))


def multinomial_in(field: FieldSpec, parts: Iterable[int]) -> Scalar:
    parts = list(parts)
    n = sum(parts)
    if field.is_prime:
        return lucas_multinomial(n, parts, field.p)
    result = math.factorial(n)
    for part in parts:
        result //= math.factorial(part)
    return Fraction(result)


def factorial_in(field: FieldSpec, k: int) -> Scalar:
    return field.element(math.factorial(k))


if __name__ == "__main__":
    print(f"p_digits(10, 3) = {p_digits(10, 3)}")
    print(f"gamma(5, 3) = {gamma(5, 3)}")
    print(f"lucas_binomial(6, 3, 2) = {lucas_binomial(6, 3, 2)}")
    print(f"lucas_multinomial(4, [2, 1, 1], 5) = {lucas_multinomial(4, [2, 1, 1], 5)}")
