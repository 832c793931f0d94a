"""Exact integer helpers: binomials, multinomials, partitions and polynomials.

Python ints are arbitrary precision, so every count here is exact.  Rationals
(used by the geometric oracle) are :class:`fractions.Fraction`.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

BigRational = Fraction

FACTORIAL_CACHE_BOUND = 1024

_factorials = [1]
_fact_lock = threading.Lock()


def factorial(n: int) -> int:
    if n < 0:
        raise ValueError(f"factorial of negative number {n}")
    if n < len(_factorials):
        return _factorials[n]
    if n > FACTORIAL_CACHE_BOUND:
        value = _factorials[-1]
        for i in range(len(_factorials), n + 1):
            value *= i
        return value
    with _fact_lock:
        # idempotent: another thread may have extended the table meanwhile
        while len(_factorials) <= n:
            _factorials.append(_factorials[-1] * len(_factorials))
    return _factorials[n]


def binomial(n: int, k: int) -> int:
    """C(n, k), zero outside 0 <= k <= n."""
    if k < 0 or n < 0 or k > n:
        return 0
    return factorial(n) // (factorial(k) * factorial(n - k))


def multinomial(parts: Iterable[int]) -> int:
    """(sum parts)! / prod(part!)."""
    parts = tuple(parts)
    if any(p < 0 for p in parts):
        return 0
    value = factorial(sum(parts))
    for p in parts:
        value //= factorial(p)
    return value


class Partition(tuple):
    """Weakly decreasing tuple of positive integers.

    Trailing zeros are dropped on construction, so ``Partition((2, 1, 0))``
    equals ``Partition((2, 1))``.  The empty partition is the unique partition
    of zero.
    """

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 0 for p in parts):
            raise ValueError(f"negative part in {parts}")
        parts = tuple(sorted((p for p in parts if p > 0), reverse=True))
        return super().__new__(cls, parts)

    @property
    def weight(self) -> int:
        return sum(self)

    @property
    def length(self) -> int:
        return len(self)

    def multiplicity(self, s: int) -> int:
        return sum(1 for p in self if p == s)

    def multiplicities(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for p in self:
            out[p] = out.get(p, 0) + 1
        return out

    def stabilizer_order(self) -> int:
        """Order of the subgroup of S_l permuting equal parts: prod m_s!."""
        value = 1
        for m in self.multiplicities().values():
            value *= factorial(m)
        return value

    def label(self) -> str:
        """Exponent notation used in printed tables, e.g. ``(2^2 1)``."""
        if not self:
            return "()"
        chunks = []
        for part, mult in _runs(self):
            chunks.append(f"{part}^{mult}" if mult > 1 else f"{part}")
        return "(" + " ".join(chunks) + ")"

    def latex_label(self) -> str:
        if not self:
            return r"$\varnothing$"
        chunks = []
        for part, mult in _runs(self):
            chunks.append(f"{part}^{{{mult}}}" if mult > 1 else f"{part}")
        return "$(" + " ".join(chunks) + ")$"

    def __repr__(self) -> str:
        return f"Partition({tuple(self)!r})"


def _runs(parts: Sequence[int]) -> Iterator[tuple[int, int]]:
    i = 0
    while i < len(parts):
        j = i
        while j < len(parts) and parts[j] == parts[i]:
            j += 1
        yield parts[i], j - i
        i = j


def partitions_of(n: int, max_part: int | None = None) -> Iterator[Partition]:
    """Partitions of n in lexicographically decreasing order."""
    if max_part is None:
        max_part = n
    if n == 0:
        yield Partition()
        return
    for first in range(min(n, max_part), 0, -1):
        for rest in partitions_of(n - first, first):
            yield Partition((first,) + tuple(rest))


def partitions_up_to(d: int) -> list[Partition]:
    """All partitions of 0..d; weights ascending, lex-decreasing within a weight."""
    return [p for i in range(d + 1) for p in partitions_of(i)]


def parse_partition(text: str) -> Partition:
    """Parse ``"2,2,1"`` (or ``"∅"``/``""``) into a Partition."""
    text = text.strip().strip("()")
    if text in ("", "∅", "empty"):
        return Partition()
    try:
        parts = [int(x) for x in text.replace(" ", ",").split(",") if x]
    except ValueError:
        raise ValueError(f"malformed partition {text!r}") from None
    if any(p <= 0 for p in parts):
        raise ValueError(f"partition parts must be positive: {text!r}")
    return Partition(parts)


@dataclass(frozen=True)
class IntegerPolynomial:
    """Integer polynomial in t; ``coeffs[i]`` is the coefficient of t^i."""

    coeffs: tuple[int, ...] = ()

    def __post_init__(self):
        c = list(self.coeffs)
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(int(x) for x in c))

    @classmethod
    def from_descending(cls, coeffs: Sequence[int]) -> "IntegerPolynomial":
        return cls(tuple(reversed(tuple(coeffs))))

    @classmethod
    def from_roots(cls, roots: Iterable[int]) -> "IntegerPolynomial":
        p = cls((1,))
        for r in roots:
            p = p * cls((-r, 1))
        return p

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1 if self.coeffs else -1

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else 0

    def descending(self) -> list[int]:
        return list(reversed(self.coeffs)) or [0]

    def __call__(self, t):
        value = 0
        for c in reversed(self.coeffs):
            value = value * t + c
        return value

    def __add__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        n = max(len(self.coeffs), len(other.coeffs))
        return IntegerPolynomial(tuple(self.coefficient(i) + other.coefficient(i) for i in range(n)))

    def __neg__(self) -> "IntegerPolynomial":
        return IntegerPolynomial(tuple(-c for c in self.coeffs))

    def __sub__(self, other: "IntegerPolynomial") -> "IntegerPolynomial":
        return self + (-other)

    def __mul__(self, other) -> "IntegerPolynomial":
        if isinstance(other, int):
            return IntegerPolynomial(tuple(c * other for c in self.coeffs))
        out = [0] * max(0, len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return IntegerPolynomial(tuple(out))

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "IntegerPolynomial":
        out = IntegerPolynomial((1,))
        for _ in range(e):
            out = out * self
        return out

    def divide_by_t(self) -> "IntegerPolynomial":
        """Exact division by t; raises if the constant term is nonzero."""
        if self.coefficient(0) != 0:
            raise ArithmeticError(f"{self} is not divisible by t")
        return IntegerPolynomial(self.coeffs[1:])

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = str(mag)
            else:
                mono = "t" if i == 1 else f"t^{i}"
                body = mono if mag == 1 else f"{mag}{mono}"
            if not terms:
                terms.append(body if c > 0 else f"-{body}")
            else:
                terms.append(("+ " if c > 0 else "- ") + body)
        return " ".join(terms)
