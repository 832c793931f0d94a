"""Möbius values and characteristic polynomials of L_{n,d}.

Every ideal below an element factors into smaller lattices with the same
k = n - d - 1, so mu of an element of type gamma is the product of the top
Möbius values of L_{k+g_i, g_i-1}.  The top value itself follows from
chi(1) = 0.  Both recursions only need element counts per type, supplied by a
``lam(n, d, gamma)`` callable.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import BudgetExceeded
from .exact import IntegerPolynomial, Partition, partitions_up_to

LambdaFn = Callable[[int, int, Partition], int]


def _default_lambda(n: int, d: int, gamma: Partition) -> int:
    from .counting import lambda_via_c

    return lambda_via_c(n, d, gamma)


class MuCache(dict):
    """Top Möbius values keyed by (k, d+1); values do not depend on d otherwise."""


_generic_mu = MuCache()


@dataclass
class TypeRow:
    gamma: Partition
    lam: int
    mu: int


@dataclass
class CharPolyResult:
    n: int
    d: int
    k: int
    char_poly: IntegerPolynomial
    deconed: IntegerPolynomial
    mu_max: int
    types: list[TypeRow] = field(default_factory=list)

    def lambda_of(self, gamma) -> int:
        gamma = Partition(gamma)
        for row in self.types:
            if row.gamma == gamma:
                return row.lam
        raise KeyError(gamma)

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "k": self.k,
            "mu_max": str(self.mu_max),
            "char_poly": [str(c) for c in self.char_poly.descending()],
            "types": [
                {"gamma": list(r.gamma), "lambda": str(r.lam), "mu": str(r.mu)} for r in self.types
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CharPolyResult":
        chi = IntegerPolynomial.from_descending([int(c) for c in data["char_poly"]])
        mu_max = int(data["mu_max"])
        return cls(
            n=data["n"],
            d=data["d"],
            k=data["k"],
            char_poly=chi,
            deconed=(chi - IntegerPolynomial((mu_max,))).divide_by_t(),
            mu_max=mu_max,
            types=[TypeRow(Partition(t["gamma"]), int(t["lambda"]), int(t["mu"])) for t in data["types"]],
        )


def mu_hat1(n: int, d: int, lam: LambdaFn | None = None, cache: MuCache | None = None) -> int:
    """Möbius value of the top element of L_{n,d}."""
    if d < 0 or n < d + 1:
        raise ValueError(f"need n > d >= 0, got n={n}, d={d}")
    lam = _default_lambda if lam is None else lam
    cache = _generic_mu if cache is None else cache
    k = n - d - 1
    if d == 0:
        return -1
    key = (k, d + 1)
    if key in cache:
        return cache[key]
    total = 0
    for gamma in partitions_up_to(d):
        count = _lambda_or_raise(lam, n, d, gamma)
        if count:
            total += count * mu_of_type(n, d, gamma, lam, cache)
    cache[key] = -total
    return -total


def mu_of_type(n: int, d: int, gamma, lam: LambdaFn | None = None, cache: MuCache | None = None) -> int:
    """Möbius value of any element of type gamma (empty product for gamma = ())."""
    gamma = Partition(gamma)
    if gamma == Partition((d + 1,)):
        return mu_hat1(n, d, lam, cache)
    value = 1
    for g in gamma:
        value *= mu_hat1(n - d + g - 1, g - 1, lam, cache)
    return value


def _lambda_or_raise(lam: LambdaFn, n: int, d: int, gamma: Partition) -> int:
    try:
        return lam(n, d, gamma)
    except BudgetExceeded as exc:
        raise BudgetExceeded(f"lambda_{{{n},{d}}}{tuple(gamma)}: {exc.what}", exc.budget, exc.estimate) from exc


def char_poly(n: int, d: int, lam: LambdaFn | None = None, cache: MuCache | None = None) -> CharPolyResult:
    """Cone polynomial chi_{n,d}, its deconed form and the per-type table."""
    if d < 0 or n < d + 1:
        raise ValueError(f"need n > d >= 0, got n={n}, d={d}")
    lam = _default_lambda if lam is None else lam
    cache = _generic_mu if cache is None else cache
    # fill lower levels first so the memo is built bottom-up
    for e in range(d):
        mu_hat1(n - d + e, e, lam, cache)
    rows = []
    coeffs = [0] * (d + 2)
    for gamma in partitions_up_to(d):
        count = _lambda_or_raise(lam, n, d, gamma)
        mu = mu_of_type(n, d, gamma, lam, cache)
        rows.append(TypeRow(gamma, count, mu))
        coeffs[d + 1 - gamma.weight] += count * mu
    top = mu_hat1(n, d, lam, cache)
    coeffs[0] += top
    chi = IntegerPolynomial(tuple(coeffs))
    if chi(1) != 0:
        raise ArithmeticError(f"chi_{{{n},{d}}}(1) = {chi(1)} != 0")
    deconed = (chi - IntegerPolynomial((top,))).divide_by_t()
    return CharPolyResult(n, d, n - d - 1, chi, deconed, top, rows)
