from functools import lru_cache

import pytest

from arrange_count.cache import CountStore
from arrange_count.charpoly import CharPolyResult, MuCache, char_poly, mu_hat1, mu_of_type
from arrange_count.counting import lambda_via_c
from arrange_count.errors import BudgetExceeded
from arrange_count.exact import IntegerPolynomial, binomial, partitions_up_to
from arrange_count.lattice import enumerate_lattice, type_of

POLY = IntegerPolynomial.from_descending

@lru_cache(maxsize=None)
def lattice(n, d):
    return enumerate_lattice(n, d)


@pytest.mark.parametrize("d", range(0, 5))
def test_boolean_polynomial(d):
    assert char_poly(d + 1, d).char_poly == IntegerPolynomial((-1, 1)) ** (d + 1)


@pytest.mark.parametrize("d", range(0, 5))
def test_braid_polynomial(d):
    assert char_poly(d + 2, d).char_poly == IntegerPolynomial.from_roots(range(1, d + 2))


@pytest.mark.parametrize("n, d", [(n, d) for d in range(1, 5) for n in range(d + 1, 10)])
def test_structural_properties(n, d):
    res = char_poly(n, d)
    chi = res.char_poly
    assert chi(1) == 0
    assert chi.degree == d + 1 and chi.coefficient(d + 1) == 1
    assert chi.coefficient(d) == -binomial(n, d)
    assert chi.coefficient(0) == res.mu_max
    assert (res.mu_max > 0) == ((d + 1) % 2 == 0) and res.mu_max != 0
    for row in res.types:
        if row.lam:
            assert row.mu != 0
            assert (row.mu > 0) == (row.gamma.weight % 2 == 0)
    assert res.deconed * IntegerPolynomial((0, 1)) + IntegerPolynomial((res.mu_max,)) == chi


@pytest.mark.parametrize("n, d", [(4, 1), (5, 2), (6, 2), (5, 3), (6, 3), (7, 3), (6, 4), (7, 4)])
def test_mobius_matches_poset(n, d):
    P = lattice(n, d)
    mu = P.mobius()
    for i, T in enumerate(P.elements):
        assert mu[i] == mu_of_type(n, d, type_of(T, d))


@pytest.mark.parametrize("n", range(2, 13))
def test_low_dimension_closed_forms(n):
    assert char_poly(n, 1).deconed == POLY([1, -n])
    if n >= 3:
        res = char_poly(n, 2)
        assert res.deconed == POLY([1, -binomial(n, 2), -n + 2 * binomial(n, 2) + 3 * binomial(n, 4)])
        assert res.mu_max == -(n - 2) * (n - 1) * (n * n - 3 * n + 4) // 8


@pytest.mark.parametrize("n, d", [(n, d) for d in range(1, 7) for n in range(d + 1, 12)])
def test_product_type_values(n, d):
    for m in range(1, (d + 1) // 2 + 1):
        if 2 * m <= d:
            assert mu_of_type(n, d, (2,) * m) == (n - d) ** m
        if 3 * m <= d:
            base = -(n - d) * (n - d + 1) * (d * d - 2 * d * n + n * n + n + 2 - d) // 8
            assert mu_of_type(n, d, (3,) * m) == base ** m


@pytest.mark.parametrize("k", range(0, 4))
def test_k_invariance(k):
    grid = [d for d in range(1, 6) if d + k + 1 <= 9]
    for gamma in partitions_up_to(min(grid[-1], 4)):
        values = {mu_of_type(d + k + 1, d, gamma) for d in grid if gamma.weight <= d}
        assert len(values) <= 1


@pytest.mark.parametrize("d, expected", [(1, 3), (2, -21), (3, 300), (4, -7890), (5, 349650)])
def test_top_mobius_k2(d, expected):
    assert mu_hat1(d + 3, d) == expected


def test_known_polynomials():
    assert str(char_poly(6, 3).char_poly) == "t^4 - 20t^3 + 145t^2 - 426t + 300"
    assert char_poly(5, 2).char_poly == POLY([1, -10, 30, -21])
    assert char_poly(7, 4).char_poly == POLY([1, -35, 490, -3381, 10815, -7890])


def test_json_roundtrip():
    res = char_poly(7, 4)
    again = CharPolyResult.from_json(res.to_json())
    assert again == res
    assert all(isinstance(c, str) for c in res.to_json()["char_poly"])


def test_custom_lambda_and_budget_errors():
    store = CountStore()
    calls = []

    def lam(n, d, gamma):
        calls.append((n, d, gamma))
        return lambda_via_c(n, d, gamma, store=store)

    res = char_poly(6, 3, lam=lam, cache=MuCache())
    assert res.mu_max == 300 and calls

    def refuse(n, d, gamma):
        raise BudgetExceeded("test", 0)

    with pytest.raises(BudgetExceeded):
        char_poly(6, 3, lam=refuse, cache=MuCache())


def test_rejects_bad_parameters():
    with pytest.raises(ValueError):
        char_poly(3, 3)


def test_lambda_of():
    res = char_poly(6, 3)
    assert res.lambda_of((2, 1)) == 60
    with pytest.raises(KeyError):
        res.lambda_of((5,))
