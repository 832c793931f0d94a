from functools import lru_cache
from itertools import combinations, product
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from arrange_count.errors import BudgetExceeded
from arrange_count.exact import Partition
from arrange_count.lattice import (
    RankedPoset,
    SetFamily,
    complement_transform,
    enumerate_lattice,
    ideal_product_check,
    is_lattice_element,
    is_lattice_element_upper,
    iter_lattice_families,
    leq,
    leq_upper,
    mask_of,
    popcount,
    posets_isomorphic,
    rho_D,
    symbols_of,
    type_of,
)


def brute_is_element(members, n, d):
    """Definition check, every sub-family of size >= 2 tested from scratch."""
    if any(popcount(m) > d for m in members):
        return False
    for size in range(2, len(members) + 1):
        for sub in combinations(members, size):
            inter = (1 << n) - 1
            for m in sub:
                inter &= m
            rank = sum(d + 1 - popcount(m) for m in sub)
            if d + 1 - popcount(inter) - rank <= 0:
                return False
    return True


def stirling2(n, k):
    if n == k:
        return 1
    if k == 0 or k > n:
        return 0
    return k * stirling2(n - 1, k) + stirling2(n - 1, k - 1)


@lru_cache(maxsize=None)
def lattice(n, d):
    return enumerate_lattice(n, d)


def test_mask_roundtrip():
    assert mask_of([1, 3]) == 0b101
    assert symbols_of(0b101) == (1, 3)


def test_set_family_canonical():
    a = SetFamily.of([[2, 3], [1]], 4)
    b = SetFamily.of([[1], [3, 2]], 4)
    assert a == b
    assert str(a) == "{{1}, {2,3}}"
    with pytest.raises(ValueError):
        SetFamily((1, 1), 3)
    with pytest.raises(ValueError):
        SetFamily((0b1000,), 3)


def test_rho_and_type():
    T = SetFamily.of([[1, 2], [1, 3]], 5)
    # d = 3: codims 2 and 2, intersection {1} has codim 3
    assert rho_D(T, 3) == (4, -1)
    assert type_of(T, 3) == Partition((2, 2))
    assert not is_lattice_element(T, 5, 3)
    assert is_lattice_element(SetFamily.of([[1, 2, 3], [1, 4, 5]], 5), 5, 3)


@settings(max_examples=300)
@given(st.integers(3, 6).flatmap(lambda n: st.tuples(
    st.just(n), st.integers(1, n - 1), st.sets(st.integers(0, (1 << n) - 1), max_size=4))))
def test_incremental_check_matches_definition(args):
    n, d, members = args
    T = SetFamily(tuple(members), n)
    assert is_lattice_element(T, n, d) == brute_is_element(T.members, n, d)


@pytest.mark.parametrize("n, d", [(3, 1), (4, 1), (4, 2), (5, 2), (4, 3)])
def test_enumeration_matches_brute_force(n, d):
    cands = [m for m in range(1 << n) if popcount(m) <= d]
    brute = set()
    for size in range(0, 5):
        for fam in combinations(cands, size):
            if brute_is_element(fam, n, d):
                brute.add(SetFamily(fam, n))
    # every codim is >= 1 and the rank is <= d+1, so no element has more than 4 members here
    enumerated = {SetFamily(m, n) for m in iter_lattice_families(n, d)}
    assert enumerated == brute


@pytest.mark.parametrize("n, d", [(4, 2), (5, 2), (5, 3), (6, 3)])
def test_enumerated_elements_are_valid(n, d):
    P = lattice(n, d)
    for T in P.elements:
        r, _ = rho_D(T, d)
        assert r <= d + 1
        assert brute_is_element(T.members, n, d)
    assert P.ranks[P.minimum()] == 0
    assert P.elements[-1] == SetFamily((0,), n)
    assert type_of(P.elements[-1], d) == Partition((d + 1,))


def test_poset_axioms():
    P = lattice(5, 2)
    E = P.elements
    for a in E:
        assert P.leq(a, a)
    for a, b in product(E, repeat=2):
        assert P.leq(a, b) == leq(a, b, 2)
        if a != b and P.leq(a, b):
            assert not P.leq(b, a)
            assert P.ranks[P.index[a]] < P.ranks[P.index[b]]
    for i, j in P.covers():
        assert P.ranks[i] < P.ranks[j]
    for a, b, c in product(E[::3], repeat=3):
        if P.leq(a, b) and P.leq(b, c):
            assert P.leq(a, c)


@pytest.mark.parametrize("d", range(0, 5))
def test_boolean_case(d):
    P = lattice(d + 1, d)
    assert P.rank_sizes() == [comb(d + 1, r) for r in range(d + 2)]
    mu = P.mobius()
    assert all(mu[i] == (-1) ** P.ranks[i] for i in range(len(P)))
    boolean = RankedPoset.from_leq(list(range(1 << (d + 1))), popcount, lambda a, b: a & ~b == 0)
    assert posets_isomorphic(P, boolean)


@pytest.mark.parametrize("d", range(0, 5))
def test_braid_case_rank_sizes(d):
    P = lattice(d + 2, d)
    m = d + 2
    assert P.rank_sizes() == [stirling2(m, m - r) for r in range(d + 2)]


@pytest.mark.parametrize("k, d", [(k, d) for k in range(4) for d in range(1, 4) if d + k + 1 <= 7])
def test_pairwise_intersection_bound(k, d):
    n = d + k + 1
    for members in iter_lattice_families(n, d, max_elements=None):
        S = complement_transform(SetFamily(members, n))
        for a, b in combinations(S.members, 2):
            assert k > popcount(a & b) >= 0


@pytest.mark.parametrize("n, d", [(4, 2), (5, 2), (5, 3), (6, 3)])
def test_complement_transform_preserves_order(n, d):
    k = n - d - 1
    P = lattice(n, d)
    images = [complement_transform(T) for T in P.elements]
    assert len(set(images)) == len(images)
    for T, S in zip(P.elements, images):
        assert complement_transform(S) == T
        assert is_lattice_element_upper(S, n, k)
    step = 1 if len(P) < 120 else 3
    for (T, S), (T2, S2) in product(list(zip(P.elements, images))[::step], repeat=2):
        assert leq(T, T2, d) == leq_upper(S, S2, k)


@pytest.mark.parametrize("n, d, gamma", [
    (5, 2, (1, 1)), (5, 2, (2,)), (6, 3, (1, 1, 1)), (6, 3, (2, 1)), (5, 3, (2, 2)), (6, 2, (1, 1)),
])
def test_stabilizer_identity(n, d, gamma):
    gamma = Partition(gamma)
    P = lattice(n, d)
    lam = sum(1 for T in P.elements if type_of(T, d) == gamma)
    pools = [[m for m in range(1 << n) if popcount(m) == d + 1 - g] for g in gamma]
    ordered = 0
    for tup in product(*pools):
        if len(set(tup)) == len(tup) and brute_is_element(tup, n, d):
            ordered += 1
    assert lam * gamma.stabilizer_order() == ordered


def test_product_and_isomorphism():
    chain = RankedPoset([0, 1], [0, 1], [1, 3])
    square = chain.product(chain)
    cube = square.product(chain)
    boolean3 = RankedPoset.from_leq(list(range(8)), popcount, lambda a, b: a & ~b == 0)
    assert posets_isomorphic(cube, boolean3)
    assert not posets_isomorphic(square, RankedPoset([0, 1, 2], [0, 1, 2], [1, 3, 7]))


def _ideal_grid():
    return [(n, d) for n in range(2, 7) for d in range(1, 4) if n > d]


@pytest.mark.parametrize("n, d", _ideal_grid())
def test_ideal_product_structure(n, d):
    P = lattice(n, d)
    checked = 0
    for T in P.elements:
        if popcount(P.below[P.index[T]]) > 200:
            continue
        assert ideal_product_check(n, d, T, P)
        checked += 1
    assert checked >= len(P) - 1


def test_enumeration_budget():
    with pytest.raises(BudgetExceeded):
        enumerate_lattice(10, 3)
    with pytest.raises(BudgetExceeded):
        list(iter_lattice_families(7, 4, max_elements=100))
