import random
from collections import Counter
from itertools import combinations

import pytest

from arrange_count.cache import CountStore
from arrange_count.counting import lambda_via_c
from arrange_count.disc import (
    SimplicialComplex,
    _V2Search,
    alpha,
    char_poly_disc,
    enumerate_v2,
    is_v1,
    is_v2,
    lambda_disc,
    p_factor,
    restrict,
    v2_count_table,
    v2_size,
)
from arrange_count.errors import BudgetExceeded
from arrange_count.exact import partitions_up_to
from arrange_count.lattice import SetFamily, is_lattice_element_upper, popcount

V2_SIZES = {1: 1, 2: 2, 3: 9, 4: 96, 5: 2419, 6: 133787}
V2_LISTS = {l: list(enumerate_v2(l)) for l in (2, 3, 4)}


def all_complexes(l):
    """Every antichain of faces of size >= 2 (brute force, small l only)."""
    faces = [m for m in range(1 << l) if popcount(m) >= 2]
    out = set()

    def grow(start, chosen):
        out.add(SimplicialComplex(l, tuple(chosen)))
        for i in range(start, len(faces)):
            f = faces[i]
            if any(f & g == f or f & g == g for g in chosen):
                continue
            grow(i + 1, chosen + [f])

    grow(0, [])
    return out


def test_complex_canonical_form():
    a = SimplicialComplex.of(3, [[1, 2, 3], [1, 2]])
    assert a.facet_sets() == [(1, 2, 3)]
    b = SimplicialComplex.of(4, [[3, 4], [1, 2]])
    assert b == SimplicialComplex.of(4, [[1, 2], [3, 4]])
    assert str(b) == "{12, 34}"
    with pytest.raises(ValueError):
        SimplicialComplex(2, (0b110,))


def test_restriction_and_alpha():
    delta = SimplicialComplex.of(4, [[1, 2, 3], [3, 4]])
    assert alpha(delta) == (1, 1, 2, 1)
    r = restrict(delta, 0b0111, relabel=True)
    assert r.l == 3 and r.facet_sets() == [(1, 2, 3)]
    assert restrict(delta, 0b1100).facet_sets() == [(3, 4)]


def test_two_vertex_example():
    assert {str(c) for c in enumerate_v2(2)} == {"{}", "{12}"}


@pytest.mark.parametrize("l", range(1, 6))
def test_enumeration_matches_definition(l):
    brute = {c for c in all_complexes(l) if is_v2(c)} if l <= 4 else None
    found = list(enumerate_v2(l))
    assert len(found) == len(set(found)) == V2_SIZES[l]
    assert all(is_v2(c) for c in found)
    if brute is not None:
        assert set(found) == brute


def test_shared_vertex_rule():
    # two triangles sharing an edge violate the pairwise rule
    assert not is_v1(SimplicialComplex.of(4, [[1, 2, 3], [2, 3, 4]]))
    assert is_v1(SimplicialComplex.of(5, [[1, 2, 3], [3, 4, 5]]))
    assert is_v2(SimplicialComplex.of(3, [[1, 2], [1, 3], [2, 3]]))
    k4 = SimplicialComplex.of(4, [list(e) for e in combinations(range(1, 5), 2)])
    assert is_v1(k4) and not is_v2(k4)


@pytest.mark.parametrize("l", range(2, 7))
def test_facet_bound_attained(l):
    table = v2_count_table(l, store=CountStore())
    assert max(t for (_, t) in table) == 2 * l - 3


@pytest.mark.parametrize("l", range(2, 6))
def test_restriction_surjective(l):
    image = {restrict(c, (1 << (l - 1)) - 1, relabel=True) for c in enumerate_v2(l)}
    assert image == set(enumerate_v2(l - 1))


@pytest.mark.parametrize("l", range(1, 6))
def test_count_table_matches_stream(l):
    table = v2_count_table(l, store=CountStore())
    counted = Counter((alpha(c), len(c.facets)) for c in enumerate_v2(l))
    assert dict(counted) == table
    assert sum(table.values()) == V2_SIZES[l]


@pytest.mark.parametrize("l", range(2, 6))
def test_branch_split_matches(l):
    search = _V2Search(l)
    merged = Counter(search.count(-1))
    for c in range(len(search.cands)):
        merged.update(search.count(c))
    assert dict(merged) == search.count()


def test_workers_do_not_change_table():
    assert v2_count_table(5, store=CountStore(), workers=2) == v2_count_table(5, store=CountStore())


@pytest.mark.parametrize("d", range(1, 5))
def test_lambda_disc_matches_generic(d):
    store = CountStore()
    for gamma in partitions_up_to(d):
        if 1 <= len(gamma) <= 4:
            assert lambda_disc(d, gamma, store) == lambda_via_c(d + 3, d, gamma, store)


@pytest.mark.parametrize("d", range(1, 6))
def test_every_type_appears(d):
    store = CountStore()
    for gamma in partitions_up_to(d):
        assert lambda_disc(d, gamma, store) > 0


def test_top_and_oversized_types():
    assert lambda_disc(3, (4,)) == 1
    assert lambda_disc(3, (3, 1)) == 0
    assert lambda_disc(3, ()) == 1


def test_p_factor_edge_cases():
    assert p_factor((1, -1), 0, 3) == 0
    assert p_factor((), 0, 2) == 1
    # a single row of size d+1 with no shared symbols: choose its symbols
    assert p_factor((3,), 0, 2) == 10


@pytest.mark.parametrize("d", range(1, 5))
def test_charpoly_disc_matches_generic(d):
    from arrange_count.charpoly import char_poly

    assert char_poly_disc(d).char_poly == char_poly(d + 3, d).char_poly


def _random_element(d, rng):
    """Build a k = 2 element from a V2 complex and a random symbol assignment."""
    n = d + 3
    for _ in range(1000):
        l = rng.randint(2, 4)
        delta = rng.choice(V2_LISTS[l])
        symbols = list(range(n))
        rng.shuffle(symbols)
        rows = [0] * l
        # every facet gets a fresh shared symbol
        for f in delta.facets:
            s = symbols.pop()
            for i in range(l):
                if f >> i & 1:
                    rows[i] |= 1 << s
        ok = True
        for i in range(l):
            # members need at least k+1 = 3 symbols; top up privately
            need = max(0, 3 - popcount(rows[i]))
            extra = rng.randint(need, need + 2)
            if extra > len(symbols):
                ok = False
                break
            for _ in range(extra):
                rows[i] |= 1 << symbols.pop()
        if not ok or len(set(rows)) < l:
            continue
        S = SetFamily(tuple(rows), n)
        if is_lattice_element_upper(S, n, 2):
            return delta, S
    return None


@pytest.mark.parametrize("seed", range(30))
def test_d2_rewrite(seed):
    rng = random.Random(seed)
    d = rng.randint(3, 7)
    got = _random_element(d, rng)
    assert got is not None
    delta, S = got
    k, n, l = 2, d + 3, len(S)
    union = 0
    for m in S.members:
        union |= m
    rank = sum(popcount(m) - k for m in S.members)
    d2 = popcount(union) - k - rank
    # X(S, t): members containing symbol t
    shared = 0
    for t in range(n):
        x = sum(1 for m in S.members if m >> t & 1)
        if x:
            shared += x - 1
    assert d2 == k * (l - 1) - shared


def test_cap():
    with pytest.raises(BudgetExceeded):
        v2_size(8)
    with pytest.raises(BudgetExceeded):
        list(enumerate_v2(8))
