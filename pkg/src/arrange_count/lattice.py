"""Set-family model of the intersection lattice L_{n,d}.

An element of L_{n,d} is a family T = {T_1, ..., T_l} of distinct subsets of
{1..n}, each of size at most d, such that every sub-family of two or more
members has strictly positive D-statistic.  Subsets are stored as int
bitmasks (bit i-1 <-> symbol i), so n is capped at 64.

The complementary convention (families S of sets of size >= k+1 with the
union-based statistic) is available through the ``*_upper`` helpers and
:func:`complement_transform`.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Hashable, Iterable, Sequence

from .errors import BudgetExceeded
from .exact import Partition

MAX_N = 64

# enumerate_lattice refuses beyond these unless overridden
LATTICE_MAX_N = 9
LATTICE_MAX_D = 4
LATTICE_MAX_ELEMENTS = 20000


def popcount(x: int) -> int:
    return bin(x).count("1")


def mask_of(symbols: Iterable[int]) -> int:
    m = 0
    for s in symbols:
        if not 1 <= s <= MAX_N:
            raise ValueError(f"symbol {s} outside 1..{MAX_N}")
        m |= 1 << (s - 1)
    return m


def symbols_of(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _set_key(mask: int) -> tuple[int, int]:
    return (popcount(mask), mask)


@dataclass(frozen=True)
class SetFamily:
    """A family of distinct subsets of {1..n}, stored in canonical order."""

    members: tuple[int, ...]
    n: int

    def __post_init__(self):
        if self.n > MAX_N:
            raise ValueError(f"n={self.n} exceeds the {MAX_N}-symbol word size")
        members = tuple(sorted(set(self.members), key=_set_key))
        if len(members) != len(self.members):
            raise ValueError("family members must be distinct")
        full = (1 << self.n) - 1
        if any(m & ~full for m in members):
            raise ValueError(f"member outside 1..{self.n}")
        object.__setattr__(self, "members", members)

    @classmethod
    def of(cls, sets: Iterable[Iterable[int]], n: int) -> "SetFamily":
        return cls(tuple(mask_of(s) for s in sets), n)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def as_sets(self) -> list[tuple[int, ...]]:
        return [symbols_of(m) for m in self.members]

    def __str__(self) -> str:
        inner = ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.as_sets())
        return "{" + inner + "}"


def codim_d(X: int, d: int) -> int:
    return d + 1 - popcount(X)


def _rho(members: Sequence[int], d: int) -> int:
    return sum(d + 1 - popcount(m) for m in members)


def rho_D(T: SetFamily, d: int) -> tuple[int, int]:
    """Return (rank, D) of a family in the intersection convention."""
    members = T.members
    rank = _rho(members, d)
    if not members:
        return 0, 0
    inter = (1 << T.n) - 1
    for m in members:
        inter &= m
    return rank, codim_d(inter, d) - rank


def is_lattice_element(T: SetFamily, n: int, d: int) -> bool:
    members = T.members
    if any(popcount(m) > d for m in members):
        return False
    full = (1 << n) - 1
    if any(m & ~full for m in members):
        return False
    # every sub-family of size >= 2 must have D > 0
    subs: list[tuple[int, int]] = []
    for m in members:
        c = d + 1 - popcount(m)
        new = [(m, c)]
        for inter, rho in subs:
            i2, r2 = inter & m, rho + c
            if d + 1 - popcount(i2) <= r2:
                return False
            new.append((i2, r2))
        subs.extend(new)
    return True


def _covers_members(lower: Sequence[int], upper: Sequence[int]) -> bool:
    # every member of ``lower`` contains some member of ``upper``
    return all(any(u & ~t == 0 for u in upper) for t in lower)


def leq(T: SetFamily, T2: SetFamily, d: int) -> bool:
    """T <= T2 in L_{n,d}: equal, or lower rank and every T_i contains some T2_j."""
    if T.members == T2.members:
        return True
    return _rho(T.members, d) < _rho(T2.members, d) and _covers_members(T.members, T2.members)


def type_of(T: SetFamily, d: int) -> Partition:
    return Partition(d + 1 - popcount(m) for m in T.members)


def complement_transform(S: SetFamily, n: int | None = None) -> SetFamily:
    """Map every member to its complement in {1..n}; an involution."""
    n = S.n if n is None else n
    full = (1 << n) - 1
    return SetFamily(tuple(full & ~m for m in S.members), n)


# complementary (union) convention


def codim_upper(X: int, k: int) -> int:
    return popcount(X) - k


def rho_D_upper(S: SetFamily, k: int) -> tuple[int, int]:
    rank = sum(popcount(m) - k for m in S.members)
    if not S.members:
        return 0, 0
    union = 0
    for m in S.members:
        union |= m
    return rank, codim_upper(union, k) - rank


def is_lattice_element_upper(S: SetFamily, n: int, k: int) -> bool:
    if any(not (k + 1 <= popcount(m) <= n) for m in S.members):
        return False
    for size in range(2, len(S.members) + 1):
        for sub in combinations(S.members, size):
            if rho_D_upper(SetFamily(sub, n), k)[1] <= 0:
                return False
    return True


def leq_upper(S: SetFamily, S2: SetFamily, k: int) -> bool:
    if S.members == S2.members:
        return True
    r1 = sum(popcount(m) - k for m in S.members)
    r2 = sum(popcount(m) - k for m in S2.members)
    return r1 < r2 and all(any(s & ~s2 == 0 for s2 in S2.members) for s in S.members)


class RankedPoset:
    """A finite ranked poset with elements indexed 0..N-1 in rank order.

    ``below[i]`` is a bitmask over indices of all elements <= element i.
    """

    def __init__(self, elements: Sequence[Hashable], ranks: Sequence[int], below: Sequence[int]):
        self.elements = list(elements)
        self.ranks = list(ranks)
        self.below = list(below)
        self.index = {e: i for i, e in enumerate(self.elements)}

    @classmethod
    def from_leq(cls, elements: Sequence[Hashable], rank: Callable, leq_fn: Callable) -> "RankedPoset":
        order = sorted(range(len(elements)), key=lambda i: rank(elements[i]))
        elems = [elements[i] for i in order]
        ranks = [rank(e) for e in elems]
        below = []
        for j, y in enumerate(elems):
            mask = 1 << j
            for i in range(j):
                if ranks[i] < ranks[j] and leq_fn(elems[i], y):
                    mask |= 1 << i
            below.append(mask)
        return cls(elems, ranks, below)

    def __len__(self) -> int:
        return len(self.elements)

    def leq(self, a, b) -> bool:
        return bool(self.below[self.index[b]] >> self.index[a] & 1)

    def rank_sizes(self) -> list[int]:
        if not self.ranks:
            return []
        sizes = [0] * (max(self.ranks) + 1)
        for r in self.ranks:
            sizes[r] += 1
        return sizes

    def minimum(self) -> int:
        mins = [i for i in range(len(self)) if self.below[i] == 1 << i]
        if len(mins) != 1 or any(not (b >> mins[0] & 1) for b in self.below):
            raise ValueError("poset has no unique minimum")
        return mins[0]

    def mobius(self) -> list[int]:
        """mu(0^, x) for every index x, by the defining recursion."""
        bottom = self.minimum()
        mu = [0] * len(self)
        for j in range(len(self)):
            if j == bottom:
                mu[j] = 1
                continue
            strict = self.below[j] & ~(1 << j)
            total = 0
            while strict:
                low = strict & -strict
                total += mu[low.bit_length() - 1]
                strict ^= low
            mu[j] = -total
        return mu

    def subposet(self, indices_mask: int) -> "RankedPoset":
        idx = [i for i in range(len(self)) if indices_mask >> i & 1]
        remap = {old: new for new, old in enumerate(idx)}
        below = []
        for i in idx:
            b = self.below[i] & indices_mask
            nb = 0
            while b:
                low = b & -b
                nb |= 1 << remap[low.bit_length() - 1]
                b ^= low
            below.append(nb)
        base = self.ranks[idx[0]] if idx else 0
        return RankedPoset([self.elements[i] for i in idx], [self.ranks[i] - base for i in idx], below)

    def ideal(self, element) -> "RankedPoset":
        return self.subposet(self.below[self.index[element]])

    def covers(self) -> list[tuple[int, int]]:
        edges = []
        for j in range(len(self)):
            strict = self.below[j] & ~(1 << j)
            deeper = 0
            s = strict
            while s:
                low = s & -s
                deeper |= self.below[low.bit_length() - 1] & ~low
                s ^= low
            c = strict & ~deeper
            while c:
                low = c & -c
                edges.append((low.bit_length() - 1, j))
                c ^= low
        return edges

    def product(self, other: "RankedPoset") -> "RankedPoset":
        elems, ranks, pairs = [], [], []
        for i in range(len(self)):
            for j in range(len(other)):
                pairs.append((i, j))
        pairs.sort(key=lambda p: self.ranks[p[0]] + other.ranks[p[1]])
        pos = {p: n for n, p in enumerate(pairs)}
        below = []
        for i, j in pairs:
            elems.append((self.elements[i], other.elements[j]))
            ranks.append(self.ranks[i] + other.ranks[j])
            mask = 0
            for (a, b), n in pos.items():
                if self.below[i] >> a & 1 and other.below[j] >> b & 1:
                    mask |= 1 << n
            below.append(mask)
        return RankedPoset(elems, ranks, below)


def posets_isomorphic(P: RankedPoset, Q: RankedPoset) -> bool:
    """Rank-respecting isomorphism test on Hasse diagrams."""
    import networkx as nx
    from networkx.algorithms.isomorphism import DiGraphMatcher

    if len(P) != len(Q) or P.rank_sizes() != Q.rank_sizes():
        return False

    def graph(X: RankedPoset):
        g = nx.DiGraph()
        for i, r in enumerate(X.ranks):
            g.add_node(i, rank=r)
        g.add_edges_from(X.covers())
        return g

    g1, g2 = graph(P), graph(Q)
    if sorted(d for _, d in g1.in_degree()) != sorted(d for _, d in g2.in_degree()):
        return False
    if sorted(d for _, d in g1.out_degree()) != sorted(d for _, d in g2.out_degree()):
        return False
    matcher = DiGraphMatcher(g1, g2, node_match=lambda a, b: a["rank"] == b["rank"])
    return matcher.is_isomorphic()


def iter_lattice_families(n: int, d: int, max_elements: int | None = LATTICE_MAX_ELEMENTS):
    """Yield the member tuples of every element of L_{n,d}, including 0^ and 1^.

    Families are grown by appending candidate sets in canonical order; only the
    sub-families containing the new member are checked, because the others
    were validated when their last member was added.
    """
    candidates = [m for m in range(1 << n) if popcount(m) <= d]
    candidates.sort(key=_set_key)
    codims = [d + 1 - popcount(m) for m in candidates]
    count = 0

    def grow(start: int, members: list[int], subs: list[tuple[int, int]]):
        # subs holds (intersection, rank) for every nonempty sub-family
        nonlocal count
        count += 1
        if max_elements is not None and count > max_elements:
            raise BudgetExceeded(f"enumerate_lattice({n},{d})", max_elements, f">{max_elements} elements")
        yield tuple(members)
        for ci in range(start, len(candidates)):
            c, cc = candidates[ci], codims[ci]
            new = [(c, cc)]
            ok = True
            for inter, rho in subs:
                i2, r2 = inter & c, rho + cc
                if d + 1 - popcount(i2) <= r2:
                    ok = False
                    break
                new.append((i2, r2))
            if ok:
                members.append(c)
                yield from grow(ci + 1, members, subs + new)
                members.pop()

    yield from grow(0, [], [])


def enumerate_lattice(
    n: int,
    d: int,
    max_n: int = LATTICE_MAX_N,
    max_d: int = LATTICE_MAX_D,
    max_elements: int | None = LATTICE_MAX_ELEMENTS,
) -> RankedPoset:
    """All elements of L_{n,d} with the order relation, as a RankedPoset."""
    if n > max_n or d > max_d:
        raise BudgetExceeded(f"enumerate_lattice({n},{d})", f"n<={max_n}, d<={max_d}")
    if n < 0 or d < 0:
        raise ValueError("n and d must be nonnegative")
    families = [SetFamily(m, n) for m in iter_lattice_families(n, d, max_elements)]
    return family_poset(families, d)


def family_poset(families: Sequence[SetFamily], d: int) -> RankedPoset:
    full_cache: dict[tuple[int, ...], int] = {}
    n = families[0].n if families else 0

    def up_mask(members: tuple[int, ...]) -> int:
        # bitmask over all subsets X of [n] that contain some member
        got = full_cache.get(members)
        if got is None:
            got = 0
            for x in range(1 << n):
                if any(m & ~x == 0 for m in members):
                    got |= 1 << x
            full_cache[members] = got
        return got

    fams = sorted(families, key=lambda f: (_rho(f.members, d), [_set_key(m) for m in f.members]))
    ranks = [_rho(f.members, d) for f in fams]
    member_bits = []
    for f in fams:
        b = 0
        for m in f.members:
            b |= 1 << m
        member_bits.append(b)
    below = []
    for j, f in enumerate(fams):
        ups = up_mask(f.members)
        mask = 1 << j
        for i in range(j):
            if ranks[i] < ranks[j] and member_bits[i] & ~ups == 0:
                mask |= 1 << i
        below.append(mask)
    return RankedPoset(fams, ranks, below)


def mobius_on_poset(P: RankedPoset) -> dict:
    mu = P.mobius()
    return {e: mu[i] for i, e in enumerate(P.elements)}


IDEAL_MAX_SIZE = 200


def ideal_product_check(
    n: int,
    d: int,
    T: SetFamily,
    poset: RankedPoset | None = None,
    max_size: int = IDEAL_MAX_SIZE,
) -> bool:
    """Check that the ideal below T factors as the product of the ideals of its
    members, and that each member ideal is a smaller lattice of the same k."""
    if poset is None:
        poset = enumerate_lattice(n, d)
    k = n - d - 1
    ideal = poset.ideal(T)
    if len(ideal) > max_size:
        raise BudgetExceeded("ideal_product_check", max_size, len(ideal))
    if not T.members:
        return len(ideal) == 1
    factors = []
    for m in T.members:
        single = poset.ideal(SetFamily((m,), n))
        c = d + 1 - popcount(m)
        small = enumerate_lattice(k + c, c - 1, max_n=max(LATTICE_MAX_N, k + c), max_d=max(LATTICE_MAX_D, c - 1))
        if not posets_isomorphic(single, small):
            return False
        factors.append(single)
    prod = factors[0]
    for f in factors[1:]:
        prod = prod.product(f)
        if len(prod) > max_size:
            raise BudgetExceeded("ideal_product_check", max_size, len(prod))
    return posets_isomorphic(ideal, prod)
