"""The k = 2 case: simplicial complexes V2(l) and element counts of L_{d+3,d}.

A complex on vertices {1..l} is given by its facets of size >= 2.  It lies in
V2(l) when distinct facets share at most one vertex and, for every vertex set
I with |I| >= 2, the restricted facets satisfy

    sum_{F} (|F ∩ I| - 1)  <=  2|I| - 3      (over F with |F ∩ I| >= 2).

Counting such complexes by (alpha profile, number of facets) is enough to
count the elements of L_{d+3,d} of every type.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Iterator

from .cache import CountStore, default_store
from .charpoly import CharPolyResult, MuCache, char_poly
from .errors import BudgetExceeded
from .exact import Partition, binomial, factorial, multinomial
from .lattice import popcount

V2_MAX_L = 7

# slack fields are 5 bits wide with an offset of 16; a field stays valid while
# its top bit is set
_FIELD = 5
_OFFSET = 16


def _facet_key(mask: int) -> tuple[int, int]:
    return (popcount(mask), mask)


@dataclass(frozen=True)
class SimplicialComplex:
    """Complex on {1..l} given by its positive-dimensional facets (bitmasks)."""

    l: int
    facets: tuple[int, ...] = ()

    def __post_init__(self):
        full = (1 << self.l) - 1
        faces = {f for f in self.facets if popcount(f) >= 2}
        if any(f & ~full for f in faces):
            raise ValueError("facet outside the vertex set")
        maximal = [f for f in faces if not any(f != g and f & ~g == 0 for g in faces)]
        object.__setattr__(self, "facets", tuple(sorted(maximal, key=_facet_key)))

    @classmethod
    def of(cls, l: int, facets) -> "SimplicialComplex":
        masks = []
        for f in facets:
            m = 0
            for v in f:
                m |= 1 << (v - 1)
            masks.append(m)
        return cls(l, tuple(masks))

    def facet_sets(self) -> list[tuple[int, ...]]:
        return [tuple(i + 1 for i in range(self.l) if f >> i & 1) for f in self.facets]

    def __str__(self) -> str:
        return "{" + ", ".join("".join(map(str, f)) if self.l < 10 else str(f) for f in self.facet_sets()) + "}"


def restrict(delta: SimplicialComplex, I: int, relabel: bool = False) -> SimplicialComplex:
    """The complex {F ∩ I}; with ``relabel`` the vertices of I become 1..|I|."""
    faces = [f & I for f in delta.facets]
    if not relabel:
        return SimplicialComplex(delta.l, tuple(faces))
    verts = [i for i in range(delta.l) if I >> i & 1]
    out = []
    for f in faces:
        m = 0
        for new, old in enumerate(verts):
            if f >> old & 1:
                m |= 1 << new
        out.append(m)
    return SimplicialComplex(len(verts), tuple(out))


def is_v1(delta: SimplicialComplex) -> bool:
    fs = delta.facets
    return all(popcount(fs[a] & fs[b]) <= 1 for a in range(len(fs)) for b in range(a + 1, len(fs)))


def is_v2(delta: SimplicialComplex) -> bool:
    """Membership in V2(l), checked against the definition for every I."""
    if not is_v1(delta):
        return False
    for I in range(1 << delta.l):
        size = popcount(I)
        if size < 2:
            continue
        restricted = restrict(delta, I)
        if sum(popcount(f) - 1 for f in restricted.facets) >= 2 * (size - 1):
            return False
    return True


def alpha(delta: SimplicialComplex) -> tuple[int, ...]:
    return tuple(sum(1 for f in delta.facets if f >> i & 1) for i in range(delta.l))


class _V2Search:
    def __init__(self, l: int):
        self.l = l
        cands = [m for m in range(1 << l) if popcount(m) >= 2]
        cands.sort(key=_facet_key)
        self.cands = cands
        fields = [I for I in range(1 << l) if popcount(I) >= 2]
        high = 0
        start = 0
        for f, I in enumerate(fields):
            high |= 1 << (_FIELD * f + _FIELD - 1)
            start |= (_OFFSET + 2 * popcount(I) - 3) << (_FIELD * f)
        self.high = high
        self.start = start
        self.cost = []
        for c in cands:
            v = 0
            for f, I in enumerate(fields):
                w = popcount(c & I) - 1
                if w > 0:
                    v |= w << (_FIELD * f)
            self.cost.append(v)
        # alpha packed as 4-bit counters per vertex
        self.alpha_inc = [sum(1 << (4 * i) for i in range(l) if c >> i & 1) for c in cands]
        self.compat = []
        for a, c in enumerate(cands):
            m = 0
            for b, e in enumerate(cands):
                if b != a and popcount(c & e) <= 1:
                    m |= 1 << b
            self.compat.append(m)
        self.all = (1 << len(cands)) - 1

    def unpack_alpha(self, packed: int) -> tuple[int, ...]:
        return tuple((packed >> (4 * i)) & 15 for i in range(self.l))

    def count(self, first: int | None = None) -> dict[int, int]:
        """Counts keyed by (packed alpha << 6) | facet count.

        ``first=None`` covers everything; ``first=-1`` only the empty complex;
        ``first=c`` only complexes whose first facet (canonical order) is c.
        """
        counts: dict[int, int] = {}
        cost, alpha_inc, compat, high = self.cost, self.alpha_inc, self.compat, self.high

        def rec(allowed, slack, alpha_packed, t):
            key = (alpha_packed << 6) | t
            counts[key] = counts.get(key, 0) + 1
            while allowed:
                low = allowed & -allowed
                allowed ^= low
                c = low.bit_length() - 1
                s2 = slack - cost[c]
                if s2 & high == high:
                    rec(allowed & compat[c], s2, alpha_packed + alpha_inc[c], t + 1)

        if first is None:
            rec(self.all, self.start, 0, 0)
        elif first == -1:
            counts[0] = 1
        else:
            s2 = self.start - cost[first]
            if s2 & high == high:
                rest = self.all & ~((1 << (first + 1)) - 1)
                rec(rest & compat[first], s2, alpha_inc[first], 1)
        return counts

    def stream(self) -> Iterator[tuple[int, ...]]:
        cost, compat, high = self.cost, self.compat, self.high
        chosen: list[int] = []

        def rec(allowed, slack):
            yield tuple(self.cands[c] for c in chosen)
            while allowed:
                low = allowed & -allowed
                allowed ^= low
                c = low.bit_length() - 1
                s2 = slack - cost[c]
                if s2 & high == high:
                    chosen.append(c)
                    yield from rec(allowed & compat[c], s2)
                    chosen.pop()

        yield from rec(self.all, self.start)


def _check_cap(l: int, max_l: int):
    if l > max_l:
        raise BudgetExceeded(f"V2({l}) enumeration", f"l <= {max_l}")
    if l < 1:
        raise ValueError("l must be positive")


def enumerate_v2(l: int, max_l: int = V2_MAX_L) -> Iterator[SimplicialComplex]:
    """Every complex of V2(l) exactly once, in canonical DFS order."""
    _check_cap(l, max_l)
    for facets in _V2Search(l).stream():
        yield SimplicialComplex(l, facets)


def _count_branch(args):
    l, first = args
    return _V2Search(l).count(first)


def v2_count_table(l: int, store: CountStore | None = None, workers: int = 1,
                   max_l: int = V2_MAX_L) -> dict[tuple[tuple[int, ...], int], int]:
    """|V2(alpha, t)| for every exact alpha profile and facet count t."""
    store = default_store() if store is None else store
    hit = store.get_v2(l)
    if hit is not None:
        return hit
    _check_cap(l, max_l)
    search = _V2Search(l)
    if workers > 1:
        jobs = [(l, -1)] + [(l, c) for c in range(len(search.cands))]
        merged: dict[int, int] = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_count_branch, jobs):
                for key, v in part.items():
                    merged[key] = merged.get(key, 0) + v
        raw = merged
    else:
        raw = search.count()
    table = {}
    for key, v in sorted(raw.items()):
        table[(search.unpack_alpha(key >> 6), key & 63)] = v
    store.put_v2(l, table)
    return table


def v2_size(l: int, store: CountStore | None = None, workers: int = 1, max_l: int = V2_MAX_L) -> int:
    return sum(v2_count_table(l, store, workers, max_l).values())


def p_factor(alpha_prime, t: int, d: int) -> int:
    """Ways to place the private symbols and the t shared symbols among d+3."""
    alpha_prime = tuple(alpha_prime)
    if t < 0 or any(a < 0 for a in alpha_prime):
        return 0
    used = t + sum(alpha_prime)
    return binomial(d + 3, used) * multinomial(alpha_prime + (t,)) * factorial(t)


def lambda_disc(d: int, gamma, store: CountStore | None = None, workers: int = 1,
                max_l: int = V2_MAX_L) -> int:
    """Number of elements of L_{d+3,d} of type gamma, from the V2 count table."""
    gamma = Partition(gamma)
    if not gamma:
        return 1
    if gamma.weight > d:
        if gamma == Partition((d + 1,)):
            return 1
        return 0
    table = v2_count_table(len(gamma), store, workers, max_l)
    total = 0
    for (alpha_prof, t), count in table.items():
        ap = tuple(g + 2 - a for g, a in zip(gamma, alpha_prof))
        if min(ap) < 0:
            continue
        total += count * p_factor(ap, t, d)
    q, r = divmod(total, gamma.stabilizer_order())
    if r:
        raise ArithmeticError(f"tuple count {total} for {tuple(gamma)} not divisible by stabilizer")
    return q


_disc_mu = MuCache()


def char_poly_disc(d: int, store: CountStore | None = None, workers: int = 1,
                   max_l: int = V2_MAX_L) -> CharPolyResult:
    """chi_{d+3,d} with every element count taken from the V2 tables."""

    def lam(n, dd, gamma):
        if n != dd + 3:
            raise ValueError("the V2 path only covers k = 2")
        return lambda_disc(dd, gamma, store, workers, max_l)

    return char_poly(d + 3, d, lam=lam, cache=_disc_mu)
