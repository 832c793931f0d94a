"""Counting lattice elements of a given type.

An element of type gamma = (g_1..g_l) is encoded by how many symbols lie in
exactly the members indexed by I, for each I subset of {1..l}.  These
occupancy counts nu(I) satisfy

* sum_I nu(I) = total number of symbols,
* sum_{I containing i} nu(I) = d + 1 - g_i for every row i,
* sum_{J containing I} nu(J) < d + 1 - sum_{i in I} g_i for |I| >= 2.

``c_value`` sums multinomials over the nu with no unused symbol; ``lambda_*``
turn those into element counts.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterator

from .cache import CountStore, default_store
from .errors import BudgetExceeded
from .exact import Partition, binomial, multinomial
from .lattice import popcount

DEFAULT_NODE_BUDGET = 50_000_000


@dataclass(frozen=True)
class NuAssignment:
    """Occupancy counts nu(I) keyed by nonempty subset masks of {1..l}."""

    l: int
    counts: dict = field(hash=False)
    empty: int = 0

    def total(self) -> int:
        return self.empty + sum(self.counts.values())

    def multinomial(self) -> int:
        return multinomial([self.empty, *self.counts.values()])


class _Search:
    """Backtracking over nu for the subsets of size >= 2 in ascending mask order.

    Singleton counts are forced by the row sums; nu(empty) by the total.  Every
    strict bound is tracked as a slack that must stay >= 0, so leaves are
    exactly the feasible assignments.
    """

    def __init__(self, total: int, d: int, gamma: Partition, empty_zero: bool, budget: int | None):
        self.total = total
        self.d = d
        self.gamma = gamma
        self.l = l = len(gamma)
        self.empty_zero = empty_zero
        self.budget = budget
        self.nodes = 0
        self.rows = [d + 1 - g for g in gamma]
        self.R = sum(self.rows)
        self.masks = [m for m in range(1, 1 << l) if popcount(m) >= 2]
        self.bits = [[i for i in range(l) if m >> i & 1] for m in self.masks]
        pos = {m: p for p, m in enumerate(self.masks)}
        # slack[I] = cap_I - 1 - sum_{J >= I} nu(J)
        self.slack0 = [d - sum(gamma[i] for i in b) for b in self.bits]
        self.subs = [[pos[s] for s in self.masks if s & ~m == 0] for m in self.masks]
        self.excess = [popcount(m) - 1 for m in self.masks]
        self.max_excess_after = []
        for p in range(len(self.masks) + 1):
            rest = self.excess[p:]
            self.max_excess_after.append(max(rest) if rest else 0)

    def feasible(self) -> bool:
        if any(r < 0 for r in self.rows) or any(s < 0 for s in self.slack0):
            return False
        if self.empty_zero:
            return self.R - self.total >= 0
        return True

    def run(self, first_values: set | None = None) -> Iterator[tuple[int, list[int]]]:
        """Yield (multinomial weight, nu list over self.masks) for each leaf."""
        if not self.feasible():
            return
        rows = list(self.rows)
        slack = list(self.slack0)
        values = [0] * len(self.masks)
        if self.empty_zero:
            need = self.R - self.total
            yield from self._rec(0, rows, slack, values, need, self.total, 1, first_values)
        else:
            yield from self._rec(0, rows, slack, values, None, self.total, 1, first_values)

    def _rec(self, p, rows, slack, values, need, rem, weight, first_values):
        self.nodes += 1
        if self.budget is not None and self.nodes > self.budget:
            raise BudgetExceeded(f"nu enumeration for d={self.d}, gamma={tuple(self.gamma)}", self.budget)
        if p == len(self.masks):
            if need is not None and need != 0:
                return
            singles = sum(rows)
            if need is None:
                empty = rem - singles
                if empty < 0:
                    return
                w = weight * multinomial(rows + [empty])
            else:
                if rem != singles:
                    return
                w = weight * multinomial(rows)
            yield w, values
            return
        if need is not None:
            e = self.max_excess_after[p]
            # the remaining masks cannot absorb more than this much excess
            if e == 0 or need * (e + 1) > sum(rows) * e:
                if need != 0:
                    return
        b = self.bits[p]
        bound = min(rows[i] for i in b)
        subs = self.subs[p]
        for s in subs:
            if slack[s] < bound:
                bound = slack[s]
        ex = self.excess[p]
        if need is not None:
            bound = min(bound, need // ex)
        bound = min(bound, rem)
        values_range = range(bound + 1)
        if p == 0 and first_values is not None:
            values_range = [v for v in values_range if v in first_values]
        for v in values_range:
            if v:
                for i in b:
                    rows[i] -= v
                for s in subs:
                    slack[s] -= v
            values[p] = v
            yield from self._rec(
                p + 1,
                rows,
                slack,
                values,
                None if need is None else need - v * ex,
                rem - v,
                weight * binomial(rem, v),
                None,
            )
            if v:
                for i in b:
                    rows[i] += v
                for s in subs:
                    slack[s] += v
        values[p] = 0


def _to_assignment(search: _Search, values: list[int], total: int) -> NuAssignment:
    counts = {1 << i: search_rows for i, search_rows in enumerate(_singletons(search, values))}
    for m, v in zip(search.masks, values):
        counts[m] = v
    counts = dict(sorted(counts.items()))
    return NuAssignment(search.l, counts, total - sum(counts.values()))


def _singletons(search: _Search, values: list[int]) -> list[int]:
    rows = list(search.rows)
    for b, v in zip(search.bits, values):
        for i in b:
            rows[i] -= v
    return rows


def enumerate_nu(j: int, d: int, gamma, require_empty_zero: bool = True,
                 budget: int | None = DEFAULT_NODE_BUDGET) -> Iterator[NuAssignment]:
    """Every feasible nu with total j (and nu(empty) = 0 if requested)."""
    gamma = Partition(gamma)
    if not gamma:
        raise ValueError("gamma must be nonempty")
    search = _Search(j, d, gamma, require_empty_zero, budget)
    for _, values in search.run():
        yield _to_assignment(search, values, j)


def check_nu(nu: NuAssignment, total: int, d: int, gamma, require_empty_zero: bool = True) -> bool:
    """Direct check of the defining constraints; used to validate the search."""
    gamma = tuple(Partition(gamma))
    l = len(gamma)
    counts = {m: nu.counts.get(m, 0) for m in range(1, 1 << l)}
    if any(v < 0 for v in counts.values()) or nu.empty < 0:
        return False
    if require_empty_zero and nu.empty != 0:
        return False
    if nu.empty + sum(counts.values()) != total:
        return False
    for i in range(l):
        if sum(v for m, v in counts.items() if m >> i & 1) != d + 1 - gamma[i]:
            return False
    for I in range(1, 1 << l):
        if popcount(I) < 2:
            continue
        lhs = sum(v for m, v in counts.items() if m & I == I)
        if not lhs < d + 1 - sum(gamma[i] for i in range(l) if I >> i & 1):
            return False
    return True


def _c_partial(args):
    j, d, gamma, first = args
    search = _Search(j, d, Partition(gamma), True, None)
    return sum(w for w, _ in search.run({first}))


def c_value(j: int, d: int, gamma, store: CountStore | None = None, workers: int = 1,
            budget: int | None = DEFAULT_NODE_BUDGET) -> int:
    """Number of tuples of type gamma using exactly the symbols 1..j."""
    gamma = Partition(gamma)
    if not gamma:
        raise ValueError("gamma must be nonempty")
    store = default_store() if store is None else store
    hit = store.get_c(j, d, gamma)
    if hit is not None:
        return hit
    search = _Search(j, d, gamma, True, budget)
    if workers > 1 and len(gamma) >= 2 and search.feasible():
        # split on the value of nu at the first subset
        top = min(search.rows[0], search.rows[1], search.slack0[0], j)
        jobs = [(j, d, tuple(gamma), v) for v in range(top + 1)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            value = sum(pool.map(_c_partial, jobs))
    else:
        value = sum(w for w, _ in search.run())
    store.put_c(j, d, gamma, value)
    return value


def c_range(d: int, gamma) -> range:
    """Values of j where c(j, d; gamma) can be nonzero."""
    gamma = Partition(gamma)
    if len(gamma) == 1:
        j = d + 1 - gamma[0]
        return range(j, j + 1) if j >= 0 else range(0)
    return range(d + 2, sum(d + 1 - g for g in gamma) + 1)


def c_decomposition(n: int, d: int, gamma, store: CountStore | None = None,
                    workers: int = 1) -> list[tuple[int, int]]:
    """The nonzero (j, c(j,d;gamma)) pairs with j <= n."""
    out = []
    for j in c_range(d, gamma):
        if j > n:
            break
        c = c_value(j, d, gamma, store=store, workers=workers)
        if c:
            out.append((j, c))
    return out


def _divide_stabilizer(total: int, gamma: Partition) -> int:
    stab = gamma.stabilizer_order()
    q, r = divmod(total, stab)
    if r:
        raise ArithmeticError(f"tuple count {total} not divisible by |Stab({tuple(gamma)})| = {stab}")
    return q


def lambda_via_c(n: int, d: int, gamma, store: CountStore | None = None, workers: int = 1) -> int:
    """Element count of type gamma as sum_j c(j,d;gamma) C(n,j) / prod m_s!."""
    gamma = Partition(gamma)
    if not gamma:
        return 1
    total = sum(c * binomial(n, j) for j, c in c_decomposition(n, d, gamma, store, workers))
    return _divide_stabilizer(total, gamma)


def lambda_direct(n: int, d: int, gamma, budget: int | None = DEFAULT_NODE_BUDGET) -> int:
    """Element count of type gamma by summing multinomials over every nu of total n."""
    gamma = Partition(gamma)
    if not gamma:
        return 1
    search = _Search(n, d, gamma, False, budget)
    total = sum(w for w, _ in search.run())
    return _divide_stabilizer(total, gamma)


def lambda_closed_l1(n: int, d: int, g1: int) -> int:
    return binomial(n, d + 1 - g1)


def lambda_closed_l2(n: int, d: int, g1: int, g2: int) -> int:
    total = 0
    for jp in range(1, d + 2 - g1 - g2):
        total += binomial(d + 1 + jp, g1 + jp) * binomial(d + 1 - g1, g2 + jp) * binomial(n, d + 1 + jp)
    return total // 2 if g1 == g2 else total


def c_closed_l2(j: int, d: int, g1: int, g2: int) -> int:
    jp = j - d - 1
    if not 0 < jp <= d + 1 - g1 - g2:
        return 0
    return binomial(d + 1 + jp, g1 + jp) * binomial(d + 1 - g1, g2 + jp)
