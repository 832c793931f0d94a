"""Geometric cross-check: build the arrangement from actual points.

Random integer points in K^d are (with probability one) generic.  Every
d-subset spans a hyperplane; intersecting them level by level gives the
intersection lattice, with the empty set adjoined on top.  Nothing here uses
the set-family model, so agreement with it is real evidence.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations

from .errors import BudgetExceeded, VerificationError
from .exact import IntegerPolynomial, Partition, binomial
from .lattice import RankedPoset, SetFamily
from .linalg import AffineFlat, affine_hull, rank

COORD_RANGE = 10**6
RETRIES = 100
ORACLE_MAX_N = 8
ORACLE_MAX_D = 3


class DegenerateSample(RuntimeError):
    """The sampled points are visibly not in general position."""


def sample_generic_points(n: int, d: int, seed: int, retries: int = RETRIES) -> list[tuple[Fraction, ...]]:
    """n points in K^d with every (d+1)-subset affinely independent."""
    if not n > d >= 1:
        raise ValueError(f"need n > d >= 1, got n={n}, d={d}")
    rng = random.Random(seed)
    for _ in range(retries):
        pts = [tuple(Fraction(rng.randint(-COORD_RANGE, COORD_RANGE)) for _ in range(d)) for _ in range(n)]
        if all(_affinely_independent([pts[i] for i in sub], d) for sub in combinations(range(n), d + 1)):
            return pts
    raise DegenerateSample(f"no general-position sample after {retries} draws")


def _affinely_independent(pts, d) -> bool:
    base = pts[0]
    return rank([[a - b for a, b in zip(p, base)] for p in pts[1:]], d) == len(pts) - 1


@dataclass
class GeometricLattice:
    points: list
    hyperplanes: list[AffineFlat]
    poset: RankedPoset  # elements are AffineFlat, top is the empty flat
    hyperplane_masks: list[int]

    @property
    def d(self) -> int:
        return self.hyperplanes[0].d


def build_arrangement_lattice(points) -> GeometricLattice:
    n = len(points)
    d = len(points[0])
    hyps = [affine_hull([points[i] for i in X], d) for X in combinations(range(n), d)]
    if len(set(hyps)) != len(hyps) or any(h.codim != 1 for h in hyps):
        raise DegenerateSample("two point subsets span the same hyperplane")
    whole = AffineFlat(d)
    levels = [[whole]]
    top = None
    seen = {whole}
    while levels[-1]:
        nxt = []
        for y in levels[-1]:
            for h in hyps:
                z = y.intersect(h)
                if z.empty:
                    top = top or z
                    continue
                if z.codim == y.codim + 1 and z not in seen:
                    seen.add(z)
                    nxt.append(z)
        levels.append(nxt)
    flats = [y for level in levels for y in level]
    if top is None:
        top = AffineFlat(d, [[0] * d + [1]])
    flats.append(top)
    masks = []
    for y in flats:
        m = 0
        for i, h in enumerate(hyps):
            if h.contains(y):
                m |= 1 << i
        masks.append(m)
    below = []
    for j, mj in enumerate(masks):
        b = 0
        for i in range(j + 1):
            if masks[i] & ~mj == 0:
                b |= 1 << i
        below.append(b)
    poset = RankedPoset(flats, [y.codim for y in flats], below)
    return GeometricLattice(list(points), hyps, poset, masks)


def generating_family(lat: GeometricLattice, flat: AffineFlat) -> SetFamily:
    """Minimal point subsets (of size <= d) whose affine hull contains the flat."""
    n = len(lat.points)
    hulls = _hulls(lat)
    hits = [mask for mask, hull in hulls if hull.contains(flat)]
    minimal = [m for m in hits if not any(o != m and o & ~m == 0 for o in hits)]
    return SetFamily(tuple(minimal), n)


def _hulls(lat: GeometricLattice):
    cached = getattr(lat, "_hull_cache", None)
    if cached is None:
        n, d = len(lat.points), lat.d
        cached = []
        for size in range(d + 1):
            for sub in combinations(range(n), size):
                mask = sum(1 << i for i in sub)
                cached.append((mask, affine_hull([lat.points[i] for i in sub], d)))
        lat._hull_cache = cached
    return cached


@dataclass
class OracleRun:
    seed: int
    rank_sizes: list[int]
    type_counts: dict
    char_poly: IntegerPolynomial
    mu_by_type: dict  # gamma -> set of Möbius values seen
    families: frozenset


def run_oracle(n: int, d: int, seed: int) -> OracleRun:
    lat = build_arrangement_lattice(sample_generic_points(n, d, seed))
    mu = lat.poset.mobius()
    coeffs = [0] * (d + 2)
    types: dict = {}
    mus: dict = {}
    fams = []
    for i, y in enumerate(lat.poset.elements):
        r = lat.poset.ranks[i]
        coeffs[d + 1 - r] += mu[i]
        fam = generating_family(lat, y)
        fams.append(fam.members)
        gamma = Partition(d + 1 - bin(m).count("1") for m in fam.members)
        if gamma.weight != r:
            raise VerificationError(f"flat of codim {r} generated by a family of rank {gamma.weight}")
        types[gamma] = types.get(gamma, 0) + 1
        mus.setdefault(gamma, set()).add(mu[i])
    return OracleRun(seed, lat.poset.rank_sizes(), types, IntegerPolynomial(tuple(coeffs)), mus, frozenset(fams))


@dataclass
class OracleReport:
    n: int
    d: int
    seeds: list[int]
    rank_sizes: list[int]
    type_counts: dict
    char_poly: IntegerPolynomial
    checks: dict = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def oracle_char_poly(n: int, d: int, seeds=(1, 2, 3), max_n: int = ORACLE_MAX_N, max_d: int = ORACLE_MAX_D,
                     resample_rounds: int = 3) -> OracleReport:
    """Compare the geometric lattice for several seeds with the counting path."""
    from .charpoly import char_poly, mu_of_type
    from .lattice import iter_lattice_families

    if n > max_n or d > max_d:
        raise BudgetExceeded(f"oracle on A_{{{n},{d}}}", f"n<={max_n}, d<={max_d}")
    seeds = list(seeds)
    notes = []
    for attempt in range(resample_rounds):
        runs = [run_oracle(n, d, s) for s in seeds]
        first = runs[0]
        agree = all(
            r.rank_sizes == first.rank_sizes and r.type_counts == first.type_counts
            and r.char_poly == first.char_poly and r.families == first.families
            for r in runs
        )
        if agree:
            break
        notes.append(f"seeds {seeds} disagree; resampling")
        seeds = [s + 7919 * (attempt + 1) for s in seeds]
    else:
        raise VerificationError(f"oracle samples for A_{{{n},{d}}} keep disagreeing: {notes}")

    combo = char_poly(n, d)
    checks = {}
    checks["hyperplane count"] = first.rank_sizes[1] == binomial(n, d) if d >= 1 else True
    lam_table = {row.gamma: row.lam for row in combo.types}
    lam_table[Partition((d + 1,))] = 1
    checks["type counts"] = all(lam_table.get(g, 0) == c for g, c in first.type_counts.items()) and all(
        first.type_counts.get(g, 0) == c for g, c in lam_table.items()
    )
    comb_ranks = [0] * (d + 2)
    for g, c in lam_table.items():
        comb_ranks[g.weight] += c
    checks["rank sizes"] = first.rank_sizes == comb_ranks
    checks["mobius"] = all(
        vals == {mu_of_type(n, d, g)} for g, vals in first.mu_by_type.items()
    )
    checks["char poly"] = first.char_poly == combo.char_poly
    if n <= 9 and d <= 4:
        combinatorial = frozenset(iter_lattice_families(n, d, max_elements=None))
        checks["families"] = combinatorial == first.families
    return OracleReport(n, d, seeds, first.rank_sizes, first.type_counts, first.char_poly, checks, notes)
