"""Bounds on surgery distance (Lickorish path length) and quasi-flat
certification.

Lower bounds come from homology: one surgery changes the p-rank of H_1 by at
most one for every prime p, and likewise the first Betti number.  Upper bounds
come from descriptions on a common link: each component whose slope differs
costs one surgery.  An exact distance is only claimed when the two agree.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterator, Sequence

import numpy as np

from .abelian import AbelianGroup, betti, homology, p_rank
from .sfs import SeifertData
from .surgery import GridPoint, SurgeryDescription, family_flat, with_myers_component


class IncomparableDescriptions(ValueError):
    def __init__(self, detail: str = ""):
        super().__init__("incomparable descriptions" + (f": {detail}" if detail else ""))


@dataclass(frozen=True)
class Witness:
    kind: str                  # "p-rank", "betti" or "slope-diff"
    subject: int | None        # the prime, for p-rank witnesses
    value: int


@dataclass(frozen=True)
class DistanceBound:
    lower: int
    upper: int | None
    witnesses: tuple[Witness, ...] = ()

    def __post_init__(self):
        if self.upper is not None and self.lower > self.upper:
            raise ValueError(f"lower bound {self.lower} exceeds upper bound {self.upper}")

    @property
    def exact(self) -> bool:
        return self.upper is not None and self.lower == self.upper


def lower_bound_witnesses(G1: AbelianGroup, G2: AbelianGroup) -> list[Witness]:
    out = [Witness("betti", None, abs(betti(G1) - betti(G2)))]
    for p in sorted(set(G1.primes()) | set(G2.primes())):
        out.append(Witness("p-rank", p, abs(p_rank(G1, p) - p_rank(G2, p))))
    return out


def lower_bound(G1: AbelianGroup, G2: AbelianGroup) -> int:
    return max(w.value for w in lower_bound_witnesses(G1, G2))


def upper_bound_slope_diff(d1: SurgeryDescription, d2: SurgeryDescription) -> int:
    if d1.n != d2.n:
        raise IncomparableDescriptions(f"{d1.n} vs {d2.n} components")
    if d1.lk != d2.lk:
        raise IncomparableDescriptions("linking matrices differ")
    return sum(1 for a, b in zip(d1.slopes, d2.slopes) if a != b)


def distance_bound(d1: SurgeryDescription, d2: SurgeryDescription) -> DistanceBound:
    ws = lower_bound_witnesses(homology(d1), homology(d2))
    lower = max(w.value for w in ws)
    try:
        upper = upper_bound_slope_diff(d1, d2)
    except IncomparableDescriptions:
        return DistanceBound(lower, None, tuple(ws))
    return DistanceBound(lower, upper, tuple(ws) + (Witness("slope-diff", None, upper),))


@dataclass
class GridTable:
    """Bounds between all points of the grid [0, N]^k of a flat family.

    ``lower[i, j]`` and ``upper[i, j]`` refer to ``points[i]`` and
    ``points[j]``.
    """

    k: int
    blocksize: int
    primes: tuple[int, ...]
    N: int
    points: list[GridPoint]
    groups: list[AbelianGroup]
    descriptions: list[SurgeryDescription]
    lower: np.ndarray
    upper: np.ndarray
    myers_qprime: int | None = None
    index: dict[GridPoint, int] = field(init=False, repr=False)

    def __post_init__(self):
        self.index = {p: i for i, p in enumerate(self.points)}

    def bound(self, a: GridPoint | Sequence[int], b: GridPoint | Sequence[int]) -> DistanceBound:
        i = self.index[a if isinstance(a, GridPoint) else GridPoint(tuple(a))]
        j = self.index[b if isinstance(b, GridPoint) else GridPoint(tuple(b))]
        ws = lower_bound_witnesses(self.groups[i], self.groups[j])
        up = int(self.upper[i, j])
        return DistanceBound(int(self.lower[i, j]), up,
                             tuple(ws) + (Witness("slope-diff", None, up),))

    def l1(self) -> np.ndarray:
        C = np.array([p.counts for p in self.points], dtype=np.int64).reshape(len(self.points), self.k)
        out = np.zeros((len(C), len(C)), dtype=np.int64)
        for c in range(self.k):
            out += np.abs(C[:, c, None] - C[None, :, c])
        return out

    def rows(self) -> Iterator[tuple[GridPoint, GridPoint, int, int]]:
        """Unordered pairs (including a point with itself), lexicographic."""
        for i, a in enumerate(self.points):
            for j in range(i, len(self.points)):
                yield a, self.points[j], int(self.lower[i, j]), int(self.upper[i, j])

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["point1", "point2", "lower", "upper"])
        for a, b, lo, up in self.rows():
            w.writerow([str(a), str(b), lo, up])
        return buf.getvalue()


def grid_points(k: int, N: int) -> list[GridPoint]:
    return [GridPoint(c) for c in product(range(N + 1), repeat=k)]


def grid_distance_table(k: int, blocksize: int, primes: Sequence[int], N: int,
                        myers_qprime: int | None = None, threads: int = 1) -> GridTable:
    """Homology lower bounds and slope-difference upper bounds over [0, N]^k.

    With ``myers_qprime`` every description gets an extra zero-linking
    component filled 1/myers_qprime.
    """
    if N > blocksize:
        raise ValueError(f"grid radius {N} exceeds block size {blocksize}")
    if N < 0:
        raise ValueError("grid radius must be non-negative")
    primes = tuple(primes)
    points = grid_points(k, N)

    def describe(pt):
        d = family_flat(k, blocksize, primes, pt)
        return with_myers_component(d, myers_qprime) if myers_qprime is not None else d

    descriptions = [describe(pt) for pt in points]
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            groups = list(pool.map(homology, descriptions))
    else:
        groups = [homology(d) for d in descriptions]

    # Same quantities as lower_bound / upper_bound_slope_diff, vectorized.
    support = sorted({p for G in groups for p in G.primes()})
    ranks = np.array([[betti(G)] + [p_rank(G, p) for p in support] for G in groups],
                     dtype=np.int64)
    P = len(points)
    lower = np.zeros((P, P), dtype=np.int64)
    for c in range(ranks.shape[1]):
        np.maximum(lower, np.abs(ranks[:, c, None] - ranks[None, :, c]), out=lower)

    codes: dict = {}
    S = np.array([[codes.setdefault(s, len(codes)) for s in d.slopes] for d in descriptions],
                 dtype=np.int64)
    upper = np.zeros((P, P), dtype=np.int64)
    for c in range(S.shape[1]):
        upper += S[:, c, None] != S[None, :, c]
    return GridTable(k, blocksize, primes, N, points, groups, descriptions,
                     lower, upper, myers_qprime)


@dataclass
class QuasiflatReport:
    k: int
    N: int
    pairs: int
    constant: Fraction
    min_ratio: Fraction | None
    argmin: tuple[GridPoint, GridPoint] | None
    upper_failures: list[tuple[GridPoint, GridPoint]]
    lower_failures: list[tuple[GridPoint, GridPoint]]
    exact_pairs: int

    @property
    def passed(self) -> bool:
        return not self.upper_failures and not self.lower_failures

    def summary(self) -> str:
        lines = [
            f"quasi-flat certification k={self.k} N={self.N}: {'PASS' if self.passed else 'FAIL'}",
            f"  pairs checked: {self.pairs}",
            f"  upper == L1 failures: {len(self.upper_failures)}",
            f"  lower >= L1*{self.constant} failures: {len(self.lower_failures)}",
        ]
        if self.min_ratio is not None:
            a, b = self.argmin
            lines.append(f"  observed min lower/L1: {self.min_ratio} at {a} vs {b}")
        lines.append(f"  pairs with exact distance (lower == upper): {self.exact_pairs}")
        return "\n".join(lines)

    def to_json(self) -> dict:
        return {
            "passed": self.passed,
            "k": self.k,
            "N": self.N,
            "pairs": self.pairs,
            "constant": str(self.constant),
            "min_ratio": None if self.min_ratio is None else str(self.min_ratio),
            "argmin": None if self.argmin is None else [str(p) for p in self.argmin],
            "upper_failures": len(self.upper_failures),
            "lower_failures": len(self.lower_failures),
            "exact_pairs": self.exact_pairs,
        }


def certify_quasiflat(table: GridTable) -> QuasiflatReport:
    """Check upper == L1 and (2k-1)*lower >= L1 on every unordered pair."""
    k = table.k
    dist = table.l1()
    P = len(table.points)
    iu = np.triu_indices(P, 1)
    lo, up, l1 = table.lower[iu], table.upper[iu], dist[iu]
    pts = table.points

    def pairs(mask):
        return [(pts[iu[0][t]], pts[iu[1][t]]) for t in np.flatnonzero(mask)]

    upper_fail = pairs(up != l1)
    lower_fail = pairs((2 * k - 1) * lo < l1)
    min_ratio = argmin = None
    for L in np.unique(l1):
        sel = np.flatnonzero(l1 == L)
        t = sel[np.argmin(lo[sel])]
        r = Fraction(int(lo[t]), int(L))
        if min_ratio is None or r < min_ratio:
            min_ratio, argmin = r, (pts[iu[0][t]], pts[iu[1][t]])
    return QuasiflatReport(k, table.N, len(l1), Fraction(1, 2 * k - 1), min_ratio, argmin,
                           upper_fail, lower_fail, int(np.sum(lo == up)))


def montesinos_upper_bound(s: SeifertData) -> int:
    """3 - chi(F) + n over an orientable base, 5 - 2 chi(F) + n otherwise."""
    chi = s.base.euler_characteristic
    n = s.exceptional_count
    return 3 - chi + n if s.base.orientable else 5 - 2 * chi + n


SOLV_BOUNDS = {"torus-bundle": 5, "twisted-I-bundles": 3}


def solv_upper_bound(kind: str) -> int:
    try:
        return SOLV_BOUNDS[kind]
    except KeyError:
        raise ValueError(f"unknown solv kind {kind!r}; expected one of {sorted(SOLV_BOUNDS)}") from None
