"""Surgery descriptions on links in S^3 and the named unlink families.

A manifold is represented only by its surgery description: a linking matrix
plus one rational filling slope per component.  Nothing here decides whether
two descriptions give homeomorphic manifolds.

Framings are homological (zero-framed longitudes), including for the extra
component of the zero-linking families built by :func:`family_myers`.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Sequence


@dataclass(frozen=True, order=True)
class RationalSlope:
    """Slope p/q, canonicalized to q >= 0, gcd(p, q) = 1, and 1/0 for q = 0."""

    p: int
    q: int = 1

    def __post_init__(self):
        p, q = int(self.p), int(self.q)
        if p == 0 and q == 0:
            raise ValueError("0/0 is not a slope")
        g = math.gcd(p, q)
        p, q = p // g, q // g
        if q < 0 or (q == 0 and p < 0):
            p, q = -p, -q
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "q", q)

    @property
    def is_trivial(self) -> bool:
        """The meridian filling 1/0, which leaves the ambient manifold unchanged."""
        return self.q == 0

    def __str__(self):
        return f"{self.p}/{self.q}"


TRIVIAL = RationalSlope(1, 0)


def _as_slope(s) -> RationalSlope:
    if isinstance(s, RationalSlope):
        return s
    if isinstance(s, int):
        return RationalSlope(s, 1)
    p, q = s
    return RationalSlope(p, q)


@dataclass(frozen=True)
class SurgeryDescription:
    """Surgery on an n-component link in S^3, recorded by its linking matrix."""

    lk: tuple[tuple[int, ...], ...]
    slopes: tuple[RationalSlope, ...]
    n: int = field(init=False)

    def __post_init__(self):
        lk = tuple(tuple(int(x) for x in row) for row in self.lk)
        slopes = tuple(_as_slope(s) for s in self.slopes)
        n = len(slopes)
        if len(lk) != n or any(len(row) != n for row in lk):
            raise ValueError(f"linking matrix is not {n}x{n}")
        for i in range(n):
            if lk[i][i] != 0:
                raise ValueError(f"linking matrix diagonal entry {i} is nonzero")
            for j in range(i):
                if lk[i][j] != lk[j][i]:
                    raise ValueError(f"linking matrix not symmetric at ({i}, {j})")
        object.__setattr__(self, "lk", lk)
        object.__setattr__(self, "slopes", slopes)
        object.__setattr__(self, "n", n)

    @classmethod
    def unlink(cls, slopes: Sequence) -> SurgeryDescription:
        n = len(slopes)
        return cls(tuple((0,) * n for _ in range(n)), tuple(slopes))

    def to_json(self) -> dict:
        return {
            "components": self.n,
            "linking": [list(r) for r in self.lk],
            "slopes": [[s.p, s.q] for s in self.slopes],
        }

    @classmethod
    def from_json(cls, data: dict) -> SurgeryDescription:
        try:
            n = data["components"]
            lk = data["linking"]
            slopes = data["slopes"]
        except (KeyError, TypeError) as e:
            raise ValueError(f"surgery description missing field {e}") from None
        if not isinstance(n, int) or len(slopes) != n:
            raise ValueError(f"'components' is {n!r} but {len(slopes)} slopes given")
        for k, s in enumerate(slopes):
            if (not isinstance(s, list) or len(s) != 2
                    or not all(isinstance(x, int) for x in s)):
                raise ValueError(f"slopes[{k}] must be an integer pair [p, q]")
        return cls(tuple(tuple(r) for r in lk), tuple(tuple(s) for s in slopes))

    @classmethod
    def loads(cls, text: str) -> SurgeryDescription:
        return cls.from_json(json.loads(text))


def presentation_matrix(d: SurgeryDescription) -> list[list[int]]:
    """Relation matrix for H_1: row i is p_i*mu_i + q_i * sum_j lk(i,j)*mu_j.

    A 1/0 component gives the row e_i, a unit pivot.
    """
    n = d.n
    A = [[0] * n for _ in range(n)]
    for i, s in enumerate(d.slopes):
        for j in range(n):
            A[i][j] = s.p if i == j else s.q * d.lk[i][j]
    return A


@dataclass(frozen=True)
class GridPoint:
    """Number of nontrivially filled components in each block of a flat family."""

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError("grid counts must be non-negative")
        object.__setattr__(self, "counts", counts)

    @property
    def k(self) -> int:
        return len(self.counts)

    def l1(self, other: GridPoint) -> int:
        return sum(abs(a - b) for a, b in zip(self.counts, other.counts))

    def __str__(self):
        return "(" + ",".join(map(str, self.counts)) + ")"


def block_slopes(primes: Sequence[int]) -> list[int]:
    """Filling coefficient of each block: p1, p1*p2, p1*p2*p3, ..."""
    out, acc = [], 1
    for p in primes:
        acc *= p
        out.append(acc)
    return out


def family_flat(k: int, blocksize: int, primes: Sequence[int],
                point: GridPoint | Sequence[int]) -> SurgeryDescription:
    """Unlink on k*blocksize components; block i fills its first counts[i]
    components with (p1...p_{i+1})/1 and leaves the rest 1/0."""
    if not isinstance(point, GridPoint):
        point = GridPoint(tuple(point))
    if point.k != k or len(primes) != k:
        raise ValueError(f"need {k} counts and {k} primes")
    if len(set(primes)) != k:
        raise ValueError("primes must be pairwise distinct")
    slopes: list[RationalSlope] = []
    for c, coeff in zip(point.counts, block_slopes(primes)):
        if c > blocksize:
            raise ValueError(f"count {c} exceeds block size {blocksize}")
        slopes += [RationalSlope(coeff, 1)] * c + [TRIVIAL] * (blocksize - c)
    return SurgeryDescription.unlink(slopes)


def family_myers(n: int, r: Sequence, qprime: int) -> SurgeryDescription:
    """Zero-linking (n+1)-component description: slopes r, then 1/qprime on the
    extra component."""
    if qprime < 1:
        raise ValueError("qprime must be >= 1")
    if len(r) != n:
        raise ValueError(f"expected {n} slopes, got {len(r)}")
    return SurgeryDescription.unlink(list(r) + [RationalSlope(1, qprime)])


def with_myers_component(d: SurgeryDescription, qprime: int) -> SurgeryDescription:
    """Append a zero-linking component filled 1/qprime."""
    if qprime < 1:
        raise ValueError("qprime must be >= 1")
    n = d.n
    lk = tuple(row + (0,) for row in d.lk) + ((0,) * (n + 1),)
    return SurgeryDescription(lk, d.slopes + (RationalSlope(1, qprime),))
