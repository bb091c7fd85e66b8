"""Arithmetic side of the correction-term surgery obstruction.

Alexander polynomials are given by their symmetrized coefficients
``a = [a_0, a_1, ..., a_g]`` meaning ``a_0 + sum_i a_i (T^i + T^-i)``.

Absolute d-invariants of lens spaces are not computed here; the budget
only bounds the knot-dependent difference term.  Finitely many lens-space
values with the given order complete the bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from math import floor
from typing import Sequence


def _check(a: Sequence[int]) -> list[int]:
    a = [int(x) for x in a]
    if len(a) > 1 and a[-1] == 0:
        raise ValueError("leading coefficient a_g must be nonzero")
    return a


def full_coefficients(a: Sequence[int]) -> list[int]:
    """Coefficients of T^g, ..., T^0, ..., T^-g."""
    a = list(a)
    return a[:0:-1] + a


def lspace_alternating_test(a: Sequence[int]) -> bool:
    """Nonzero coefficients of the Laurent polynomial, read in descending
    degree, are all +-1 and alternate in sign."""
    a = _check(a)
    nonzero = [x for x in full_coefficients(a) if x]
    if any(abs(x) != 1 for x in nonzero):
        return False
    return all(x == -y for x, y in zip(nonzero, nonzero[1:]))


def spin_c_offset(i: int, q: int) -> int:
    """c = |floor(i / q)|."""
    return abs(i // q)


def correction_delta(a: Sequence[int], p: int, q: int, i: int) -> int:
    """d(S^3_{p/q}(K), i) - d(S^3_{p/q}(U), i) = -2 sum_{j>=1} j a_{c+j}."""
    a = _check(a)
    if q < 1 or p < 0:
        raise ValueError(f"slope {p}/{q} must have q >= 1 and p >= 0")
    if 2 * abs(i) > p:
        raise ValueError(f"spin-c index {i} outside |i| <= {p}/2")
    c = spin_c_offset(i, q)
    return -2 * sum(j * a[c + j] for j in range(1, len(a) - c))


def genus_budget(p: int, q: int) -> int:
    """Largest g with p/q >= 2g - 1."""
    return floor((Fraction(p, q) + 1) / 2)


def alternating_vectors(g: int) -> list[tuple[int, ...]]:
    """Every coefficient vector of degree <= g passing the alternation test.

    The full polynomial is symmetric, so a nonzero vector passes exactly when
    a_0 != 0 and the signs alternate from a_0 outward; each support set
    containing 0 gives two vectors.
    """
    out: list[tuple[int, ...]] = []
    for mask in product((0, 1), repeat=g):
        support = [0] + [k for k, bit in enumerate(mask, 1) if bit]
        top = support[-1]
        for s0 in (1, -1):
            v = [0] * (top + 1)
            for rank, k in enumerate(support):
                v[k] = s0 if rank % 2 == 0 else -s0
            out.append(tuple(v))
    return out


@dataclass
class BudgetReport:
    p: int
    q: int
    genus_budget: int
    vectors: int
    spin_c: list[int]
    bound: int
    attained_by: tuple[int, ...] | None
    attained_at: int | None

    def to_json(self) -> dict:
        return {
            "p": self.p,
            "q": self.q,
            "genus_budget": self.genus_budget,
            "vectors": self.vectors,
            "spin_c": [self.spin_c[0], self.spin_c[-1]],
            "bound": self.bound,
            "attained_by": None if self.attained_by is None else list(self.attained_by),
            "attained_at": self.attained_at,
            "note": ("bounds only |d(S^3_{p/q}(K), i) - d(S^3_{p/q}(U), i)|; "
                     "the finitely many lens-space terms d(S^3_{p/q}(U), i) are not computed"),
        }

    def summary(self) -> str:
        return (f"p/q = {self.p}/{self.q}: genus <= {self.genus_budget}, "
                f"{self.vectors} alternating vectors, |i| <= {self.p // 2}; "
                f"max |delta| = {self.bound}")


def obstruction_budget(p: int, q: int) -> BudgetReport:
    """Max |correction_delta| over all L-space-shaped Alexander polynomials of
    genus at most the budget, and all |i| <= p/2."""
    if q < 1:
        raise ValueError("q must be a positive integer")
    if p < 1:
        raise ValueError("p must be a positive integer")
    g = genus_budget(p, q)
    vectors = alternating_vectors(g)
    spin_c = list(range(-(p // 2), p // 2 + 1))
    # correction_delta depends on i only through c = |floor(i/q)|.
    representatives: dict[int, int] = {}
    for i in spin_c:
        representatives.setdefault(spin_c_offset(i, q), i)
    best, arg, at = 0, None, None
    for v in vectors:
        for i in representatives.values():
            val = abs(correction_delta(v, p, q, i))
            if val > best:
                best, arg, at = val, v, i
    return BudgetReport(p, q, g, len(vectors), spin_c, best, arg, at)
