"""Seifert fibered spaces SFS(F; a1/b1, ..., an/bn) at the level of fibration
invariants.

Two fibrations over the same closed base are isomorphic exactly when the
fiber invariants agree mod 1 after a permutation and have the same sum.  Only
this fibration-level statement is certified; uniqueness of the Seifert
fibration over a hyperbolic base orbifold is taken for granted.
"""

from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Sequence


@dataclass(frozen=True)
class BaseSurface:
    orientable: bool = True
    genus: int = 0

    def __post_init__(self):
        if self.genus < 0:
            raise ValueError("genus must be non-negative")
        if not self.orientable and self.genus < 1:
            raise ValueError("non-orientable genus must be >= 1")

    @property
    def euler_characteristic(self) -> int:
        return 2 - 2 * self.genus if self.orientable else 2 - self.genus

    def __str__(self):
        if self.orientable:
            return "S2" if self.genus == 0 else f"F_{self.genus}"
        return "P2" if self.genus == 1 else f"N_{self.genus}"


SPHERE = BaseSurface(True, 0)


def _as_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (tuple, list)):
        return Fraction(int(x[0]), int(x[1]))
    return Fraction(x)


@dataclass(frozen=True)
class SeifertData:
    base: BaseSurface
    fibers: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "fibers", tuple(_as_fraction(f) for f in self.fibers))

    @classmethod
    def over_sphere(cls, *fibers) -> SeifertData:
        return cls(SPHERE, tuple(fibers))

    @property
    def multiplicities(self) -> list[int]:
        """Cone-point orders of the exceptional fibers."""
        return [f.denominator for f in self.fibers if f.denominator > 1]

    @property
    def exceptional_count(self) -> int:
        return len(self.multiplicities)

    def orbifold_euler_characteristic(self) -> Fraction:
        return self.base.euler_characteristic - sum(
            (1 - Fraction(1, b) for b in self.multiplicities), Fraction(0))

    def has_hyperbolic_base(self) -> bool:
        return self.orbifold_euler_characteristic() < 0

    def __str__(self):
        return f"SFS({self.base}; " + ", ".join(str(f) for f in self.fibers) + ")"

    def to_json(self) -> dict:
        return {
            "base": {"orientable": self.base.orientable, "genus": self.base.genus},
            "fibers": [[f.numerator, f.denominator] for f in self.fibers],
        }

    @classmethod
    def from_json(cls, data: dict) -> SeifertData:
        try:
            base = data["base"]
            fibers = data["fibers"]
            surface = BaseSurface(bool(base["orientable"]), int(base["genus"]))
        except (KeyError, TypeError) as e:
            raise ValueError(f"SFS file missing field {e}") from None
        out = []
        for k, f in enumerate(fibers):
            if (not isinstance(f, list) or len(f) != 2
                    or not all(isinstance(x, int) for x in f)):
                raise ValueError(f"fibers[{k}] must be an integer pair [a, b]")
            if f[1] < 1:
                raise ValueError(f"fibers[{k}] needs denominator >= 1")
            out.append(Fraction(f[0], f[1]))
        return cls(surface, tuple(out))

    @classmethod
    def loads(cls, text: str) -> SeifertData:
        return cls.from_json(json.loads(text))


def _frac_part(f: Fraction) -> Fraction:
    return f - (f.numerator // f.denominator)


def fractional_classes(s: SeifertData) -> tuple[Fraction, ...]:
    """Sorted nonzero fiber invariants mod 1; integer fibers are dropped."""
    return tuple(sorted(c for c in map(_frac_part, s.fibers) if c))


def normalize(s: SeifertData) -> tuple[tuple[Fraction, ...], Fraction]:
    """(sorted fractional parts of the exceptional fibers, exact invariant sum)."""
    return fractional_classes(s), sum(s.fibers, Fraction(0))


def homeomorphic_fibrations(s1: SeifertData, s2: SeifertData) -> bool:
    if s1.base != s2.base:
        raise ValueError("base surfaces differ")
    return normalize(s1) == normalize(s2)


class Relation(Enum):
    RELATED = "related"
    UNVERIFIED = "related (unverified edge)"
    UNRELATED = "unrelated"

    def __bool__(self):
        return self is not Relation.UNRELATED


def _exterior_is_rigid(classes: Counter) -> bool:
    # Exterior of one fiber: SFS over a disk with the remaining cone points.
    # Orbifold Euler characteristic 1 - sum(1 - 1/b) < 0 excludes the solid
    # torus (<= 1 cone point) and the twisted I-bundle D(2,2).
    orders = [c.denominator for c in classes.elements()]
    return 1 - sum((1 - Fraction(1, b) for b in orders), Fraction(0)) < 0


def fiber_surgery_relation(s1: SeifertData, s2: SeifertData) -> Relation:
    """Whether deleting one fiber from each leaves matching exteriors.

    The deleted fiber may be a regular fiber of either space (surgery on a
    regular fiber creates a new exceptional fiber).  A match whose common
    exterior lies over a non-hyperbolic disk orbifold is reported as
    :attr:`Relation.UNVERIFIED`, since that exterior's fibration is not unique.
    """
    if s1.base != s2.base:
        raise ValueError("base surfaces differ")
    for s in (s1, s2):
        if not s.has_hyperbolic_base():
            raise ValueError(f"{s} is not fibered over a hyperbolic base orbifold")
    c1 = Counter(fractional_classes(s1))
    c2 = Counter(fractional_classes(s2))
    best = Relation.UNRELATED
    for f1 in [None, *c1]:
        e1 = c1.copy()
        if f1 is not None:
            e1[f1] -= 1
        e1 = +e1
        for f2 in [None, *c2]:
            e2 = c2.copy()
            if f2 is not None:
                e2[f2] -= 1
            if +e2 == e1:
                if _exterior_is_rigid(e1):
                    return Relation.RELATED
                best = Relation.UNVERIFIED
    return best


def fiber_surgery_related(s1: SeifertData, s2: SeifertData) -> bool:
    return bool(fiber_surgery_relation(s1, s2))


def kinfty_family(a: Sequence, J: int) -> dict[tuple[int, int], SeifertData]:
    """M_{i,j} = SFS(S^2; a_k + j for k != i), i in 1..4, j in 0..J."""
    fr = [_as_fraction(x) for x in a]
    problems = []
    if len(fr) != 4:
        problems.append(f"need four fractions, got {len(fr)}")
    if len(set(fr)) != len(fr):
        problems.append("fractions are not distinct")
    for x in fr:
        if not 0 < x < 1:
            problems.append(f"{x} is not strictly between 0 and 1")
    if sum((Fraction(1, x.denominator) for x in fr), Fraction(0)) >= 1:
        problems.append("sum of 1/b_i >= 1: base orbifold not hyperbolic")
    if J < 0:
        problems.append("J must be non-negative")
    if problems:
        raise ValueError("; ".join(problems))
    return {
        (i, j): SeifertData.over_sphere(*(x + j for k, x in enumerate(fr, 1) if k != i))
        for j in range(J + 1) for i in range(1, 5)
    }


@dataclass
class KInfinityReport:
    count: int
    related_pairs: int
    unverified_pairs: list[tuple]
    unrelated_pairs: list[tuple]
    homeomorphic_pairs: list[tuple]

    @property
    def passed(self) -> bool:
        return not self.unrelated_pairs and not self.homeomorphic_pairs


def certify_complete(spaces: dict | Iterable[SeifertData]) -> KInfinityReport:
    """Check that a collection is pairwise fiber-surgery related and pairwise
    non-isomorphic as fibrations."""
    items = list(spaces.items()) if isinstance(spaces, dict) else list(enumerate(spaces))
    related, unverified, unrelated, homeo = 0, [], [], []
    for (k1, s1), (k2, s2) in combinations(items, 2):
        rel = fiber_surgery_relation(s1, s2)
        if rel is Relation.RELATED:
            related += 1
        elif rel is Relation.UNVERIFIED:
            unverified.append((k1, k2))
        else:
            unrelated.append((k1, k2))
        if homeomorphic_fibrations(s1, s2):
            homeo.append((k1, k2))
    return KInfinityReport(len(items), related, unverified, unrelated, homeo)
