"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run alone with ``pytest tests/test_acceptance.py -v``; the lines appear in
the "acceptance criteria" section of the terminal summary.
"""

import random
import time
from fractions import Fraction
from itertools import combinations, product

import numpy as np

from _oracles import is_lspace_shape, minor_gcd_invariants, torsion_delta
from dehngraph.abelian import AbelianGroup, determinant, homology, matmul, smith_normal_form
from dehngraph.distance import certify_quasiflat, distance_bound, grid_distance_table
from dehngraph.floer import correction_delta, genus_budget, lspace_alternating_test, obstruction_budget
from dehngraph.gluing import load_t12060_shapes, load_t12060_system, newton_solve, residual
from dehngraph.presentations import (
    abelianization,
    coset_enumerate,
    kanenobu_presentation,
    quotient_by_normal_closure,
)
from dehngraph.sfs import fiber_surgery_related, homeomorphic_fibrations, kinfty_family
from dehngraph.surgery import RationalSlope, family_flat, family_myers


class Clock:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.seconds = time.perf_counter() - self.start


def test_kanenobu_homology(criterion):
    criterion["name"] = "criterion 1 Kanenobu homology"
    with Clock() as c:
        groups = [abelianization(kanenobu_presentation(n)) for n in range(1, 11)]
    criterion["detail"] = f"{sorted({str(g) for g in groups})} in {c.seconds:.3f}s"
    assert all(g == AbelianGroup(0, (25,)) for g in groups)
    assert c.seconds < 1


def test_kanenobu_weight_one(criterion):
    criterion["name"] = "criterion 2 Kanenobu weight one"
    times, indices = [], []
    for n in range(1, 6):
        Q = quotient_by_normal_closure(kanenobu_presentation(n), "a1")
        with Clock() as c:
            t = coset_enumerate(Q, cap=10**6)
        times.append(c.seconds)
        indices.append(t.index)
    criterion["detail"] = f"indices {indices}, slowest n {max(times):.2f}s"
    assert indices == [1] * 5
    assert max(times) < 60


def test_gluing_verification(criterion):
    criterion["name"] = "criterion 3 gluing verification"
    system, z = load_t12060_system(), load_t12060_shapes()
    with Clock() as c:
        r = residual(system, z)
        geometric = bool(np.all(z.imag > 0))
    criterion["detail"] = f"max residual {r.max_reduced:.2e}, all Im z > 0: {geometric}, {c.seconds * 1e3:.2f}ms"
    assert system.shape == (8, 8)
    assert r.max_reduced < 1e-9 and geometric
    assert c.seconds < 0.1


def test_newton_recovery(criterion):
    criterion["name"] = "criterion 4 Newton recovery"
    system, z = load_t12060_system(), load_t12060_shapes()
    with Clock() as c:
        r = newton_solve(system, z + 1e-2 * (1 + 1j))
    err = float(np.max(np.abs(r.z - z)))
    steps = [(a, b) for a, b in zip(r.trace, r.trace[1:]) if b > 1e-12]
    quadratic = all(b <= a * a for a, b in steps)
    criterion["detail"] = (f"{r.iterations} iterations, error {err:.1e}, trace "
                           + ", ".join(f"{e:.1e}" for e in r.trace))
    assert err < 1e-8 and r.iterations >= 3 and quadratic
    assert c.seconds < 1


def test_quasiflat_certification(criterion):
    criterion["name"] = "criterion 5 quasi-flat certification"
    with Clock() as c:
        r2 = certify_quasiflat(grid_distance_table(2, 10, (2, 3), 10))
        r4 = certify_quasiflat(grid_distance_table(4, 5, (2, 3, 5, 7), 5))
    criterion["detail"] = (f"k=2 min ratio {r2.min_ratio} over {r2.pairs} pairs; "
                           f"k=4 min ratio {r4.min_ratio} over {r4.pairs} pairs; {c.seconds:.1f}s")
    assert r2.passed and r2.constant == Fraction(1, 3)
    assert r4.passed and r4.constant == Fraction(1, 7)
    assert c.seconds < 30


def test_axis_exactness(criterion):
    criterion["name"] = "criterion 6 axis exactness"
    origin = family_flat(2, 10, (2, 3), (0, 0))
    checked = 0
    for j, k in product(range(11), repeat=2):
        if j + k <= 10:
            b = distance_bound(origin, family_flat(2, 10, (2, 3), (j, k)))
            assert b.lower == b.upper == j + k, (j, k, b)
            checked += 1
    criterion["detail"] = f"{checked} points (j,k) with j+k <= 10"


def test_myers_homology(criterion):
    criterion["name"] = "criterion 7 Myers-family homology"
    rng = random.Random(20261014)
    for _ in range(100):
        n = rng.randint(1, 6)
        slopes = []
        while len(slopes) < n:
            p, q = rng.randint(-40, 40), rng.randint(0, 6)
            if (p, q) != (0, 0):
                slopes.append(RationalSlope(p, q))
        expected = AbelianGroup.from_orders([s.p for s in slopes])
        for qprime in (1, rng.randint(2, 30), rng.randint(31, 10**6)):
            assert homology(family_myers(n, slopes, qprime)) == expected
    criterion["detail"] = "100 slope vectors x 3 values of qprime"


def test_kinfty_certificate(criterion):
    criterion["name"] = "criterion 8 SFS K-infinity certificate"
    a = (Fraction(1, 5), Fraction(2, 7), Fraction(3, 8), Fraction(4, 9))
    with Clock() as c:
        fam = list(kinfty_family(a, 10).values())
        related = sum(fiber_surgery_related(x, y) for x, y in combinations(fam, 2))
        homeo = sum(homeomorphic_fibrations(x, y) for x, y in combinations(fam, 2))
    pairs = len(fam) * (len(fam) - 1) // 2
    criterion["detail"] = f"{len(fam)} spaces, {related}/{pairs} related, {homeo} homeomorphic, {c.seconds:.2f}s"
    assert len(fam) == 44 and related == pairs and homeo == 0
    assert c.seconds < 5


def test_snf_oracle(criterion):
    criterion["name"] = "criterion 9 SNF oracle equivalence"
    rng = random.Random(9)
    with Clock() as c:
        for _ in range(1000):
            m, n = rng.randint(1, 6), rng.randint(1, 6)
            A = [[rng.randint(-9, 9) for _ in range(n)] for _ in range(m)]
            r = smith_normal_form(A)
            assert matmul(matmul(r.U, A), r.V) == r.D
            assert abs(determinant(r.U)) == 1 == abs(determinant(r.V))
            assert r.diagonal == minor_gcd_invariants(A), A
    criterion["detail"] = f"1000 matrices in {c.seconds:.1f}s"
    assert c.seconds < 30


def test_obstruction_arithmetic(criterion):
    criterion["name"] = "criterion 10 obstruction arithmetic"
    with Clock() as c:
        vectors = [list(v) for g in range(7) for v in product((-1, 0, 1), repeat=g + 1)
                   if g == 0 or v[-1]]
        for v in vectors:
            assert lspace_alternating_test(v) == is_lspace_shape(v), v
            for q in (1, 2, 3, 4, 7, 13, 25):
                for i in range(-12, 13):
                    assert correction_delta(v, 25, q, i) == torsion_delta(v, q, i)
        by_genus: dict[int, list[int]] = {}
        for q in range(1, 60):
            r = obstruction_budget(25, q)
            by_genus.setdefault(r.genus_budget, []).append(r.bound)
        assert genus_budget(25, 59) == 0
    ranges = sorted((g, min(b), max(b)) for g, b in by_genus.items())
    monotone = all(hi <= lo2 for (_, _, hi), (_, lo2, _) in zip(ranges, ranges[1:]))
    criterion["detail"] = (f"{len(vectors)} vectors; budget by genus "
                           + " ".join(f"g{g}:{lo}" if lo == hi else f"g{g}:{lo}-{hi}" for g, lo, hi in ranges)
                           + f"; {c.seconds:.1f}s")
    assert monotone
    assert c.seconds < 60
