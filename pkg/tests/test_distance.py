from fractions import Fraction
from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _oracles import p_rank_of_orders
from dehngraph.abelian import AbelianGroup
from dehngraph.distance import (
    certify_quasiflat,
    distance_bound,
    grid_distance_table,
    lower_bound,
    montesinos_upper_bound,
    solv_upper_bound,
    upper_bound_slope_diff,
)
from dehngraph.sfs import BaseSurface, SeifertData
from dehngraph.surgery import RationalSlope, SurgeryDescription, family_flat


def C(j, k, n=6):
    return family_flat(2, n, (2, 3), (j, k))


def test_lower_bound_examples():
    G = AbelianGroup.from_orders([2, 2, 2])
    assert lower_bound(G, AbelianGroup()) == 3
    assert lower_bound(G, G) == 0
    big = [2] * 4 + [6] * 2
    G1, G2 = AbelianGroup.from_orders(big), AbelianGroup.from_orders([6])
    expected = max(abs(p_rank_of_orders(big, p) - p_rank_of_orders([6], p)) for p in (2, 3))
    assert lower_bound(G1, G2) == expected == 5


def test_betti_enters_lower_bound():
    assert lower_bound(AbelianGroup(3), AbelianGroup(0, (7,))) == 3


def test_upper_bound_examples():
    A2, A3 = family_flat(1, 4, (2,), (2,)), family_flat(1, 4, (2,), (3,))
    assert upper_bound_slope_diff(A2, A3) == 1
    assert upper_bound_slope_diff(A2, A2) == 0
    assert upper_bound_slope_diff(C(2, 1), C(0, 3)) == 4


def test_incomparable_descriptions():
    d1 = SurgeryDescription.unlink([RationalSlope(2)])
    d2 = SurgeryDescription.unlink([RationalSlope(2), RationalSlope(3)])
    with pytest.raises(ValueError, match="incomparable"):
        upper_bound_slope_diff(d1, d2)
    b = distance_bound(d1, d2)
    assert b.upper is None and b.lower == 1 and not b.exact


def test_pair_bound_a1_b1():
    # A_1 = one 2/1 filling; B_1 = one 6/1 filling in the second block.
    b = distance_bound(C(1, 0), C(0, 1))
    assert (b.lower, b.upper) == (1, 2)


@pytest.mark.parametrize("j,k", [(j, k) for j in range(6) for k in range(6) if j + k <= 10])
def test_axis_exact(j, k):
    b = distance_bound(C(0, 0), C(j, k))
    assert b.lower == b.upper == j + k


def test_table_self_distance_and_symmetry():
    t = grid_distance_table(2, 4, (2, 3), 4)
    assert np.all(np.diag(t.lower) == 0) and np.all(np.diag(t.upper) == 0)
    assert np.array_equal(t.lower, t.lower.T) and np.array_equal(t.upper, t.upper.T)
    assert np.all(t.lower <= t.upper)


def test_table_matches_pairwise_bounds():
    t = grid_distance_table(2, 3, (2, 3), 3)
    for a, b in product(t.points, repeat=2):
        pair = distance_bound(family_flat(2, 3, (2, 3), a), family_flat(2, 3, (2, 3), b))
        got = t.bound(a, b)
        assert (got.lower, got.upper) == (pair.lower, pair.upper)


def test_upper_bound_triangle_inequality():
    t = grid_distance_table(2, 3, (2, 5), 3)
    U = t.upper
    assert np.all(U[:, None, :] <= U[:, :, None] + U[None, :, :])


@pytest.mark.parametrize("k,primes", [(1, (2,)), (2, (2, 3)), (3, (2, 3, 5)), (4, (2, 3, 5, 7))])
def test_quasiflat_constant(k, primes):
    N = {1: 10, 2: 10, 3: 4, 4: 3}[k]
    r = certify_quasiflat(grid_distance_table(k, N, primes, N))
    assert r.passed
    assert r.min_ratio >= Fraction(1, 2 * k - 1)


def test_k1_is_isometric():
    t = grid_distance_table(1, 10, (3,), 10)
    assert np.array_equal(t.lower, t.l1()) and np.array_equal(t.upper, t.l1())


def test_n0_trivial():
    r = certify_quasiflat(grid_distance_table(2, 0, (2, 3), 0))
    assert r.passed and r.pairs == 0 and r.min_ratio is None


def test_k2_min_ratio_is_one_third():
    # (0,1) vs (2,0): p-ranks (0,1) vs (2,0), betti equal; L1 = 3, lower 1.
    r = certify_quasiflat(grid_distance_table(2, 10, (2, 3), 10))
    assert r.min_ratio == Fraction(1, 3)


def test_myers_table_equals_unlink_table():
    base = grid_distance_table(2, 4, (2, 3), 4)
    for qprime in (1, 2, 7):
        t = grid_distance_table(2, 4, (2, 3), 4, myers_qprime=qprime)
        assert np.array_equal(t.lower, base.lower) and np.array_equal(t.upper, base.upper)
        assert t.descriptions[0].n == base.descriptions[0].n + 1


def test_threads_do_not_change_results():
    a = grid_distance_table(2, 5, (2, 3), 5)
    b = grid_distance_table(2, 5, (2, 3), 5, threads=4)
    assert a.to_csv() == b.to_csv()


def test_csv_layout():
    csv = grid_distance_table(1, 2, (2,), 2).to_csv()
    lines = csv.splitlines()
    assert lines[0] == "point1,point2,lower,upper"
    assert lines[1:4] == ['(0),(0),0,0', '(0),(1),1,1', '(0),(2),2,2']


def test_montesinos_examples():
    assert montesinos_upper_bound(SeifertData.over_sphere("1/2", "1/3", "1/5")) == 4
    assert montesinos_upper_bound(SeifertData.over_sphere()) == 1
    P2 = BaseSurface(orientable=False, genus=1)
    assert montesinos_upper_bound(SeifertData(P2, ("1/2", "1/3"))) == 5


def test_solv_bounds():
    assert solv_upper_bound("torus-bundle") == 5
    assert solv_upper_bound("twisted-I-bundles") == 3
    with pytest.raises(ValueError):
        solv_upper_bound("klein")


@settings(max_examples=50, deadline=None)
@given(st.tuples(st.integers(0, 5), st.integers(0, 5)), st.tuples(st.integers(0, 5), st.integers(0, 5)))
def test_lower_never_exceeds_upper(a, b):
    bnd = distance_bound(C(*a), C(*b))
    assert bnd.lower <= bnd.upper == sum(abs(x - y) for x, y in zip(a, b))
