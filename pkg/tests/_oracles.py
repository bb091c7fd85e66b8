"""Reference computations that share no code with the package.

Each one is slow and obviously correct rather than fast.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction

import mpmath


def int_det(M: list[list[int]]) -> int:
    """Exact determinant by Fraction Gaussian elimination."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    det = Fraction(1)
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] != 0), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det *= A[c][c]
        for r in range(c + 1, n):
            f = A[r][c] / A[c][c]
            if f:
                for k in range(c, n):
                    A[r][k] -= f * A[c][k]
    assert det.denominator == 1
    return int(det)


def minor_gcd_invariants(A: list[list[int]]) -> list[int]:
    """d_i = g_i / g_{i-1} with g_i the gcd of all i x i minors.

    Returned list has length min(m, n); zero entries mark the rank drop.
    """
    m, n = len(A), len(A[0])
    gs = [1]
    for i in range(1, min(m, n) + 1):
        g = 0
        for rows in itertools.combinations(range(m), i):
            for cols in itertools.combinations(range(n), i):
                g = math.gcd(g, int_det([[A[r][c] for c in cols] for r in rows]))
                if g == 1:
                    break
            if g == 1:
                break
        gs.append(g)
    out = []
    for i in range(1, len(gs)):
        out.append(0 if gs[i] == 0 else gs[i] // gs[i - 1])
    return out


def rank_mod_p(A: list[list[int]], p: int) -> int:
    A = [[x % p for x in row] for row in A]
    rank, ncols = 0, len(A[0]) if A else 0
    for c in range(ncols):
        piv = next((r for r in range(rank, len(A)) if A[r][c]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = pow(A[rank][c], -1, p)
        A[rank] = [x * inv % p for x in A[rank]]
        for r in range(len(A)):
            if r != rank and A[r][c]:
                f = A[r][c]
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[rank])]
        rank += 1
    return rank


def p_rank_by_homs(relations: list[list[int]], ncols: int, p: int) -> int:
    """log_p of #Hom(coker, Z/p), counted by brute force over generator images."""
    count = 0
    for x in itertools.product(range(p), repeat=ncols):
        if all(sum(a * b for a, b in zip(row, x)) % p == 0 for row in relations):
            count += 1
    k = round(math.log(count, p))
    assert p**k == count
    return k


def p_rank_of_orders(orders: list[int], p: int) -> int:
    """p-rank of a direct sum of Z/d (d = 0 meaning Z), via Hom counting."""
    rels = [[d if i == j else 0 for j in range(len(orders))] for i, d in enumerate(orders)]
    return p_rank_by_homs(rels, len(orders), p)


def lobachevsky(theta: float) -> float:
    return float(-mpmath.quad(lambda t: mpmath.log(abs(2 * mpmath.sin(t))), [0, theta]))


def ideal_tetrahedron_volume(z: complex) -> float:
    """Sum of Lobachevsky functions of the three dihedral angles (Im z > 0)."""
    angles = [mpmath.arg(z), mpmath.arg(1 / (1 - z)), mpmath.arg(1 - 1 / z)]
    return sum(lobachevsky(float(a)) for a in angles)


def bloch_wigner_mp(z: complex) -> float:
    z = mpmath.mpc(z)
    return float(mpmath.im(mpmath.polylog(2, z)) + mpmath.arg(1 - z) * mpmath.log(abs(z)))


def kanenobu_letters(n: int) -> list[list[tuple[str, int]]]:
    """The four relators as flat syllable lists with unit exponents."""
    def pw(word, k):
        return word * k

    A1, a1 = ("a1", -1), ("a1", 1)
    A2, a2 = ("a2", -1), ("a2", 1)
    A3, a3 = ("a3", -1), ("a3", 1)
    A4, a4 = ("a4", -1), ("a4", 1)
    e, f = 10 * n, 10 * n + 3
    return [
        pw([A1, a2], e) + [A4, a1, a1],
        [A2, a3] + pw([A2, a1], e) + [A2],
        pw([A4, a3], f) + [A3, a2, A3, A3],
        [A1, a4] + pw([A3, a4], f) + [a4, a4],
    ]


def laurent(a: list[int]) -> dict[int, int]:
    out = {0: a[0]}
    for k in range(1, len(a)):
        out[k] = out[-k] = a[k]
    return {d: c for d, c in out.items() if c}


def is_lspace_shape(a: list[int]) -> bool:
    """Laurent polynomial equals s * sum_k (-1)^k T^(n_k) over its support."""
    poly = laurent(a)
    degrees = sorted(poly, reverse=True)
    if not degrees:
        return True
    s = poly[degrees[0]]
    if abs(s) != 1:
        return False
    rebuilt = {d: s * (-1) ** k for k, d in enumerate(degrees)}
    return rebuilt == poly


def torsion_delta(a: list[int], q: int, i: int) -> int:
    """-2 * sum_{k > c} sum_{m >= k} a_m with c = |floor(i/q)|."""
    c = abs(math.floor(Fraction(i, q)))
    g = len(a) - 1
    t = sum(a[m] for k in range(c + 1, g + 1) for m in range(k, g + 1))
    return -2 * t


def sympy_index(gens: tuple[str, ...], relators, subgroup=()) -> int:
    """Index via sympy's coset enumeration, for small finite cases."""
    from sympy.combinatorics.fp_groups import FpGroup, coset_enumeration_r
    from sympy.combinatorics.free_groups import free_group

    F, *syms = free_group(",".join(gens))
    by_name = dict(zip(gens, syms))

    def build(w):
        out = F.identity
        for g, e in w:
            out *= by_name[g] ** e
        return out

    G = FpGroup(F, [build(r) for r in relators])
    C = coset_enumeration_r(G, [build(w) for w in subgroup])
    C.compress()
    return len(C.table)
